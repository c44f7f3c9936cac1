//! Geodesic-arc geometry on the unit sphere.
//!
//! Points are unnormalized directions, stored as primitive integer vectors so
//! that equal directions have identical representations.  The parameter
//! space is `u = atan2(y, x) ∈ (−π, π]`, `v = latitude ∈ [−π/2, π/2]`; the
//! identification curve is the half meridian `y = 0, x < 0` and the
//! contraction points are the poles `(0, 0, ±1)`.  No operation normalizes a
//! vector or takes a root.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::kernel::{ccw_angle_cmp, ccw_strictly_before, det3_sign, IVec3, Sign, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("direction is the zero vector")]
    ZeroVector,
    #[error("precondition violated: {0}")]
    PreconditionViolation(&'static str),
    #[error("degenerate arc: endpoints are equal or antipodal")]
    DegenerateArc,
    #[error("split point is not in the interior of the arc")]
    PointNotInterior,
    #[error("arcs are not mergeable")]
    NotMergeable,
}

/// Where a point sits relative to the boundary of the parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryClass {
    SouthPole,
    NorthPole,
    OnIdentification,
    Interior,
}

/// A point on the unit sphere named by an unnormalized direction.
///
/// The direction is kept as the primitive integer vector of its ray, so two
/// points are equal exactly when their directions are positively
/// proportional.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirPoint {
    dir: IVec3,
    class: BoundaryClass,
}

impl fmt::Debug for DirPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirPoint{}", self.dir)
    }
}

impl fmt::Display for DirPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dir)
    }
}

fn class_of(d: &IVec3) -> BoundaryClass {
    if d.x.is_zero() && d.y.is_zero() {
        if d.z.is_positive() {
            BoundaryClass::NorthPole
        } else {
            BoundaryClass::SouthPole
        }
    } else if d.y.is_zero() && d.x.is_negative() {
        BoundaryClass::OnIdentification
    } else {
        BoundaryClass::Interior
    }
}

/// Classify a rational direction as a point of the sphere.
pub fn classify(dir: &Vec3) -> Result<DirPoint, SphereError> {
    DirPoint::from_ivec(dir.to_ivec())
}

impl DirPoint {
    pub fn from_ivec(d: IVec3) -> Result<DirPoint, SphereError> {
        if d.is_zero() {
            return Err(SphereError::ZeroVector);
        }
        let dir = d.primitive();
        let class = class_of(&dir);
        Ok(DirPoint { dir, class })
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Result<DirPoint, SphereError> {
        DirPoint::from_ivec(IVec3::from_ints(x, y, z))
    }

    pub fn north() -> DirPoint {
        DirPoint::from_ints(0, 0, 1).expect("nonzero")
    }

    pub fn south() -> DirPoint {
        DirPoint::from_ints(0, 0, -1).expect("nonzero")
    }

    /// The primitive integer direction.
    pub fn dir(&self) -> &IVec3 {
        &self.dir
    }

    /// The direction as a rational vector.
    pub fn vec3(&self) -> Vec3 {
        self.dir.to_vec3()
    }

    pub fn boundary_class(&self) -> BoundaryClass {
        self.class
    }

    pub fn is_pole(&self) -> bool {
        matches!(
            self.class,
            BoundaryClass::NorthPole | BoundaryClass::SouthPole
        )
    }

    pub fn on_identification(&self) -> bool {
        self.class == BoundaryClass::OnIdentification
    }

    /// On the boundary of the parameter space (pole or identification).
    pub fn on_boundary(&self) -> bool {
        self.class != BoundaryClass::Interior
    }

    pub fn antipode(&self) -> DirPoint {
        DirPoint::from_ivec(self.dir.neg()).expect("nonzero")
    }

    pub fn is_antipodal_to(&self, other: &DirPoint) -> bool {
        self.dir == other.dir.neg()
    }

    fn xy(&self) -> [BigInt; 2] {
        [self.dir.x.clone(), self.dir.y.clone()]
    }
}

/// Compare the `u` (azimuth) coordinates of two points.
///
/// Decided by projecting to the xy-plane and asking whether the
/// identification direction `(−1, 0)` is reached strictly before `p2` when
/// rotating counterclockwise from `p1`.
pub fn compare_u(p1: &DirPoint, p2: &DirPoint) -> Result<Sign, SphereError> {
    if p1.on_boundary() || p2.on_boundary() {
        return Err(SphereError::PreconditionViolation(
            "compare_u requires points off the poles and the identification curve",
        ));
    }
    Ok(compare_u_unchecked(&p1.xy(), &p2.xy()))
}

fn compare_u_unchecked(a: &[BigInt; 2], b: &[BigInt; 2]) -> Sign {
    let cross = &a[0] * &b[1] - &a[1] * &b[0];
    let dot = &a[0] * &b[0] + &a[1] * &b[1];
    if cross.is_zero() && dot.is_positive() {
        return Sign::EQUAL;
    }
    let seam = [BigInt::from(-1), BigInt::from(0)];
    match ccw_strictly_before(a, &seam, b) {
        Ok(true) => Sign::LARGER,
        _ => Sign::SMALLER,
    }
}

/// Compare latitudes exactly: first by the sign of `z`, then by
/// cross-multiplied squared normalized heights.
pub fn compare_v(p1: &DirPoint, p2: &DirPoint) -> Sign {
    compare_v_dirs(&p1.dir, &p2.dir)
}

fn compare_v_dirs(a: &IVec3, b: &IVec3) -> Sign {
    let sa = Sign::of(&a.z);
    let sb = Sign::of(&b.z);
    if sa != sb {
        return Sign::from_ordering(sa.cmp(&sb));
    }
    if sa == Sign::Zero {
        return Sign::EQUAL;
    }
    // Both heights share a sign: compare z²/|p|².
    let lhs = &a.z * &a.z * b.norm_sq();
    let rhs = &b.z * &b.z * a.norm_sq();
    let mag = Sign::from_ordering(lhs.cmp(&rhs));
    if sa == Sign::Positive {
        mag
    } else {
        -mag
    }
}

/// Lexicographic comparison, `u` first, then `v`.
pub fn compare_uv(p1: &DirPoint, p2: &DirPoint) -> Result<Sign, SphereError> {
    match compare_u(p1, p2)? {
        Sign::Zero => Ok(compare_v(p1, p2)),
        s => Ok(s),
    }
}

/// An arc of a great circle strictly shorter than π.
///
/// The arc runs counterclockwise around `normal` from `source` to `target`;
/// `normal` is the primitive form of `source × target` and is shared by all
/// pieces obtained by splitting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeodesicArc {
    pub source: DirPoint,
    pub target: DirPoint,
    pub normal: IVec3,
    pub is_vertical: bool,
    pub axis_zero: [bool; 3],
}

impl GeodesicArc {
    /// The short arc between two points, without any splitting.
    pub fn new(source: DirPoint, target: DirPoint) -> Result<GeodesicArc, SphereError> {
        let n = source.dir.cross(&target.dir);
        if n.is_zero() {
            return Err(SphereError::DegenerateArc);
        }
        Ok(GeodesicArc::with_normal(source, target, n.primitive()))
    }

    fn with_normal(source: DirPoint, target: DirPoint, normal: IVec3) -> GeodesicArc {
        let axis_zero = [normal.x.is_zero(), normal.y.is_zero(), normal.z.is_zero()];
        GeodesicArc {
            source,
            target,
            is_vertical: axis_zero[2],
            axis_zero,
            normal,
        }
    }

    /// The same arc traversed the other way (normal negated).
    pub fn reversed(&self) -> GeodesicArc {
        GeodesicArc::with_normal(self.target.clone(), self.source.clone(), self.normal.neg())
    }

    /// Whether `p` lies on the supporting great circle.
    pub fn on_circle(&self, p: &DirPoint) -> bool {
        self.normal.dot(&p.dir).is_zero()
    }

    /// Whether `p` lies on the closed arc.
    pub fn contains(&self, p: &DirPoint) -> bool {
        self.on_circle(p)
            && !det3_sign(&self.normal, &self.source.dir, &p.dir).eq(&Sign::Negative)
            && !det3_sign(&self.normal, &p.dir, &self.target.dir).eq(&Sign::Negative)
            && !p.is_antipodal_to(&self.source)
            && !p.is_antipodal_to(&self.target)
    }

    /// Whether `p` lies on the open arc (endpoints excluded).
    pub fn contains_interior(&self, p: &DirPoint) -> bool {
        *p != self.source && *p != self.target && self.contains(p)
    }

    /// Eastward arcs have increasing `u` from source to target.
    pub fn is_eastward(&self) -> bool {
        self.normal.z.is_positive()
    }

    /// The endpoint with the smaller `u` (lower endpoint for vertical arcs).
    pub fn min_end(&self) -> &DirPoint {
        if self.is_vertical {
            if compare_v(&self.source, &self.target) == Sign::Negative {
                &self.source
            } else {
                &self.target
            }
        } else if self.is_eastward() {
            &self.source
        } else {
            &self.target
        }
    }

    /// The endpoint with the larger `u` (upper endpoint for vertical arcs).
    pub fn max_end(&self) -> &DirPoint {
        if std::ptr::eq(self.min_end(), &self.source) {
            &self.target
        } else {
            &self.source
        }
    }

    /// Direction of travel leaving endpoint `p` into the arc.
    pub fn tangent_from(&self, p: &DirPoint) -> IVec3 {
        if *p == self.source {
            self.normal.cross(&p.dir)
        } else {
            p.dir.cross(&self.normal)
        }
    }

    /// A point of the open arc (the direction of the chord midpoint).
    pub fn midpoint(&self) -> DirPoint {
        DirPoint::from_ivec(self.source.dir.add(&self.target.dir)).expect("short arc")
    }

    /// Float approximation of the subtended angle (for filtering only).
    pub fn approx_angle(&self) -> f64 {
        let a = self.source.dir.to_unit_f64();
        let b = self.target.dir.to_unit_f64();
        let d = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
        d.acos()
    }
}

/// The point where a non-vertical great circle crosses the identification
/// half-plane `y = 0, x < 0`.
fn seam_crossing(normal: &IVec3) -> IVec3 {
    let q = IVec3::new(-normal.z.clone(), BigInt::zero(), normal.x.clone());
    if q.x.is_positive() {
        q.neg()
    } else {
        q
    }
}

/// The short great-circle arc from `source` to `target`, split at the
/// identification curve and at the poles into u-monotone pieces (returned in
/// source-to-target order).
pub fn make_arc(source: &DirPoint, target: &DirPoint) -> Result<Vec<GeodesicArc>, SphereError> {
    let arc = GeodesicArc::new(source.clone(), target.clone())?;
    let split_at = if arc.is_vertical {
        [DirPoint::north(), DirPoint::south()]
            .into_iter()
            .find(|pole| arc.contains_interior(pole))
    } else {
        let q = DirPoint::from_ivec(seam_crossing(&arc.normal)).expect("non-vertical");
        arc.contains_interior(&q).then_some(q)
    };
    match split_at {
        Some(p) => {
            let (a, b) = split(&arc, &p)?;
            Ok(vec![a, b])
        }
        None => Ok(vec![arc]),
    }
}

/// Vertical position of `p` relative to `arc` at `p`'s azimuth.
pub fn compare_v_at_u(p: &DirPoint, arc: &GeodesicArc) -> Result<Sign, SphereError> {
    if arc.is_vertical {
        let az = vertical_azimuth(arc);
        let same_meridian = arc.on_circle(p)
            && (p.is_pole() || (&p.dir.x * &az[0] + &p.dir.y * &az[1]).is_positive());
        if !same_meridian {
            return Err(SphereError::PreconditionViolation(
                "point not on the arc's meridian",
            ));
        }
        let lo = compare_v(p, arc.min_end());
        let hi = compare_v(p, arc.max_end());
        return Ok(if lo == Sign::Negative {
            Sign::SMALLER
        } else if hi == Sign::Positive {
            Sign::LARGER
        } else {
            Sign::EQUAL
        });
    }
    if p.is_pole() {
        return Err(SphereError::PreconditionViolation(
            "pole outside a non-vertical arc's range",
        ));
    }
    let q = meridian_point(&arc.normal, p);
    if !arc.contains(&q) {
        return Err(SphereError::PreconditionViolation(
            "point outside the arc's u-range",
        ));
    }
    Ok(Sign::of(&arc.normal.dot(&p.dir)) * Sign::of(&arc.normal.z))
}

/// The point of the great circle with normal `n` on the meridian half-plane
/// of the non-pole point `p` (the circle must not be vertical).
pub(crate) fn meridian_point(n: &IVec3, p: &DirPoint) -> DirPoint {
    meridian_point_xy(n, &p.dir.x, &p.dir.y)
}

pub(crate) fn meridian_point_xy(n: &IVec3, px: &BigInt, py: &BigInt) -> DirPoint {
    let m = IVec3::new(-py.clone(), px.clone(), BigInt::zero());
    let q = n.cross(&m);
    let q = if &q.x * px + &q.y * py < BigInt::zero() {
        q.neg()
    } else {
        q
    };
    DirPoint::from_ivec(q).expect("non-vertical circle meets every meridian")
}

fn check_shared(a: &GeodesicArc, p: &DirPoint) -> bool {
    a.source == *p || a.target == *p
}

/// Vertical order of two arcs immediately to the right of their common left
/// endpoint `p`: `SMALLER` when `a1` lies below `a2`.
pub fn compare_v_at_u_right(
    a1: &GeodesicArc,
    a2: &GeodesicArc,
    p: &DirPoint,
) -> Result<Sign, SphereError> {
    if !check_shared(a1, p) || !check_shared(a2, p) {
        return Err(SphereError::PreconditionViolation(
            "arcs must share the endpoint",
        ));
    }
    let t1 = a1.tangent_from(p);
    let t2 = a2.tangent_from(p);
    Ok(-det3_sign(&p.dir, &t1, &t2))
}

/// Vertical order of two arcs immediately to the left of their common right
/// endpoint `p`.
pub fn compare_v_at_u_left(
    a1: &GeodesicArc,
    a2: &GeodesicArc,
    p: &DirPoint,
) -> Result<Sign, SphereError> {
    if !check_shared(a1, p) || !check_shared(a2, p) {
        return Err(SphereError::PreconditionViolation(
            "arcs must share the endpoint",
        ));
    }
    let t1 = a1.tangent_from(p);
    let t2 = a2.tangent_from(p);
    Ok(det3_sign(&p.dir, &t1, &t2))
}

/// Intersection of two arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionResult {
    /// Zero, one or two isolated common points.
    Points(Vec<DirPoint>),
    /// A common sub-arc (oriented like the first input).
    Overlap(GeodesicArc),
}

impl IntersectionResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, IntersectionResult::Points(p) if p.is_empty())
    }
}

/// Compute the common points or common sub-arc of two arcs.
pub fn intersect(a1: &GeodesicArc, a2: &GeodesicArc) -> IntersectionResult {
    let line = a1.normal.cross(&a2.normal);
    if line.is_zero() {
        // Same great circle.
        let mut pts: Vec<DirPoint> = Vec::new();
        for p in [&a1.source, &a1.target, &a2.source, &a2.target] {
            if a1.contains(p) && a2.contains(p) && !pts.contains(p) {
                pts.push(p.clone());
            }
        }
        return match pts.len() {
            0 | 1 => IntersectionResult::Points(pts),
            _ => {
                // Order along a1.
                let (p, q) = (pts[0].clone(), pts[1].clone());
                let (s, t) = if det3_sign(&a1.normal, &p.dir, &q.dir) == Sign::Positive {
                    (p, q)
                } else {
                    (q, p)
                };
                IntersectionResult::Overlap(GeodesicArc::with_normal(s, t, a1.normal.clone()))
            }
        };
    }
    let mut pts = Vec::new();
    for d in [line.clone(), line.neg()] {
        let p = DirPoint::from_ivec(d).expect("nonzero");
        if a1.contains(&p) && a2.contains(&p) {
            pts.push(p);
        }
    }
    IntersectionResult::Points(pts)
}

/// Split an arc at an interior point.
pub fn split(arc: &GeodesicArc, p: &DirPoint) -> Result<(GeodesicArc, GeodesicArc), SphereError> {
    if !arc.contains_interior(p) {
        return Err(SphereError::PointNotInterior);
    }
    Ok((
        GeodesicArc::with_normal(arc.source.clone(), p.clone(), arc.normal.clone()),
        GeodesicArc::with_normal(p.clone(), arc.target.clone(), arc.normal.clone()),
    ))
}

/// Whether two arcs concatenate into a single u-monotone arc: they share an
/// endpoint off the parameter-space boundary, lie on the same oriented great
/// circle, and together span less than π.
pub fn is_mergeable(a1: &GeodesicArc, a2: &GeodesicArc) -> bool {
    let (first, second) = if a1.target == a2.source {
        (a1, a2)
    } else if a2.target == a1.source {
        (a2, a1)
    } else {
        return false;
    };
    first.normal == second.normal
        && !first.target.on_boundary()
        && det3_sign(&first.normal, &first.source.dir, &second.target.dir) == Sign::Positive
}

/// Concatenate two mergeable arcs.
pub fn merge(a1: &GeodesicArc, a2: &GeodesicArc) -> Result<GeodesicArc, SphereError> {
    if !is_mergeable(a1, a2) {
        return Err(SphereError::NotMergeable);
    }
    let (first, second) = if a1.target == a2.source {
        (a1, a2)
    } else {
        (a2, a1)
    };
    Ok(GeodesicArc::with_normal(
        first.source.clone(),
        second.target.clone(),
        first.normal.clone(),
    ))
}

/// Which arc end a boundary query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcEnd {
    Min,
    Max,
}

/// Parameter-space side reached by one coordinate of an arc end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    Minimum,
    Interior,
    Maximum,
}

/// Where an arc end lies relative to the parameter-space rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryDescriptor {
    pub u: BoundarySide,
    pub v: BoundarySide,
}

/// Locate an arc end: on the identification (u = ±π), at a pole (v = ±π/2),
/// or in the interior.
pub fn boundary_predicates(arc: &GeodesicArc, end: ArcEnd) -> BoundaryDescriptor {
    let p = match end {
        ArcEnd::Min => arc.min_end(),
        ArcEnd::Max => arc.max_end(),
    };
    let v = match p.boundary_class() {
        BoundaryClass::SouthPole => BoundarySide::Minimum,
        BoundaryClass::NorthPole => BoundarySide::Maximum,
        _ => BoundarySide::Interior,
    };
    let u = if p.on_identification() && !arc.is_vertical {
        match end {
            ArcEnd::Min => BoundarySide::Minimum,
            ArcEnd::Max => BoundarySide::Maximum,
        }
    } else {
        BoundarySide::Interior
    };
    BoundaryDescriptor { u, v }
}

/// The azimuth direction (xy-projection) carried by a vertical arc.
fn vertical_azimuth(arc: &GeodesicArc) -> [BigInt; 2] {
    // The meridian half-plane is spanned by the pole axis and the in-plane
    // perpendicular of the normal; pick the sign matching a non-pole endpoint.
    let perp = [arc.normal.y.clone(), -arc.normal.x.clone()];
    let witness = if arc.source.is_pole() {
        &arc.target
    } else {
        &arc.source
    };
    let dot = &perp[0] * &witness.dir.x + &perp[1] * &witness.dir.y;
    if dot.is_negative() {
        [-perp[0].clone(), -perp[1].clone()]
    } else {
        perp
    }
}

/// Compare the `u` coordinates of two arcs near a common pole they both end
/// at.  Vertical arcs carry the azimuth of their meridian; the order follows
/// `compare_u` on those azimuths, with the identification azimuth largest.
pub fn compare_u_near_boundary(
    a1: &GeodesicArc,
    a2: &GeodesicArc,
    end: ArcEnd,
) -> Result<Sign, SphereError> {
    let at_pole =
        |a: &GeodesicArc| boundary_predicates(a, end).v != BoundarySide::Interior && a.is_vertical;
    if !at_pole(a1) || !at_pole(a2) {
        return Err(SphereError::PreconditionViolation(
            "both arc ends must reach a pole",
        ));
    }
    let (u1, u2) = (vertical_azimuth(a1), vertical_azimuth(a2));
    let seam = |u: &[BigInt; 2]| u[1].is_zero() && u[0].is_negative();
    Ok(match (seam(&u1), seam(&u2)) {
        (true, true) => lexicographic_normal(a1, a2),
        (true, false) => Sign::LARGER,
        (false, true) => Sign::SMALLER,
        (false, false) => match compare_u_unchecked(&u1, &u2) {
            Sign::Zero => lexicographic_normal(a1, a2),
            s => s,
        },
    })
}

fn lexicographic_normal(a1: &GeodesicArc, a2: &GeodesicArc) -> Sign {
    Sign::from_ordering(a1.normal.cmp(&a2.normal))
}

/// Compare the `v` coordinates of two arc ends lying on the identification
/// curve (both `Min` ends, i.e. leaving it eastward, or both `Max` ends):
/// first by the latitude of the end point, then by the arcs' vertical order
/// next to it, then lexicographically on the normal.
pub fn compare_v_near_boundary(
    a1: &GeodesicArc,
    a2: &GeodesicArc,
    end: ArcEnd,
) -> Result<Sign, SphereError> {
    let (p1, p2) = match end {
        ArcEnd::Min => (a1.min_end(), a2.min_end()),
        ArcEnd::Max => (a1.max_end(), a2.max_end()),
    };
    if !p1.on_identification() || !p2.on_identification() || a1.is_vertical || a2.is_vertical {
        return Err(SphereError::PreconditionViolation(
            "both arc ends must lie on the identification curve",
        ));
    }
    let by_point = compare_v(p1, p2);
    if by_point != Sign::Zero {
        return Ok(by_point);
    }
    let by_slope = match end {
        ArcEnd::Min => compare_v_at_u_right(a1, a2, p1)?,
        ArcEnd::Max => compare_v_at_u_left(a1, a2, p1)?,
    };
    Ok(if by_slope == Sign::Zero {
        lexicographic_normal(a1, a2)
    } else {
        by_slope
    })
}

/// Compare two points on the identification curve by latitude.
pub fn compare_v_on_identification(p1: &DirPoint, p2: &DirPoint) -> Result<Sign, SphereError> {
    let ok = |p: &DirPoint| p.on_identification() || p.is_pole();
    if !ok(p1) || !ok(p2) {
        return Err(SphereError::PreconditionViolation(
            "points must lie on the identification",
        ));
    }
    Ok(compare_v(p1, p2))
}

/// Counterclockwise (viewed from outside) order of tangent directions at `p`,
/// measured from `reference`.
pub(crate) fn tangent_angle_cmp(p: &IVec3, reference: &IVec3, a: &IVec3, b: &IVec3) -> Ordering {
    // Express tangents in the plane orthogonal to p with basis
    // (reference, p × reference); coordinates scaled by positive constants.
    let e2 = p.cross(reference);
    let coords = |t: &IVec3| [reference.dot(t), e2.dot(t)];
    let r = coords(reference);
    ccw_angle_cmp(&r, &coords(a), &coords(b))
}
