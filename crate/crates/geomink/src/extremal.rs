//! Polytope pairs whose Minkowski sums reach the maximum number of facets.
//!
//! The sum of polytopes with `m₁, …, m_k` facets has at most
//! `Σ_{i<j} (2mᵢ−5)(2mⱼ−5) + Σ mᵢ + C(k,2)` facets. The witness `P_i`
//! built here has `i` facets, `3i − 6` edges and `2i − 4` vertices; its
//! Gaussian map has one facet normal at the north pole (the top facet, in
//! the plane `z = 0`) and `2i − 5` long arcs sweeping the lower hemisphere.
//! Rotating a second witness by 90° about the Y axis makes every long arc of
//! one map cross every long arc of the other.
//!
//! All coordinates are rational: angles are realized as rational points on
//! the unit circle via the tangent-half-angle map, so the requested degree
//! values are matched only approximately while every incidence that the
//! construction relies on holds exactly.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gaussian_map::{GaussianMap, GaussianMapError};
use crate::hull::convex_hull_3;
use crate::kernel::{ratio, rational_approx, rational_to_f64, Rational, Vec3};
use crate::mesh::Mesh;
use crate::minkowski::{minkowski, minkowski_many, minkowski_traced, stats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("facet count {0} is below 4")]
    InvalidFacetCount(usize),
    #[error("parameters rejected: {0}")]
    ParamsRejected(String),
    #[error("parameter tuning did not converge within {0} rounds")]
    NonTermination(usize),
    #[error(transparent)]
    GaussianMap(#[from] GaussianMapError),
}

/// Upper bound on the facet count of `P₁ ⊕ … ⊕ P_k`.
pub fn max_complexity(m: &[usize]) -> Result<u64, ExtremalError> {
    if let Some(&bad) = m.iter().find(|&&x| x < 4) {
        return Err(ExtremalError::InvalidFacetCount(bad));
    }
    let k = m.len() as u64;
    let mut total: u64 = m.iter().map(|&x| x as u64).sum();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            total += (2 * m[i] as u64 - 5) * (2 * m[j] as u64 - 5);
        }
    }
    Ok(total + k * k.saturating_sub(1) / 2)
}

/// An exact rotation matrix, given by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRotation {
    pub rows: [Vec3; 3],
}

impl RationalRotation {
    /// `Rᵀ R = I` and `det R = 1`, checked exactly.
    pub fn is_proper_orthogonal(&self) -> bool {
        let r = &self.rows;
        let cols: Vec<Vec3> = (0..3)
            .map(|j| {
                Vec3::new(
                    r[0].coords()[j].clone(),
                    r[1].coords()[j].clone(),
                    r[2].coords()[j].clone(),
                )
            })
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                if cols[i].dot(&cols[j]) != want {
                    return false;
                }
            }
        }
        r[0].cross(&r[1]).dot(&r[2]) == Rational::one()
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        Vec3::new(
            self.rows[0].dot(v),
            self.rows[1].dot(v),
            self.rows[2].dot(v),
        )
    }

    pub fn apply_mesh(&self, m: &Mesh) -> Mesh {
        m.transformed(&self.rows)
    }
}

/// Rotation about the Y axis with `cos = (1−t²)/(1+t²)`, `sin = 2t/(1+t²)`
/// (rotation angle `2·atan t`; `t = 1` is exactly 90°).
pub fn rotation_about_y(t: &Rational) -> RationalRotation {
    let (c, s) = circle_point(t);
    let z = Rational::zero();
    let o = Rational::one();
    RationalRotation {
        rows: [
            Vec3::new(c.clone(), z.clone(), s.clone()),
            Vec3::new(z.clone(), o, z.clone()),
            Vec3::new(-s, z, c),
        ],
    }
}

/// Rotation about Y by approximately `degrees`.
pub fn rotation_about_y_degrees(degrees: f64) -> RationalRotation {
    rotation_about_y(&half_angle_tangent(degrees))
}

/// The rational point `((1−t²)/(1+t²), 2t/(1+t²))` on the unit circle.
fn circle_point(t: &Rational) -> (Rational, Rational) {
    let t2 = t * t;
    let den = Rational::one() + &t2;
    ((Rational::one() - &t2) / &den, (t + t) / den)
}

/// Denominator cap used when rationalizing angles.
const ANGLE_DEN: u64 = 1_000_000_000;

/// A rational approximation of `tan(θ/2)` for `θ` in degrees.
pub fn half_angle_tangent(degrees: f64) -> Rational {
    rational_approx((degrees.to_radians() / 2.0).tan(), ANGLE_DEN)
}

/// A rational point on the unit circle near angle `degrees`.
fn circle_at(degrees: f64) -> [Rational; 2] {
    // Keep the half angle within (−90°, 90°) so the tangent is finite.
    let mut d = degrees % 360.0;
    if d > 180.0 {
        d -= 360.0;
    }
    if d <= -180.0 {
        d += 360.0;
    }
    let (x, y) = circle_point(&half_angle_tangent(d));
    [x, y]
}

fn angle_of(p: &[Rational; 2]) -> f64 {
    rational_to_f64(&p[1])
        .atan2(rational_to_f64(&p[0]))
        .to_degrees()
}

/// Parameters of the witness `P_i`, all as tangents of half angles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessParams {
    /// Number of facets `i ≥ 4`.
    pub facets: usize,
    /// Exterior dihedral angle between the top facet and the side facets.
    pub alpha: Rational,
    /// Angle subtended at the center by the two lowest vertices.
    pub beta: Rational,
    /// Angle spanned by each half of the top facet's fan.
    pub gamma: Rational,
}

/// Ratio by which consecutive fan angles shrink toward the fan's apex.
const FAN_RATIO: f64 = 0.3;

impl WitnessParams {
    /// Default parameters: `α = 10°`, `β = 20°`, `γ = 40°`.
    pub fn new(facets: usize) -> WitnessParams {
        WitnessParams {
            facets,
            alpha: half_angle_tangent(10.0),
            beta: half_angle_tangent(20.0),
            gamma: half_angle_tangent(40.0),
        }
    }

    /// With `α` given in degrees.
    pub fn with_alpha_degrees(mut self, alpha: f64) -> WitnessParams {
        self.alpha = half_angle_tangent(alpha);
        self
    }

    fn degrees(t: &Rational) -> f64 {
        2.0 * rational_to_f64(t).atan().to_degrees()
    }

    pub fn alpha_degrees(&self) -> f64 {
        Self::degrees(&self.alpha)
    }

    pub fn beta_degrees(&self) -> f64 {
        Self::degrees(&self.beta)
    }

    pub fn gamma_degrees(&self) -> f64 {
        Self::degrees(&self.gamma)
    }

    /// The same parameters with every angle halved (approximately, keeping
    /// rational tangents).
    pub fn halved(&self) -> WitnessParams {
        WitnessParams {
            facets: self.facets,
            alpha: half_angle_tangent(self.alpha_degrees() / 2.0),
            beta: half_angle_tangent(self.beta_degrees() / 2.0),
            gamma: half_angle_tangent(self.gamma_degrees() / 2.0),
        }
    }
}

/// Second intersection of the line through `x` and `q` (on the unit circle)
/// with the unit circle. Exact: the other root of a quadratic with a known
/// rational root.
fn second_intersection(x: &[Rational; 2], q: &[Rational; 2]) -> [Rational; 2] {
    let d = [&q[0] - &x[0], &q[1] - &x[1]];
    let t = (&x[0] * &x[0] + &x[1] * &x[1] - Rational::one()) / (&d[0] * &d[0] + &d[1] * &d[1]);
    [&x[0] + &(&t * &d[0]), &x[1] + &(&t * &d[1])]
}

/// Point of the line `ab` at height `y`.
fn at_height(a: &[Rational; 2], b: &[Rational; 2], y: &Rational) -> [Rational; 2] {
    let t = (y - &a[1]) / (&b[1] - &a[1]);
    [&a[0] + &(&t * (&b[0] - &a[0])), y.clone()]
}

/// One half of the witness: the top-facet points `p[0..=fan]` running from
/// angle `θ₀ = −γ` up to angle 0, and the lower points `r[1..=fan]`. The
/// lines `p[k]p[k+1]` and `r[k]r[k+1]` meet on the line `y = sin θ₀`, which
/// makes each side facet `p[k] p[k+1] r[k+1] r[k]` planar once the lower
/// points are lifted onto a plane through that line.
fn fan(len: usize, theta0: f64, beta: f64) -> (Vec<[Rational; 2]>, Vec<[Rational; 2]>) {
    let p0 = circle_at(theta0);
    let y0 = p0[1].clone();
    let mut p = vec![p0.clone(); len + 1];
    let mut r = vec![[Rational::zero(), Rational::zero()]; len + 1];
    p[len] = [Rational::one(), Rational::zero()];
    r[len] = circle_at(-90.0 + beta / 2.0);
    let mut a = -theta0;
    let mut b = theta0 - angle_of(&r[len]);
    for k in (1..len).rev() {
        // Squeeze the next fan point toward θ₀, faster where the lower
        // chain is already close to it.
        a = FAN_RATIO * a.min(b * b / a);
        p[k] = circle_at(theta0 + a);
        let x = at_height(&p[k], &p[k + 1], &y0);
        r[k] = second_intersection(&x, &r[k + 1]);
        b = theta0 - angle_of(&r[k]);
    }
    (p, r)
}

/// The four-facet witness: a tetrahedron with two vertices on the circle
/// `z = 0` and two on `z = −1/5`.
fn tetrahedron_witness() -> Vec<Vec3> {
    let layout = [(340.0, 0), (300.0, 0), (220.0, -1), (160.0, -1)];
    layout
        .iter()
        .map(|&(deg, level)| {
            let [x, y] = circle_at(deg);
            Vec3::new(x, y, ratio(level, 5))
        })
        .collect()
}

/// The witness polytope `P_i`.
pub fn witness_polytope(params: &WitnessParams) -> Result<Mesh, ExtremalError> {
    let i = params.facets;
    if i < 4 {
        return Err(ExtremalError::InvalidFacetCount(i));
    }
    let pts = if i == 4 {
        tetrahedron_witness()
    } else {
        let theta0 = -params.gamma_degrees();
        let beta = params.beta_degrees();
        let (sa, ca) = (
            &params.alpha,
            Rational::one() - &params.alpha * &params.alpha,
        );
        if !ca.is_positive() || !sa.is_positive() {
            return Err(ExtremalError::ParamsRejected(
                "α must lie in (0°, 90°)".into(),
            ));
        }
        // Slope of the lower points' lifting plane: tan α.
        let slope = (sa + sa) / ca;
        let right = (i - 2) / 2;
        let left = i - 3 - right;
        let mut pts = Vec::new();
        for (len, mirror) in [(right, false), (left, true)] {
            let (p, r) = fan(len, theta0, beta);
            let y0 = p[0][1].clone();
            let sx = |x: &Rational| if mirror { -x } else { x.clone() };
            for q in &p {
                pts.push(Vec3::new(sx(&q[0]), q[1].clone(), Rational::zero()));
            }
            for q in &r[1..] {
                pts.push(Vec3::new(sx(&q[0]), q[1].clone(), &slope * (&q[1] - &y0)));
            }
        }
        pts
    };
    let mesh = convex_hull_3(&pts).map_err(|e| ExtremalError::ParamsRejected(e.to_string()))?;
    let (v, e, f) = (mesh.vertices.len(), mesh.edges().len(), mesh.facets.len());
    if (v, e, f) != (2 * i - 4, 3 * i - 6, i) {
        return Err(ExtremalError::ParamsRejected(format!(
            "hull has {v} vertices, {e} edges, {f} facets instead of {}, {}, {i}",
            2 * i - 4,
            3 * i - 6
        )));
    }
    Ok(mesh)
}

/// Outcome of building a witness sum and comparing with the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub summand_facets: Vec<usize>,
    pub params: Vec<WitnessParams>,
    pub sum_facets: usize,
    pub bound: u64,
    /// Crossings of summand Gaussian-map arcs (two summands only).
    pub crossings: Option<usize>,
    pub pass: bool,
}

/// The witness pair `(P_m, R·P_n)` with `R` the exact 90° rotation about Y.
pub fn witness_pair(pm: &WitnessParams, pn: &WitnessParams) -> Result<(Mesh, Mesh), ExtremalError> {
    let a = witness_polytope(pm)?;
    let b = rotation_about_y(&Rational::one()).apply_mesh(&witness_polytope(pn)?);
    Ok((a, b))
}

fn sum_report(pm: &WitnessParams, pn: &WitnessParams) -> Result<BoundReport, ExtremalError> {
    let (a, b) = witness_pair(pm, pn)?;
    let (ga, gb) = (GaussianMap::build(&a)?, GaussianMap::build(&b)?);
    let (s, prov) = minkowski_traced(&ga, &gb)?;
    let st = stats(&s, &prov, &ga, &gb);
    let bound = max_complexity(&[pm.facets, pn.facets])?;
    Ok(BoundReport {
        summand_facets: vec![pm.facets, pn.facets],
        params: vec![pm.clone(), pn.clone()],
        sum_facets: st.facets,
        bound,
        crossings: Some(st.crossings),
        pass: st.facets as u64 == bound,
    })
}

/// Maximum number of halving rounds in [`tune_params`].
pub const TUNE_CAP: usize = 64;

/// Parameters for `P_m` and `P_n` whose witness sum reaches the bound.
/// Starting from the defaults, the exterior dihedral angle `α` of both
/// witnesses is halved until the facet count of the sum matches.
pub fn tune_params(m: usize, n: usize) -> Result<(WitnessParams, WitnessParams), ExtremalError> {
    Ok(tune(m, n)?.0)
}

fn tune(
    m: usize,
    n: usize,
) -> Result<((WitnessParams, WitnessParams), BoundReport), ExtremalError> {
    max_complexity(&[m, n])?;
    let (mut pm, mut pn) = (WitnessParams::new(m), WitnessParams::new(n));
    for _ in 0..TUNE_CAP {
        match sum_report(&pm, &pn) {
            Ok(r) if r.pass => return Ok(((pm, pn), r)),
            Ok(_) | Err(ExtremalError::ParamsRejected(_)) => {}
            Err(e) => return Err(e),
        }
        let a = pm.alpha_degrees() / 2.0;
        pm = pm.with_alpha_degrees(a);
        pn = pn.with_alpha_degrees(a);
    }
    Err(ExtremalError::NonTermination(TUNE_CAP))
}

/// Build tuned witnesses for `(m, n)`, sum them and compare the facet count
/// with [`max_complexity`]. A tuning failure is reported as a failing report
/// using the default parameters.
pub fn verify_bound(m: usize, n: usize) -> Result<BoundReport, ExtremalError> {
    match tune(m, n) {
        Ok((_, r)) => Ok(r),
        Err(ExtremalError::NonTermination(_)) => {
            sum_report(&WitnessParams::new(m), &WitnessParams::new(n))
        }
        Err(e) => Err(e),
    }
}

/// Sum of `k` witnesses, the `j`-th rotated by about `180°·j/k` about Y.
/// The rotations are rational approximations, so the bound is reported,
/// not assumed.
pub fn verify_many(facets: &[usize], alpha_degrees: f64) -> Result<BoundReport, ExtremalError> {
    let bound = max_complexity(facets)?;
    let k = facets.len();
    let mut maps = Vec::with_capacity(k);
    let mut params = Vec::with_capacity(k);
    for (j, &f) in facets.iter().enumerate() {
        let p = WitnessParams::new(f).with_alpha_degrees(alpha_degrees);
        let r = rotation_about_y_degrees(180.0 * j as f64 / k as f64);
        maps.push(GaussianMap::build(&r.apply_mesh(&witness_polytope(&p)?))?);
        params.push(p);
    }
    let sum = if k == 1 {
        maps[0].clone()
    } else {
        minkowski_many(&maps)?
    };
    let crossings = if k == 2 {
        Some(
            minkowski_traced(&maps[0], &maps[1])
                .map(|(s, p)| stats(&s, &p, &maps[0], &maps[1]).crossings)?,
        )
    } else {
        None
    };
    let sum_facets = sum.facet_count();
    Ok(BoundReport {
        summand_facets: facets.to_vec(),
        params,
        sum_facets,
        bound,
        crossings,
        pass: sum_facets as u64 == bound,
    })
}

/// Facet count of the sum of two meshes (convenience for reports).
pub fn sum_facet_count(a: &Mesh, b: &Mesh) -> Result<usize, ExtremalError> {
    Ok(minkowski(&GaussianMap::build(a)?, &GaussianMap::build(b)?)?.facet_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(max_complexity(&[4, 4]).unwrap(), 18);
        assert_eq!(max_complexity(&[11, 11]).unwrap(), 312);
        assert_eq!(max_complexity(&[4, 4, 4]).unwrap(), 42);
        assert_eq!(max_complexity(&[5, 7]).unwrap(), 58);
        assert_eq!(
            max_complexity(&[3, 7]),
            Err(ExtremalError::InvalidFacetCount(3))
        );
    }

    #[test]
    fn rotations_are_exact() {
        let id = rotation_about_y(&Rational::zero());
        assert_eq!(
            id.apply(&Vec3::from_ints(1, 2, 3)),
            Vec3::from_ints(1, 2, 3)
        );
        let q = rotation_about_y(&Rational::one());
        assert_eq!(
            q.apply(&Vec3::from_ints(1, 2, 3)),
            Vec3::from_ints(3, 2, -1)
        );
        for deg in [60.0, 120.0, 37.5] {
            assert!(rotation_about_y_degrees(deg).is_proper_orthogonal());
        }
    }

    #[test]
    fn witness_counts() {
        for i in 4..=11 {
            let m = witness_polytope(&WitnessParams::new(i)).unwrap();
            assert_eq!(
                (m.facets.len(), m.edges().len(), m.vertices.len()),
                (i, 3 * i - 6, 2 * i - 4),
                "i = {i}"
            );
        }
    }

    #[test]
    fn one_map_edge_lies_in_the_upper_y_hemisphere() {
        for i in 5..=9 {
            let g = GaussianMap::build(&witness_polytope(&WitnessParams::new(i)).unwrap()).unwrap();
            let upper = g
                .fused_arcs()
                .iter()
                .filter(|c| c.source < c.target)
                .filter(|c| {
                    let (a, b) = (g.arr.point(c.source).dir(), g.arr.point(c.target).dir());
                    !a.y.is_negative() && !b.y.is_negative() && !(a.y.is_zero() && b.y.is_zero())
                })
                .count();
            assert_eq!(upper, 1, "i = {i}");
        }
    }

    #[test]
    fn small_bounds_are_reached() {
        let r = verify_bound(4, 4).unwrap();
        assert!(r.pass && r.sum_facets == 18, "{r:?}");
        let r = verify_bound(5, 7).unwrap();
        assert!(r.pass && r.sum_facets == 58, "{r:?}");
        assert_eq!(r.crossings, Some(5 * 9 + 1));
        let r = verify_many(&[4, 4, 4], 10.0).unwrap();
        assert_eq!((r.sum_facets, r.bound), (42, 42));
    }
}
