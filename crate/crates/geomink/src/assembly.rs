//! Partitioning assemblies of polyhedral parts by a single translation to
//! infinity.
//!
//! Part `i` moving along `d` collides with part `j` exactly when some ray
//! `{t·d : t > 0}` meets the interior of `M_ij = P_j ⊕ (−P_i)`. The set of
//! such directions, `Q_ij`, is the central projection of `M_ij` onto the
//! sphere (the union over convex sub-part pairs). Overlaying all `Q_ij`
//! gives the motion space: every cell carries the directional blocking
//! graph (DBG) of its directions, with an edge `i → j` when `i` moving
//! along the cell's directions is blocked by `j`. A cell whose DBG is not
//! strongly connected yields a movable subset.
//!
//! Blocking uses open interiors, so parts may slide along each other.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arrangement::{overlay, rebuild, ArrangementError, Cell, Combine, Labeled, Segment};
use crate::gaussian_map::{GaussianMap, GaussianMapError};
use crate::kernel::{IVec3, Rational, Vec3};
use crate::mesh::{Mesh, MeshError};
use crate::minkowski::minkowski;
use crate::proximity::{Classifier, Placement};
use crate::sphere::DirPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("part {part} sub-part {subpart}: {source}")]
    InvalidSubpart {
        part: usize,
        subpart: usize,
        #[source]
        source: MeshError,
    },
    #[error("an assembly needs at least two parts")]
    TooFewParts,
    #[error("part {part} has no sub-parts")]
    EmptyPart { part: usize },
    #[error("interiors of part {0} sub-part {1} and part {2} sub-part {3} overlap")]
    Overlap(usize, usize, usize, usize),
    #[error(transparent)]
    GaussianMap(#[from] GaussianMapError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// A part: a union of convex sub-parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub name: String,
    pub subparts: Vec<Mesh>,
}

/// Parts with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub parts: Vec<Part>,
}

impl Assembly {
    pub fn new(parts: Vec<Part>) -> Assembly {
        Assembly { parts }
    }

    /// Validate every sub-part mesh.
    pub fn validate(&self) -> Result<(), AssemblyError> {
        if self.parts.len() < 2 {
            return Err(AssemblyError::TooFewParts);
        }
        for (i, p) in self.parts.iter().enumerate() {
            if p.subparts.is_empty() {
                return Err(AssemblyError::EmptyPart { part: i });
            }
            for (k, m) in p.subparts.iter().enumerate() {
                m.validate()
                    .map_err(|source| AssemblyError::InvalidSubpart {
                        part: i,
                        subpart: k,
                        source,
                    })?;
            }
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.name.as_str()).collect()
    }
}

/// A subdivision of the sphere with a flag on every cell: whether every
/// ray in a direction of the cell pierces the interior of the solid.
pub type Region = Labeled<bool>;

/// Key `(i, j, k, l)` of the sum `P^j_l ⊕ (−P^i_k)`.
pub type SumKey = (usize, usize, usize, usize);

/// Gaussian maps of all sub-parts, indexed by part and sub-part.
fn subpart_maps(a: &Assembly) -> Result<Vec<Vec<GaussianMap>>, AssemblyError> {
    a.validate()?;
    a.parts
        .par_iter()
        .map(|p| {
            p.subparts
                .iter()
                .map(GaussianMap::build)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(AssemblyError::from)
}

/// Every sum `M^{ij}_{kl} = P^j_l ⊕ (−P^i_k)` for ordered pairs `i ≠ j`.
/// With `reflection`, only pairs `i < j` are summed and the rest obtained
/// as `M^{ji}_{lk} = −M^{ij}_{kl}`.
pub fn pairwise_subpart_sums(
    a: &Assembly,
    reflection: bool,
) -> Result<BTreeMap<SumKey, GaussianMap>, AssemblyError> {
    let maps = subpart_maps(a)?;
    let keys = sum_keys(a, reflection);
    let sums = compute_sums(&maps, &keys)?;
    let mut out: BTreeMap<SumKey, GaussianMap> = keys.into_iter().zip(sums).collect();
    if reflection {
        let mirrored: Vec<(SumKey, GaussianMap)> = out
            .iter()
            .map(|(&(i, j, k, l), m)| ((j, i, l, k), m.reflect()))
            .collect();
        out.extend(mirrored);
    }
    Ok(out)
}

fn sum_keys(a: &Assembly, reflection: bool) -> Vec<SumKey> {
    let n = a.parts.len();
    let mut keys = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (reflection && i > j) {
                continue;
            }
            for k in 0..a.parts[i].subparts.len() {
                for l in 0..a.parts[j].subparts.len() {
                    keys.push((i, j, k, l));
                }
            }
        }
    }
    keys
}

fn compute_sums(
    maps: &[Vec<GaussianMap>],
    keys: &[SumKey],
) -> Result<Vec<GaussianMap>, AssemblyError> {
    keys.par_iter()
        .map(|&(i, j, k, l)| {
            let m = minkowski(&maps[j][l], &maps[i][k].reflect())?;
            // The sub-parts overlap exactly when the origin is interior.
            if Classifier::new(&m).classify(&Vec3::zero(), None).placement == Placement::Inside {
                return Err(AssemblyError::Overlap(i, k, j, l));
            }
            Ok(m)
        })
        .collect()
}

/// Facet planes `⟨n, x⟩ ≤ b` of the polytope of `g`, with integer normals.
fn facet_planes(g: &GaussianMap) -> Vec<(IVec3, Rational)> {
    g.facet_vertices()
        .into_iter()
        .map(|v| {
            let n = g.arr.point(v).dir().clone();
            let h = g.arr.outgoing(v).expect("facet vertex has edges");
            let b = n.to_vec3().dot(&g.arr.face(g.arr.incident_face(h)).data);
            (n, b)
        })
        .collect()
}

/// Some nonzero vector orthogonal to `n`.
fn orthogonal(n: &IVec3) -> IVec3 {
    [
        IVec3::from_ints(1, 0, 0),
        IVec3::from_ints(0, 1, 0),
        IVec3::from_ints(0, 0, 1),
    ]
    .iter()
    .map(|a| n.cross(a))
    .find(|c| !c.is_zero())
    .expect("n is nonzero")
}

/// A region whose flagged part is the open spherical polygon `poly`
/// (arcs between consecutive corners, each shorter than π); `inside` is a
/// direction strictly inside the polygon, used to orient it.
fn polygon_region(mut poly: Vec<IVec3>, inside: &IVec3) -> Region {
    if poly[0].cross(&poly[1]).dot(inside).is_negative() {
        poly.reverse();
    }
    let pts: Vec<DirPoint> = poly
        .into_iter()
        .map(|d| DirPoint::from_ivec(d).expect("nonzero"))
        .collect();
    let segments: Vec<Segment<bool>> = (0..pts.len())
        .map(|i| Segment {
            source: pts[i].clone(),
            target: pts[(i + 1) % pts.len()].clone(),
            edge: false,
            left: true,
            right: false,
        })
        .collect();
    let points: Vec<(DirPoint, bool)> = pts.into_iter().map(|p| (p, false)).collect();
    rebuild(&segments, &points, false).expect("a simple spherical polygon")
}

/// Corners, in counterclockwise order about `h`, of the spherical convex
/// hull of `dirs` (all strictly on the positive side of `h`). Redundant
/// directions, including those in the middle of a hull side, are skipped.
fn spherical_hull(dirs: &[IVec3], h: &IVec3) -> Vec<IVec3> {
    let u = orthogonal(h);
    let w = h.cross(&u);
    // Gnomonic coordinates on the plane ⟨h, x⟩ = 1, in the basis (u, w);
    // (u, w, h) is right-handed, so counterclockwise in the plane is
    // counterclockwise about h.
    let mut pts: Vec<(Rational, Rational, usize)> = dirs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let s = Rational::from(h.dot(d));
            (
                Rational::from(u.dot(d)) / &s,
                Rational::from(w.dot(d)) / &s,
                i,
            )
        })
        .collect();
    pts.sort();
    pts.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    let cross = |o: &(Rational, Rational, usize),
                 a: &(Rational, Rational, usize),
                 b: &(Rational, Rational, usize)| {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };
    let mut hull: Vec<(Rational, Rational, usize)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(Rational, Rational, usize)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive()
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull.into_iter().map(|(_, _, i)| dirs[i].clone()).collect()
}

/// The central projection of the polytope of `g` onto the sphere of
/// directions, with cells flagged when their rays pierce its interior.
///
/// * Origin inside: the whole sphere.
/// * Origin in the relative interior of a facet with outward normal `n`:
///   the open hemisphere `⟨n, d⟩ < 0`.
/// * Origin inside an edge: the open lune between the two facet planes.
/// * Otherwise (origin outside, or at a vertex) the polytope spans a
///   pointed cone; its projection is the spherical convex hull of the
///   vertex directions, bounded by the projected silhouette.
pub fn project_polytope(g: &GaussianMap) -> Region {
    let planes = facet_planes(g);
    let vertices: Vec<Vec3> = g
        .arr
        .face_ids()
        .map(|f| g.arr.face(f).data.clone())
        .collect();
    let zero: Vec<&IVec3> = planes
        .iter()
        .filter(|(_, b)| b.is_zero())
        .map(|(n, _)| n)
        .collect();
    let behind = planes.iter().find(|(_, b)| b.is_negative());
    let h = match (behind, zero.len()) {
        (Some((n, _)), _) => n.neg(),
        (None, 0) => return rebuild(&[], &[], true).expect("empty arrangement"),
        (None, 1) => {
            let n = zero[0];
            let u = orthogonal(n);
            let w = n.cross(&u);
            return polygon_region(vec![u.clone(), w.clone(), u.neg(), w.neg()], &n.neg());
        }
        (None, 2) => {
            let (nf, ng) = (zero[0], zero[1]);
            let e = nf.cross(ng);
            let side = |n: &IVec3, other: &IVec3| {
                let w = n.cross(&e);
                if other.dot(&w).is_positive() {
                    w.neg()
                } else {
                    w
                }
            };
            let (wf, wg) = (side(nf, ng), side(ng, nf));
            let inside = wf.add(&wg);
            return polygon_region(vec![e.clone(), wf, e.neg(), wg], &inside);
        }
        (None, _) => zero
            .iter()
            .fold(IVec3::from_ints(0, 0, 0), |acc, n| acc.sub(n)),
    };
    let dirs: Vec<IVec3> = vertices
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.to_ivec())
        .collect();
    let poly = spherical_hull(&dirs, &h);
    let inside = poly
        .iter()
        .fold(IVec3::from_ints(0, 0, 0), |acc, d| acc.add(d));
    polygon_region(poly, &inside)
}

/// Non-regularized union: a cell is flagged when any input flags it;
/// features separating equally flagged cells are removed afterwards.
pub fn union_regions(rs: &[Region]) -> Result<Region, AssemblyError> {
    let (first, rest) = rs.split_first().ok_or(AssemblyError::TooFewParts)?;
    let mut acc = first.cleanup();
    for r in rest {
        acc = overlay(&acc, r, &Combine(|a: &bool, b: &bool| *a || *b))?.cleanup();
    }
    Ok(acc)
}

/// Piercing regions `Q_ij` for all ordered pairs.
pub fn blocking_regions(
    a: &Assembly,
    reflection: bool,
) -> Result<BTreeMap<(usize, usize), Region>, AssemblyError> {
    let maps = subpart_maps(a)?;
    let keys = sum_keys(a, reflection);
    let sums = compute_sums(&maps, &keys)?;
    let mut grouped: BTreeMap<(usize, usize), Vec<&GaussianMap>> = BTreeMap::new();
    for (&(i, j, _, _), m) in keys.iter().zip(&sums) {
        grouped.entry((i, j)).or_default().push(m);
    }
    let pairs: Vec<((usize, usize), Vec<&GaussianMap>)> = grouped.into_iter().collect();
    let regions: Vec<((usize, usize), Region)> = pairs
        .into_par_iter()
        .map(|(key, ms)| {
            let projections: Vec<Region> = ms.iter().map(|m| project_polytope(m)).collect();
            Ok((key, union_regions(&projections)?))
        })
        .collect::<Result<_, AssemblyError>>()?;
    let mut out: BTreeMap<(usize, usize), Region> = regions.into_iter().collect();
    if reflection {
        let mirrored: Vec<((usize, usize), Region)> = out
            .iter()
            .map(|(&(i, j), q)| ((j, i), q.antipodal()))
            .collect();
        out.extend(mirrored);
    }
    Ok(out)
}

/// A directional blocking graph over `n` parts: edge `i → j` when part `i`
/// is blocked by part `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dbg {
    n: usize,
    bits: Vec<bool>,
}

impl Dbg {
    pub fn empty(n: usize) -> Dbg {
        Dbg {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "a part never blocks itself");
        self.bits[i * self.n + j] = true;
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has(i, j))
            .collect()
    }

    pub fn is_subset(&self, other: &Dbg) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// Strongly connected components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        tarjan_scc(self.n, |i, j| self.has(i, j))
    }

    /// The largest set of parts that can move along the cell's directions
    /// while the rest stays: everything except the source component (no
    /// incoming edges) with the lowest-indexed part. `None` when the graph
    /// is strongly connected.
    pub fn movable_subset(&self) -> Option<Vec<usize>> {
        let comps = self.components();
        if comps.len() < 2 {
            return None;
        }
        let mut comp_of = vec![0; self.n];
        for (c, parts) in comps.iter().enumerate() {
            for &p in parts {
                comp_of[p] = c;
            }
        }
        let mut has_incoming = vec![false; comps.len()];
        for (i, j) in self.edges() {
            if comp_of[i] != comp_of[j] {
                has_incoming[comp_of[j]] = true;
            }
        }
        let stay = (0..comps.len())
            .filter(|&c| !has_incoming[c])
            .min_by_key(|&c| comps[c][0])?;
        Some((0..self.n).filter(|&p| comp_of[p] != stay).collect())
    }
}

/// Tarjan's strongly connected components of the graph on `0..n` with
/// adjacency `adj`; each component sorted, components ordered by their
/// smallest member.
pub fn tarjan_scc(n: usize, adj: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    struct State {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(v: usize, n: usize, adj: &dyn Fn(usize, usize) -> bool, s: &mut State) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..n {
            if w == v || !adj(v, w) {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(w, n, adj, s);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("stack holds the component");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let mut s = State {
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(v, n, &adj, &mut s);
        }
    }
    s.out.sort();
    s.out
}

/// The motion space: the sphere of directions subdivided so that the DBG
/// is constant on every cell.
#[derive(Debug, Clone)]
pub struct MotionSpace {
    pub arr: Labeled<Dbg>,
}

impl MotionSpace {
    pub fn parts(&self) -> usize {
        self.arr.face(crate::arrangement::FaceId(0)).data.len()
    }

    /// Every incidence satisfies vertex DBG ⊆ edge DBG ⊆ face DBG. Returns
    /// the violating `(lower, higher)` cell pairs.
    pub fn monotonicity_violations(&self) -> Vec<(Cell, Cell)> {
        let label = |c: Cell| match c {
            Cell::Vertex(v) => &self.arr.vertex(v).data,
            Cell::Edge(e) => &self.arr.edge(e).data,
            Cell::Face(f) => &self.arr.face(f).data,
        };
        let mut bad = Vec::new();
        for c in self.arr.cells() {
            for d in self.arr.incident_cells(c) {
                if !label(c).is_subset(label(d)) {
                    bad.push((c, d));
                }
            }
        }
        bad
    }

    pub fn dbg(&self, c: Cell) -> &Dbg {
        match c {
            Cell::Vertex(v) => &self.arr.vertex(v).data,
            Cell::Edge(e) => &self.arr.edge(e).data,
            Cell::Face(f) => &self.arr.face(f).data,
        }
    }
}

/// Overlay all `Q_ij` into the motion space.
pub fn build_motion_space(
    n: usize,
    regions: &BTreeMap<(usize, usize), Region>,
) -> Result<MotionSpace, AssemblyError> {
    let mut arr: Labeled<Dbg> = rebuild(&[], &[], Dbg::empty(n))?;
    for (&(i, j), q) in regions {
        let add = move |d: &Dbg, f: &bool| {
            let mut d = d.clone();
            if *f {
                d.set(i, j);
            }
            d
        };
        arr = overlay(&arr, q, &Combine(add))?.cleanup();
    }
    Ok(MotionSpace { arr })
}

/// Whether to stop at the first solution or report all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    All,
}

/// A cell of the motion space along whose directions a subset can move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub cell: Cell,
    /// A direction of the cell: the vertex itself, the sum of an edge's
    /// endpoint directions, or a point just left of a face's boundary arc.
    pub direction: DirPoint,
    /// Parts that move (sorted); the others stay.
    pub movable: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionResult {
    Interlocked,
    Solutions(Vec<Solution>),
}

impl PartitionResult {
    pub fn solutions(&self) -> &[Solution] {
        match self {
            PartitionResult::Interlocked => &[],
            PartitionResult::Solutions(s) => s,
        }
    }

    pub fn is_interlocked(&self) -> bool {
        matches!(self, PartitionResult::Interlocked)
    }
}

/// Scan vertices, then edges, then faces for DBGs that are not strongly
/// connected.
pub fn find_partitions(ms: &MotionSpace, mode: Mode) -> PartitionResult {
    let mut out = Vec::new();
    for cell in ms.arr.cells() {
        if let Some(movable) = ms.dbg(cell).movable_subset() {
            out.push(Solution {
                cell,
                direction: ms.arr.representative_point(cell),
                movable,
            });
            if mode == Mode::First {
                break;
            }
        }
    }
    if out.is_empty() {
        PartitionResult::Interlocked
    } else {
        PartitionResult::Solutions(out)
    }
}

/// Tuning knobs for [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionOptions {
    /// Compute `Q_ji` as the antipodal image of `Q_ij`.
    pub reflection: bool,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { reflection: true }
    }
}

/// Intermediate products of the partitioning pipeline.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// Number of sub-part Minkowski sums computed.
    pub sums_computed: usize,
    pub regions: BTreeMap<(usize, usize), Region>,
    pub motion: MotionSpace,
}

/// Run the pipeline up to the motion space.
pub fn analyze(a: &Assembly, opts: PartitionOptions) -> Result<Analysis, AssemblyError> {
    let sums_computed = sum_keys(a, opts.reflection).len();
    let regions = blocking_regions(a, opts.reflection)?;
    let motion = build_motion_space(a.parts.len(), &regions)?;
    Ok(Analysis {
        sums_computed,
        regions,
        motion,
    })
}

/// Partition `a` by a single translation.
pub fn partition(a: &Assembly, mode: Mode) -> Result<PartitionResult, AssemblyError> {
    Ok(find_partitions(
        &analyze(a, PartitionOptions::default())?.motion,
        mode,
    ))
}
