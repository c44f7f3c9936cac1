//! Arrangements of geodesic arcs on the sphere, stored as a DCEL.
//!
//! Conventions used throughout:
//!
//! * Halfedges come in twin pairs `2e`, `2e + 1`; halfedge `2e` runs along
//!   the stored arc of edge `e` (source to target).
//! * The incident face of a halfedge lies to its left, viewed from outside
//!   the sphere.
//! * Around a vertex, outgoing halfedges are ordered counterclockwise (viewed
//!   from outside); `next(h)` is the clockwise successor of `twin(h)` around
//!   `target(h)`, so the sector from an outgoing `g` counterclockwise to the
//!   following outgoing halfedge belongs to `face(g)`.
//! * A face may own several boundary cycles (CCBs) and isolated vertices.
//!   Whether a cycle is "outer" or "inner" is a property of the
//!   parameter-space picture and is computed on demand by
//!   [`Arrangement::ccb_is_outer`].

mod build;
mod dump;
mod insert;
mod labeled;
mod locate;
mod overlay;
mod validate;

use std::collections::HashMap;

use thiserror::Error;

use crate::sphere::{compare_v, DirPoint, GeodesicArc, SphereError};

pub use build::{build_from_arcs, sweep_build, BuildOutput};
pub use dump::{parse_dump, DumpError};
pub use labeled::{rebuild, Combine, Labeled, Segment};
pub use locate::Cell;
pub use overlay::{overlay, overlay_traced, OverlayCallbacks, OverlayProvenance};
pub use validate::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("anchor vertex does not match the arc endpoint")]
    AnchorMismatch,
    #[error("arc is not interior-disjoint from the arrangement")]
    ArcNotDisjoint,
    #[error("invalid arc: {0}")]
    InvalidArc(#[from] SphereError),
    #[error("point lies on an existing edge")]
    PointOnEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfedgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub usize);

impl HalfedgeId {
    pub fn twin(self) -> HalfedgeId {
        HalfedgeId(self.0 ^ 1)
    }

    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 >> 1)
    }

    /// Whether this halfedge runs along its edge's stored arc.
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }
}

impl EdgeId {
    pub fn halfedge(self) -> HalfedgeId {
        HalfedgeId(self.0 << 1)
    }
}

#[derive(Debug, Clone)]
pub struct Vertex<V> {
    pub point: DirPoint,
    pub data: V,
    pub(crate) out: Option<HalfedgeId>,
    pub(crate) isolated_in: Option<FaceId>,
}

#[derive(Debug, Clone)]
pub(crate) struct Halfedge {
    pub(crate) next: HalfedgeId,
    pub(crate) prev: HalfedgeId,
    pub(crate) origin: VertexId,
    pub(crate) face: FaceId,
}

#[derive(Debug, Clone)]
pub struct Edge<E> {
    /// Geometry, oriented like the even halfedge of the pair.
    pub arc: GeodesicArc,
    pub data: E,
}

#[derive(Debug, Clone)]
pub struct Face<F> {
    pub data: F,
    pub(crate) ccbs: Vec<HalfedgeId>,
    pub(crate) isolated: Vec<VertexId>,
}

/// A subdivision of the sphere induced by interior-disjoint geodesic arcs.
///
/// `V`, `E` and `F` are the payloads carried by vertices, edges (halfedge
/// pairs) and faces.
#[derive(Debug, Clone)]
pub struct Arrangement<V = (), E = (), F = ()> {
    pub(crate) vertices: Vec<Vertex<V>>,
    pub(crate) halfedges: Vec<Halfedge>,
    pub(crate) edges: Vec<Edge<E>>,
    pub(crate) faces: Vec<Face<F>>,
    pub(crate) index: HashMap<DirPoint, VertexId>,
    pub(crate) north: Option<VertexId>,
    pub(crate) south: Option<VertexId>,
    /// Vertices on the identification curve, sorted by latitude.
    pub(crate) seam: Vec<VertexId>,
}

impl<V, E, F> Arrangement<V, E, F> {
    /// The arrangement with a single face covering the whole sphere.
    pub fn new(face_data: F) -> Self {
        Arrangement {
            vertices: Vec::new(),
            halfedges: Vec::new(),
            edges: Vec::new(),
            faces: vec![Face {
                data: face_data,
                ccbs: Vec::new(),
                isolated: Vec::new(),
            }],
            index: HashMap::new(),
            north: None,
            south: None,
            seam: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_halfedges(&self) -> usize {
        self.halfedges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// `(V, HE, F)` feature counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.num_vertices(), self.num_halfedges(), self.num_faces())
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn halfedge_ids(&self) -> impl Iterator<Item = HalfedgeId> {
        (0..self.halfedges.len()).map(HalfedgeId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex<V> {
        &self.vertices[v.0]
    }

    pub fn vertex_mut(&mut self, v: VertexId) -> &mut Vertex<V> {
        &mut self.vertices[v.0]
    }

    pub fn point(&self, v: VertexId) -> &DirPoint {
        &self.vertices[v.0].point
    }

    pub fn edge(&self, e: EdgeId) -> &Edge<E> {
        &self.edges[e.0]
    }

    pub fn edge_mut(&mut self, e: EdgeId) -> &mut Edge<E> {
        &mut self.edges[e.0]
    }

    pub fn face(&self, f: FaceId) -> &Face<F> {
        &self.faces[f.0]
    }

    pub fn face_mut(&mut self, f: FaceId) -> &mut Face<F> {
        &mut self.faces[f.0]
    }

    pub fn find_vertex(&self, p: &DirPoint) -> Option<VertexId> {
        self.index.get(p).copied()
    }

    pub fn next(&self, h: HalfedgeId) -> HalfedgeId {
        self.halfedges[h.0].next
    }

    pub fn prev(&self, h: HalfedgeId) -> HalfedgeId {
        self.halfedges[h.0].prev
    }

    pub fn origin(&self, h: HalfedgeId) -> VertexId {
        self.halfedges[h.0].origin
    }

    pub fn target(&self, h: HalfedgeId) -> VertexId {
        self.halfedges[h.twin().0].origin
    }

    pub fn incident_face(&self, h: HalfedgeId) -> FaceId {
        self.halfedges[h.0].face
    }

    /// The arc traversed by `h` (reversed for odd halfedges).
    pub fn arc(&self, h: HalfedgeId) -> GeodesicArc {
        let a = &self.edges[h.edge().0].arc;
        if h.is_forward() {
            a.clone()
        } else {
            a.reversed()
        }
    }

    /// Direction of travel of `h` as it leaves its origin.
    pub(crate) fn out_tangent(&self, h: HalfedgeId) -> crate::kernel::IVec3 {
        let a = &self.edges[h.edge().0].arc;
        let p = &self.vertices[self.origin(h).0].point;
        a.tangent_from(p)
    }

    /// Some outgoing halfedge, or `None` for an isolated vertex.
    pub fn outgoing(&self, v: VertexId) -> Option<HalfedgeId> {
        self.vertices[v.0].out
    }

    /// Outgoing halfedges of `v` in counterclockwise order.
    pub fn outgoing_ccw(&self, v: VertexId) -> Vec<HalfedgeId> {
        let mut out = Vec::new();
        if let Some(start) = self.vertices[v.0].out {
            let mut g = start;
            loop {
                out.push(g);
                g = self.prev(g).twin();
                if g == start {
                    break;
                }
            }
        }
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.outgoing_ccw(v).len()
    }

    /// The face in which `v` lies isolated, if it has no incident edges.
    pub fn isolated_face(&self, v: VertexId) -> Option<FaceId> {
        self.vertices[v.0].isolated_in
    }

    /// Representative halfedges of the boundary cycles of `f`.
    pub fn ccbs(&self, f: FaceId) -> &[HalfedgeId] {
        &self.faces[f.0].ccbs
    }

    pub fn isolated_vertices(&self, f: FaceId) -> &[VertexId] {
        &self.faces[f.0].isolated
    }

    /// Halfedges of the cycle through `h`, starting at `h`.
    pub fn cycle(&self, h: HalfedgeId) -> Vec<HalfedgeId> {
        let mut out = vec![h];
        let mut g = self.next(h);
        while g != h {
            out.push(g);
            g = self.next(g);
        }
        out
    }

    /// All halfedges bounding `f`, cycle by cycle.
    pub fn boundary_halfedges(&self, f: FaceId) -> Vec<HalfedgeId> {
        self.faces[f.0]
            .ccbs
            .iter()
            .flat_map(|&h| self.cycle(h))
            .collect()
    }

    pub fn north_pole_vertex(&self) -> Option<VertexId> {
        self.north
    }

    pub fn south_pole_vertex(&self) -> Option<VertexId> {
        self.south
    }

    /// Vertices on the identification curve, ordered by latitude.
    pub fn identification_vertices(&self) -> &[VertexId] {
        &self.seam
    }

    /// Number of connected components (isolated vertices count as one each).
    pub fn num_components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in 0..self.edges.len() {
            let h = HalfedgeId(2 * e);
            uf.union(self.origin(h).0, self.target(h).0);
        }
        (0..self.vertices.len())
            .filter(|&v| uf.find(v) == v)
            .count()
    }

    /// Whether the cycle through `h` is an outer boundary of its face in the
    /// parameter-space picture: either it touches the boundary of the
    /// parameter space, or its face lies inside it (the face does not extend
    /// westward from the cycle's westernmost vertex).
    pub fn ccb_is_outer(&self, h: HalfedgeId) -> bool {
        let cyc = self.cycle(h);
        if cyc
            .iter()
            .any(|&g| self.point(self.origin(g)).on_boundary())
        {
            return true;
        }
        // Westernmost vertex of the cycle.
        let mut west = self.origin(cyc[0]);
        for &g in &cyc {
            let v = self.origin(g);
            if crate::sphere::compare_uv(self.point(v), self.point(west))
                .map(|s| s == crate::kernel::Sign::Negative)
                .unwrap_or(false)
            {
                west = v;
            }
        }
        let p = self.point(west).dir().clone();
        // The westward tangent at p.
        let east = crate::kernel::IVec3::new(-p.y.clone(), p.x.clone(), 0.into());
        let west_dir = east.neg();
        for &g in &cyc {
            if self.origin(g) != west {
                continue;
            }
            if self.sector_start(west, &west_dir) == Some(g) {
                return false;
            }
        }
        true
    }

    /// The outgoing halfedge `g` at `v` such that direction `d` lies in the
    /// open sector from `g` counterclockwise to its successor.
    pub(crate) fn sector_start(&self, v: VertexId, d: &crate::kernel::IVec3) -> Option<HalfedgeId> {
        let ring = self.outgoing_ccw(v);
        if ring.len() <= 1 {
            return ring.first().copied();
        }
        let p = self.point(v).dir().clone();
        let tangents: Vec<_> = ring.iter().map(|&g| self.out_tangent(g)).collect();
        let reference = &tangents[0];
        // The last halfedge whose angle from the reference is below d's.
        let mut best = 0;
        for (i, t) in tangents.iter().enumerate().skip(1) {
            if crate::sphere::tangent_angle_cmp(&p, reference, t, d) == std::cmp::Ordering::Less {
                best = i;
            }
        }
        Some(ring[best])
    }

    /// Vertices lying on the parameter-space boundary must be registered.
    pub(crate) fn register(&mut self, v: VertexId) {
        let p = self.vertices[v.0].point.clone();
        match p.boundary_class() {
            crate::sphere::BoundaryClass::NorthPole => self.north = Some(v),
            crate::sphere::BoundaryClass::SouthPole => self.south = Some(v),
            crate::sphere::BoundaryClass::OnIdentification => {
                let pos = self
                    .seam
                    .iter()
                    .position(|&w| {
                        compare_v(&self.vertices[w.0].point, &p) == crate::kernel::Sign::Positive
                    })
                    .unwrap_or(self.seam.len());
                self.seam.insert(pos, v);
            }
            crate::sphere::BoundaryClass::Interior => {}
        }
    }

    /// Append a vertex without any incident edge (caller sets its face).
    pub(crate) fn push_vertex(&mut self, point: DirPoint, data: V) -> VertexId {
        let id = VertexId(self.vertices.len());
        self.index.insert(point.clone(), id);
        self.vertices.push(Vertex {
            point,
            data,
            out: None,
            isolated_in: None,
        });
        self.register(id);
        id
    }

    /// Replace every payload, keeping the combinatorial structure.
    pub fn map_data<V2, E2, F2>(
        self,
        mut fv: impl FnMut(VertexId, V) -> V2,
        mut fe: impl FnMut(EdgeId, E) -> E2,
        mut ff: impl FnMut(FaceId, F) -> F2,
    ) -> Arrangement<V2, E2, F2> {
        Arrangement {
            vertices: self
                .vertices
                .into_iter()
                .enumerate()
                .map(|(i, v)| Vertex {
                    point: v.point,
                    data: fv(VertexId(i), v.data),
                    out: v.out,
                    isolated_in: v.isolated_in,
                })
                .collect(),
            halfedges: self.halfedges,
            edges: self
                .edges
                .into_iter()
                .enumerate()
                .map(|(i, e)| Edge {
                    arc: e.arc,
                    data: fe(EdgeId(i), e.data),
                })
                .collect(),
            faces: self
                .faces
                .into_iter()
                .enumerate()
                .map(|(i, f)| Face {
                    data: ff(FaceId(i), f.data),
                    ccbs: f.ccbs,
                    isolated: f.isolated,
                })
                .collect(),
            index: self.index,
            north: self.north,
            south: self.south,
            seam: self.seam,
        }
    }

    /// Drop all payloads.
    pub fn skeleton(&self) -> Arrangement<(), (), ()>
    where
        V: Clone,
        E: Clone,
        F: Clone,
    {
        self.clone().map_data(|_, _| (), |_, _| (), |_, _| ())
    }
}

/// Disjoint-set forest over `0..n`.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// A fresh arrangement: one face covering the whole sphere.
pub fn new_arrangement() -> Arrangement<(), (), ()> {
    Arrangement::new(())
}
