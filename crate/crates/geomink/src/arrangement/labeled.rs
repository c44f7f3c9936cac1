//! Arrangements whose vertices, edges and faces all carry a label of one
//! type: rebuilding from labeled arcs, removing redundant features, the
//! antipodal image, overlays combining labels, and representative points
//! of cells.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use std::collections::BTreeSet;

use super::{
    build_from_arcs, Arrangement, ArrangementError, Cell, FaceId, HalfedgeId, OverlayCallbacks,
    VertexId,
};
use crate::sphere::{DirPoint, GeodesicArc};

/// An arrangement labeling every cell with a `T`.
pub type Labeled<T> = Arrangement<T, T, T>;

/// A labeled arc: the arc from `source` to `target` (shorter than π) with
/// the label of its interior and of the faces on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment<T> {
    pub source: DirPoint,
    pub target: DirPoint,
    pub edge: T,
    pub left: T,
    pub right: T,
}

/// Build the arrangement of non-crossing labeled segments and labeled
/// points. Vertices not among `points` take the label of an incident edge;
/// a face without boundary (only possible when there are no segments) is
/// labeled `empty_face`.
pub fn rebuild<T: Clone>(
    segments: &[Segment<T>],
    points: &[(DirPoint, T)],
    empty_face: T,
) -> Result<Labeled<T>, ArrangementError> {
    let arcs: Vec<GeodesicArc> = segments
        .iter()
        .map(|s| GeodesicArc::new(s.source.clone(), s.target.clone()))
        .collect::<Result<_, _>>()?;
    let pts: Vec<DirPoint> = points.iter().map(|(p, _)| p.clone()).collect();
    let out = build_from_arcs(&arcs, &pts)?;
    let arr = out.arrangement;
    let mut face_label: Vec<Option<T>> = vec![None; arr.num_faces()];
    for e in arr.edge_ids() {
        let (i, same) = out.edge_sources[e.0][0];
        let s = &segments[i];
        let h = e.halfedge();
        let (l, r) = if same {
            (&s.left, &s.right)
        } else {
            (&s.right, &s.left)
        };
        face_label[arr.incident_face(h).0].get_or_insert_with(|| l.clone());
        face_label[arr.incident_face(h.twin()).0].get_or_insert_with(|| r.clone());
    }
    let vertex_label: Vec<T> = arr
        .vertex_ids()
        .map(|v| match out.point_sources[v.0].first() {
            Some(&i) => points[i].1.clone(),
            None => {
                let h = arr.outgoing(v).expect("unlabeled vertices lie on segments");
                segments[out.edge_sources[h.edge().0][0].0].edge.clone()
            }
        })
        .collect();
    Ok(arr.map_data(
        |v, _| vertex_label[v.0].clone(),
        |e, _| segments[out.edge_sources[e.0][0].0].edge.clone(),
        |f, _| {
            face_label[f.0]
                .clone()
                .unwrap_or_else(|| empty_face.clone())
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// Kept as a vertex of the result.
    Keep,
    /// Removed, together with its incident edges.
    Drop,
    /// Interior point of a merged arc (kept only if the merged arc would
    /// reach π).
    Pass,
}

impl<T: Clone + PartialEq> Arrangement<T, T, T> {
    /// Label of the face around isolated vertex `v` or of some face at `v`.
    fn face_at(&self, v: VertexId) -> &T {
        let f = match self.isolated_face(v) {
            Some(f) => f,
            None => self.incident_face(self.outgoing(v).expect("vertex has edges")),
        };
        &self.face(f).data
    }

    /// Remove every feature that does not separate differently labeled
    /// cells: edges labeled like both incident faces, vertices whose
    /// surroundings all carry their label, and vertices joining two
    /// collinear edges with the same label. Lower-dimensional cells whose
    /// label differs from their surroundings are kept.
    pub fn cleanup(&self) -> Labeled<T> {
        let keep_edge: Vec<bool> = self
            .edge_ids()
            .map(|e| {
                let h = e.halfedge();
                let d = &self.edge(e).data;
                !(d == &self.face(self.incident_face(h)).data
                    && d == &self.face(self.incident_face(h.twin())).data)
            })
            .collect();
        let kept_out = |v: VertexId| -> Vec<HalfedgeId> {
            self.outgoing_ccw(v)
                .into_iter()
                .filter(|h| keep_edge[h.edge().0])
                .collect()
        };
        let mut role: Vec<Role> = self
            .vertex_ids()
            .map(|v| {
                let out = kept_out(v);
                let d = &self.vertex(v).data;
                if out.is_empty() {
                    if d == self.face_at(v) {
                        Role::Drop
                    } else {
                        Role::Keep
                    }
                } else if out.len() == 2 {
                    let (a, b) = (self.arc(out[0]), self.arc(out[1]));
                    let straight = a.normal == b.normal.neg();
                    let same =
                        d == &self.edge(out[0].edge()).data && d == &self.edge(out[1].edge()).data;
                    if straight && same {
                        Role::Pass
                    } else {
                        Role::Keep
                    }
                } else {
                    Role::Keep
                }
            })
            .collect();

        let mut segments = Vec::new();
        let mut visited = vec![false; self.num_edges()];
        let mut cut_points: Vec<VertexId> = Vec::new();
        let walk = |start: HalfedgeId, role: &[Role], visited: &mut Vec<bool>| {
            let mut chain = vec![start];
            visited[start.edge().0] = true;
            let mut h = start;
            loop {
                let w = self.target(h);
                if role[w.0] != Role::Pass || w == self.origin(start) {
                    break;
                }
                h = kept_out(w)
                    .into_iter()
                    .find(|&g| g != h.twin())
                    .expect("pass vertices have two edges");
                visited[h.edge().0] = true;
                chain.push(h);
            }
            chain
        };
        let mut chains = Vec::new();
        for v in self.vertex_ids() {
            if role[v.0] != Role::Keep {
                continue;
            }
            for h in kept_out(v) {
                if !visited[h.edge().0] {
                    chains.push(walk(h, &role, &mut visited));
                }
            }
        }
        // Cycles made only of pass vertices.
        for e in self.edge_ids() {
            if keep_edge[e.0] && !visited[e.0] {
                let h = e.halfedge();
                role[self.origin(h).0] = Role::Keep;
                chains.push(walk(h, &role, &mut visited));
            }
        }
        for chain in chains {
            let n = self.arc(chain[0]).normal;
            let pts: Vec<VertexId> = std::iter::once(self.origin(chain[0]))
                .chain(chain.iter().map(|&h| self.target(h)))
                .collect();
            let mut start = 0;
            let mut emit = |from: usize, to: usize| {
                let h = chain[from];
                segments.push(Segment {
                    source: self.point(pts[from]).clone(),
                    target: self.point(pts[to]).clone(),
                    edge: self.edge(h.edge()).data.clone(),
                    left: self.face(self.incident_face(h)).data.clone(),
                    right: self.face(self.incident_face(h.twin())).data.clone(),
                });
            };
            for j in 1..pts.len() {
                let a = self.point(pts[start]).dir();
                let b = self.point(pts[j]).dir();
                if !a.cross(b).dot(&n).is_positive() {
                    emit(start, j - 1);
                    cut_points.push(pts[j - 1]);
                    start = j - 1;
                }
            }
            emit(start, pts.len() - 1);
        }
        let kept: BTreeSet<VertexId> = self
            .vertex_ids()
            .filter(|v| role[v.0] == Role::Keep)
            .chain(cut_points)
            .collect();
        let points: Vec<(DirPoint, T)> = kept
            .into_iter()
            .map(|v| (self.point(v).clone(), self.vertex(v).data.clone()))
            .collect();
        rebuild(&segments, &points, self.face(FaceId(0)).data.clone())
            .expect("cleanup keeps a valid arrangement")
    }

    /// The image under `x ↦ −x`. The antipodal map reverses orientation, so
    /// the left and right sides of every arc trade places.
    pub fn antipodal(&self) -> Labeled<T> {
        let segments: Vec<Segment<T>> = self
            .edge_ids()
            .map(|e| {
                let h = e.halfedge();
                let a = &self.edge(e).arc;
                Segment {
                    source: a.source.antipode(),
                    target: a.target.antipode(),
                    edge: self.edge(e).data.clone(),
                    left: self.face(self.incident_face(h.twin())).data.clone(),
                    right: self.face(self.incident_face(h)).data.clone(),
                }
            })
            .collect();
        let points: Vec<(DirPoint, T)> = self
            .vertex_ids()
            .map(|v| (self.point(v).antipode(), self.vertex(v).data.clone()))
            .collect();
        rebuild(&segments, &points, self.face(FaceId(0)).data.clone())
            .expect("antipodal image is valid")
    }

    /// The label of the cell containing `p`.
    pub fn label_at(&self, p: &DirPoint) -> &T {
        match self.locate(p) {
            Cell::Vertex(v) => &self.vertex(v).data,
            Cell::Edge(e) => &self.edge(e).data,
            Cell::Face(f) => &self.face(f).data,
        }
    }
}

/// Overlay callbacks combining the labels of the two cells covering each
/// output cell.
#[derive(Debug, Clone, Copy)]
pub struct Combine<G>(pub G);

impl<A, B, C, G: Fn(&A, &B) -> C> OverlayCallbacks<A, A, A, B, B, B> for Combine<G> {
    type V = C;
    type E = C;
    type F = C;
    fn vertex_vertex(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn vertex_edge(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn edge_vertex(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn vertex_face(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn face_vertex(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn edge_edge_crossing(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn edge_edge_overlap(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn edge_face(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn face_edge(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
    fn face_face(&self, a: &A, b: &B) -> C {
        (self.0)(a, b)
    }
}

/// Fixed directions tried for faces without boundary.
const FREE_DIRECTIONS: [[i64; 3]; 4] = [[2, 3, 5], [-3, 5, 2], [5, -2, 3], [1, 1, 1]];

impl<V, E, F> Arrangement<V, E, F> {
    /// A point in the relative interior of `cell`: the vertex itself, the
    /// sum of an edge's endpoint directions, or, for a face, the sum of the
    /// endpoints of a boundary arc pushed slightly to its left (the push is
    /// halved until the point lands in the face).
    pub fn representative_point(&self, cell: Cell) -> DirPoint {
        match cell {
            Cell::Vertex(v) => self.point(v).clone(),
            Cell::Edge(e) => self.edge(e).arc.midpoint(),
            Cell::Face(f) => self.face_point(f),
        }
    }

    fn face_point(&self, f: FaceId) -> DirPoint {
        let Some(&h) = self.ccbs(f).first() else {
            return FREE_DIRECTIONS
                .iter()
                .map(|d| DirPoint::from_ints(d[0], d[1], d[2]).expect("nonzero"))
                .find(|p| self.locate(p) == Cell::Face(f))
                .expect("some fixed direction avoids the isolated vertices");
        };
        let a = self.arc(h);
        let m = a.source.dir().add(a.target.dir());
        let mut scale = BigInt::one();
        for _ in 0..4096 {
            let p = DirPoint::from_ivec(m.scale(&scale).add(&a.normal)).expect("nonzero");
            if self.locate(&p) == Cell::Face(f) {
                return p;
            }
            scale <<= 1;
        }
        unreachable!("points close enough to an edge lie in the face on its left")
    }

    /// Representative points of every cell, vertices first, then edges,
    /// then faces.
    pub fn cells(&self) -> Vec<Cell> {
        self.vertex_ids()
            .map(Cell::Vertex)
            .chain(self.edge_ids().map(Cell::Edge))
            .chain(self.face_ids().map(Cell::Face))
            .collect()
    }

    /// The faces incident to edge `e` and the edges and faces incident to
    /// vertex `v`, for monotonicity checks.
    pub fn incident_cells(&self, cell: Cell) -> Vec<Cell> {
        match cell {
            Cell::Vertex(v) => {
                let out = self.outgoing_ccw(v);
                if out.is_empty() {
                    vec![Cell::Face(self.isolated_face(v).expect("isolated"))]
                } else {
                    out.iter()
                        .flat_map(|&h| [Cell::Edge(h.edge()), Cell::Face(self.incident_face(h))])
                        .collect()
                }
            }
            Cell::Edge(e) => {
                let h = e.halfedge();
                vec![
                    Cell::Face(self.incident_face(h)),
                    Cell::Face(self.incident_face(h.twin())),
                ]
            }
            Cell::Face(_) => Vec::new(),
        }
    }
}
