//! Point location by vertical ray shooting along meridians.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Arrangement, EdgeId, FaceId, HalfedgeId, VertexId};
use crate::kernel::{IVec3, Sign};
use crate::sphere::{compare_v, meridian_point_xy, DirPoint};

/// The cell of an arrangement containing a query point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Vertex(VertexId),
    Edge(EdgeId),
    Face(FaceId),
}

/// Result of a location query restricted to a sub-arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Located {
    OnVertex(VertexId),
    OnEdge(EdgeId),
    /// The point lies in the face to the left of this halfedge.
    Left(HalfedgeId),
    /// The sub-arrangement has no edges.
    NoEdges,
}

enum Hit {
    Vertex(VertexId),
    Edge(EdgeId),
}

fn on_half_plane(q: &DirPoint, az: &[BigInt; 2]) -> bool {
    let d = q.dir();
    let cross = &d.x * &az[1] - &d.y * &az[0];
    let dot = &d.x * &az[0] + &d.y * &az[1];
    cross.is_zero() && dot.is_positive()
}

impl<V, E, F> Arrangement<V, E, F> {
    /// The cell containing `p`.
    pub fn locate(&self, p: &DirPoint) -> Cell {
        match self.locate_filtered(p, &|_| true, &|_| true) {
            Located::OnVertex(v) => Cell::Vertex(v),
            Located::OnEdge(e) => Cell::Edge(e),
            Located::Left(h) => Cell::Face(self.incident_face(h)),
            Located::NoEdges => {
                // The only face without boundary is the initial face.
                Cell::Face(FaceId(0))
            }
        }
    }

    /// The face containing `p`, or `None` if `p` lies on a vertex or edge.
    pub fn locate_face(&self, p: &DirPoint) -> Option<FaceId> {
        match self.locate(p) {
            Cell::Face(f) => Some(f),
            _ => None,
        }
    }

    /// Locate `p` among the edges accepted by `edge_ok` and the vertices
    /// accepted by `vertex_ok`. Every edge accepted must have accepted
    /// endpoints, and every edge at an accepted vertex must be accepted.
    pub(crate) fn locate_filtered(
        &self,
        p: &DirPoint,
        edge_ok: &dyn Fn(EdgeId) -> bool,
        vertex_ok: &dyn Fn(VertexId) -> bool,
    ) -> Located {
        if let Some(v) = self.find_vertex(p) {
            if vertex_ok(v) {
                return Located::OnVertex(v);
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if edge_ok(EdgeId(i)) && e.arc.contains_interior(p) {
                return Located::OnEdge(EdgeId(i));
            }
        }
        let has_edges = |v: VertexId| vertex_ok(v) && self.vertices[v.0].out.is_some();
        // Azimuth of some non-pole vertex with edges, used when p is a pole
        // or when the upward ray escapes to the north pole.
        let fallback_az = self
            .vertex_ids()
            .find(|&v| has_edges(v) && !self.point(v).is_pole())
            .map(|v| {
                let d = self.point(v).dir();
                [d.x.clone(), d.y.clone()]
            });
        let Some(fallback_az) = fallback_az else {
            return Located::NoEdges;
        };
        if *p == DirPoint::north() {
            return self.shoot_down_from_north(&fallback_az, edge_ok, &has_edges);
        }
        let az = if *p == DirPoint::south() {
            fallback_az.clone()
        } else {
            [p.dir().x.clone(), p.dir().y.clone()]
        };
        match self.shoot(p, &az, true, edge_ok, &has_edges) {
            Some(Hit::Edge(e)) => {
                let h = e.halfedge();
                Located::Left(if self.edges[e.0].arc.is_eastward() {
                    h.twin()
                } else {
                    h
                })
            }
            Some(Hit::Vertex(w)) => {
                let dir = if self.point(w).is_pole() {
                    IVec3::new(az[0].clone(), az[1].clone(), BigInt::zero())
                } else {
                    southward(self.point(w).dir())
                };
                Located::Left(self.sector_start(w, &dir).expect("vertex has edges"))
            }
            None => self.shoot_down_from_north(&fallback_az, edge_ok, &has_edges),
        }
    }

    fn shoot_down_from_north(
        &self,
        az: &[BigInt; 2],
        edge_ok: &dyn Fn(EdgeId) -> bool,
        has_edges: &dyn Fn(VertexId) -> bool,
    ) -> Located {
        let n = DirPoint::north();
        match self.shoot(&n, az, false, edge_ok, has_edges) {
            Some(Hit::Edge(e)) => {
                let h = e.halfedge();
                Located::Left(if self.edges[e.0].arc.is_eastward() {
                    h
                } else {
                    h.twin()
                })
            }
            Some(Hit::Vertex(w)) => {
                let dir = if self.point(w).is_pole() {
                    IVec3::new(az[0].clone(), az[1].clone(), BigInt::zero())
                } else {
                    southward(self.point(w).dir()).neg()
                };
                Located::Left(self.sector_start(w, &dir).expect("vertex has edges"))
            }
            None => unreachable!("a meridian through a vertex with edges is always hit"),
        }
    }

    /// First feature met when walking from `p` along the meridian half-plane
    /// with azimuth `az`, northward (`up`) or southward.
    fn shoot(
        &self,
        p: &DirPoint,
        az: &[BigInt; 2],
        up: bool,
        edge_ok: &dyn Fn(EdgeId) -> bool,
        has_edges: &dyn Fn(VertexId) -> bool,
    ) -> Option<Hit> {
        let ahead = |q: &DirPoint| {
            let s = compare_v(q, p);
            if up {
                s == Sign::Positive
            } else {
                s == Sign::Negative
            }
        };
        // Nearer means lower when shooting up, higher when shooting down.
        let nearer = |a: &DirPoint, b: &DirPoint| {
            let s = compare_v(a, b);
            if up {
                s == Sign::Negative
            } else {
                s == Sign::Positive
            }
        };
        let mut best: Option<(DirPoint, Hit)> = None;
        let consider = |q: DirPoint, hit: Hit, best: &mut Option<(DirPoint, Hit)>| {
            if !ahead(&q) {
                return;
            }
            if best.as_ref().is_none_or(|(b, _)| nearer(&q, b)) {
                *best = Some((q, hit));
            }
        };
        for (i, e) in self.edges.iter().enumerate() {
            if !edge_ok(EdgeId(i)) || e.arc.is_vertical {
                continue;
            }
            let q = meridian_point_xy(&e.arc.normal, &az[0], &az[1]);
            if e.arc.contains_interior(&q) {
                consider(q, Hit::Edge(EdgeId(i)), &mut best);
            }
        }
        for v in self.vertex_ids() {
            if !has_edges(v) {
                continue;
            }
            let q = self.point(v);
            let on = match q.boundary_class() {
                crate::sphere::BoundaryClass::NorthPole
                | crate::sphere::BoundaryClass::SouthPole => true,
                _ => on_half_plane(q, az),
            };
            if on {
                consider(q.clone(), Hit::Vertex(v), &mut best);
            }
        }
        best.map(|(_, h)| h)
    }
}

/// The tangent at `w` pointing toward the south pole.
fn southward(w: &IVec3) -> IVec3 {
    let ez = IVec3::from_ints(0, 0, 1);
    w.scale(&w.z).sub(&ez.scale(&w.norm_sq()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn southward_tangent_is_orthogonal_and_points_down() {
        let w = IVec3::from_ints(1, 2, 3);
        let t = southward(&w);
        assert!(t.dot(&w).is_zero());
        assert!(t.z.is_negative());
    }
}
