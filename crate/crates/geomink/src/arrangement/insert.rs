//! Incremental insertion of isolated points and interior-disjoint arcs.

use std::collections::HashSet;

use super::locate::Located;
use super::{
    Arrangement, ArrangementError, Edge, EdgeId, Face, FaceId, Halfedge, HalfedgeId, VertexId,
};
use crate::sphere::{intersect, make_arc, DirPoint, GeodesicArc, IntersectionResult, SphereError};

impl<V: Default, E, F: Clone> Arrangement<V, E, F> {
    /// Insert `p` as an isolated vertex, or return the existing vertex at `p`.
    pub fn insert_point(&mut self, p: &DirPoint) -> Result<VertexId, ArrangementError> {
        if let Some(v) = self.find_vertex(p) {
            return Ok(v);
        }
        let f = match self.locate_filtered(p, &|_| true, &|_| true) {
            Located::OnVertex(v) => return Ok(v),
            Located::OnEdge(_) => return Err(ArrangementError::PointOnEdge),
            Located::Left(h) => self.incident_face(h),
            Located::NoEdges => FaceId(0),
        };
        let v = self.push_vertex(p.clone(), V::default());
        self.vertices[v.0].isolated_in = Some(f);
        self.faces[f.0].isolated.push(v);
        Ok(v)
    }

    /// Insert an arc whose interior is disjoint from every vertex and edge.
    ///
    /// `anchors` optionally names the existing vertices at the source and the
    /// target; missing anchors are looked up by coordinates and created when
    /// absent. The arc must not cross the identification curve or pass
    /// through a pole (split it with [`make_arc`] first).
    ///
    /// Returns the new halfedge directed from source to target; its incident
    /// face is the face to the left of the arc.
    pub fn insert_disjoint_arc(
        &mut self,
        arc: GeodesicArc,
        anchors: (Option<VertexId>, Option<VertexId>),
        data: E,
    ) -> Result<HalfedgeId, ArrangementError> {
        let resolve = |me: &Self,
                       a: Option<VertexId>,
                       p: &DirPoint|
         -> Result<Option<VertexId>, ArrangementError> {
            match a {
                Some(v) if me.point(v) == p => Ok(Some(v)),
                Some(_) => Err(ArrangementError::AnchorMismatch),
                None => Ok(me.find_vertex(p)),
            }
        };
        let v1 = resolve(self, anchors.0, &arc.source)?;
        let v2 = resolve(self, anchors.1, &arc.target)?;
        if make_arc(&arc.source, &arc.target)?.len() > 1 {
            return Err(SphereError::PreconditionViolation(
                "arc crosses the identification curve or a pole",
            )
            .into());
        }
        if cfg!(debug_assertions) {
            self.check_disjoint(&arc)?;
        }

        let has_edges =
            |me: &Self, v: Option<VertexId>| v.is_some_and(|v| me.vertices[v.0].out.is_some());
        let e1 = has_edges(self, v1);
        let e2 = has_edges(self, v2);

        // The face the arc is inserted into.
        let face = if e1 {
            let v = v1.unwrap();
            let g = self
                .sector_start(v, &arc.tangent_from(&arc.source))
                .unwrap();
            self.incident_face(g)
        } else if e2 {
            let v = v2.unwrap();
            let g = self
                .sector_start(v, &arc.tangent_from(&arc.target))
                .unwrap();
            self.incident_face(g)
        } else if let Some(f) = v1.and_then(|v| self.vertices[v.0].isolated_in) {
            f
        } else if let Some(f) = v2.and_then(|v| self.vertices[v.0].isolated_in) {
            f
        } else {
            match self.locate_filtered(&arc.midpoint(), &|_| true, &|_| true) {
                Located::Left(h) => self.incident_face(h),
                Located::NoEdges => FaceId(0),
                _ => return Err(ArrangementError::ArcNotDisjoint),
            }
        };

        // Neighbours in the rotations, computed before any relinking.
        let at_v1 = if e1 {
            let g_a = self
                .sector_start(v1.unwrap(), &arc.tangent_from(&arc.source))
                .unwrap();
            Some((g_a, self.prev(g_a).twin()))
        } else {
            None
        };
        let at_v2 = if e2 {
            let c_a = self
                .sector_start(v2.unwrap(), &arc.tangent_from(&arc.target))
                .unwrap();
            Some((c_a, self.prev(c_a).twin()))
        } else {
            None
        };
        // Whether the two attachment points lie on one boundary cycle.
        let same_cycle = match (at_v1, at_v2) {
            (Some((g_a, _)), Some((c_a, _))) => self.cycle(g_a).contains(&c_a),
            _ => false,
        };

        let v1 = match v1 {
            Some(v) => v,
            None => self.push_vertex(arc.source.clone(), V::default()),
        };
        let v2 = match v2 {
            Some(v) => v,
            None => self.push_vertex(arc.target.clone(), V::default()),
        };
        for v in [v1, v2] {
            if let Some(f) = self.vertices[v.0].isolated_in.take() {
                self.faces[f.0].isolated.retain(|&w| w != v);
            }
        }

        let e = EdgeId(self.edges.len());
        self.edges.push(Edge { arc, data });
        let h = e.halfedge();
        let t = h.twin();
        self.halfedges.push(Halfedge {
            next: t,
            prev: t,
            origin: v1,
            face,
        });
        self.halfedges.push(Halfedge {
            next: h,
            prev: h,
            origin: v2,
            face,
        });

        match at_v1 {
            Some((g_a, g_b)) => {
                self.link(t, g_a);
                self.link(g_b.twin(), h);
            }
            None => self.link(t, h),
        }
        match at_v2 {
            Some((c_a, c_b)) => {
                self.link(h, c_a);
                self.link(c_b.twin(), t);
            }
            None => self.link(h, t),
        }
        if self.vertices[v1.0].out.is_none() {
            self.vertices[v1.0].out = Some(h);
        }
        if self.vertices[v2.0].out.is_none() {
            self.vertices[v2.0].out = Some(t);
        }

        match (e1, e2) {
            (false, false) => self.faces[face.0].ccbs.push(h),
            (true, true) if same_cycle => self.split_face(face, h, t),
            (true, true) => {
                let cyc: HashSet<HalfedgeId> = self.cycle(h).into_iter().collect();
                self.faces[face.0].ccbs.retain(|r| !cyc.contains(r));
                self.faces[face.0].ccbs.push(h);
            }
            _ => {}
        }
        Ok(h)
    }

    /// After closing a cycle: the cycle of `h` becomes a new face carved out
    /// of `face`, and the cycle of `t` stays with `face`.
    fn split_face(&mut self, face: FaceId, h: HalfedgeId, t: HalfedgeId) {
        let new_face = FaceId(self.faces.len());
        let data = self.faces[face.0].data.clone();
        let h_cycle: HashSet<HalfedgeId> = self.cycle(h).into_iter().collect();
        for &g in &h_cycle {
            self.halfedges[g.0].face = new_face;
        }
        let old_ccbs = std::mem::take(&mut self.faces[face.0].ccbs);
        let old_iso = std::mem::take(&mut self.faces[face.0].isolated);
        self.faces.push(Face {
            data,
            ccbs: vec![h],
            isolated: Vec::new(),
        });

        // The component of h decides where other cycles and points go.
        let comp = self.component_edges(h);
        let comp_vertices: HashSet<VertexId> = comp
            .iter()
            .flat_map(|&e| [self.origin(e.halfedge()), self.target(e.halfedge())])
            .collect();
        let inside = |me: &Self, p: &DirPoint| -> bool {
            match me.locate_filtered(p, &|e| comp.contains(&e), &|v| comp_vertices.contains(&v)) {
                Located::Left(x) => h_cycle.contains(&x),
                _ => false,
            }
        };

        let mut keep = vec![t];
        for r in old_ccbs {
            if h_cycle.contains(&r) || self.cycle(t).contains(&r) {
                continue;
            }
            let p = self.point(self.origin(r)).clone();
            if inside(self, &p) {
                for g in self.cycle(r) {
                    self.halfedges[g.0].face = new_face;
                }
                self.faces[new_face.0].ccbs.push(r);
            } else {
                keep.push(r);
            }
        }
        self.faces[face.0].ccbs = keep;
        for v in old_iso {
            let p = self.point(v).clone();
            let target = if inside(self, &p) { new_face } else { face };
            self.vertices[v.0].isolated_in = Some(target);
            self.faces[target.0].isolated.push(v);
        }
    }

    fn check_disjoint(&self, arc: &GeodesicArc) -> Result<(), ArrangementError> {
        for v in &self.vertices {
            if arc.contains_interior(&v.point) {
                return Err(ArrangementError::ArcNotDisjoint);
            }
        }
        for e in &self.edges {
            match intersect(arc, &e.arc) {
                IntersectionResult::Overlap(_) => return Err(ArrangementError::ArcNotDisjoint),
                IntersectionResult::Points(ps) => {
                    if ps
                        .iter()
                        .any(|p| arc.contains_interior(p) || e.arc.contains_interior(p))
                    {
                        return Err(ArrangementError::ArcNotDisjoint);
                    }
                }
            }
        }
        Ok(())
    }
}

impl<V, E, F> Arrangement<V, E, F> {
    /// Set `next(a) = b` and `prev(b) = a`.
    pub(crate) fn link(&mut self, a: HalfedgeId, b: HalfedgeId) {
        self.halfedges[a.0].next = b;
        self.halfedges[b.0].prev = a;
    }

    /// Edges of the connected component containing `h`.
    pub(crate) fn component_edges(&self, h: HalfedgeId) -> HashSet<EdgeId> {
        let mut seen = HashSet::new();
        let mut stack = vec![self.origin(h)];
        let mut visited = HashSet::new();
        while let Some(v) = stack.pop() {
            if !visited.insert(v) {
                continue;
            }
            for g in self.outgoing_ccw(v) {
                seen.insert(g.edge());
                stack.push(self.target(g));
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{new_arrangement, Cell};

    fn dp(x: i64, y: i64, z: i64) -> DirPoint {
        DirPoint::from_ints(x, y, z).unwrap()
    }

    fn arc(a: DirPoint, b: DirPoint) -> GeodesicArc {
        GeodesicArc::new(a, b).unwrap()
    }

    #[test]
    fn antenna_creates_no_face() {
        let mut a = new_arrangement();
        a.insert_disjoint_arc(arc(dp(1, 0, 0), dp(1, 1, 0)), (None, None), ())
            .unwrap();
        assert_eq!((a.num_vertices(), a.num_edges(), a.num_faces()), (2, 1, 1));
        assert!(a.validate().is_ok());
    }

    #[test]
    fn closing_a_triangle_splits_the_face() {
        let mut a = new_arrangement();
        let (p, q, r) = (dp(1, 0, 0), dp(0, 1, 0), dp(0, 0, 1));
        a.insert_disjoint_arc(arc(p.clone(), q.clone()), (None, None), ())
            .unwrap();
        a.insert_disjoint_arc(arc(q.clone(), r.clone()), (None, None), ())
            .unwrap();
        assert_eq!(a.num_faces(), 1);
        let h = a
            .insert_disjoint_arc(arc(r.clone(), p.clone()), (None, None), ())
            .unwrap();
        assert_eq!(a.num_faces(), 2);
        assert!(a.validate().is_ok(), "{:?}", a.validate());
        // p→q→r turns counterclockwise seen from outside, so the octant
        // lies to the left of every arc of the cycle.
        let inner = a.locate_face(&dp(1, 1, 1)).unwrap();
        let outer = a.locate_face(&dp(-1, -1, -1)).unwrap();
        assert_ne!(inner, outer);
        assert_eq!(a.incident_face(h), inner);
        assert_eq!(a.locate(&q), Cell::Vertex(a.find_vertex(&q).unwrap()));
        assert!(matches!(a.locate(&dp(1, 1, 0)), Cell::Edge(_)));
    }

    #[test]
    fn identification_crossing_arc_is_split_and_fused() {
        let mut a = new_arrangement();
        for piece in make_arc(&dp(-1, -1, 0), &dp(-1, 1, 0)).unwrap() {
            a.insert_disjoint_arc(piece, (None, None), ()).unwrap();
        }
        assert_eq!(a.identification_vertices().len(), 1);
        assert_eq!((a.num_vertices(), a.num_edges(), a.num_faces()), (3, 2, 1));
        assert!(a.validate().is_ok());
    }

    #[test]
    fn anchor_mismatch_is_reported() {
        let mut a = new_arrangement();
        let h = a
            .insert_disjoint_arc(arc(dp(1, 0, 0), dp(1, 1, 0)), (None, None), ())
            .unwrap();
        let v = a.origin(h);
        let err = a.insert_disjoint_arc(arc(dp(0, 0, 1), dp(0, 1, 1)), (Some(v), None), ());
        assert_eq!(err, Err(ArrangementError::AnchorMismatch));
    }

    #[test]
    fn crossing_arc_is_rejected_in_debug() {
        let mut a = new_arrangement();
        a.insert_disjoint_arc(arc(dp(1, -1, 0), dp(1, 1, 0)), (None, None), ())
            .unwrap();
        let r = a.insert_disjoint_arc(arc(dp(1, 0, -1), dp(1, 0, 1)), (None, None), ());
        if cfg!(debug_assertions) {
            assert_eq!(r, Err(ArrangementError::ArcNotDisjoint));
        }
    }

    #[test]
    fn isolated_points_move_into_new_faces() {
        let mut a = new_arrangement();
        let inside = a.insert_point(&dp(1, 1, 1)).unwrap();
        let outside = a.insert_point(&dp(-1, -1, -1)).unwrap();
        let (p, q, r) = (dp(1, 0, 0), dp(0, 1, 0), dp(0, 0, 1));
        a.insert_disjoint_arc(arc(p.clone(), q.clone()), (None, None), ())
            .unwrap();
        a.insert_disjoint_arc(arc(q.clone(), r.clone()), (None, None), ())
            .unwrap();
        a.insert_disjoint_arc(arc(r, p), (None, None), ()).unwrap();
        assert!(a.validate().is_ok(), "{:?}", a.validate());
        assert_ne!(a.isolated_face(inside), a.isolated_face(outside));
        assert_eq!(a.locate(&dp(1, 1, 1)), Cell::Vertex(inside));
        assert_eq!(a.locate_face(&dp(1, 2, 3)), a.isolated_face(inside));
    }

    #[test]
    fn nested_cycles_are_redistributed() {
        // A small triangle near (1,1,1) first, then a big one around it.
        let mut a = new_arrangement();
        let s = [dp(10, 9, 9), dp(9, 10, 9), dp(9, 9, 10)];
        for i in 0..3 {
            a.insert_disjoint_arc(arc(s[i].clone(), s[(i + 1) % 3].clone()), (None, None), ())
                .unwrap();
        }
        let b = [dp(1, 0, 0), dp(0, 1, 0), dp(0, 0, 1)];
        for i in 0..3 {
            a.insert_disjoint_arc(arc(b[i].clone(), b[(i + 1) % 3].clone()), (None, None), ())
                .unwrap();
        }
        assert_eq!(a.num_faces(), 3);
        assert!(a.validate().is_ok(), "{:?}", a.validate());
        let ring = a.locate_face(&dp(5, 1, 1)).unwrap();
        assert_eq!(a.ccbs(ring).len(), 2);
    }
}
