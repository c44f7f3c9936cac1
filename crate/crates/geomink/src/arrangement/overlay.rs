//! Overlay of two arrangements with payload-merging callbacks.

use super::build::build_from_arcs;
use super::{Arrangement, ArrangementError, Cell, EdgeId, FaceId, HalfedgeId, VertexId};
use crate::sphere::GeodesicArc;

/// How the payloads of overlay cells are derived from their two sources.
///
/// Every output vertex, edge and face is produced by exactly one of these
/// functions, chosen by the kinds of the input cells it overlaps.
pub trait OverlayCallbacks<V1, E1, F1, V2, E2, F2> {
    type V;
    type E;
    type F;
    fn vertex_vertex(&self, a: &V1, b: &V2) -> Self::V;
    fn vertex_edge(&self, a: &V1, b: &E2) -> Self::V;
    fn edge_vertex(&self, a: &E1, b: &V2) -> Self::V;
    fn vertex_face(&self, a: &V1, b: &F2) -> Self::V;
    fn face_vertex(&self, a: &F1, b: &V2) -> Self::V;
    fn edge_edge_crossing(&self, a: &E1, b: &E2) -> Self::V;
    fn edge_edge_overlap(&self, a: &E1, b: &E2) -> Self::E;
    fn edge_face(&self, a: &E1, b: &F2) -> Self::E;
    fn face_edge(&self, a: &F1, b: &E2) -> Self::E;
    fn face_face(&self, a: &F1, b: &F2) -> Self::F;
}

/// For every overlay feature, the pair of input cells it lies in.
#[derive(Debug, Clone, Default)]
pub struct OverlayProvenance {
    pub vertices: Vec<(Cell, Cell)>,
    pub edges: Vec<(Cell, Cell)>,
    pub faces: Vec<(FaceId, FaceId)>,
}

impl OverlayProvenance {
    /// Number of output vertices of each kind:
    /// `[vertex×vertex, vertex×edge, edge×vertex, vertex×face, face×vertex, edge×edge]`.
    pub fn vertex_case_counts(&self) -> [usize; 6] {
        let mut c = [0; 6];
        for (a, b) in &self.vertices {
            let i = match (a, b) {
                (Cell::Vertex(_), Cell::Vertex(_)) => 0,
                (Cell::Vertex(_), Cell::Edge(_)) => 1,
                (Cell::Edge(_), Cell::Vertex(_)) => 2,
                (Cell::Vertex(_), Cell::Face(_)) => 3,
                (Cell::Face(_), Cell::Vertex(_)) => 4,
                _ => 5,
            };
            c[i] += 1;
        }
        c
    }

    /// Number of output edges lying on an edge of both inputs.
    pub fn overlapping_edges(&self) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| matches!((a, b), (Cell::Edge(_), Cell::Edge(_))))
            .count()
    }
}

/// Overlay `a` and `b`, computing payloads with `cb`.
pub fn overlay<V1, E1, F1, V2, E2, F2, C>(
    a: &Arrangement<V1, E1, F1>,
    b: &Arrangement<V2, E2, F2>,
    cb: &C,
) -> Result<Arrangement<C::V, C::E, C::F>, ArrangementError>
where
    C: OverlayCallbacks<V1, E1, F1, V2, E2, F2>,
{
    Ok(overlay_traced(a, b, cb)?.0)
}

/// [`overlay`], also returning the provenance of every output feature.
pub fn overlay_traced<V1, E1, F1, V2, E2, F2, C>(
    a: &Arrangement<V1, E1, F1>,
    b: &Arrangement<V2, E2, F2>,
    cb: &C,
) -> Result<(Arrangement<C::V, C::E, C::F>, OverlayProvenance), ArrangementError>
where
    C: OverlayCallbacks<V1, E1, F1, V2, E2, F2>,
{
    let ea = a.num_edges();
    let va = a.num_vertices();
    let arcs: Vec<GeodesicArc> = a
        .edges
        .iter()
        .map(|e| e.arc.clone())
        .chain(b.edges.iter().map(|e| e.arc.clone()))
        .collect();
    let points: Vec<_> = a
        .vertices
        .iter()
        .map(|v| v.point.clone())
        .chain(b.vertices.iter().map(|v| v.point.clone()))
        .collect();
    let built = build_from_arcs(&arcs, &points)?;
    let out = &built.arrangement;

    // Input halfedge of side `A` (or `B`) underlying output halfedge `h`.
    let side_halfedge = |h: HalfedgeId, want_a: bool| -> Option<HalfedgeId> {
        built.edge_sources[h.edge().0]
            .iter()
            .find_map(|&(tag, same)| {
                let (is_a, e) = if tag < ea {
                    (true, tag)
                } else {
                    (false, tag - ea)
                };
                (is_a == want_a).then(|| {
                    let base = EdgeId(e).halfedge();
                    if h.is_forward() == same {
                        base
                    } else {
                        base.twin()
                    }
                })
            })
    };

    let face_sources =
        |want_a: bool, in_faces: usize, face_of: &dyn Fn(HalfedgeId) -> FaceId| -> Vec<FaceId> {
            let n = out.num_faces();
            let mut src: Vec<Option<FaceId>> = vec![None; n];
            for h in out.halfedge_ids() {
                let f = out.incident_face(h);
                if src[f.0].is_none() {
                    if let Some(g) = side_halfedge(h, want_a) {
                        src[f.0] = Some(face_of(g));
                    }
                }
            }
            if in_faces == 1 {
                return vec![FaceId(0); n];
            }
            // Faces not bounded by this side's edges inherit across other edges.
            loop {
                let mut changed = false;
                for h in out.halfedge_ids() {
                    if side_halfedge(h, want_a).is_some() {
                        continue;
                    }
                    let (f, g) = (out.incident_face(h), out.incident_face(h.twin()));
                    if src[f.0].is_none() && src[g.0].is_some() {
                        src[f.0] = src[g.0];
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            src.into_iter()
                .map(|s| s.expect("every face reached"))
                .collect()
        };
    let fa = face_sources(true, a.num_faces(), &|g| a.incident_face(g));
    let fb = face_sources(false, b.num_faces(), &|g| b.incident_face(g));

    let vertex_source = |v: VertexId, want_a: bool, faces: &[FaceId]| -> Cell {
        for &i in &built.point_sources[v.0] {
            if want_a && i < va {
                return Cell::Vertex(VertexId(i));
            }
            if !want_a && i >= va {
                return Cell::Vertex(VertexId(i - va));
            }
        }
        for g in out.outgoing_ccw(v) {
            if let Some(x) = side_halfedge(g, want_a) {
                return Cell::Edge(x.edge());
            }
        }
        match out.outgoing(v) {
            Some(g) => Cell::Face(faces[out.incident_face(g).0]),
            None => Cell::Face(faces[out.isolated_face(v).unwrap().0]),
        }
    };

    let mut prov = OverlayProvenance::default();
    for v in out.vertex_ids() {
        prov.vertices
            .push((vertex_source(v, true, &fa), vertex_source(v, false, &fb)));
    }
    for e in out.edge_ids() {
        let h = e.halfedge();
        let ca = side_halfedge(h, true).map_or(Cell::Face(fa[out.incident_face(h).0]), |x| {
            Cell::Edge(x.edge())
        });
        let cb_ = side_halfedge(h, false).map_or(Cell::Face(fb[out.incident_face(h).0]), |x| {
            Cell::Edge(x.edge())
        });
        prov.edges.push((ca, cb_));
    }
    for f in out.face_ids() {
        prov.faces.push((fa[f.0], fb[f.0]));
    }

    let result = built.arrangement.clone().map_data(
        |v, ()| match prov.vertices[v.0] {
            (Cell::Vertex(x), Cell::Vertex(y)) => {
                cb.vertex_vertex(&a.vertex(x).data, &b.vertex(y).data)
            }
            (Cell::Vertex(x), Cell::Edge(y)) => cb.vertex_edge(&a.vertex(x).data, &b.edge(y).data),
            (Cell::Edge(x), Cell::Vertex(y)) => cb.edge_vertex(&a.edge(x).data, &b.vertex(y).data),
            (Cell::Vertex(x), Cell::Face(y)) => cb.vertex_face(&a.vertex(x).data, &b.face(y).data),
            (Cell::Face(x), Cell::Vertex(y)) => cb.face_vertex(&a.face(x).data, &b.vertex(y).data),
            (Cell::Edge(x), Cell::Edge(y)) => {
                cb.edge_edge_crossing(&a.edge(x).data, &b.edge(y).data)
            }
            other => unreachable!("overlay vertex inside two faces: {other:?}"),
        },
        |e, ()| match prov.edges[e.0] {
            (Cell::Edge(x), Cell::Edge(y)) => {
                cb.edge_edge_overlap(&a.edge(x).data, &b.edge(y).data)
            }
            (Cell::Edge(x), Cell::Face(y)) => cb.edge_face(&a.edge(x).data, &b.face(y).data),
            (Cell::Face(x), Cell::Edge(y)) => cb.face_edge(&a.face(x).data, &b.edge(y).data),
            other => unreachable!("overlay edge outside both inputs' edges: {other:?}"),
        },
        |f, ()| {
            let (x, y) = prov.faces[f.0];
            cb.face_face(&a.face(x).data, &b.face(y).data)
        },
    );
    Ok((result, prov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::sweep_build;
    use crate::sphere::DirPoint;

    fn dp(x: i64, y: i64, z: i64) -> DirPoint {
        DirPoint::from_ints(x, y, z).unwrap()
    }

    fn arc(a: DirPoint, b: DirPoint) -> GeodesicArc {
        GeodesicArc::new(a, b).unwrap()
    }

    fn circle(a: DirPoint, b: DirPoint) -> Vec<GeodesicArc> {
        let (na, nb) = (a.antipode(), b.antipode());
        vec![
            arc(a.clone(), b.clone()),
            arc(b, na.clone()),
            arc(na.clone(), nb.clone()),
            arc(nb, a),
        ]
    }

    /// Labels every output cell with the case that produced it.
    struct Names;

    impl OverlayCallbacks<(), (), String, (), (), String> for Names {
        type V = &'static str;
        type E = &'static str;
        type F = String;
        fn vertex_vertex(&self, _: &(), _: &()) -> &'static str {
            "vv"
        }
        fn vertex_edge(&self, _: &(), _: &()) -> &'static str {
            "ve"
        }
        fn edge_vertex(&self, _: &(), _: &()) -> &'static str {
            "ev"
        }
        fn vertex_face(&self, _: &(), _: &String) -> &'static str {
            "vf"
        }
        fn face_vertex(&self, _: &String, _: &()) -> &'static str {
            "fv"
        }
        fn edge_edge_crossing(&self, _: &(), _: &()) -> &'static str {
            "x"
        }
        fn edge_edge_overlap(&self, _: &(), _: &()) -> &'static str {
            "ee"
        }
        fn edge_face(&self, _: &(), _: &String) -> &'static str {
            "ef"
        }
        fn face_edge(&self, _: &String, _: &()) -> &'static str {
            "fe"
        }
        fn face_face(&self, a: &String, b: &String) -> String {
            format!("{a}{b}")
        }
    }

    fn labelled(arcs: &[GeodesicArc], prefix: &str) -> Arrangement<(), (), String> {
        sweep_build(arcs)
            .unwrap()
            .map_data(|_, _| (), |_, _| (), |f, _| format!("{prefix}{}", f.0))
    }

    #[test]
    fn overlay_with_empty_is_isomorphic() {
        let x = labelled(
            &[
                arc(dp(1, -1, 0), dp(1, 1, 0)),
                arc(dp(1, 0, -1), dp(1, 0, 1)),
            ],
            "a",
        );
        let empty = Arrangement::<(), (), String>::new("b".into());
        let o = overlay(&x, &empty, &Names).unwrap();
        assert_eq!(o.counts(), x.counts());
        assert!(o.vertex_ids().all(|v| o.vertex(v).data == "vf"));
        assert!(o.edge_ids().all(|e| o.edge(e).data == "ef"));
        assert!(o.validate().is_ok());
    }

    #[test]
    fn two_great_circles_overlay_into_lunes() {
        let a = labelled(&circle(dp(1, 0, 0), dp(0, 1, 0)), "a");
        let b = labelled(&circle(dp(1, 0, 1), dp(0, 1, 0)), "b");
        assert_eq!(a.num_faces(), 2);
        let (o, prov) = overlay_traced(&a, &b, &Names).unwrap();
        assert_eq!(o.num_faces(), 4);
        assert!(o.validate().is_ok());
        // (0,±1,0) lies on both circles and is a vertex of both inputs.
        assert_eq!(prov.vertex_case_counts()[0], 2);
        let mut labels: Vec<_> = o.face_ids().map(|f| o.face(f).data.clone()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 4);
        // Face of (0,0,1)-ish point above both circles.
        let f = o.locate_face(&dp(-1, 0, 5)).unwrap();
        let fa = a.locate_face(&dp(-1, 0, 5)).unwrap();
        let fb = b.locate_face(&dp(-1, 0, 5)).unwrap();
        assert_eq!(
            o.face(f).data,
            format!("{}{}", a.face(fa).data, b.face(fb).data)
        );
    }
}
