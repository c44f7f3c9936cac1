//! Aggregate construction of the arrangement induced by a set of arcs.
//!
//! All pairwise intersections are computed exactly (pairs are pruned with a
//! conservative floating-point cap test), arcs are cut at every vertex they
//! contain, coincident pieces are fused, and the DCEL is assembled from the
//! angular order at each vertex. Faces are recovered by grouping boundary
//! cycles: two cycles bound the same face exactly when, for every connected
//! component, they lie in the same face of that component alone.
//!
//! The result depends only on the set of input arcs and points, not on their
//! order: vertices are numbered by their canonical coordinates and edges by
//! their endpoint pairs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::locate::Located;
use super::{
    Arrangement, ArrangementError, Edge, EdgeId, Face, FaceId, Halfedge, HalfedgeId, UnionFind,
    VertexId,
};
use crate::kernel::{det3_sign, Sign};
use crate::sphere::{
    intersect, make_arc, tangent_angle_cmp, DirPoint, GeodesicArc, IntersectionResult,
};

/// An arrangement together with the provenance of its features.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub arrangement: Arrangement<(), (), ()>,
    /// For every edge, the input arcs covering it, with whether the input
    /// runs in the same direction as the edge's stored arc.
    pub edge_sources: Vec<Vec<(usize, bool)>>,
    /// For every vertex, the input points located at it.
    pub point_sources: Vec<Vec<usize>>,
}

/// The arrangement induced by `arcs` (which may intersect and overlap).
pub fn sweep_build(arcs: &[GeodesicArc]) -> Result<Arrangement<(), (), ()>, ArrangementError> {
    Ok(build_from_arcs(arcs, &[])?.arrangement)
}

/// Spherical cap (unit centre, angular radius) enclosing an arc.
fn cap(arc: &GeodesicArc) -> ([f64; 3], f64) {
    let a = arc.source.dir().to_unit_f64();
    let b = arc.target.dir().to_unit_f64();
    let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let len = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    let c = [m[0] / len, m[1] / len, m[2] / len];
    (c, arc.approx_angle() / 2.0)
}

fn angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
        .clamp(-1.0, 1.0)
        .acos()
}

const CAP_SLACK: f64 = 1e-6;

/// Build the arrangement of `arcs` and the isolated `points`, keeping track
/// of which inputs produced each edge and vertex.
pub fn build_from_arcs(
    arcs: &[GeodesicArc],
    points: &[DirPoint],
) -> Result<BuildOutput, ArrangementError> {
    // u-monotone pieces, each remembering its input arc.
    let mut pieces: Vec<(GeodesicArc, usize)> = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        for p in make_arc(&a.source, &a.target)? {
            pieces.push((p, i));
        }
    }
    let caps: Vec<_> = pieces.iter().map(|(a, _)| cap(a)).collect();

    // Interior points at which each piece must be cut.
    let mut cuts: Vec<BTreeSet<DirPoint>> = vec![BTreeSet::new(); pieces.len()];
    for j in 0..pieces.len() {
        for k in (j + 1)..pieces.len() {
            if angle(&caps[j].0, &caps[k].0) > caps[j].1 + caps[k].1 + CAP_SLACK {
                continue;
            }
            let (aj, ak) = (&pieces[j].0, &pieces[k].0);
            let found = match intersect(aj, ak) {
                IntersectionResult::Points(ps) => ps,
                IntersectionResult::Overlap(o) => vec![o.source, o.target],
            };
            for p in found {
                if aj.contains_interior(&p) {
                    cuts[j].insert(p.clone());
                }
                if ak.contains_interior(&p) {
                    cuts[k].insert(p);
                }
            }
        }
    }
    for p in points {
        for (j, (a, _)) in pieces.iter().enumerate() {
            if a.contains_interior(p) {
                cuts[j].insert(p.clone());
            }
        }
    }

    // Vertices in canonical order.
    let mut all: BTreeSet<DirPoint> = points.iter().cloned().collect();
    for (j, (a, _)) in pieces.iter().enumerate() {
        all.insert(a.source.clone());
        all.insert(a.target.clone());
        all.extend(cuts[j].iter().cloned());
    }
    let vertex_points: Vec<DirPoint> = all.into_iter().collect();
    let vid: HashMap<DirPoint, usize> = vertex_points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();

    // Cut pieces into edges, fusing coincident ones.
    let mut edge_map: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
    for (j, (a, tag)) in pieces.iter().enumerate() {
        let mut inner: Vec<DirPoint> = cuts[j].iter().cloned().collect();
        inner.sort_by(|x, y| match det3_sign(&a.normal, x.dir(), y.dir()) {
            Sign::Positive => Ordering::Less,
            Sign::Negative => Ordering::Greater,
            Sign::Zero => Ordering::Equal,
        });
        let mut chain = vec![a.source.clone()];
        chain.extend(inner);
        chain.push(a.target.clone());
        for w in chain.windows(2) {
            let (s, t) = (vid[&w[0]], vid[&w[1]]);
            let key = (s.min(t), s.max(t));
            let entry = edge_map.entry(key).or_default();
            let tag_entry = (*tag, s < t);
            if !entry.contains(&tag_entry) {
                entry.push(tag_entry);
            }
        }
    }

    let mut arr: Arrangement<(), (), ()> = Arrangement::new(());
    for p in &vertex_points {
        arr.push_vertex(p.clone(), ());
    }
    let mut edge_sources = Vec::with_capacity(edge_map.len());
    for ((s, t), tags) in edge_map {
        let arc = GeodesicArc::new(vertex_points[s].clone(), vertex_points[t].clone())?;
        arr.edges.push(Edge { arc, data: () });
        let f = FaceId(0);
        arr.halfedges.push(Halfedge {
            next: HalfedgeId(0),
            prev: HalfedgeId(0),
            origin: VertexId(s),
            face: f,
        });
        arr.halfedges.push(Halfedge {
            next: HalfedgeId(0),
            prev: HalfedgeId(0),
            origin: VertexId(t),
            face: f,
        });
        edge_sources.push(tags);
    }

    // Rotation systems.
    let mut outgoing: Vec<Vec<HalfedgeId>> = vec![Vec::new(); vertex_points.len()];
    for h in arr.halfedge_ids() {
        outgoing[arr.origin(h).0].push(h);
    }
    for (v, ring) in outgoing.iter_mut().enumerate() {
        if ring.is_empty() {
            continue;
        }
        let p = vertex_points[v].dir().clone();
        let tangents: HashMap<HalfedgeId, _> =
            ring.iter().map(|&g| (g, arr.out_tangent(g))).collect();
        let reference = tangents[&ring[0]].clone();
        ring.sort_by(|a, b| tangent_angle_cmp(&p, &reference, &tangents[a], &tangents[b]));
        let k = ring.len();
        for i in 0..k {
            let g = ring[i];
            let cw = ring[(i + k - 1) % k];
            arr.link(g.twin(), cw);
        }
        arr.vertices[v].out = Some(ring[0]);
    }

    assign_faces(&mut arr);

    let mut point_sources = vec![Vec::new(); vertex_points.len()];
    for (i, p) in points.iter().enumerate() {
        point_sources[vid[p]].push(i);
    }
    Ok(BuildOutput {
        arrangement: arr,
        edge_sources,
        point_sources,
    })
}

/// Group boundary cycles into faces and place isolated vertices.
fn assign_faces(arr: &mut Arrangement<(), (), ()>) {
    let nh = arr.halfedges.len();
    let mut cycle_of = vec![usize::MAX; nh];
    let mut cycle_rep: Vec<HalfedgeId> = Vec::new();
    for h in arr.halfedge_ids() {
        if cycle_of[h.0] == usize::MAX {
            for g in arr.cycle(h) {
                cycle_of[g.0] = cycle_rep.len();
            }
            cycle_rep.push(h);
        }
    }

    let nv = arr.vertices.len();
    let mut uf = UnionFind::new(nv);
    for e in 0..arr.edges.len() {
        let h = EdgeId(e).halfedge();
        uf.union(arr.origin(h).0, arr.target(h).0);
    }
    let comp_of: Vec<usize> = (0..nv).map(|v| uf.find(v)).collect();
    let components: Vec<usize> = {
        let mut c: Vec<usize> = (0..nv)
            .filter(|&v| arr.vertices[v].out.is_some() && comp_of[v] == v)
            .collect();
        c.sort();
        c
    };

    // Cycle of component `m` whose face contains `p` (p not on m).
    let cycle_in = |arr: &Arrangement<(), (), ()>, m: usize, p: &DirPoint| -> usize {
        let located = arr.locate_filtered(
            p,
            &|e: EdgeId| comp_of[arr.origin(e.halfedge()).0] == m,
            &|v: VertexId| comp_of[v.0] == m,
        );
        match located {
            Located::Left(x) => cycle_of[x.0],
            other => unreachable!("components are disjoint, got {other:?}"),
        }
    };

    // Signature of a point: the containing cycle in every component except
    // the one it belongs to.
    let signature =
        |arr: &Arrangement<(), (), ()>, own: Option<(usize, usize)>, p: &DirPoint| -> Vec<usize> {
            components
                .iter()
                .map(|&m| match own {
                    Some((k, c)) if k == m => c,
                    _ => cycle_in(arr, m, p),
                })
                .collect()
        };

    let mut face_of_sig: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut cycle_face = vec![0usize; cycle_rep.len()];
    let mut face_cycles: Vec<Vec<usize>> = Vec::new();
    for (c, &rep) in cycle_rep.iter().enumerate() {
        let v = arr.origin(rep);
        let p = arr.point(v).clone();
        let sig = signature(arr, Some((comp_of[v.0], c)), &p);
        let next_id = face_cycles.len();
        let f = *face_of_sig.entry(sig).or_insert(next_id);
        if f == next_id {
            face_cycles.push(Vec::new());
        }
        face_cycles[f].push(c);
        cycle_face[c] = f;
    }
    if face_cycles.is_empty() {
        face_cycles.push(Vec::new());
    }
    let mut faces: Vec<Face<()>> = face_cycles
        .iter()
        .map(|cs| Face {
            data: (),
            ccbs: cs.iter().map(|&c| cycle_rep[c]).collect(),
            isolated: Vec::new(),
        })
        .collect();
    for h in 0..nh {
        arr.halfedges[h].face = FaceId(cycle_face[cycle_of[h]]);
    }
    for v in 0..nv {
        if arr.vertices[v].out.is_some() {
            continue;
        }
        let f = if components.is_empty() {
            0
        } else {
            let p = arr.point(VertexId(v)).clone();
            let sig = signature(arr, None, &p);
            face_of_sig[&sig]
        };
        faces[f].isolated.push(VertexId(v));
        arr.vertices[v].isolated_in = Some(FaceId(f));
    }
    arr.faces = faces;

    // The face containing the north pole gets index 0.
    let north = match arr.locate(&DirPoint::north()) {
        super::Cell::Face(f) => f,
        super::Cell::Vertex(v) => match arr.vertices[v.0].out {
            Some(h) => arr.incident_face(h),
            None => arr.vertices[v.0].isolated_in.unwrap(),
        },
        super::Cell::Edge(e) => arr.incident_face(e.halfedge()),
    };
    if north.0 != 0 {
        arr.swap_faces(FaceId(0), north);
    }
}

impl<V, E, F> Arrangement<V, E, F> {
    /// Exchange the ids of two faces.
    pub(crate) fn swap_faces(&mut self, a: FaceId, b: FaceId) {
        self.faces.swap(a.0, b.0);
        let relabel = |f: FaceId| {
            if f == a {
                b
            } else if f == b {
                a
            } else {
                f
            }
        };
        for h in &mut self.halfedges {
            h.face = relabel(h.face);
        }
        for v in &mut self.vertices {
            v.isolated_in = v.isolated_in.map(relabel);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(x: i64, y: i64, z: i64) -> DirPoint {
        DirPoint::from_ints(x, y, z).unwrap()
    }

    fn arc(a: DirPoint, b: DirPoint) -> GeodesicArc {
        GeodesicArc::new(a, b).unwrap()
    }

    /// A great circle through the given perpendicular-ish points, as three arcs.
    fn circle(a: DirPoint, b: DirPoint) -> Vec<GeodesicArc> {
        let (na, nb) = (a.antipode(), b.antipode());
        vec![
            arc(a.clone(), b.clone()),
            arc(b, na.clone()),
            arc(na.clone(), nb.clone()),
            arc(nb, a),
        ]
    }

    #[test]
    fn crossing_arcs_form_an_x() {
        let a = sweep_build(&[
            arc(dp(1, -1, 0), dp(1, 1, 0)),
            arc(dp(1, 0, -1), dp(1, 0, 1)),
        ])
        .unwrap();
        assert_eq!((a.num_vertices(), a.num_edges(), a.num_faces()), (5, 4, 1));
        assert!(a.validate().is_ok(), "{:?}", a.validate());
    }

    #[test]
    fn two_great_circles_make_four_lunes() {
        let mut arcs = circle(dp(1, 0, 0), dp(0, 1, 0));
        arcs.extend(circle(dp(1, 0, 1), dp(0, 1, 0)));
        let a = sweep_build(&arcs).unwrap();
        assert_eq!(a.num_faces(), 4);
        assert!(a.validate().is_ok(), "{:?}", a.validate());
    }

    #[test]
    fn three_great_circles_make_eight_faces() {
        let mut arcs = circle(dp(1, 0, 0), dp(0, 1, 0));
        arcs.extend(circle(dp(0, 1, 0), dp(0, 0, 1)));
        arcs.extend(circle(dp(0, 0, 1), dp(1, 0, 0)));
        let a = sweep_build(&arcs).unwrap();
        assert_eq!(a.num_faces(), 8);
        assert!(a.validate().is_ok(), "{:?}", a.validate());
    }

    #[test]
    fn overlapping_arcs_are_fused() {
        let out = build_from_arcs(
            &[
                arc(dp(1, -2, 0), dp(1, 1, 0)),
                arc(dp(1, 2, 0), dp(1, -1, 0)),
            ],
            &[],
        )
        .unwrap();
        let a = &out.arrangement;
        assert_eq!((a.num_vertices(), a.num_edges(), a.num_faces()), (4, 3, 1));
        assert!(out.edge_sources.iter().any(|t| t.len() == 2));
        assert!(a.validate().is_ok());
    }

    #[test]
    fn nested_components_and_isolated_points() {
        let small = [dp(10, 9, 9), dp(9, 10, 9), dp(9, 9, 10)];
        let big = [dp(1, 0, 0), dp(0, 1, 0), dp(0, 0, 1)];
        let mut arcs = Vec::new();
        for t in [&small, &big] {
            for i in 0..3 {
                arcs.push(arc(t[i].clone(), t[(i + 1) % 3].clone()));
            }
        }
        let pts = [dp(3, 1, 1), dp(1, 1, 1), dp(-1, -1, -1)];
        let out = build_from_arcs(&arcs, &pts).unwrap();
        let a = &out.arrangement;
        assert_eq!(a.num_faces(), 3);
        assert!(a.validate().is_ok(), "{:?}", a.validate());
        let f: Vec<_> = pts
            .iter()
            .map(|p| a.isolated_face(a.find_vertex(p).unwrap()).unwrap())
            .collect();
        assert_ne!(f[0], f[1]);
        assert_ne!(f[0], f[2]);
        assert_ne!(f[1], f[2]);
        assert_eq!(a.ccbs(f[0]).len(), 2);
    }

    #[test]
    fn build_is_order_independent() {
        let mut arcs = circle(dp(1, 0, 0), dp(0, 1, 0));
        arcs.push(arc(dp(1, 1, -1), dp(1, 1, 1)));
        arcs.push(arc(dp(-1, 2, 1), dp(3, -1, 2)));
        let a = sweep_build(&arcs).unwrap();
        arcs.reverse();
        let b = sweep_build(&arcs).unwrap();
        assert_eq!(a.counts(), b.counts());
        let pa: Vec<_> = a.vertex_ids().map(|v| a.point(v).clone()).collect();
        let pb: Vec<_> = b.vertex_ids().map(|v| b.point(v).clone()).collect();
        assert_eq!(pa, pb);
    }
}
