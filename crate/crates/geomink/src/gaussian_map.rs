//! Gaussian maps of convex polytopes.
//!
//! The Gaussian map of a polytope `P` subdivides the sphere of directions:
//! every facet of `P` maps to the point given by its outward normal, every
//! edge to the short arc between the normals of its two facets, and every
//! vertex `v` to the spherical polygon of directions in which `v` is the
//! extreme point. Each face of the arrangement is decorated with that
//! vertex, which is all that is needed to recover `P`.
//!
//! Arcs crossing the identification curve (or passing through a pole) are
//! split there; the resulting degree-two "artificial" vertices do not
//! correspond to facets.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, FaceId, HalfedgeId, VertexId};
use crate::kernel::{Rational, Vec3};
use crate::mesh::{Mesh, MeshError};
use crate::sphere::{classify, make_arc, DirPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussianMapError {
    #[error(transparent)]
    InvalidMesh(#[from] MeshError),
    #[error("invalid Gaussian map: {0}")]
    InvalidGaussianMap(String),
    #[error("zero direction")]
    ZeroVector,
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// The arrangement underlying a Gaussian map: faces carry primal vertices.
pub type GaussianArrangement = Arrangement<(), (), Vec3>;

/// A decorated Gaussian map.
#[derive(Debug, Clone)]
pub struct GaussianMap {
    pub arr: GaussianArrangement,
}

/// A maximal chain of arcs between two non-artificial vertices.
#[derive(Debug, Clone)]
pub struct FusedArc {
    pub source: VertexId,
    pub target: VertexId,
    /// Halfedges of the chain, in order; the first leaves `source`.
    pub halfedges: Vec<HalfedgeId>,
}

impl GaussianMap {
    /// The Gaussian map of a valid convex mesh.
    pub fn build(mesh: &Mesh) -> Result<GaussianMap, GaussianMapError> {
        mesh.validate()?;
        let normals: Vec<DirPoint> = (0..mesh.facets.len())
            .map(|f| classify(&mesh.facet_normal(f).expect("validated")).expect("nonzero normal"))
            .collect();
        let facet_of = mesh.directed_edge_facets();
        let mut arcs = Vec::new();
        for (f, cyc) in mesh.facets.iter().enumerate() {
            for i in 0..cyc.len() {
                let (a, b) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                let g = facet_of[&(b, a)];
                // Directions left of n_f → n_g have a positive component
                // along b − a, so b is extreme there.
                arcs.push((
                    normals[f].clone(),
                    normals[g].clone(),
                    mesh.vertices[b].clone(),
                ));
            }
        }
        Self::from_dual_arcs(&arcs)
    }

    /// Assemble a map from directed arcs `(p, q, v)`, meaning the great-circle
    /// arc from `p` to `q` has the region of vertex `v` on its left. Each arc
    /// must be listed in both directions.
    pub fn from_dual_arcs(
        arcs: &[(DirPoint, DirPoint, Vec3)],
    ) -> Result<GaussianMap, GaussianMapError> {
        let bad = |m: &str| GaussianMapError::InvalidGaussianMap(m.to_string());
        // Undirected arcs and adjacency, in a breadth-first order so that
        // every arc after the first touches the arrangement built so far.
        let mut adjacency: HashMap<&DirPoint, Vec<&DirPoint>> = HashMap::new();
        for (p, q, _) in arcs {
            adjacency.entry(p).or_default().push(q);
        }
        for list in adjacency.values_mut() {
            list.sort();
            list.dedup();
        }
        let mut arr: Arrangement<(), (), Option<Vec3>> = Arrangement::new(None);
        let mut first_half: HashMap<(DirPoint, DirPoint), HalfedgeId> = HashMap::new();
        let Some(start) = adjacency.keys().min().copied() else {
            return Err(bad("no arcs"));
        };
        let mut queue = VecDeque::from([start]);
        let mut seen = std::collections::HashSet::from([start]);
        while let Some(p) = queue.pop_front() {
            for &q in &adjacency[p] {
                if first_half.contains_key(&(p.clone(), q.clone())) {
                    continue;
                }
                let pieces = make_arc(p, q).map_err(ArrangementError::from)?;
                let mut prev: Option<VertexId> = arr.find_vertex(p);
                let mut first = None;
                let mut last = None;
                for piece in pieces {
                    let h = arr.insert_disjoint_arc(piece, (prev, None), ())?;
                    prev = Some(arr.target(h));
                    first.get_or_insert(h);
                    last = Some(h);
                }
                first_half.insert((p.clone(), q.clone()), first.unwrap());
                first_half.insert((q.clone(), p.clone()), last.unwrap().twin());
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        if first_half.len()
            != arcs
                .iter()
                .map(|(p, q, _)| (p, q))
                .collect::<std::collections::HashSet<_>>()
                .len()
        {
            return Err(bad(
                "arc graph is not connected or arcs are not listed in both directions",
            ));
        }
        for (p, q, v) in arcs {
            let f = arr.incident_face(first_half[&(p.clone(), q.clone())]);
            match &arr.face(f).data {
                Some(w) if w != v => return Err(bad("two primal vertices claim one face")),
                _ => arr.face_mut(f).data = Some(v.clone()),
            }
        }
        if arr.face_ids().any(|f| arr.face(f).data.is_none()) {
            return Err(bad("undecorated face"));
        }
        let arr = arr.map_data(|_, _| (), |_, _| (), |_, d| d.unwrap());
        Ok(GaussianMap { arr })
    }

    /// `(V, HE, F)` of the underlying arrangement.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.arr.counts()
    }

    /// Whether `v` only splits an arc (at the identification curve or a pole).
    pub fn is_artificial(&self, v: VertexId) -> bool {
        let ring = self.arr.outgoing_ccw(v);
        if ring.len() != 2 {
            return false;
        }
        let t1 = self.arr.arc(ring[0]).tangent_from(self.arr.point(v));
        let t2 = self.arr.arc(ring[1]).tangent_from(self.arr.point(v));
        t1.cross(&t2).is_zero() && t1.dot(&t2) < Zero::zero()
    }

    /// Vertices of the map that correspond to facets of the polytope.
    pub fn facet_vertices(&self) -> Vec<VertexId> {
        self.arr
            .vertex_ids()
            .filter(|&v| !self.is_artificial(v))
            .collect()
    }

    /// Number of facets of the primal polytope.
    pub fn facet_count(&self) -> usize {
        self.facet_vertices().len()
    }

    /// Number of vertices of the primal polytope.
    pub fn vertex_count(&self) -> usize {
        self.arr.num_faces()
    }

    /// Number of edges of the primal polytope.
    pub fn edge_count(&self) -> usize {
        self.fused_arcs().len() / 2
    }

    /// All arc chains between facet vertices, one per direction.
    pub fn fused_arcs(&self) -> Vec<FusedArc> {
        let mut out = Vec::new();
        for v in self.facet_vertices() {
            for g in self.arr.outgoing_ccw(v) {
                let mut chain = vec![g];
                let mut h = g;
                while self.is_artificial(self.arr.target(h))
                    && chain.len() <= self.arr.num_halfedges()
                {
                    let w = self.arr.target(h);
                    h = self
                        .arr
                        .outgoing_ccw(w)
                        .into_iter()
                        .find(|&x| x != h.twin())
                        .expect("degree two");
                    chain.push(h);
                }
                out.push(FusedArc {
                    source: v,
                    target: self.arr.target(h),
                    halfedges: chain,
                });
            }
        }
        out
    }

    /// The polytope `−P`.
    pub fn reflect(&self) -> GaussianMap {
        let arcs: Vec<_> = self
            .fused_arcs()
            .into_iter()
            .map(|c| {
                let p = self.arr.point(c.source).antipode();
                let q = self.arr.point(c.target).antipode();
                let v = -&self.arr.face(self.arr.incident_face(c.halfedges[0])).data;
                (q, p, v)
            })
            .collect();
        Self::from_dual_arcs(&arcs).expect("reflection of a valid map is valid")
    }

    /// Recover the primal polytope: one vertex per face, one facet per
    /// non-artificial vertex (counterclockwise from outside).
    pub fn primal_mesh(&self) -> Result<Mesh, GaussianMapError> {
        let vertices: Vec<Vec3> = self
            .arr
            .face_ids()
            .map(|f| self.arr.face(f).data.clone())
            .collect();
        let mut facets = Vec::new();
        for v in self.facet_vertices() {
            let mut cyc: Vec<usize> = Vec::new();
            for g in self.arr.outgoing_ccw(v) {
                let f = self.arr.incident_face(g).0;
                if cyc.last() != Some(&f) {
                    cyc.push(f);
                }
            }
            while cyc.len() > 1 && cyc.first() == cyc.last() {
                cyc.pop();
            }
            if cyc.len() < 3 {
                return Err(GaussianMapError::InvalidGaussianMap(format!(
                    "facet vertex {} has only {} distinct faces",
                    v.0,
                    cyc.len()
                )));
            }
            facets.push(cyc);
        }
        Ok(Mesh { vertices, facets })
    }

    /// Maximum of `⟨d, v⟩` over primal vertices, with a maximizer (the first
    /// in face order).
    pub fn support(&self, d: &Vec3) -> Result<(Rational, Vec3), GaussianMapError> {
        if d.is_zero() {
            return Err(GaussianMapError::ZeroVector);
        }
        let mut best: Option<(Rational, FaceId)> = None;
        for f in self.arr.face_ids() {
            let s = d.dot(&self.arr.face(f).data);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, f));
            }
        }
        let (s, f) = best.expect("at least one face");
        Ok((s, self.arr.face(f).data.clone()))
    }

    /// Check the arrangement and the extremal-point property of every face:
    /// its vertex is extreme at each boundary direction and strictly extreme
    /// inside the face.
    pub fn validate(&self) -> Vec<String> {
        let mut bad = self.arr.validate().violations;
        if !bad.is_empty() {
            return bad;
        }
        let payloads: Vec<&Vec3> = self
            .arr
            .face_ids()
            .map(|f| &self.arr.face(f).data)
            .collect();
        let max_at = |d: &Vec3| payloads.iter().map(|p| d.dot(p)).max().expect("nonempty");
        for f in self.arr.face_ids() {
            let v = &self.arr.face(f).data;
            let mut interior = Vec3::zero();
            for h in self.arr.boundary_halfedges(f) {
                let d = self.arr.point(self.arr.origin(h)).vec3();
                if d.dot(v) != max_at(&d) {
                    bad.push(format!(
                        "face {} is not extreme at a boundary direction",
                        f.0
                    ));
                    break;
                }
                interior = &interior + &d;
            }
            if interior.is_zero() {
                continue;
            }
            let best = d_dot_count(&payloads, &interior);
            if interior.dot(v) != best.0 || best.1 != 1 {
                bad.push(format!("face {} is not strictly extreme inside", f.0));
            }
        }
        bad
    }
}

/// Maximum of `⟨d, p⟩` and how many payloads attain it.
fn d_dot_count(payloads: &[&Vec3], d: &Vec3) -> (Rational, usize) {
    let vals: Vec<Rational> = payloads.iter().map(|p| d.dot(p)).collect();
    let m = vals.iter().max().cloned().expect("nonempty");
    let c = vals.iter().filter(|&x| *x == m).count();
    (m, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> Mesh {
        Mesh::from_ints(
            &[
                [1, 0, 0],
                [-1, 0, 0],
                [0, 1, 0],
                [0, -1, 0],
                [0, 0, 1],
                [0, 0, -1],
            ],
            &[
                &[0, 2, 4],
                &[2, 1, 4],
                &[1, 3, 4],
                &[3, 0, 4],
                &[2, 0, 5],
                &[1, 2, 5],
                &[3, 1, 5],
                &[0, 3, 5],
            ],
        )
    }

    fn tetrahedron() -> Mesh {
        // Vertices chosen so that no arc meets the identification curve.
        Mesh::from_ints(
            &[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
            &[&[0, 2, 1], &[0, 1, 3], &[0, 3, 2], &[1, 2, 3]],
        )
    }

    fn cube() -> Mesh {
        Mesh::from_ints(
            &[
                [0, 0, 0],
                [1, 0, 0],
                [1, 1, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, 0, 1],
                [1, 1, 1],
                [0, 1, 1],
            ],
            &[
                &[0, 3, 2, 1],
                &[4, 5, 6, 7],
                &[0, 1, 5, 4],
                &[1, 2, 6, 5],
                &[2, 3, 7, 6],
                &[3, 0, 4, 7],
            ],
        )
    }

    #[test]
    fn octahedron_counts() {
        let g = GaussianMap::build(&octahedron()).unwrap();
        assert_eq!(g.counts(), (10, 28, 6));
        assert_eq!(g.facet_count(), 8);
        assert!(g.validate().is_empty(), "{:?}", g.validate());
        assert_eq!(g.primal_mesh().unwrap().facets.len(), 8);
    }

    #[test]
    fn tetrahedron_counts_and_round_trip() {
        let m = tetrahedron();
        let g = GaussianMap::build(&m).unwrap();
        assert_eq!(g.counts(), (4, 12, 4));
        let back = g.primal_mesh().unwrap();
        assert_eq!(back.validate(), Ok(()));
        let mut a = m.vertices.clone();
        let mut b = back.vertices.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn support_examples() {
        let g = GaussianMap::build(&cube()).unwrap();
        let (s, v) = g.support(&Vec3::from_ints(1, 1, 1)).unwrap();
        assert_eq!(s, Rational::from_integer(3.into()));
        assert_eq!(v, Vec3::from_ints(1, 1, 1));
        let o = GaussianMap::build(&octahedron()).unwrap();
        assert_eq!(
            o.support(&Vec3::from_ints(0, 0, 1)).unwrap().1,
            Vec3::from_ints(0, 0, 1)
        );
        assert_eq!(o.support(&Vec3::zero()), Err(GaussianMapError::ZeroVector));
    }

    #[test]
    fn reflection_is_an_involution() {
        let g = GaussianMap::build(&tetrahedron()).unwrap();
        let r = g.reflect();
        assert!(r.validate().is_empty(), "{:?}", r.validate());
        let (s, _) = r.support(&Vec3::from_ints(-1, -1, -1)).unwrap();
        assert_eq!(s, Rational::from_integer(1.into()));
        let rr = r.reflect();
        let mut a: Vec<_> = g
            .arr
            .face_ids()
            .map(|f| g.arr.face(f).data.clone())
            .collect();
        let mut b: Vec<_> = rr
            .arr
            .face_ids()
            .map(|f| rr.arr.face(f).data.clone())
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(g.facet_count(), rr.facet_count());
    }

    #[test]
    fn invalid_mesh_is_rejected() {
        let mut m = cube();
        m.facets[0].reverse();
        assert!(matches!(
            GaussianMap::build(&m),
            Err(GaussianMapError::InvalidMesh(_))
        ));
    }
}
