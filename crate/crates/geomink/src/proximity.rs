//! Collision detection, separation distance and directional penetration
//! against a Minkowski sum given by its Gaussian map.
//!
//! `P` translated by `u` meets `Q` translated by `w` exactly when `w − u`
//! lies in `M = P ⊕ (−Q)`. Point classification walks the facet graph of `M`
//! (the vertices of its Gaussian map joined by its fused arcs) toward the
//! facet stabbed by the ray from an interior point `c` through the query.
//! In the polar of `M` about `c` that facet is the vertex maximizing a
//! linear function, so a greedy walk along the graph reaches it.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arrangement::{Cell, VertexId};
use crate::gaussian_map::GaussianMap;
use crate::kernel::{Rational, Vec3};
use crate::minkowski::minkowski;
use crate::sphere::DirPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProximityError {
    #[error("query point lies outside the polytope")]
    PointOutside,
    #[error("zero direction")]
    ZeroVector,
}

/// Where a query point lies relative to a closed polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Placement {
    Inside,
    OnBoundary,
    Outside,
}

impl Placement {
    pub fn as_str(self) -> &'static str {
        match self {
            Placement::Inside => "INSIDE",
            Placement::OnBoundary => "ON_BOUNDARY",
            Placement::Outside => "OUTSIDE",
        }
    }
}

/// A classification with the facet certifying it. The facet id doubles as a
/// hint for the next query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub placement: Placement,
    /// The Gaussian-map vertex of the witness facet.
    pub facet: VertexId,
    /// Outward normal of the witness facet (primitive integer direction).
    pub normal: Vec3,
    /// `⟨normal, x⟩ = offset` is the supporting plane of the witness facet.
    pub offset: Rational,
}

/// Precomputed facet graph of a Gaussian map, for repeated queries.
#[derive(Debug, Clone)]
pub struct Classifier {
    /// Interior point: the average of all primal vertices.
    center: Vec3,
    ids: Vec<VertexId>,
    slot: HashMap<VertexId, usize>,
    normals: Vec<Vec3>,
    offsets: Vec<Rational>,
    /// `offsets[i] − ⟨normals[i], center⟩`, always positive.
    slack: Vec<Rational>,
    neighbours: Vec<Vec<usize>>,
    map: GaussianMap,
}

impl Classifier {
    pub fn new(map: &GaussianMap) -> Classifier {
        let arr = &map.arr;
        let n = arr.num_faces();
        let mut sum = Vec3::zero();
        for f in arr.face_ids() {
            sum = sum + arr.face(f).data.clone();
        }
        let center = sum.scale(&Rational::new(One::one(), n.into()));
        let ids = map.facet_vertices();
        let slot: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut normals = Vec::with_capacity(ids.len());
        let mut offsets = Vec::with_capacity(ids.len());
        for &v in &ids {
            let nrm = arr.point(v).vec3();
            let h = arr.outgoing(v).expect("facet vertex has edges");
            let off = nrm.dot(&arr.face(arr.incident_face(h)).data);
            normals.push(nrm);
            offsets.push(off);
        }
        let slack = normals
            .iter()
            .zip(&offsets)
            .map(|(n, b)| b - n.dot(&center))
            .collect();
        let mut neighbours = vec![Vec::new(); ids.len()];
        for c in map.fused_arcs() {
            neighbours[slot[&c.source]].push(slot[&c.target]);
        }
        Classifier {
            center,
            ids,
            slot,
            normals,
            offsets,
            slack,
            neighbours,
            map: map.clone(),
        }
    }

    /// The Gaussian map queried.
    pub fn map(&self) -> &GaussianMap {
        &self.map
    }

    /// The interior reference point.
    pub fn center(&self) -> &Vec3 {
        &self.center
    }

    /// Facet supporting planes `(normal, offset)` in facet-vertex order.
    pub fn planes(&self) -> impl Iterator<Item = (&Vec3, &Rational)> {
        self.normals.iter().zip(&self.offsets)
    }

    fn witness(&self, placement: Placement, i: usize) -> Witness {
        Witness {
            placement,
            facet: self.ids[i],
            normal: self.normals[i].clone(),
            offset: self.offsets[i].clone(),
        }
    }

    /// Start of the walk: a facet next to the direction of `d` on the map.
    fn start(&self, d: &Vec3) -> usize {
        let arr = &self.map.arr;
        let p = DirPoint::from_ivec(d.to_ivec()).expect("nonzero direction");
        let h = match arr.locate(&p) {
            Cell::Vertex(v) => arr.outgoing(v).expect("vertex has edges"),
            Cell::Edge(e) => e.halfedge(),
            Cell::Face(f) => arr.boundary_halfedges(f)[0],
        };
        // Artificial vertices only split arcs; move to a real one.
        let mut v = arr.origin(h);
        let mut g = h;
        while !self.slot.contains_key(&v) {
            v = arr.target(g);
            g = arr.next(g);
        }
        self.slot[&v]
    }

    /// Classify `s` against the primal polytope, starting the walk at
    /// `hint` when given.
    pub fn classify(&self, s: &Vec3, hint: Option<VertexId>) -> Witness {
        let d = s - &self.center;
        if d.is_zero() {
            // The center is strictly interior; any facet certifies that.
            return self.witness(Placement::Inside, 0);
        }
        // Ray parameter at which the ray crosses facet i is slack/⟨n, d⟩;
        // the stabbed facet maximizes key = ⟨n, d⟩ / slack.
        let key = |i: usize| self.normals[i].dot(&d) / &self.slack[i];
        let mut cur = match hint.and_then(|h| self.slot.get(&h)) {
            Some(&i) => i,
            None => self.start(&d),
        };
        let mut best = key(cur);
        loop {
            let mut moved = false;
            for &j in &self.neighbours[cur] {
                let k = key(j);
                if k > best {
                    best = k;
                    cur = j;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        // Ties (the ray passes through an edge or vertex of M) form a
        // connected plateau; report its lexicographically smallest normal.
        let mut plateau = BTreeSet::from([cur]);
        let mut stack = vec![cur];
        while let Some(i) = stack.pop() {
            for &j in &self.neighbours[i] {
                if !plateau.contains(&j) && key(j) == best {
                    plateau.insert(j);
                    stack.push(j);
                }
            }
        }
        let pick = *plateau
            .iter()
            .min_by(|&&a, &&b| self.normals[a].cmp(&self.normals[b]))
            .expect("nonempty");
        let one = Rational::one();
        let placement = if best < one {
            Placement::Inside
        } else if best == one {
            Placement::OnBoundary
        } else {
            Placement::Outside
        };
        self.witness(placement, pick)
    }

    /// Squared Euclidean distance from `s` to the polytope (0 if inside or
    /// on it).
    pub fn separation_sq(&self, s: &Vec3) -> Rational {
        if self.classify(s, None).placement != Placement::Outside {
            return Rational::zero();
        }
        let mesh = self.map.primal_mesh().expect("valid map");
        let vs = &mesh.vertices;
        let mut best: Option<Rational> = None;
        let mut offer = |q: Rational| {
            if best.as_ref().is_none_or(|b| q < *b) {
                best = Some(q);
            }
        };
        for v in vs {
            offer((s - v).norm_sq());
        }
        for (a, b) in mesh.edges() {
            let ab = &vs[b] - &vs[a];
            let t = ab.dot(&(s - &vs[a])) / ab.norm_sq();
            if t.is_positive() && t < Rational::one() {
                let q = &vs[a] + &ab.scale(&t);
                offer((s - &q).norm_sq());
            }
        }
        for f in 0..mesh.facets.len() {
            let n = mesh.facet_normal(f).expect("valid facet");
            let cyc = &mesh.facets[f];
            let p0 = &vs[cyc[0]];
            let h = n.dot(&(s - p0)) / n.norm_sq();
            let q = s - &n.scale(&h);
            let inside = (0..cyc.len()).all(|i| {
                let (a, b) = (&vs[cyc[i]], &vs[cyc[(i + 1) % cyc.len()]]);
                !n.dot(&(b - a).cross(&(&q - a))).is_negative()
            });
            if inside {
                offer((s - &q).norm_sq());
            }
        }
        best.expect("polytope has vertices")
    }

    /// The exit parameter `α ≥ 0` of the ray `s + α r` from the polytope,
    /// with the exit point. `s` must lie inside or on the polytope.
    pub fn directional_penetration(
        &self,
        s: &Vec3,
        r: &Vec3,
    ) -> Result<(Rational, Vec3), ProximityError> {
        if r.is_zero() {
            return Err(ProximityError::ZeroVector);
        }
        if self.classify(s, None).placement == Placement::Outside {
            return Err(ProximityError::PointOutside);
        }
        let alpha = self
            .planes()
            .filter_map(|(n, b)| {
                let nr = n.dot(r);
                nr.is_positive().then(|| (b - n.dot(s)) / nr)
            })
            .min()
            .expect("a bounded polytope is exited in every direction");
        let exit = s + &r.scale(&alpha);
        Ok((alpha, exit))
    }
}

/// Classify `s` against the polytope of `m`.
pub fn classify_point(m: &GaussianMap, s: &Vec3, hint: Option<VertexId>) -> Witness {
    Classifier::new(m).classify(s, hint)
}

/// Squared distance from `s` to the polytope of `m`.
pub fn separation_sq(m: &GaussianMap, s: &Vec3) -> Rational {
    Classifier::new(m).separation_sq(s)
}

/// Exit parameter and point of the ray `s + α r` from the polytope of `m`.
pub fn directional_penetration(
    m: &GaussianMap,
    s: &Vec3,
    r: &Vec3,
) -> Result<(Rational, Vec3), ProximityError> {
    Classifier::new(m).directional_penetration(s, r)
}

/// Collision queries between two fixed polytopes under translation, with
/// `P ⊕ (−Q)` computed once.
#[derive(Debug, Clone)]
pub struct Collider {
    classifier: Classifier,
}

impl Collider {
    pub fn new(p: &GaussianMap, q: &GaussianMap) -> Collider {
        let m = minkowski(p, &q.reflect()).expect("sum of valid maps");
        Collider {
            classifier: Classifier::new(&m),
        }
    }

    /// Reuse an already computed `P ⊕ (−Q)`.
    pub fn from_difference(m: &GaussianMap) -> Collider {
        Collider {
            classifier: Classifier::new(m),
        }
    }

    pub fn difference(&self) -> &Classifier {
        &self.classifier
    }

    /// Whether `P + u` and `Q + w` intersect (touching counts; the witness
    /// tells grazing contact apart).
    pub fn collide(&self, u: &Vec3, w: &Vec3, hint: Option<VertexId>) -> (bool, Witness) {
        let wit = self.classifier.classify(&(w - u), hint);
        (wit.placement != Placement::Outside, wit)
    }
}

/// Whether `P + u` and `Q + w` intersect, computing `P ⊕ (−Q)` unless
/// supplied in `cache`.
pub fn collide(
    p: &GaussianMap,
    q: &GaussianMap,
    u: &Vec3,
    w: &Vec3,
    cache: Option<&GaussianMap>,
) -> (bool, Witness) {
    let c = match cache {
        Some(m) => Collider::from_difference(m),
        None => Collider::new(p, q),
    };
    c.collide(u, w, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ratio;
    use crate::mesh::Mesh;

    fn v(x: i64, y: i64, z: i64) -> Vec3 {
        Vec3::from_ints(x, y, z)
    }

    fn box_mesh(lo: i64, hi: i64) -> Mesh {
        let (a, b) = (lo, hi);
        Mesh::from_ints(
            &[
                [a, a, a],
                [b, a, a],
                [b, b, a],
                [a, b, a],
                [a, a, b],
                [b, a, b],
                [b, b, b],
                [a, b, b],
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

    fn centered_cube() -> GaussianMap {
        // [−1, 1]³ as the sum of two copies of [−1/2, 1/2]³, scaled by 2 to
        // stay integral: [0,1]³ ⊕ [−1,0]³.
        let a = GaussianMap::build(&box_mesh(0, 1)).unwrap();
        let b = GaussianMap::build(&box_mesh(-1, 0)).unwrap();
        minkowski(&a, &b).unwrap()
    }

    #[test]
    fn cube_classification() {
        let c = Classifier::new(&centered_cube());
        assert_eq!(c.classify(&v(0, 0, 0), None).placement, Placement::Inside);
        let w = c.classify(&v(1, 0, 0), None);
        assert_eq!(w.placement, Placement::OnBoundary);
        assert_eq!(w.normal, v(1, 0, 0));
        assert_eq!(c.classify(&v(2, 0, 0), None).placement, Placement::Outside);
        // Through a corner: the smallest incident normal is reported.
        let w = c.classify(&v(1, 1, 1), None);
        assert_eq!(w.placement, Placement::OnBoundary);
        assert_eq!(w.normal, v(0, 0, 1));
    }

    #[test]
    fn separation_of_box() {
        let m = centered_cube();
        assert_eq!(separation_sq(&m, &v(3, 0, 0)), ratio(4, 1));
        assert_eq!(separation_sq(&m, &v(3, 3, 0)), ratio(8, 1));
        assert_eq!(separation_sq(&m, &v(3, 3, 3)), ratio(12, 1));
        assert_eq!(separation_sq(&m, &v(0, 0, 0)), ratio(0, 1));
    }

    #[test]
    fn penetration_of_box() {
        let m = centered_cube();
        assert_eq!(
            directional_penetration(&m, &v(0, 0, 0), &v(1, 0, 0)).unwrap(),
            (ratio(1, 1), v(1, 0, 0))
        );
        assert_eq!(
            directional_penetration(&m, &v(0, 0, 0), &v(1, 1, 0)).unwrap(),
            (ratio(1, 1), v(1, 1, 0))
        );
        assert_eq!(
            directional_penetration(&m, &v(1, 0, 0), &v(1, 0, 0))
                .unwrap()
                .0,
            ratio(0, 1)
        );
        assert_eq!(
            directional_penetration(&m, &v(5, 0, 0), &v(1, 0, 0)),
            Err(ProximityError::PointOutside)
        );
    }

    #[test]
    fn unit_cubes_graze() {
        let p = GaussianMap::build(&box_mesh(0, 1)).unwrap();
        let c = Collider::new(&p, &p);
        let (hit, w) = c.collide(&v(0, 0, 0), &v(1, 0, 0), None);
        assert!(hit);
        assert_eq!(w.placement, Placement::OnBoundary);
        let (hit, _) = c.collide(&v(0, 0, 0), &v(2, 0, 0), None);
        assert!(!hit);
        let (hit, w) = c.collide(&v(0, 0, 0), &v(0, 0, 0), None);
        assert!(hit);
        assert_eq!(w.placement, Placement::Inside);
    }

    #[test]
    fn edge_length_two_cubes_graze_at_two() {
        let p = GaussianMap::build(&box_mesh(-1, 1)).unwrap();
        let c = Collider::new(&p, &p);
        let (hit, w) = c.collide(&v(0, 0, 0), &v(2, 0, 0), None);
        assert!(hit);
        assert_eq!(w.placement, Placement::OnBoundary);
        let beyond = Vec3::new(ratio(2_000_001, 1_000_000), ratio(0, 1), ratio(0, 1));
        assert_eq!(c.collide(&v(0, 0, 0), &beyond, None).1.placement, Placement::Outside);
    }

    #[test]
    fn hints_do_not_change_answers() {
        let c = Classifier::new(&centered_cube());
        let s = Vec3::new(ratio(3, 2), ratio(1, 3), ratio(-1, 5));
        let plain = c.classify(&s, None);
        for h in c.map().facet_vertices() {
            assert_eq!(c.classify(&s, Some(h)), plain);
        }
    }
}
