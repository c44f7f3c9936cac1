//! Structural self-check of an arrangement.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{Arrangement, FaceId, HalfedgeId, VertexId};
use crate::kernel::Sign;
use crate::sphere::{compare_v, make_arc, tangent_angle_cmp, BoundaryClass};

/// The list of violated invariants; empty when the arrangement is sound.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V, E, F> Arrangement<V, E, F> {
    /// Check every DCEL, geometric and bookkeeping invariant.
    pub fn validate(&self) -> ValidationReport {
        let mut bad = Vec::new();
        if self.halfedges.len() != 2 * self.edges.len() {
            bad.push(format!(
                "{} halfedges for {} edges",
                self.halfedges.len(),
                self.edges.len()
            ));
            return ValidationReport { violations: bad };
        }
        let nh = self.halfedges.len();
        let in_range_h = |h: HalfedgeId| h.0 < nh;
        for h in self.halfedge_ids() {
            let he = &self.halfedges[h.0];
            if !in_range_h(he.next)
                || !in_range_h(he.prev)
                || he.origin.0 >= self.vertices.len()
                || he.face.0 >= self.faces.len()
            {
                bad.push(format!("halfedge {} has a dangling reference", h.0));
                return ValidationReport { violations: bad };
            }
        }
        for h in self.halfedge_ids() {
            if h.twin() == h || h.twin().twin() != h {
                bad.push(format!("halfedge {} has a broken twin", h.0));
            }
            if self.prev(self.next(h)) != h {
                bad.push(format!("prev(next({})) != {}", h.0, h.0));
            }
            if self.origin(self.next(h)) != self.target(h) {
                bad.push(format!("next({}) does not start at its target", h.0));
            }
            if self.incident_face(self.next(h)) != self.incident_face(h) {
                bad.push(format!("next({}) lies in a different face", h.0));
            }
            let arc = self.arc(h);
            if &arc.source != self.point(self.origin(h))
                || &arc.target != self.point(self.target(h))
            {
                bad.push(format!(
                    "arc of halfedge {} does not match its endpoints",
                    h.0
                ));
            }
        }
        if !bad.is_empty() {
            return ValidationReport { violations: bad };
        }

        // Vertices, rotations and isolated points.
        for v in self.vertex_ids() {
            let vx = &self.vertices[v.0];
            match (vx.out, vx.isolated_in) {
                (Some(h), None) => {
                    if self.origin(h) != v {
                        bad.push(format!("vertex {} has a foreign outgoing halfedge", v.0));
                        continue;
                    }
                    self.check_rotation(v, &mut bad);
                }
                (None, Some(f)) => {
                    if f.0 >= self.faces.len() || !self.faces[f.0].isolated.contains(&v) {
                        bad.push(format!("isolated vertex {} is not listed by its face", v.0));
                    }
                }
                _ => bad.push(format!(
                    "vertex {} is neither isolated nor incident to edges",
                    v.0
                )),
            }
        }
        let mut out_count = vec![0usize; self.vertices.len()];
        for h in self.halfedge_ids() {
            out_count[self.origin(h).0] += 1;
        }
        for v in self.vertex_ids() {
            if self.vertices[v.0].out.is_some() && self.degree(v) != out_count[v.0] {
                bad.push(format!(
                    "rotation at vertex {} misses outgoing halfedges",
                    v.0
                ));
            }
        }
        for f in self.face_ids() {
            for &v in &self.faces[f.0].isolated {
                if self.vertices[v.0].isolated_in != Some(f) {
                    bad.push(format!(
                        "face {} lists vertex {} wrongly as isolated",
                        f.0, v.0
                    ));
                }
            }
        }

        // Every boundary cycle is listed exactly once, by its own face.
        let mut cycle_of = vec![usize::MAX; nh];
        let mut cycles = 0;
        for h in self.halfedge_ids() {
            if cycle_of[h.0] != usize::MAX {
                continue;
            }
            for g in self.cycle(h) {
                cycle_of[g.0] = cycles;
            }
            cycles += 1;
        }
        let mut listed: HashMap<usize, FaceId> = HashMap::new();
        for f in self.face_ids() {
            for &r in &self.faces[f.0].ccbs {
                if self.incident_face(r) != f {
                    bad.push(format!("face {} lists a cycle of another face", f.0));
                }
                if listed.insert(cycle_of[r.0], f).is_some() {
                    bad.push(format!("cycle through halfedge {} is listed twice", r.0));
                }
            }
        }
        if listed.len() != cycles {
            bad.push(format!(
                "{} cycles exist but {} are listed",
                cycles,
                listed.len()
            ));
        }
        for f in self.face_ids().skip(1) {
            if self.faces[f.0].ccbs.is_empty() {
                bad.push(format!("face {} has no boundary", f.0));
            }
        }

        // Euler: V - E + F = 1 + C.
        let (v, e, f, c) = (
            self.vertices.len() as i64,
            self.edges.len() as i64,
            self.faces.len() as i64,
            self.num_components() as i64,
        );
        if v - e + f != 1 + c {
            bad.push(format!("Euler characteristic: {v} - {e} + {f} != 1 + {c}"));
        }

        // Registry and curve decomposition.
        for vid in self.vertex_ids() {
            let p = self.point(vid);
            if self.index.get(p) != Some(&vid) {
                bad.push(format!("vertex {} is missing from the point index", vid.0));
            }
            let ok = match p.boundary_class() {
                BoundaryClass::NorthPole => self.north == Some(vid),
                BoundaryClass::SouthPole => self.south == Some(vid),
                BoundaryClass::OnIdentification => self.seam.contains(&vid),
                BoundaryClass::Interior => true,
            };
            if !ok {
                bad.push(format!("boundary vertex {} is not registered", vid.0));
            }
        }
        if self.index.len() != self.vertices.len() {
            bad.push("point index has stale entries".to_string());
        }
        for w in self.seam.windows(2) {
            if compare_v(self.point(w[0]), self.point(w[1])) != Sign::Negative {
                bad.push("identification vertices are not sorted".to_string());
            }
        }
        for (i, edge) in self.edges.iter().enumerate() {
            match make_arc(&edge.arc.source, &edge.arc.target) {
                Ok(pieces) if pieces.len() == 1 && pieces[0].normal == edge.arc.normal => {}
                _ => bad.push(format!("edge {i} is not a simple arc off the boundary")),
            }
        }
        ValidationReport { violations: bad }
    }

    fn check_rotation(&self, v: VertexId, bad: &mut Vec<String>) {
        let ring = self.outgoing_ccw(v);
        if ring.len() < 2 {
            return;
        }
        let p = self.point(v).dir().clone();
        let t: Vec<_> = ring.iter().map(|&g| self.out_tangent(g)).collect();
        for i in 1..ring.len() {
            let prev = if i == 1 { None } else { Some(&t[i - 1]) };
            let ordered = match prev {
                None => tangent_angle_cmp(&p, &t[0], &t[0], &t[1]) == Ordering::Less,
                Some(a) => tangent_angle_cmp(&p, &t[0], a, &t[i]) == Ordering::Less,
            };
            if !ordered {
                bad.push(format!(
                    "rotation at vertex {} is not counterclockwise",
                    v.0
                ));
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::new_arrangement;
    use crate::sphere::{DirPoint, GeodesicArc};

    #[test]
    fn fresh_arrangement_is_valid() {
        let a = new_arrangement();
        assert!(a.validate().is_ok());
        assert_eq!(a.counts(), (0, 0, 1));
    }

    #[test]
    fn corrupted_link_is_reported() {
        let mut a = new_arrangement();
        let arc = GeodesicArc::new(
            DirPoint::from_ints(1, 0, 0).unwrap(),
            DirPoint::from_ints(1, 1, 0).unwrap(),
        )
        .unwrap();
        a.insert_disjoint_arc(arc, (None, None), ()).unwrap();
        a.halfedges[0].next = HalfedgeId(0);
        assert!(!a.validate().is_ok());
    }
}
