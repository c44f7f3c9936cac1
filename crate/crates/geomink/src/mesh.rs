//! Exact convex polyhedral meshes.

use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::kernel::{Rational, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
}

fn invalid(msg: impl Into<String>) -> MeshError {
    MeshError::InvalidMesh(msg.into())
}

/// A closed polyhedral surface: vertices and facets given as index cycles,
/// counterclockwise when viewed from outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub facets: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn new(vertices: Vec<Vec3>, facets: Vec<Vec<usize>>) -> Self {
        Mesh { vertices, facets }
    }

    /// Build from integer coordinates (convenient in tests and scenes).
    pub fn from_ints(vertices: &[[i64; 3]], facets: &[&[usize]]) -> Self {
        Mesh {
            vertices: vertices
                .iter()
                .map(|v| Vec3::from_ints(v[0], v[1], v[2]))
                .collect(),
            facets: facets.iter().map(|f| f.to_vec()).collect(),
        }
    }

    /// Outward normal of facet `f`: the cross product of the first two
    /// non-collinear consecutive boundary edges (not normalized).
    pub fn facet_normal(&self, f: usize) -> Option<Vec3> {
        let c = &self.facets[f];
        let k = c.len();
        for i in 0..k {
            let a = &self.vertices[c[i]];
            let b = &self.vertices[c[(i + 1) % k]];
            let d = &self.vertices[c[(i + 2) % k]];
            let n = (b - a).cross(&(d - b));
            if !n.is_zero() {
                return Some(n);
            }
        }
        None
    }

    /// Undirected edges `(a, b)` with `a < b`, in first-appearance order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for f in &self.facets {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                let key = (a.min(b), a.max(b));
                if seen.insert(key) {
                    out.push(key);
                }
            }
        }
        out
    }

    /// For every directed boundary edge `a → b`, the facet containing it.
    pub fn directed_edge_facets(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::new();
        for (fi, f) in self.facets.iter().enumerate() {
            for i in 0..f.len() {
                m.insert((f[i], f[(i + 1) % f.len()]), fi);
            }
        }
        m
    }

    /// Check that the mesh bounds a convex polytope with outward-oriented,
    /// planar facets, no two adjacent facets coplanar, and every vertex a
    /// corner (shared by at least three facets).
    pub fn validate(&self) -> Result<(), MeshError> {
        let n = self.vertices.len();
        if n < 4 {
            return Err(invalid("fewer than four vertices"));
        }
        if self.facets.len() < 4 {
            return Err(invalid("fewer than four facets"));
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut facets_at = vec![0usize; n];
        for (fi, f) in self.facets.iter().enumerate() {
            if f.len() < 3 {
                return Err(invalid(format!("facet {fi} has fewer than three vertices")));
            }
            let mut uniq = HashSet::new();
            for &v in f {
                if v >= n {
                    return Err(invalid(format!("facet {fi} refers to missing vertex {v}")));
                }
                if !uniq.insert(v) {
                    return Err(invalid(format!("facet {fi} repeats vertex {v}")));
                }
                facets_at[v] += 1;
            }
            for i in 0..f.len() {
                if directed.insert((f[i], f[(i + 1) % f.len()]), fi).is_some() {
                    return Err(invalid(format!(
                        "directed edge {}→{} used twice",
                        f[i],
                        f[(i + 1) % f.len()]
                    )));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(invalid(format!("edge {a}–{b} has only one incident facet")));
            }
        }
        if let Some(v) = facets_at.iter().position(|&c| c < 3) {
            return Err(invalid(format!(
                "vertex {v} is not a corner of at least three facets"
            )));
        }
        let e = directed.len() / 2;
        if n as i64 - e as i64 + self.facets.len() as i64 != 2 {
            return Err(invalid("surface is not a topological sphere"));
        }
        let mut normals = Vec::with_capacity(self.facets.len());
        for (fi, f) in self.facets.iter().enumerate() {
            let nrm = self
                .facet_normal(fi)
                .ok_or_else(|| invalid(format!("facet {fi} is degenerate")))?;
            let p0 = &self.vertices[f[0]];
            for &v in f {
                if !nrm.dot(&(&self.vertices[v] - p0)).is_zero() {
                    return Err(invalid(format!("facet {fi} is not planar")));
                }
            }
            for (vi, v) in self.vertices.iter().enumerate() {
                let s: Rational = nrm.dot(&(v - p0));
                if s.is_positive() {
                    return Err(invalid(format!(
                        "vertex {vi} lies outside facet {fi} (not convex or inward facet)"
                    )));
                }
            }
            normals.push(nrm);
        }
        for (&(a, b), &f) in &directed {
            let g = directed[&(b, a)];
            if normals[f].cross(&normals[g]).is_zero() {
                return Err(invalid(format!("adjacent facets {f} and {g} are coplanar")));
            }
        }
        Ok(())
    }

    /// Translate every vertex by `t`.
    pub fn translated(&self, t: &Vec3) -> Mesh {
        Mesh {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
            facets: self.facets.clone(),
        }
    }

    /// Apply a linear map given by rows (must preserve orientation for the
    /// result to stay outward-facing).
    pub fn transformed(&self, rows: &[Vec3; 3]) -> Mesh {
        Mesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vec3::new(rows[0].dot(v), rows[1].dot(v), rows[2].dot(v)))
                .collect(),
            facets: self.facets.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cube() -> Mesh {
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
    fn cube_is_valid() {
        assert_eq!(cube().validate(), Ok(()));
        assert_eq!(cube().edges().len(), 12);
    }

    #[test]
    fn inverted_facets_are_rejected() {
        let mut m = cube();
        for f in &mut m.facets {
            f.reverse();
        }
        assert!(m.validate().is_err());
    }

    #[test]
    fn non_planar_facet_is_rejected() {
        let mut m = cube();
        m.vertices[6] = Vec3::from_ints(2, 2, 2);
        assert!(m.validate().is_err());
    }
}
