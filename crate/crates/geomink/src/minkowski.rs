//! Minkowski sums of convex polytopes by overlaying Gaussian maps.
//!
//! The Gaussian map of `P ⊕ Q` is the overlay of the maps of `P` and `Q`;
//! the face covering both a face `v` of `P`'s map and a face `w` of `Q`'s map
//! is decorated with `v + w`.

use crate::arrangement::{overlay_traced, Cell, OverlayCallbacks, OverlayProvenance};
use crate::gaussian_map::{GaussianMap, GaussianMapError};
use crate::kernel::Vec3;

/// Overlay callbacks for Minkowski sums: only faces carry payloads.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumCallbacks;

impl OverlayCallbacks<(), (), Vec3, (), (), Vec3> for SumCallbacks {
    type V = ();
    type E = ();
    type F = Vec3;
    fn vertex_vertex(&self, _: &(), _: &()) {}
    fn vertex_edge(&self, _: &(), _: &()) {}
    fn edge_vertex(&self, _: &(), _: &()) {}
    fn vertex_face(&self, _: &(), _: &Vec3) {}
    fn face_vertex(&self, _: &Vec3, _: &()) {}
    fn edge_edge_crossing(&self, _: &(), _: &()) {}
    fn edge_edge_overlap(&self, _: &(), _: &()) {}
    fn edge_face(&self, _: &(), _: &Vec3) {}
    fn face_edge(&self, _: &Vec3, _: &()) {}
    fn face_face(&self, a: &Vec3, b: &Vec3) -> Vec3 {
        a + b
    }
}

/// Feature counts of a sum and of its summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumStats {
    /// Facet counts of the summands.
    pub summand_facets: Vec<usize>,
    pub facets: usize,
    pub edges: usize,
    pub vertices: usize,
    /// Facets of the sum not parallel to a facet of a summand (crossings of
    /// the summands' Gaussian-map edges).
    pub crossings: usize,
    /// Whether features of the summands' maps coincide (a facet normal lies
    /// on the other map's vertex or edge, or two edges overlap). The crossing
    /// count is then only a lower bound.
    pub degenerate: bool,
    /// Whether `2 Σ e_i + 4 v_x = 2 e` holds.
    pub degree_identity_holds: bool,
}

/// `P ⊕ Q` from the maps of `P` and `Q`.
pub fn minkowski(g1: &GaussianMap, g2: &GaussianMap) -> Result<GaussianMap, GaussianMapError> {
    Ok(minkowski_traced(g1, g2)?.0)
}

/// [`minkowski`], also returning the overlay provenance.
pub fn minkowski_traced(
    g1: &GaussianMap,
    g2: &GaussianMap,
) -> Result<(GaussianMap, OverlayProvenance), GaussianMapError> {
    let (arr, prov) = overlay_traced(&g1.arr, &g2.arr, &SumCallbacks)?;
    Ok((GaussianMap { arr }, prov))
}

/// `P₁ ⊕ … ⊕ P_k`, folding left to right.
pub fn minkowski_many(gs: &[GaussianMap]) -> Result<GaussianMap, GaussianMapError> {
    let (first, rest) = gs
        .split_first()
        .ok_or_else(|| GaussianMapError::InvalidGaussianMap("empty sum".into()))?;
    let mut acc = first.clone();
    for g in rest {
        acc = minkowski(&acc, g)?;
    }
    Ok(acc)
}

/// Count the features of a two-summand sum and check the degree identity.
pub fn stats(
    out: &GaussianMap,
    prov: &OverlayProvenance,
    g1: &GaussianMap,
    g2: &GaussianMap,
) -> SumStats {
    let (m1, m2) = (g1.facet_count(), g2.facet_count());
    let facets = out.facet_count();
    let edges = out.edge_count();
    let crossings = facets.saturating_sub(m1 + m2);
    let real = |g: &GaussianMap, c: &Cell| match c {
        Cell::Vertex(v) => !g.is_artificial(*v),
        Cell::Edge(_) => true,
        Cell::Face(_) => false,
    };
    let is_vertex =
        |g: &GaussianMap, c: &Cell| matches!(c, Cell::Vertex(v) if !g.is_artificial(*v));
    let coincident = prov
        .vertices
        .iter()
        .any(|(a, b)| (is_vertex(g1, a) && real(g2, b)) || (is_vertex(g2, b) && real(g1, a)));
    let degenerate = coincident || prov.overlapping_edges() > 0;
    let degree_identity_holds =
        2 * (g1.edge_count() + g2.edge_count()) + 4 * crossings == 2 * edges;
    SumStats {
        summand_facets: vec![m1, m2],
        facets,
        edges,
        vertices: out.vertex_count(),
        crossings,
        degenerate,
        degree_identity_holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::{convex_hull_3, meshes_equivalent, pairwise_sums};
    use crate::mesh::Mesh;

    fn tetrahedron() -> Mesh {
        Mesh::from_ints(
            &[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
            &[&[0, 2, 1], &[0, 1, 3], &[0, 3, 2], &[1, 2, 3]],
        )
    }

    fn cube(s: i64) -> Mesh {
        Mesh::from_ints(
            &[
                [0, 0, 0],
                [s, 0, 0],
                [s, s, 0],
                [0, s, 0],
                [0, 0, s],
                [s, 0, s],
                [s, s, s],
                [0, s, s],
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
    fn tetrahedron_plus_itself_is_doubled() {
        let g = GaussianMap::build(&tetrahedron()).unwrap();
        let s = minkowski(&g, &g).unwrap();
        let m = s.primal_mesh().unwrap();
        assert_eq!(m.facets.len(), 4);
        let mut vs = m.vertices.clone();
        vs.sort();
        let mut want: Vec<Vec3> = tetrahedron().vertices.iter().map(|v| v + v).collect();
        want.sort();
        assert_eq!(vs, want);
    }

    #[test]
    fn three_unit_cubes_make_a_cube_of_side_three() {
        let g = GaussianMap::build(&cube(1)).unwrap();
        let s = minkowski_many(&[g.clone(), g.clone(), g]).unwrap();
        let m = s.primal_mesh().unwrap();
        assert!(meshes_equivalent(&m, &cube(3)));
    }

    #[test]
    fn tetrahedron_plus_reflection_matches_hull() {
        let t = tetrahedron();
        let g = GaussianMap::build(&t).unwrap();
        let (s, prov) = minkowski_traced(&g, &g.reflect()).unwrap();
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        let neg = Mesh::new(t.vertices.iter().map(|v| -v).collect(), vec![]);
        let oracle = convex_hull_3(&pairwise_sums(&t, &neg)).unwrap();
        assert!(meshes_equivalent(&s.primal_mesh().unwrap(), &oracle));
        let st = stats(&s, &prov, &g, &g.reflect());
        assert_eq!(st.facets, oracle.facets.len());
    }
}
