//! Minkowski sums agree with the convex hull of pairwise vertex sums.

use geomink::gaussian_map::GaussianMap;
use geomink::hull::{convex_hull_3, meshes_equivalent, pairwise_sums};
use geomink::minkowski::{minkowski, minkowski_traced, stats};
use geomink::random::{random_direction, random_polytope};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_pairs_match_the_hull_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        let a = random_polytope(&mut rng, 12, 20);
        let b = random_polytope(&mut rng, 12, 20);
        let ga = GaussianMap::build(&a).unwrap();
        let gb = GaussianMap::build(&b).unwrap();
        assert!(ga.validate().is_empty());
        let (s, prov) = minkowski_traced(&ga, &gb).unwrap();
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        let oracle = convex_hull_3(&pairwise_sums(&a, &b)).unwrap();
        let got = s.primal_mesh().unwrap();
        assert!(meshes_equivalent(&got, &oracle));
        let st = stats(&s, &prov, &ga, &gb);
        if !st.degenerate {
            assert!(st.degree_identity_holds, "{st:?}");
        }
        // Overlay face bound.
        assert!(s.arr.num_faces() <= ga.arr.num_faces() * gb.arr.num_faces());
    }
}

#[test]
fn support_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_polytope(&mut rng, 15, 30);
    let b = random_polytope(&mut rng, 15, 30);
    let ga = GaussianMap::build(&a).unwrap();
    let gb = GaussianMap::build(&b).unwrap();
    let s = minkowski(&ga, &gb).unwrap();
    for _ in 0..100 {
        let d = random_direction(&mut rng, 1000);
        let lhs = s.support(&d).unwrap().0;
        let rhs = ga.support(&d).unwrap().0 + gb.support(&d).unwrap().0;
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn sums_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_polytope(&mut rng, 10, 9);
    let b = random_polytope(&mut rng, 10, 9);
    let ga = GaussianMap::build(&a).unwrap();
    let gb = GaussianMap::build(&b).unwrap();
    let ab = minkowski(&ga, &gb).unwrap();
    let ba = minkowski(&gb, &ga).unwrap();
    assert_eq!(ab.counts(), ba.counts());
    assert!(meshes_equivalent(
        &ab.primal_mesh().unwrap(),
        &ba.primal_mesh().unwrap()
    ));
}
