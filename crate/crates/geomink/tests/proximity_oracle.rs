//! Walk-based classification agrees with a brute-force halfspace test.

use geomink::gaussian_map::GaussianMap;
use geomink::kernel::{Rational, Vec3};
use geomink::mesh::Mesh;
use geomink::proximity::{Classifier, Collider, Placement};
use geomink::random::{random_polytope, random_rational_point};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn brute(mesh: &Mesh, s: &Vec3) -> Placement {
    let mut on = false;
    for f in 0..mesh.facets.len() {
        let n = mesh.facet_normal(f).unwrap();
        let d: Rational = n.dot(&(s - &mesh.vertices[mesh.facets[f][0]]));
        if d > Rational::zero() {
            return Placement::Outside;
        }
        on |= d.is_zero();
    }
    if on {
        Placement::OnBoundary
    } else {
        Placement::Inside
    }
}

#[test]
fn classification_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mesh = random_polytope(&mut rng, 20, 6);
    let g = GaussianMap::build(&mesh).unwrap();
    let c = Classifier::new(&g);
    let mut counts = [0usize; 3];
    let mut hint = None;
    for i in 0..1000 {
        // Mix integer points (often on the boundary) with fractional ones.
        let s = if i % 2 == 0 {
            random_rational_point(&mut rng, 7, 1)
        } else {
            random_rational_point(&mut rng, 14, 2)
        };
        let w = c.classify(&s, None);
        assert_eq!(w.placement, brute(&mesh, &s), "at {s}");
        assert_eq!(c.classify(&s, hint).placement, w.placement);
        hint = Some(w.facet);
        counts[w.placement as usize] += 1;
    }
    assert!(counts.iter().all(|&k| k > 0), "{counts:?}");
}

#[test]
fn collision_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = GaussianMap::build(&random_polytope(&mut rng, 8, 5)).unwrap();
    let q = GaussianMap::build(&random_polytope(&mut rng, 8, 5)).unwrap();
    let pq = Collider::new(&p, &q);
    let qp = Collider::new(&q, &p);
    for _ in 0..200 {
        let u = random_rational_point(&mut rng, 10, 1);
        let w = random_rational_point(&mut rng, 10, 1);
        let (a, wa) = pq.collide(&u, &w, None);
        let (b, wb) = qp.collide(&w, &u, None);
        assert_eq!(a, b);
        assert_eq!(wa.placement, wb.placement);
    }
}

#[test]
fn penetration_exit_lies_on_the_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mesh = random_polytope(&mut rng, 15, 8);
    let c = Classifier::new(&GaussianMap::build(&mesh).unwrap());
    let s = c.center().clone();
    for _ in 0..100 {
        let r = random_rational_point(&mut rng, 5, 1);
        if r.is_zero() {
            continue;
        }
        let (alpha, exit) = c.directional_penetration(&s, &r).unwrap();
        assert!(alpha > Rational::zero());
        assert_eq!(brute(&mesh, &exit), Placement::OnBoundary);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn separation_is_zero_exactly_when_not_outside(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = random_polytope(&mut rng, 8, 4);
        let c = Classifier::new(&GaussianMap::build(&mesh).unwrap());
        let s = random_rational_point(&mut rng, 6, 1);
        let d = c.separation_sq(&s);
        prop_assert_eq!(d.is_zero(), brute(&mesh, &s) != Placement::Outside);
        // The distance never exceeds the distance to any vertex.
        for v in &mesh.vertices {
            prop_assert!(d <= (&s - v).norm_sq());
        }
    }
}
