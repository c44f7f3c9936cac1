//! Structural invariants: arrangement validity, order independence of the
//! sweep, and strongly connected components against reachability.

use geomink::arrangement::sweep_build;
use geomink::assembly::{analyze, tarjan_scc, Dbg, PartitionOptions};
use geomink::gaussian_map::GaussianMap;
use geomink::random::{random_dirpoint, random_polytope};
use geomink::scenes;
use geomink::sphere::GeodesicArc;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_arcs(rng: &mut ChaCha8Rng, n: usize) -> Vec<GeodesicArc> {
    let mut arcs = Vec::new();
    while arcs.len() < n {
        let (s, t) = (random_dirpoint(rng, 4), random_dirpoint(rng, 4));
        if let Ok(a) = GeodesicArc::new(s, t) {
            arcs.push(a);
        }
    }
    arcs
}

/// Vertex points, and edges as sorted endpoint pairs plus supporting circle.
fn signature<V, E, F>(
    a: &geomink::arrangement::Arrangement<V, E, F>,
) -> (Vec<String>, Vec<String>) {
    let mut vs: Vec<String> = a
        .vertex_ids()
        .map(|v| format!("{:?}", a.point(v)))
        .collect();
    vs.sort();
    let mut es: Vec<String> = a
        .edge_ids()
        .map(|e| {
            let h = e.halfedge();
            let mut ends = [
                format!("{:?}", a.point(a.origin(h))),
                format!("{:?}", a.point(a.target(h))),
            ];
            ends.sort();
            format!("{ends:?}")
        })
        .collect();
    es.sort();
    (vs, es)
}

#[test]
fn sweep_is_permutation_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for set in 0..10 {
        let mut arcs = random_arcs(&mut rng, 6 + set);
        let reference = sweep_build(&arcs).unwrap();
        assert!(reference.validate().is_ok(), "{:?}", reference.validate());
        let sig = signature(&reference);
        for _ in 0..3 {
            arcs.shuffle(&mut rng);
            // Reversing some inputs must not matter either.
            let input: Vec<GeodesicArc> = arcs
                .iter()
                .map(|a| {
                    if rand::Rng::gen_bool(&mut rng, 0.5) {
                        a.reversed()
                    } else {
                        a.clone()
                    }
                })
                .collect();
            let other = sweep_build(&input).unwrap();
            assert!(other.validate().is_ok());
            assert_eq!(other.counts(), reference.counts(), "set {set}");
            assert_eq!(signature(&other), sig, "set {set}");
        }
    }
}

#[test]
fn gaussian_maps_and_motion_spaces_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let g = GaussianMap::build(&random_polytope(&mut rng, 12, 20)).unwrap();
        assert!(g.arr.validate().is_ok());
        assert!(g.validate().is_empty());
    }
    for a in [
        scenes::split_star(),
        scenes::hollow_box(),
        scenes::peg_in_hole(),
        scenes::separated_cubes(2),
    ] {
        let an = analyze(&a, PartitionOptions::default()).unwrap();
        for q in an.regions.values() {
            assert!(q.validate().is_ok(), "{:?}", q.validate());
        }
        assert!(
            an.motion.arr.validate().is_ok(),
            "{:?}",
            an.motion.arr.validate()
        );
        assert!(an.motion.monotonicity_violations().is_empty());
    }
}

/// Components from the transitive closure: `i ~ j` iff each reaches the other.
fn components_by_reachability(n: usize, adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || adj[i][j]).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if comps.iter().any(|c| c.contains(&i)) {
            continue;
        }
        comps.push((i..n).filter(|&j| reach[i][j] && reach[j][i]).collect());
    }
    comps
}

proptest! {
    #[test]
    fn tarjan_matches_reachability(n in 1usize..=8, bits in proptest::collection::vec(any::<bool>(), 64)) {
        let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && bits[i * 8 + j]).collect()).collect();
        prop_assert_eq!(tarjan_scc(n, |i, j| adj[i][j]), components_by_reachability(n, &adj));
    }
}

#[test]
fn motion_space_dbgs_match_reachability() {
    let an = analyze(&scenes::split_star(), PartitionOptions::default()).unwrap();
    let mut dbgs: Vec<&Dbg> = an
        .motion
        .arr
        .cells()
        .into_iter()
        .map(|c| an.motion.dbg(c))
        .collect();
    dbgs.dedup();
    for d in dbgs {
        let n = d.len();
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i != j && d.has(i, j)).collect())
            .collect();
        assert_eq!(d.components(), components_by_reachability(n, &adj));
    }
}
