//! The central projection of a polytope, compared with a direct test of
//! whether the open ray `{t·d : t > 0}` meets the polytope's interior.

use geomink::assembly::project_polytope;
use geomink::gaussian_map::GaussianMap;
use geomink::kernel::{rat, Rational, Vec3};
use geomink::mesh::Mesh;
use geomink::random::{random_direction, random_polytope};
use geomink::sphere::DirPoint;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Feasibility of `t·⟨n, d⟩ < b` for all facets over `t ∈ (0, ∞)`.
fn ray_pierces_interior(m: &Mesh, d: &Vec3) -> bool {
    let mut lo = rat(0);
    let mut hi: Option<Rational> = None;
    for f in 0..m.facets.len() {
        let n = m.facet_normal(f).unwrap();
        let b = n.dot(&m.vertices[m.facets[f][0]]);
        let a = n.dot(d);
        if a.is_zero() {
            if !b.is_positive() {
                return false;
            }
        } else if a.is_positive() {
            let t = b / a;
            hi = Some(match hi {
                Some(h) if h < t => h,
                _ => t,
            });
        } else {
            let t = b / a;
            if t > lo {
                lo = t;
            }
        }
    }
    hi.is_none_or(|h| lo < h)
}

fn centroid(pts: &[&Vec3]) -> Vec3 {
    let k = Rational::from_integer(pts.len().into());
    let mut s = Vec3::zero();
    for p in pts {
        s = &s + *p;
    }
    s.scale(&(rat(1) / k))
}

/// A polytope positioned so that the origin is outside, inside, at a
/// vertex, inside an edge or inside a facet.
fn positioned(rng: &mut ChaCha8Rng) -> Mesh {
    let m = random_polytope(rng, 8, 6);
    let anchor = match rng.gen_range(0..5) {
        0 => random_direction(rng, 9),
        1 => centroid(&m.vertices.iter().collect::<Vec<_>>()),
        2 => m.vertices[rng.gen_range(0..m.vertices.len())].clone(),
        3 => {
            let (a, b) = m.edges()[rng.gen_range(0..m.edges().len())];
            centroid(&[&m.vertices[a], &m.vertices[b]])
        }
        _ => {
            let f = &m.facets[rng.gen_range(0..m.facets.len())];
            centroid(&f.iter().map(|&i| &m.vertices[i]).collect::<Vec<_>>())
        }
    };
    m.translated(&anchor.scale(&rat(-1)))
}

/// A random direction, or one aimed at a vertex or along an edge, which
/// hits the projection's boundary far more often.
fn probe_direction(rng: &mut ChaCha8Rng, m: &Mesh) -> Vec3 {
    loop {
        let d = match rng.gen_range(0..3) {
            0 => random_direction(rng, 5),
            1 => m.vertices[rng.gen_range(0..m.vertices.len())].clone(),
            _ => {
                let (a, b) = m.edges()[rng.gen_range(0..m.edges().len())];
                &m.vertices[b] - &m.vertices[a]
            }
        };
        if !d.is_zero() {
            return d;
        }
    }
}

#[test]
fn projection_agrees_with_ray_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let (mut probes, mut hits) = (0, 0);
    while probes < 500 {
        let m = positioned(&mut rng);
        let region = project_polytope(&GaussianMap::build(&m).unwrap());
        assert!(region.validate().is_ok());
        for _ in 0..10 {
            let d = probe_direction(&mut rng, &m);
            let p = DirPoint::from_ivec(d.to_ivec()).unwrap();
            let expected = ray_pierces_interior(&m, &d);
            assert_eq!(
                *region.label_at(&p),
                expected,
                "direction {d:?} for mesh {m:?}"
            );
            probes += 1;
            hits += expected as usize;
        }
    }
    // Both outcomes must be well represented.
    assert!(hits > 50 && hits < 450, "{hits} of {probes} probes pierce");
}
