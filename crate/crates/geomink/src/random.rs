//! Seeded random inputs for tests, benchmarks and self-checks.

use rand::Rng;

use crate::hull::convex_hull_3;
use crate::kernel::{ratio, Vec3};
use crate::mesh::Mesh;
use crate::sphere::DirPoint;

/// The hull of `n` random points with integer coordinates in `[-r, r]`
/// (retrying until the points span space).
pub fn random_polytope<R: Rng>(rng: &mut R, n: usize, r: i64) -> Mesh {
    loop {
        let pts: Vec<Vec3> = (0..n.max(4))
            .map(|_| {
                Vec3::from_ints(
                    rng.gen_range(-r..=r),
                    rng.gen_range(-r..=r),
                    rng.gen_range(-r..=r),
                )
            })
            .collect();
        if let Ok(m) = convex_hull_3(&pts) {
            return m;
        }
    }
}

/// A random nonzero integer direction with coordinates in `[-r, r]`.
pub fn random_direction<R: Rng>(rng: &mut R, r: i64) -> Vec3 {
    loop {
        let d = Vec3::from_ints(
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
            rng.gen_range(-r..=r),
        );
        if !d.is_zero() {
            return d;
        }
    }
}

/// A random point of the sphere, as a direction.
pub fn random_dirpoint<R: Rng>(rng: &mut R, r: i64) -> DirPoint {
    DirPoint::from_ivec(random_direction(rng, r).to_ivec()).expect("nonzero")
}

/// A random rational vector with coordinates `k / den`, `|k| ≤ r·den`.
pub fn random_rational_point<R: Rng>(rng: &mut R, r: i64, den: i64) -> Vec3 {
    let mut c = || ratio(rng.gen_range(-r * den..=r * den), den);
    Vec3::new(c(), c(), c())
}
