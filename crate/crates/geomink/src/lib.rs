//! Exact geometry on the sphere of directions.
//!
//! The crate builds arrangements of geodesic arcs on the unit sphere with
//! exact rational predicates, represents convex polytopes by their Gaussian
//! maps, and uses map overlay to compute Minkowski sums, proximity queries,
//! worst-case sum constructions and assembly partitions by translation.

pub mod arrangement;
pub mod assembly;
pub mod extremal;
pub mod gaussian_map;
pub mod hull;
pub mod io;
pub mod kernel;
pub mod mesh;
pub mod minkowski;
pub mod proximity;
pub mod random;
pub mod scenes;
pub mod sphere;
