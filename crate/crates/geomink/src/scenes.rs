//! Ready-made assemblies used by examples and tests.

use crate::assembly::{Assembly, Part};
use crate::hull::convex_hull_3;
use crate::kernel::Vec3;
use crate::mesh::Mesh;

/// A signed coordinate axis: `(index, ±1)`.
type Axis = (usize, i64);

/// Name, core axis and the two stellating pyramids of a Split Star part.
type StarPart = (&'static str, Axis, [(Axis, Axis); 2]);

fn unit(a: Axis) -> [i64; 3] {
    let mut v = [0; 3];
    v[a.0] = a.1;
    v
}

fn add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [i64; 3], k: i64) -> [i64; 3] {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn hull(points: &[[i64; 3]]) -> Mesh {
    let pts: Vec<Vec3> = points
        .iter()
        .map(|p| Vec3::from_ints(p[0], p[1], p[2]))
        .collect();
    convex_hull_3(&pts).expect("scene polytopes are full-dimensional")
}

/// Axis-aligned box `[lo, hi]`.
pub fn box_mesh(lo: [i64; 3], hi: [i64; 3]) -> Mesh {
    let mut pts = Vec::with_capacity(8);
    for &x in &[lo[0], hi[0]] {
        for &y in &[lo[1], hi[1]] {
            for &z in &[lo[2], hi[2]] {
                pts.push([x, y, z]);
            }
        }
    }
    hull(&pts)
}

/// The core piece on the side of `a`: the pyramid from the origin over
/// the face of `[−1, 1]³` facing `a`, capped by the pyramid from that face
/// to `2a`.
fn octant_pyramid(a: Axis) -> Mesh {
    let apex = scale(unit(a), 2);
    let mid = unit(a);
    let (b, c) = others(a.0);
    let mut pts = vec![[0, 0, 0], apex];
    for sb in [-1, 1] {
        for sc in [-1, 1] {
            pts.push(add(mid, add(unit((b, sb)), unit((c, sc)))));
        }
    }
    hull(&pts)
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// A stellating tetrahedron over the octahedron edge between `2a` and
/// `2b`, reaching out to `2a + 2b`.
fn stel(a: Axis, b: Axis) -> Mesh {
    let aa = scale(unit(a), 2);
    let bb = scale(unit(b), 2);
    let m = add(unit(a), unit(b));
    let c = unit((3 - a.0 - b.0, 1));
    hull(&[add(aa, bb), aa, bb, add(m, c), add(m, scale(c, -1))])
}

/// The "Split Star": a stellated octahedron cut into six parts, one per
/// signed axis, each made of three convex sub-parts. Part order is
/// R (+z), G (−z), P (+y), B (−y), Y (+x), T (−x). No part can move alone,
/// but eight vertex directions `(±1, ±1, ±1)` each free three parts.
pub fn split_star() -> Assembly {
    let (x, y, z) = (0, 1, 2);
    let layout: [StarPart; 6] = [
        ("R", (z, 1), [((y, 1), (z, 1)), ((z, 1), (y, -1))]),
        ("G", (z, -1), [((y, 1), (z, -1)), ((y, -1), (z, -1))]),
        ("P", (y, 1), [((x, 1), (y, 1)), ((y, 1), (x, -1))]),
        ("B", (y, -1), [((x, 1), (y, -1)), ((x, -1), (y, -1))]),
        ("Y", (x, 1), [((x, 1), (z, 1)), ((x, 1), (z, -1))]),
        ("T", (x, -1), [((z, 1), (x, -1)), ((x, -1), (z, -1))]),
    ];
    let parts = layout
        .iter()
        .map(|(name, axis, stels)| Part {
            name: name.to_string(),
            subparts: vec![
                octant_pyramid(*axis),
                stel(stels[0].0, stels[0].1),
                stel(stels[1].0, stels[1].1),
            ],
        })
        .collect();
    Assembly::new(parts)
}

/// A closed box (outer `[−3, 3]³`, inner `[−2, 2]³`, as six slabs) around
/// the cube `[−1, 1]³`: interlocked.
pub fn hollow_box() -> Assembly {
    let slabs = vec![
        box_mesh([-3, -3, 2], [3, 3, 3]),
        box_mesh([-3, -3, -3], [3, 3, -2]),
        box_mesh([-3, 2, -2], [3, 3, 2]),
        box_mesh([-3, -3, -2], [3, -2, 2]),
        box_mesh([2, -2, -2], [3, 2, 2]),
        box_mesh([-3, -2, -2], [-2, 2, 2]),
    ];
    Assembly::new(vec![
        Part {
            name: "box".into(),
            subparts: slabs,
        },
        Part {
            name: "cube".into(),
            subparts: vec![box_mesh([-1, -1, -1], [1, 1, 1])],
        },
    ])
}

/// Unit cubes at `[0,1]³` and `[gap+1, gap+2] × [0,1]²`.
pub fn separated_cubes(gap: i64) -> Assembly {
    Assembly::new(vec![
        Part {
            name: "a".into(),
            subparts: vec![box_mesh([0, 0, 0], [1, 1, 1])],
        },
        Part {
            name: "b".into(),
            subparts: vec![box_mesh([gap + 1, 0, 0], [gap + 2, 1, 1])],
        },
    ])
}

/// A square peg `[0,1]² × [0,2]` seated in a tight hole of a block made of
/// a floor and four walls. The peg can only be pulled out along `+z`.
pub fn peg_in_hole() -> Assembly {
    let block = vec![
        box_mesh([-1, -1, -1], [2, 2, 0]),
        box_mesh([-1, -1, 0], [0, 2, 1]),
        box_mesh([1, -1, 0], [2, 2, 1]),
        box_mesh([0, -1, 0], [1, 0, 1]),
        box_mesh([0, 1, 0], [1, 2, 1]),
    ];
    Assembly::new(vec![
        Part {
            name: "block".into(),
            subparts: block,
        },
        Part {
            name: "peg".into(),
            subparts: vec![box_mesh([0, 0, 0], [1, 1, 2])],
        },
    ])
}
