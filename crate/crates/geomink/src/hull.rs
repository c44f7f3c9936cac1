//! Exact incremental 3D convex hull, used as an independent oracle.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arrangement::UnionFind;
use crate::kernel::{IVec3, Rational, Sign, Vec3};
use crate::mesh::Mesh;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("points do not span three dimensions")]
    DegenerateInput,
}

const SHUFFLE_SEED: u64 = 0x5eed_4a11;

fn orient(a: &Vec3, b: &Vec3, c: &Vec3, p: &Vec3) -> Sign {
    let n = (b - a).cross(&(c - a));
    Sign::of(&n.dot(&(p - a)))
}

/// Whether `p`, lying in the plane of triangle `abc`, is strictly outside it.
fn outside_in_plane(a: &Vec3, b: &Vec3, c: &Vec3, p: &Vec3) -> bool {
    let n = (b - a).cross(&(c - a));
    [(a, b), (b, c), (c, a)]
        .iter()
        .any(|(u, v)| Sign::of(&n.dot(&(*v - *u).cross(&(p - *u)))) == Sign::Negative)
}

/// The convex hull of `points`, with coplanar triangles merged into maximal
/// facets and only extreme points kept as vertices.
pub fn convex_hull_3(points: &[Vec3]) -> Result<Mesh, HullError> {
    let pts: Vec<Vec3> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = pts.len();
    if n < 4 {
        return Err(HullError::DegenerateInput);
    }
    // Initial tetrahedron.
    let i0 = 0;
    let i1 = (1..n)
        .find(|&i| pts[i] != pts[i0])
        .ok_or(HullError::DegenerateInput)?;
    let i2 = (1..n)
        .find(|&i| !(&pts[i1] - &pts[i0]).cross(&(&pts[i] - &pts[i0])).is_zero())
        .ok_or(HullError::DegenerateInput)?;
    let i3 = (1..n)
        .find(|&i| orient(&pts[i0], &pts[i1], &pts[i2], &pts[i]) != Sign::Zero)
        .ok_or(HullError::DegenerateInput)?;
    let mut tris: Vec<Option<[usize; 3]>> = Vec::new();
    let mut edge_tri: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |t: [usize; 3],
               tris: &mut Vec<Option<[usize; 3]>>,
               edge_tri: &mut HashMap<(usize, usize), usize>| {
        let id = tris.len();
        for k in 0..3 {
            edge_tri.insert((t[k], t[(k + 1) % 3]), id);
        }
        tris.push(Some(t));
    };
    let (a, b, c) = if orient(&pts[i0], &pts[i1], &pts[i2], &pts[i3]) == Sign::Negative {
        (i0, i1, i2)
    } else {
        (i0, i2, i1)
    };
    // Faces oriented so that the fourth point is below each of them.
    add([a, b, c], &mut tris, &mut edge_tri);
    add([a, i3, b], &mut tris, &mut edge_tri);
    add([b, i3, c], &mut tris, &mut edge_tri);
    add([c, i3, a], &mut tris, &mut edge_tri);

    let mut order: Vec<usize> = (0..n).filter(|&i| ![i0, i1, i2, i3].contains(&i)).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    for p in order {
        let pp = &pts[p];
        let mut visible = vec![false; tris.len()];
        let mut strictly = false;
        for (ti, t) in tris.iter().enumerate() {
            if let Some([x, y, z]) = t {
                match orient(&pts[*x], &pts[*y], &pts[*z], pp) {
                    Sign::Positive => {
                        visible[ti] = true;
                        strictly = true;
                    }
                    Sign::Zero => visible[ti] = outside_in_plane(&pts[*x], &pts[*y], &pts[*z], pp),
                    Sign::Negative => {}
                }
            }
        }
        if !strictly {
            continue;
        }
        let mut horizon = Vec::new();
        for (ti, t) in tris.iter().enumerate() {
            if !visible[ti] {
                continue;
            }
            let t = t.expect("live");
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                let other = edge_tri[&(v, u)];
                if !visible[other] {
                    horizon.push((u, v));
                }
            }
        }
        for (ti, v) in visible.iter().enumerate() {
            if *v {
                let t = tris[ti].take().expect("live");
                for k in 0..3 {
                    let key = (t[k], t[(k + 1) % 3]);
                    if edge_tri.get(&key) == Some(&ti) {
                        edge_tri.remove(&key);
                    }
                }
            }
        }
        for (u, v) in horizon {
            add([u, v, p], &mut tris, &mut edge_tri);
        }
    }

    // Merge coplanar neighbours into facets.
    let live: Vec<(usize, [usize; 3])> = tris
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.map(|t| (i, t)))
        .collect();
    let plane = |t: &[usize; 3]| -> (IVec3, Rational) {
        let nrm = (&pts[t[1]] - &pts[t[0]]).cross(&(&pts[t[2]] - &pts[t[0]]));
        let ni = IVec3::from_vec3(&nrm);
        let off = ni.to_vec3().dot(&pts[t[0]]);
        (ni, off)
    };
    let mut uf = UnionFind::new(tris.len());
    for &(i, t) in &live {
        for k in 0..3 {
            let j = edge_tri[&(t[(k + 1) % 3], t[k])];
            if plane(&t) == plane(&tris[j].expect("live")) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(i, _) in &live {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut roots: Vec<usize> = groups.keys().copied().collect();
    roots.sort();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for r in roots {
        let members = &groups[&r];
        let inside: std::collections::HashSet<(usize, usize)> = members
            .iter()
            .flat_map(|&i| {
                let t = tris[i].expect("live");
                (0..3).map(move |k| (t[k], t[(k + 1) % 3]))
            })
            .collect();
        let boundary: HashMap<usize, usize> = inside
            .iter()
            .filter(|(u, v)| !inside.contains(&(*v, *u)))
            .map(|&(u, v)| (u, v))
            .collect();
        let start = *boundary.keys().min().expect("facet has a boundary");
        let mut cyc = vec![start];
        let mut cur = boundary[&start];
        while cur != start {
            cyc.push(cur);
            cur = boundary[&cur];
        }
        // Drop points in the middle of straight runs.
        loop {
            let k = cyc.len();
            let pos = (0..k).find(|&i| {
                let (a, b, c) = (
                    &pts[cyc[(i + k - 1) % k]],
                    &pts[cyc[i]],
                    &pts[cyc[(i + 1) % k]],
                );
                (b - a).cross(&(c - b)).is_zero()
            });
            match pos {
                Some(i) => {
                    cyc.remove(i);
                }
                None => break,
            }
        }
        facets.push(cyc);
    }

    // Keep referenced points only, in canonical order.
    let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let remap: HashMap<usize, usize> = used
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let vertices: Vec<Vec3> = used.iter().map(|&i| pts[i].clone()).collect();
    let facets = facets
        .into_iter()
        .map(|f| f.into_iter().map(|i| remap[&i]).collect())
        .collect();
    Ok(Mesh { vertices, facets })
}

/// `{v + w}` over all vertex pairs.
pub fn pairwise_sums(a: &Mesh, b: &Mesh) -> Vec<Vec3> {
    a.vertices
        .iter()
        .flat_map(|v| b.vertices.iter().map(move |w| v + w))
        .collect()
}

/// Canonical supporting plane of each facet: primitive normal and offset.
fn planes(m: &Mesh) -> BTreeSet<(IVec3, Rational)> {
    (0..m.facets.len())
        .filter_map(|f| {
            let n = IVec3::from_vec3(&m.facet_normal(f)?);
            let off = n.to_vec3().dot(&m.vertices[m.facets[f][0]]);
            Some((n, off))
        })
        .collect()
}

/// Same vertex set and same set of facet supporting planes.
pub fn meshes_equivalent(a: &Mesh, b: &Mesh) -> bool {
    let va: BTreeSet<&Vec3> = a.vertices.iter().collect();
    let vb: BTreeSet<&Vec3> = b.vertices.iter().collect();
    va == vb && planes(a) == planes(b)
}
