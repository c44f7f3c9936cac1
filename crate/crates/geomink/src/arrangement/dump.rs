//! Plain-text debug format for arrangements.
//!
//! ```text
//! arrangement <V> <E> <F>
//! v <x> <y> <z>                          one line per vertex
//! e <source> <target> <nx> <ny> <nz>     one line per edge (halfedges 2e, 2e+1)
//! f <id> ccbs <k> iso <m> | <label>      one block per face, followed by
//! c <h0> <h1> ...                        k boundary cycles (halfedge ids)
//! i <v0> <v1> ...                        and, if m > 0, its isolated vertices
//! ```
//!
//! Dumping a parsed dump reproduces the text exactly.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use super::{Arrangement, Edge, Face, FaceId, Halfedge, HalfedgeId, VertexId};
use crate::kernel::IVec3;
use crate::sphere::{DirPoint, GeodesicArc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DumpError {
    pub line: usize,
    pub message: String,
}

impl<V, E, F> Arrangement<V, E, F> {
    /// Dump with empty face labels.
    pub fn dump(&self) -> String {
        self.dump_with(|_, _| String::new())
    }

    /// Dump, labelling each face with `label`.
    pub fn dump_with(&self, label: impl Fn(FaceId, &F) -> String) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "arrangement {} {} {}",
            self.num_vertices(),
            self.num_edges(),
            self.num_faces()
        );
        for v in &self.vertices {
            let d = v.point.dir();
            let _ = writeln!(s, "v {} {} {}", d.x, d.y, d.z);
        }
        for e in self.edge_ids() {
            let h = e.halfedge();
            let n = &self.edges[e.0].arc.normal;
            let _ = writeln!(
                s,
                "e {} {} {} {} {}",
                self.origin(h).0,
                self.target(h).0,
                n.x,
                n.y,
                n.z
            );
        }
        for f in self.face_ids() {
            let face = &self.faces[f.0];
            let _ = writeln!(
                s,
                "f {} ccbs {} iso {} | {}",
                f.0,
                face.ccbs.len(),
                face.isolated.len(),
                label(f, &face.data)
            );
            for &r in &face.ccbs {
                let ids: Vec<String> = self.cycle(r).iter().map(|h| h.0.to_string()).collect();
                let _ = writeln!(s, "c {}", ids.join(" "));
            }
            if !face.isolated.is_empty() {
                let ids: Vec<String> = face.isolated.iter().map(|v| v.0.to_string()).collect();
                let _ = writeln!(s, "i {}", ids.join(" "));
            }
        }
        s
    }
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self) -> Result<&'a str, DumpError> {
        loop {
            match self.iter.next() {
                Some((i, l)) => {
                    self.line = i + 1;
                    if !l.trim().is_empty() {
                        return Ok(l);
                    }
                }
                None => return Err(self.err("unexpected end of input")),
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> DumpError {
        DumpError {
            line: self.line,
            message: message.into(),
        }
    }

    fn fields(&mut self, tag: &str) -> Result<Vec<&'a str>, DumpError> {
        let l = self.next_line()?;
        let mut it = l.split_whitespace();
        if it.next() != Some(tag) {
            return Err(self.err(format!("expected a '{tag}' line")));
        }
        Ok(it.collect())
    }

    fn int<T: std::str::FromStr>(&self, s: &str) -> Result<T, DumpError> {
        s.parse()
            .map_err(|_| self.err(format!("bad integer '{s}'")))
    }
}

/// Parse a dump back into an arrangement labelled with the face labels.
pub fn parse_dump(text: &str) -> Result<Arrangement<(), (), String>, DumpError> {
    let mut lines = Lines {
        iter: text.lines().enumerate(),
        line: 0,
    };
    let head = lines.fields("arrangement")?;
    if head.len() != 3 {
        return Err(lines.err("expected vertex, edge and face counts"));
    }
    let nv: usize = lines.int(head[0])?;
    let ne: usize = lines.int(head[1])?;
    let nf: usize = lines.int(head[2])?;

    let mut arr: Arrangement<(), (), String> = Arrangement::new(String::new());
    arr.faces.clear();
    for _ in 0..nv {
        let f = lines.fields("v")?;
        if f.len() != 3 {
            return Err(lines.err("a vertex needs three coordinates"));
        }
        let c: Vec<BigInt> = f.iter().map(|s| lines.int(s)).collect::<Result<_, _>>()?;
        let p = DirPoint::from_ivec(IVec3::new(c[0].clone(), c[1].clone(), c[2].clone()))
            .map_err(|e| lines.err(e.to_string()))?;
        if arr.index.contains_key(&p) {
            return Err(lines.err("duplicate vertex"));
        }
        arr.push_vertex(p, ());
    }
    for _ in 0..ne {
        let f = lines.fields("e")?;
        if f.len() != 5 {
            return Err(lines.err("an edge needs two vertices and a normal"));
        }
        let (s, t): (usize, usize) = (lines.int(f[0])?, lines.int(f[1])?);
        if s >= nv || t >= nv {
            return Err(lines.err("edge endpoint out of range"));
        }
        let n: Vec<BigInt> = f[2..]
            .iter()
            .map(|x| lines.int(x))
            .collect::<Result<_, _>>()?;
        let arc = GeodesicArc::new(arr.vertices[s].point.clone(), arr.vertices[t].point.clone())
            .map_err(|e| lines.err(e.to_string()))?;
        if arc.normal != IVec3::new(n[0].clone(), n[1].clone(), n[2].clone()) {
            return Err(lines.err("edge normal does not match its endpoints"));
        }
        arr.edges.push(Edge { arc, data: () });
        for origin in [s, t] {
            arr.halfedges.push(Halfedge {
                next: HalfedgeId(usize::MAX),
                prev: HalfedgeId(usize::MAX),
                origin: VertexId(origin),
                face: FaceId(usize::MAX),
            });
        }
    }
    let nh = 2 * ne;
    for fi in 0..nf {
        let l = lines.next_line()?;
        let (head, label) = l
            .split_once('|')
            .ok_or_else(|| lines.err("face line lacks a label separator"))?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        if parts.len() != 6 || parts[0] != "f" || parts[2] != "ccbs" || parts[4] != "iso" {
            return Err(lines.err("malformed face line"));
        }
        if lines.int::<usize>(parts[1])? != fi {
            return Err(lines.err("faces must be listed in order"));
        }
        let k: usize = lines.int(parts[3])?;
        let m: usize = lines.int(parts[5])?;
        let f = FaceId(fi);
        let mut face = Face {
            data: label.trim().to_string(),
            ccbs: Vec::new(),
            isolated: Vec::new(),
        };
        for _ in 0..k {
            let ids = lines.fields("c")?;
            let hs: Vec<usize> = ids.iter().map(|s| lines.int(s)).collect::<Result<_, _>>()?;
            if hs.is_empty() || hs.iter().any(|&h| h >= nh) {
                return Err(lines.err("bad halfedge in cycle"));
            }
            for (i, &h) in hs.iter().enumerate() {
                let n = hs[(i + 1) % hs.len()];
                if arr.halfedges[h].face.0 != usize::MAX {
                    return Err(lines.err(format!("halfedge {h} appears twice")));
                }
                arr.halfedges[h].next = HalfedgeId(n);
                arr.halfedges[n].prev = HalfedgeId(h);
                arr.halfedges[h].face = f;
            }
            face.ccbs.push(HalfedgeId(hs[0]));
        }
        if m > 0 {
            let ids = lines.fields("i")?;
            if ids.len() != m {
                return Err(lines.err("isolated vertex count mismatch"));
            }
            for s in ids {
                let v: usize = lines.int(s)?;
                if v >= nv {
                    return Err(lines.err("isolated vertex out of range"));
                }
                face.isolated.push(VertexId(v));
                arr.vertices[v].isolated_in = Some(f);
            }
        }
        arr.faces.push(face);
    }
    if arr.halfedges.iter().any(|h| h.face.0 == usize::MAX) {
        return Err(lines.err("some halfedges belong to no cycle"));
    }
    for h in 0..nh {
        let o = arr.halfedges[h].origin.0;
        if arr.vertices[o].out.is_none() {
            arr.vertices[o].out = Some(HalfedgeId(h));
        }
    }
    Ok(arr)
}
