//! Exact text formats.
//!
//! * Meshes (`.eoff`): the token `EOFF`, a line `V F`, `V` lines of three
//!   rationals (`p/q` or integers), then `F` lines listing a facet's vertex
//!   indices counterclockwise as seen from outside.
//! * Point sets (`.pts`): a count `N`, then `N` lines of three rationals.
//! * Assembly scenes (`.asm`): a part count, then per part a line
//!   `NAME K` followed by `K` inline mesh blocks.
//!
//! Blank lines and text after `#` are ignored. Errors carry the 1-based
//! line number they refer to.

use std::fmt::Write as _;

use thiserror::Error;

use crate::assembly::{Assembly, AssemblyError, Part};
use crate::kernel::{format_rational, parse_rational, Vec3};
use crate::mesh::{Mesh, MeshError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh starting at line {line}: {source}")]
    InvalidMesh {
        line: usize,
        #[source]
        source: MeshError,
    },
    #[error(transparent)]
    InvalidAssembly(#[from] AssemblyError),
}

/// Meaningful lines of a text file, with their 1-based numbers.
struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                (
                    i + 1,
                    l.split('#')
                        .next()
                        .unwrap_or("")
                        .split_whitespace()
                        .collect::<Vec<_>>(),
                )
            })
            .filter(|(_, t)| !t.is_empty())
            .collect();
        let last_line = text.lines().count().max(1);
        Lines {
            items,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), IoError> {
        let item = self
            .items
            .get(self.pos)
            .cloned()
            .ok_or_else(|| IoError::Parse {
                line: self.last_line,
                message: format!("unexpected end of input, expected {what}"),
            })?;
        self.pos += 1;
        Ok(item)
    }

    fn finish(&self) -> Result<(), IoError> {
        match self.items.get(self.pos) {
            Some((line, _)) => Err(IoError::Parse {
                line: *line,
                message: "trailing content".into(),
            }),
            None => Ok(()),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

fn expect_len(line: usize, toks: &[&str], n: usize, what: &str) -> Result<(), IoError> {
    if toks.len() == n {
        Ok(())
    } else {
        Err(parse_err(
            line,
            format!("expected {what} ({n} fields), found {} fields", toks.len()),
        ))
    }
}

fn parse_count(line: usize, tok: &str) -> Result<usize, IoError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid count {tok:?}")))
}

fn parse_point(line: usize, toks: &[&str]) -> Result<Vec3, IoError> {
    expect_len(line, toks, 3, "three coordinates")?;
    let c = toks
        .iter()
        .map(|t| parse_rational(t).map_err(|e| parse_err(line, e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let [x, y, z]: [_; 3] = c.try_into().expect("three coordinates");
    Ok(Vec3::new(x, y, z))
}

fn read_mesh_block(lines: &mut Lines<'_>) -> Result<Mesh, IoError> {
    let (start, header) = lines.next("EOFF header")?;
    if header != ["EOFF"] {
        return Err(parse_err(
            start,
            format!("expected EOFF header, found {:?}", header.join(" ")),
        ));
    }
    let (line, counts) = lines.next("vertex and facet counts")?;
    expect_len(line, &counts, 2, "vertex and facet counts")?;
    let (nv, nf) = (parse_count(line, counts[0])?, parse_count(line, counts[1])?);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, toks) = lines.next("a vertex")?;
        vertices.push(parse_point(line, &toks)?);
    }
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, toks) = lines.next("a facet")?;
        let f = toks
            .iter()
            .map(|t| match t.parse::<usize>() {
                Ok(i) if i < nv => Ok(i),
                Ok(i) => Err(parse_err(
                    line,
                    format!("vertex index {i} out of range (V = {nv})"),
                )),
                Err(_) => Err(parse_err(line, format!("invalid vertex index {t:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if f.len() < 3 {
            return Err(parse_err(line, "a facet needs at least three vertices"));
        }
        facets.push(f);
    }
    let mesh = Mesh::new(vertices, facets);
    mesh.validate().map_err(|source| IoError::InvalidMesh {
        line: start,
        source,
    })?;
    Ok(mesh)
}

/// Parse and validate a mesh.
pub fn parse_mesh(text: &str) -> Result<Mesh, IoError> {
    let mut lines = Lines::new(text);
    let m = read_mesh_block(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

/// Canonical text form of a mesh; [`parse_mesh`] reads it back exactly.
pub fn format_mesh(m: &Mesh) -> String {
    let mut s = String::new();
    writeln!(s, "EOFF").unwrap();
    writeln!(s, "{} {}", m.vertices.len(), m.facets.len()).unwrap();
    for v in &m.vertices {
        let [x, y, z] = v.coords();
        writeln!(
            s,
            "{} {} {}",
            format_rational(x),
            format_rational(y),
            format_rational(z)
        )
        .unwrap();
    }
    for f in &m.facets {
        let idx: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        writeln!(s, "{}", idx.join(" ")).unwrap();
    }
    s
}

/// Parse a point set.
pub fn parse_points(text: &str) -> Result<Vec<Vec3>, IoError> {
    let mut lines = Lines::new(text);
    let (line, toks) = lines.next("point count")?;
    expect_len(line, &toks, 1, "point count")?;
    let n = parse_count(line, toks[0])?;
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, toks) = lines.next("a point")?;
        pts.push(parse_point(line, &toks)?);
    }
    lines.finish()?;
    Ok(pts)
}

/// Canonical text form of a point set.
pub fn format_points(pts: &[Vec3]) -> String {
    let mut s = format!("{}\n", pts.len());
    for p in pts {
        let [x, y, z] = p.coords();
        writeln!(
            s,
            "{} {} {}",
            format_rational(x),
            format_rational(y),
            format_rational(z)
        )
        .unwrap();
    }
    s
}

/// Parse and validate an assembly scene.
pub fn parse_scene(text: &str) -> Result<Assembly, IoError> {
    let mut lines = Lines::new(text);
    let (line, toks) = lines.next("part count")?;
    expect_len(line, &toks, 1, "part count")?;
    let n = parse_count(line, toks[0])?;
    let mut parts = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, toks) = lines.next("part header")?;
        expect_len(line, &toks, 2, "part name and sub-part count")?;
        let k = parse_count(line, toks[1])?;
        let subparts = (0..k)
            .map(|_| read_mesh_block(&mut lines))
            .collect::<Result<Vec<_>, _>>()?;
        parts.push(Part {
            name: toks[0].to_string(),
            subparts,
        });
    }
    lines.finish()?;
    let a = Assembly::new(parts);
    a.validate()?;
    Ok(a)
}

/// Canonical text form of an assembly scene.
pub fn format_scene(a: &Assembly) -> String {
    let mut s = format!("{}\n", a.parts.len());
    for p in &a.parts {
        writeln!(s, "{} {}", p.name, p.subparts.len()).unwrap();
        for m in &p.subparts {
            s.push_str(&format_mesh(m));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes;

    const TETRA: &str = "EOFF\n4 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1/2\n0 2 1\n0 3 2\n0 1 3\n1 2 3\n";

    #[test]
    fn mesh_round_trip_is_exact() {
        let m = parse_mesh(TETRA).unwrap();
        assert_eq!(format_mesh(&m), TETRA);
    }

    #[test]
    fn zero_denominator_reports_its_line() {
        let bad = TETRA.replace("0 0 1/2", "0 0 3/0");
        match parse_mesh(&bad) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!(
            "# a tetrahedron\n\n{}",
            TETRA.replace("4 4\n", "4 4 # counts\n")
        );
        assert_eq!(parse_mesh(&text).unwrap(), parse_mesh(TETRA).unwrap());
    }

    #[test]
    fn non_convex_mesh_names_the_facet() {
        // Flip one facet's orientation inward.
        let bad = TETRA.replace("1 2 3\n", "3 2 1\n");
        match parse_mesh(&bad) {
            Err(IoError::InvalidMesh { line: 1, source }) => {
                assert!(source.to_string().contains("facet") || source.to_string().contains("edge"))
            }
            other => panic!("unexpected {other:?}"),
        }
        // A reflex configuration: vertex pushed inward past a facet.
        let octa = "EOFF\n6 8\n1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1/10\n\
                    0 2 4\n2 1 4\n1 3 4\n3 0 4\n2 0 5\n1 2 5\n3 1 5\n0 3 5\n";
        assert!(parse_mesh(octa).is_ok());
        let dent = octa.replace("0 0 -1/10", "0 0 1/10");
        let err = parse_mesh(&dent).unwrap_err().to_string();
        assert!(err.contains("facet"), "{err}");
    }

    #[test]
    fn truncated_input_is_an_error() {
        assert!(matches!(
            parse_mesh("EOFF\n4 4\n0 0 0\n"),
            Err(IoError::Parse { .. })
        ));
        assert!(matches!(
            parse_mesh(&format!("{TETRA}extra\n")),
            Err(IoError::Parse { line: 11, .. })
        ));
    }

    #[test]
    fn points_round_trip() {
        let pts = vec![
            Vec3::from_ints(1, 2, 3),
            Vec3::new(
                crate::kernel::ratio(1, 3),
                crate::kernel::rat(0),
                crate::kernel::ratio(-7, 2),
            ),
        ];
        assert_eq!(parse_points(&format_points(&pts)).unwrap(), pts);
    }

    #[test]
    fn scene_round_trip() {
        let a = scenes::peg_in_hole();
        let text = format_scene(&a);
        assert_eq!(parse_scene(&text).unwrap(), a);
    }
}
