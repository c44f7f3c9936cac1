//! Command-line behaviour: outputs, exit codes and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("geomink-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_geomink"));
    c.args(args);
    if let Some(t) = threads {
        c.env("GEOMINK_THREADS", t);
    }
    c.output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gmap_counts_of_the_octahedron() {
    let o = run(&["gmap", path(&data("octahedron.eoff")), "--counts"], None);
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["schema"], 1);
    assert_eq!(
        (
            r["counts"]["V"].as_u64(),
            r["counts"]["HE"].as_u64(),
            r["counts"]["F"].as_u64()
        ),
        (Some(10), Some(28), Some(6))
    );
}

#[test]
fn gmap_dump_is_the_arrangement_format() {
    let o = run(&["gmap", path(&data("cube.eoff")), "--dump"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let parsed = geomink::arrangement::parse_dump(&text).unwrap();
    assert_eq!(parsed.num_faces(), 8);
}

#[test]
fn malformed_input_exits_with_2_and_a_line_number() {
    let bad = scratch("bad.eoff");
    std::fs::write(
        &bad,
        "EOFF\n4 4\n0 0 0\n1 0 0\n0 1 0\n0 0 3/0\n0 2 1\n0 3 2\n0 1 3\n1 2 3\n",
    )
    .unwrap();
    let o = run(&["gmap", path(&bad)], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));
    let o = run(&["gmap", path(&scratch("missing.eoff"))], None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["maxgen", "--facets", "3", "--facets", "4"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn minkowski_writes_an_exact_mesh() {
    let out = scratch("ico2.eoff");
    let o = run(
        &[
            "minkowski",
            path(&data("icosahedron.eoff")),
            path(&data("icosahedron.eoff")),
            "-o",
            path(&out),
            "--stats",
        ],
        None,
    );
    assert!(o.status.success());
    assert_eq!(json(&o)["primal"]["F"], 20);
    let sum = geomink::io::parse_mesh(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let ico = geomink::io::parse_mesh(&std::fs::read_to_string(data("icosahedron.eoff")).unwrap())
        .unwrap();
    let doubled = geomink::mesh::Mesh::new(
        ico.vertices
            .iter()
            .map(|v| v.scale(&geomink::kernel::rat(2)))
            .collect(),
        ico.facets.clone(),
    );
    assert!(geomink::hull::meshes_equivalent(&sum, &doubled));
}

#[test]
fn collide_reports_grazing_contact() {
    let cube = data("cube.eoff");
    let o = run(
        &[
            "collide",
            path(&cube),
            path(&cube),
            "--u",
            "0,0,0",
            "--w",
            "1,0,0",
        ],
        None,
    );
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["placement"], "ON_BOUNDARY");
    assert_eq!(r["collide"], true);
    let o = run(
        &[
            "collide",
            path(&cube),
            path(&cube),
            "--u",
            "0,0,0",
            "--w",
            "1000001/1000000,0,0",
        ],
        None,
    );
    assert_eq!(json(&o)["placement"], "OUTSIDE");
}

#[test]
fn hull_round_trips_through_files() {
    let out = scratch("octa.eoff");
    let o = run(
        &["hull", path(&data("octahedron.pts")), "-o", path(&out)],
        None,
    );
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        std::fs::read_to_string(data("octahedron.eoff")).unwrap()
    );
}

#[test]
fn maxgen_reports_the_bound() {
    let o = run(
        &["maxgen", "--facets", "5", "--facets", "7", "--verify"],
        None,
    );
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(
        (
            r["facetCount"].as_u64(),
            r["bound"].as_u64(),
            r["status"].as_str()
        ),
        (Some(58), Some(58), Some("PASS"))
    );
    let o = run(&["maxgen", "--facets", "6", "--facets", "6"], None);
    assert_eq!(json(&o)["bound"], 4 * 36 - 9 * 12 + 26);
}

#[test]
fn partition_output_is_independent_of_thread_count() {
    let mut outputs = Vec::new();
    for threads in ["0", "1", "4"] {
        let o = run(
            &["partition", path(&data("split_star.asm")), "--mode", "all"],
            Some(threads),
        );
        assert!(o.status.success());
        outputs.push(o.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let r: Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(r["solutionCount"], 8);
}

#[test]
fn partition_modes_and_reports() {
    let report = scratch("peg.json");
    let o = run(
        &[
            "partition",
            path(&data("peg_in_hole.asm")),
            "--mode",
            "first",
            "--report",
            path(&report),
        ],
        None,
    );
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["solutionCount"], 1);
    assert_eq!(r["solutions"][0]["cell"], "vertex");
    let o = run(&["partition", path(&data("hollow_box.asm"))], None);
    assert!(o.status.success());
    assert_eq!(json(&o)["result"], "INTERLOCKED");
    let o = run(&["partition", path(&data("hollow_box.asm"))], Some("many"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn overlapping_parts_are_rejected() {
    let mut a = geomink::scenes::separated_cubes(1);
    a.parts[1].subparts[0] = a.parts[0].subparts[0].translated(&geomink::kernel::Vec3::new(
        geomink::kernel::ratio(1, 2),
        geomink::kernel::rat(0),
        geomink::kernel::rat(0),
    ));
    let scene = scratch("overlap.asm");
    std::fs::write(&scene, geomink::io::format_scene(&a)).unwrap();
    let o = run(&["partition", path(&scene)], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("overlap"));
}

#[test]
fn shipped_scenes_match_the_builders() {
    use geomink::io::format_scene;
    use geomink::scenes;
    for (name, a) in [
        ("split_star.asm", scenes::split_star()),
        ("hollow_box.asm", scenes::hollow_box()),
        ("peg_in_hole.asm", scenes::peg_in_hole()),
        ("separated_cubes.asm", scenes::separated_cubes(1)),
    ] {
        assert_eq!(
            std::fs::read_to_string(data(name)).unwrap(),
            format_scene(&a),
            "{name}"
        );
    }
}
