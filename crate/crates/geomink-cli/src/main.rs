//! `geomink`: command-line front end for Gaussian maps, Minkowski sums,
//! collision queries, hulls, worst-case sums and assembly partitioning.
//!
//! Exit codes: 0 on success, 2 on invalid input or a failed verification,
//! 1 on internal errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use geomink::arrangement::Cell;
use geomink::assembly::{analyze, find_partitions, Mode, PartitionOptions, PartitionResult};
use geomink::extremal::{max_complexity, verify_bound, verify_many, BoundReport, ExtremalError};
use geomink::gaussian_map::GaussianMap;
use geomink::hull::convex_hull_3;
use geomink::io::{format_mesh, parse_mesh, parse_points, parse_scene, IoError};
use geomink::kernel::{format_rational, parse_rational, rational_to_f64, IVec3, Rational, Vec3};
use geomink::minkowski::{minkowski_traced, stats};
use geomink::proximity::Collider;

const SCHEMA: u32 = 1;
const APPROX_NOTE: &str =
    "approx fields are floating-point renderings derived from the exact values";

#[derive(Parser)]
#[command(
    name = "geomink",
    version,
    about = "Exact Gaussian maps, Minkowski sums and assembly partitioning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Gaussian map of a mesh.
    Gmap {
        input: PathBuf,
        /// Print (V, HE, F) of the map.
        #[arg(long)]
        counts: bool,
        /// Print the arrangement in the text dump format.
        #[arg(long)]
        dump: bool,
    },
    /// Minkowski sum of two convex polytopes.
    Minkowski {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Print feature counts of the sum and its summands.
        #[arg(long)]
        stats: bool,
    },
    /// Whether A translated by u and B translated by w intersect.
    Collide {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = parse_triple)]
        u: Vec3,
        #[arg(long, value_parser = parse_triple)]
        w: Vec3,
    },
    /// Convex hull of a point set.
    Hull {
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Worst-case Minkowski sums of polytopes with the given facet counts.
    Maxgen {
        #[arg(long = "facets", required = true)]
        facets: Vec<usize>,
        /// Build the witnesses and compare the sum's facet count with the bound.
        #[arg(long)]
        verify: bool,
    },
    /// Partition an assembly by a single translation.
    Partition {
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "first")]
        mode: ModeArg,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Compute every sub-part sum instead of reflecting half of them.
        #[arg(long)]
        no_reflection: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    First,
    All,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn parse_triple(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, found {s:?}"));
    }
    let c = parts
        .iter()
        .map(|p| parse_rational(p).map_err(|e| e.to_string()))
        .collect::<Result<Vec<Rational>, _>>()?;
    let [x, y, z]: [Rational; 3] = c.try_into().expect("three coordinates");
    Ok(Vec3::new(x, y, z))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn load_mesh(path: &Path) -> Result<geomink::mesh::Mesh, Failure> {
    parse_mesh(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<GaussianMap, Failure> {
    GaussianMap::build(&load_mesh(path)?).map_err(internal)
}

fn exact(r: &Rational) -> Value {
    json!(format_rational(r))
}

fn vec3_json(v: &Vec3) -> Value {
    let [x, y, z] = v.coords();
    json!({
        "exact": [exact(x), exact(y), exact(z)],
        "approx": [rational_to_f64(x), rational_to_f64(y), rational_to_f64(z)],
    })
}

fn direction_json(d: &IVec3) -> Value {
    vec3_json(&d.to_vec3())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_gmap(input: &Path, counts: bool, dump: bool) -> Result<(), Failure> {
    let g = load_map(input)?;
    let problems = g.validate();
    if dump {
        print!("{}", g.arr.dump());
    }
    if counts || !dump {
        let (v, he, f) = g.counts();
        print_json(&json!({
            "schema": SCHEMA,
            "counts": { "V": v, "HE": he, "F": f },
            "primal": { "facets": g.facet_count(), "edges": g.edge_count(), "vertices": g.vertex_count() },
            "valid": problems.is_empty(),
        }));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Internal(format!(
            "Gaussian map failed validation: {}",
            problems.join("; ")
        )))
    }
}

fn cmd_minkowski(
    a: &Path,
    b: &Path,
    output: Option<&Path>,
    show_stats: bool,
) -> Result<(), Failure> {
    let (ga, gb) = (load_map(a)?, load_map(b)?);
    let (sum, prov) = minkowski_traced(&ga, &gb).map_err(internal)?;
    let mesh = sum.primal_mesh().map_err(internal)?;
    if let Some(out) = output {
        write(out, &format_mesh(&mesh))?;
    }
    if show_stats {
        let st = stats(&sum, &prov, &ga, &gb);
        let (v, he, f) = sum.counts();
        print_json(&json!({
            "schema": SCHEMA,
            "primal": { "V": st.vertices, "E": st.edges, "F": st.facets },
            "summandFacets": st.summand_facets,
            "crossings": st.crossings,
            "degenerate": st.degenerate,
            "degreeIdentity": st.degree_identity_holds,
            "gaussianMap": { "V": v, "HE": he, "F": f },
        }));
    } else if output.is_none() {
        print!("{}", format_mesh(&mesh));
    }
    Ok(())
}

fn cmd_collide(a: &Path, b: &Path, u: &Vec3, w: &Vec3) -> Result<(), Failure> {
    let (ga, gb) = (load_map(a)?, load_map(b)?);
    let c = Collider::new(&ga, &gb);
    let (hit, wit) = c.collide(u, w, None);
    let sep = c.difference().separation_sq(&(w - u));
    print_json(&json!({
        "schema": SCHEMA,
        "collide": hit,
        "placement": wit.placement.as_str(),
        "witness": { "normal": vec3_json(&wit.normal), "offset": exact(&wit.offset) },
        "separationSquared": { "exact": exact(&sep), "approx": rational_to_f64(&sep) },
        "note": APPROX_NOTE,
    }));
    Ok(())
}

fn cmd_hull(input: &Path, output: &Path) -> Result<(), Failure> {
    let pts = parse_points(&read(input)?)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", input.display())))?;
    let mesh = convex_hull_3(&pts).map_err(|e| Failure::Invalid(e.to_string()))?;
    write(output, &format_mesh(&mesh))?;
    print_json(&json!({
        "schema": SCHEMA,
        "points": pts.len(),
        "hull": { "V": mesh.vertices.len(), "E": mesh.edges().len(), "F": mesh.facets.len() },
    }));
    Ok(())
}

fn bound_json(r: &BoundReport) -> Value {
    json!({
        "schema": SCHEMA,
        "facets": r.summand_facets,
        "facetCount": r.sum_facets,
        "bound": r.bound,
        "crossings": r.crossings,
        "params": r.params.iter().map(|p| json!({
            "facets": p.facets,
            "alphaDegrees": p.alpha_degrees(),
            "betaDegrees": p.beta_degrees(),
            "gammaDegrees": p.gamma_degrees(),
        })).collect::<Vec<_>>(),
        "status": if r.pass { "PASS" } else { "FAIL" },
        "note": APPROX_NOTE,
    })
}

fn cmd_maxgen(facets: &[usize], verify: bool) -> Result<(), Failure> {
    let extremal = |e: ExtremalError| match e {
        ExtremalError::InvalidFacetCount(_) => Failure::Invalid(e.to_string()),
        other => internal(other),
    };
    let bound = max_complexity(facets).map_err(extremal)?;
    if !verify {
        print_json(&json!({ "schema": SCHEMA, "facets": facets, "bound": bound }));
        return Ok(());
    }
    let report = if facets.len() == 2 {
        verify_bound(facets[0], facets[1])
    } else {
        verify_many(
            facets,
            geomink::extremal::WitnessParams::new(facets[0]).alpha_degrees(),
        )
    }
    .map_err(extremal)?;
    print_json(&bound_json(&report));
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Invalid(format!(
            "sum has {} facets, bound is {}",
            report.sum_facets, report.bound
        )))
    }
}

fn cell_kind(c: Cell) -> &'static str {
    match c {
        Cell::Vertex(_) => "vertex",
        Cell::Edge(_) => "edge",
        Cell::Face(_) => "face",
    }
}

fn cmd_partition(
    scene: &Path,
    mode: ModeArg,
    report: Option<&Path>,
    reflection: bool,
) -> Result<(), Failure> {
    let assembly = parse_scene(&read(scene)?)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", scene.display())))?;
    let names: Vec<String> = assembly.parts.iter().map(|p| p.name.clone()).collect();
    let analysis = analyze(&assembly, PartitionOptions { reflection }).map_err(|e| match e {
        geomink::assembly::AssemblyError::Overlap(..) => Failure::Invalid(e.to_string()),
        other => internal(other),
    })?;
    let mode = match mode {
        ModeArg::First => Mode::First,
        ModeArg::All => Mode::All,
    };
    let result = find_partitions(&analysis.motion, mode);
    let (v, he, f) = analysis.motion.arr.counts();
    let solutions: Vec<Value> = result
        .solutions()
        .iter()
        .map(|s| {
            let moving: Vec<&str> = s.movable.iter().map(|&i| names[i].as_str()).collect();
            let staying: Vec<&str> = (0..names.len())
                .filter(|i| !s.movable.contains(i))
                .map(|i| names[i].as_str())
                .collect();
            json!({
                "cell": cell_kind(s.cell),
                "direction": direction_json(s.direction.dir()),
                "moving": moving,
                "movingIndices": s.movable,
                "stationary": staying,
            })
        })
        .collect();
    let out = json!({
        "schema": SCHEMA,
        "parts": names,
        "mode": if mode == Mode::All { "all" } else { "first" },
        "result": match result { PartitionResult::Interlocked => "INTERLOCKED", PartitionResult::Solutions(_) => "PARTITIONED" },
        "solutionCount": solutions.len(),
        "solutions": solutions,
        "counts": {
            "minkowskiSums": analysis.sums_computed,
            "motionSpace": { "V": v, "HE": he, "F": f },
        },
        "note": APPROX_NOTE,
    });
    match report {
        Some(path) => {
            write(
                path,
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&out).expect("serializable")
                ),
            )?;
            println!(
                "{}: {} solution(s)",
                out["result"].as_str().unwrap_or(""),
                out["solutionCount"]
            );
        }
        None => print_json(&out),
    }
    Ok(())
}

/// Size the global thread pool from `GEOMINK_THREADS` (0 = sequential).
fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var("GEOMINK_THREADS") else {
        return Ok(());
    };
    let n: usize = text.trim().parse().map_err(|_| {
        Failure::Invalid(format!(
            "GEOMINK_THREADS must be a non-negative integer, found {text:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(internal)
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Gmap {
            input,
            counts,
            dump,
        } => cmd_gmap(&input, counts, dump),
        Command::Minkowski {
            a,
            b,
            output,
            stats,
        } => cmd_minkowski(&a, &b, output.as_deref(), stats),
        Command::Collide { a, b, u, w } => cmd_collide(&a, &b, &u, &w),
        Command::Hull { input, output } => cmd_hull(&input, &output),
        Command::Maxgen { facets, verify } => cmd_maxgen(&facets, verify),
        Command::Partition {
            scene,
            mode,
            report,
            no_reflection,
        } => cmd_partition(&scene, mode, report.as_deref(), !no_reflection),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("geomink: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("geomink: internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
