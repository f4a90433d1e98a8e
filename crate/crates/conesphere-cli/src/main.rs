//! Command-line interface: validate and search arrangements, build and audit
//! surfaces, export nets, evaluate frames, and query the moduli structure.
//!
//! Exit codes: 0 success, 1 validation/verdict failure, 2 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conesphere::arrangement::search::{search_arrangement, LoopSpec, SearchParams};
use conesphere::arrangement::{validate, LabeledVertexSet, LoopArrangement};
use conesphere::catalog;
use conesphere::decomposition::{
    area_form, build_complex, signature, total_area, verify_cone_deficits, EdgeLengths,
};
use conesphere::developing::{compare_face_sides, frame_matrix, unfold, SideVerdict, TreePolicy};
use conesphere::export::{export_obj, export_svg, SvgOptions};
use conesphere::geom::UnitVec3;
use conesphere::io;
use conesphere::moduli::{canonical_rep, distance, ideal_simplex_check, normalize, orbit_size};

#[derive(Parser)]
#[command(
    name = "conesphere",
    version,
    about = "Parallelogram decompositions of centrally symmetric cone spheres"
)]
struct Cli {
    /// Emit machine-readable JSON where applicable.
    #[arg(long, global = true)]
    json: bool,
    /// Scale factor applied to audit tolerances.
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every arrangement invariant and report violations.
    Validate { arrangement: PathBuf },
    /// Realize an arrangement from a bipartition spec by randomized search.
    Search {
        #[arg(long)]
        spec: PathBuf,
        /// Search seed; falls back to CONESPHERE_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the arrangement here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the glued parallelogram complex and print a summary.
    Build(SurfaceArgs),
    /// Audit every cone point against the prescribed deficits.
    Audit(SurfaceArgs),
    /// Print the area form matrix and its signature.
    AreaForm {
        #[arg(long)]
        arr: PathBuf,
    },
    /// Unfold the surface and export SVG and/or OBJ nets.
    Unfold {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
        /// Base quad, e.g. "a|b|+"; defaults to the first quad.
        #[arg(long)]
        base: Option<String>,
    },
    /// Evaluate a frame spec: matrix and determinant.
    FrameMatrix {
        #[arg(long)]
        arr: PathBuf,
        #[arg(long)]
        frame: PathBuf,
    },
    /// Decide whether two adjacent charts lie on different sides of a face.
    CompareSides {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long = "loop")]
        loop_label: String,
        /// JSON file {"frame_a": ..., "frame_b": ...}.
        #[arg(long)]
        frame: PathBuf,
    },
    /// Hyperbolic distance between two unit-area surfaces on one chart.
    Distance {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Verify the ideal-simplex structure of a chart's area form.
    SimplexCheck {
        #[arg(long)]
        arr: PathBuf,
    },
    /// Canonical representative and orbit size under the dihedral action.
    Orbit {
        #[arg(long)]
        lengths: PathBuf,
    },
    /// List the built-in catalog, or print one entry's arrangement.
    Catalog {
        #[arg(long)]
        entry: Option<String>,
    },
}

#[derive(Args)]
struct SurfaceArgs {
    /// Arrangement JSON (alternative to --surface).
    #[arg(long)]
    arr: Option<PathBuf>,
    /// Lengths JSON {label: value} (requires --arr).
    #[arg(long)]
    lengths: Option<PathBuf>,
    /// Surface JSON {"arrangement": ..., "lengths": ...}.
    #[arg(long)]
    surface: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_arrangement(path: &Path) -> Result<LoopArrangement, String> {
    io::parse_arrangement(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_surface(args: &SurfaceArgs) -> Result<(LoopArrangement, EdgeLengths), String> {
    let (arr, lengths_map) = match (&args.surface, &args.arr) {
        (Some(surface), _) => {
            let text = read(surface)?;
            let (source, lengths) =
                io::parse_surface(&text).map_err(|e| format!("{}: {e}", surface.display()))?;
            let arr = match source {
                io::ArrangementSource::Inline(a) => a,
                io::ArrangementSource::Path(p) => {
                    let base = surface.parent().unwrap_or_else(|| Path::new("."));
                    load_arrangement(&base.join(p))?
                }
            };
            (arr, lengths)
        }
        (None, Some(arr_path)) => {
            let arr = load_arrangement(arr_path)?;
            let lengths_path = args
                .lengths
                .as_ref()
                .ok_or_else(|| "--arr requires --lengths".to_string())?;
            let v = io::parse_json(&read(lengths_path)?)
                .map_err(|e| format!("{}: {e}", lengths_path.display()))?;
            let map = io::lengths_from_value(&v, "$")
                .map_err(|e| format!("{}: {e}", lengths_path.display()))?;
            (arr, map)
        }
        (None, None) => return Err("provide --surface or --arr/--lengths".to_string()),
    };
    let lengths = EdgeLengths::from_map(&arr, &lengths_map).map_err(|e| e.to_string())?;
    Ok((arr, lengths))
}

fn lengths_vec(path: &Path) -> Result<Vec<f64>, String> {
    let v = io::parse_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(arr) = v.as_array() {
        return arr
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| "expected numbers".to_string()))
            .collect();
    }
    let map = io::lengths_from_value(&v, "$").map_err(|e| e.to_string())?;
    Ok(map.into_values().collect())
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::Validate { arrangement } => {
            let arr = load_arrangement(arrangement)?;
            let report = validate(&arr);
            if cli.json {
                let items: Vec<String> = report
                    .violations
                    .iter()
                    .map(|v| format!("\"{v}\""))
                    .collect();
                println!(
                    "{{\"valid\": {}, \"violations\": [{}]}}",
                    report.is_valid(),
                    items.join(", ")
                );
            } else if report.is_valid() {
                println!(
                    "valid: {} loops on {} vertex pairs",
                    arr.n_loops(),
                    arr.n_pairs()
                );
            } else {
                for v in &report.violations {
                    println!("violation: {v}");
                }
            }
            Ok(report.is_valid())
        }
        Command::Search { spec, seed, out } => {
            let v = io::parse_json(&read(spec)?).map_err(|e| e.to_string())?;
            let n_pairs = v
                .get("n_pairs")
                .and_then(serde_json::Value::as_u64)
                .ok_or("spec needs n_pairs")? as usize;
            let verts = v
                .get("vertices")
                .and_then(serde_json::Value::as_array)
                .ok_or("spec needs vertices")?;
            let positions: Vec<UnitVec3> = verts
                .iter()
                .map(|w| {
                    let a = w.as_array().ok_or("vertex must be [x,y,z]")?;
                    let get = |i: usize| {
                        a.get(i)
                            .and_then(serde_json::Value::as_f64)
                            .ok_or("vertex components must be numbers")
                    };
                    UnitVec3::normalized(get(0)?, get(1)?, get(2)?).map_err(|e| e.to_string())
                })
                .collect::<Result<_, String>>()?;
            let deficits: Vec<f64> = match v.get("deficits").and_then(serde_json::Value::as_array) {
                Some(ds) => ds.iter().filter_map(serde_json::Value::as_f64).collect(),
                None => vec![std::f64::consts::TAU / n_pairs as f64; n_pairs],
            };
            let loops = v
                .get("loops")
                .and_then(serde_json::Value::as_array)
                .ok_or("spec needs loops")?;
            let specs: Vec<LoopSpec> = loops
                .iter()
                .map(|l| {
                    let label = l
                        .get("label")
                        .and_then(serde_json::Value::as_str)
                        .ok_or("loop needs label")?
                        .to_string();
                    let plus: Vec<usize> = l
                        .get("plus")
                        .and_then(serde_json::Value::as_array)
                        .ok_or("loop needs plus (1-based pair list)")?
                        .iter()
                        .filter_map(serde_json::Value::as_u64)
                        .map(|x| x as usize - 1)
                        .collect();
                    Ok(LoopSpec {
                        label,
                        plus_pairs: plus,
                    })
                })
                .collect::<Result<_, String>>()?;
            let seed = seed
                .or_else(|| {
                    std::env::var("CONESPHERE_SEED")
                        .ok()
                        .and_then(|s| s.parse().ok())
                })
                .unwrap_or(0);
            let arr = search_arrangement(
                &specs,
                &LabeledVertexSet::new(positions),
                &deficits,
                seed,
                &SearchParams::default(),
            )
            .map_err(|e| e.to_string())?;
            let text = io::serialize_arrangement(&arr);
            match out {
                Some(p) => std::fs::write(p, text).map_err(|e| e.to_string())?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Build(surface) => {
            let (arr, lengths) = load_surface(surface)?;
            let cx = build_complex(&arr, &lengths).map_err(|e| e.to_string())?;
            let area = total_area(&cx);
            if cli.json {
                println!(
                    "{{\"quads\": {}, \"cone_points\": {}, \"euler\": {}, \"area\": {}}}",
                    cx.quads.len(),
                    cx.cone_points.len(),
                    cx.euler_characteristic(),
                    io::fmt_f64(area)
                );
            } else {
                println!(
                    "{} parallelograms, {} cone points, Euler characteristic {}, area {area}",
                    cx.quads.len(),
                    cx.cone_points.len(),
                    cx.euler_characteristic()
                );
            }
            Ok(true)
        }
        Command::Audit(surface) => {
            let (arr, lengths) = load_surface(surface)?;
            let cx = build_complex(&arr, &lengths).map_err(|e| e.to_string())?;
            let audit = verify_cone_deficits(&cx, &arr.deficits, 1e-9 * cli.tolerance);
            if cli.json {
                print!("{}", io::serialize_audit(&audit));
            } else {
                for row in audit.rows.iter().filter(|r| !r.pass) {
                    println!(
                        "cone {} expected {} measured {} (error {:e})",
                        row.cone.0, row.expected, row.measured, row.error
                    );
                }
                println!(
                    "{}: {} cone points, total deficit {} (4π = {})",
                    if audit.pass { "pass" } else { "fail" },
                    audit.rows.len(),
                    audit.total_measured,
                    2.0 * std::f64::consts::TAU
                );
            }
            Ok(audit.pass)
        }
        Command::AreaForm { arr } => {
            let arr = load_arrangement(arr)?;
            let q = area_form(&arr, &arr.deficits).map_err(|e| e.to_string())?;
            let sig = signature(&q.mat);
            if cli.json {
                let mut rows = String::new();
                for i in 0..q.k() {
                    let cols: Vec<String> =
                        (0..q.k()).map(|j| io::fmt_f64(q.entry(i, j))).collect();
                    let _ = write!(rows, "[{}]", cols.join(", "));
                    if i + 1 < q.k() {
                        rows.push_str(", ");
                    }
                }
                let labels: Vec<String> = q.labels.iter().map(|l| format!("\"{l}\"")).collect();
                println!(
                    "{{\"labels\": [{}], \"matrix\": [{rows}], \"signature\": [{}, {}, {}]}}",
                    labels.join(", "),
                    sig.0,
                    sig.1,
                    sig.2
                );
            } else {
                println!("labels: {}", q.labels.join(" "));
                for i in 0..q.k() {
                    let cols: Vec<String> = (0..q.k())
                        .map(|j| format!("{:10.6}", q.entry(i, j)))
                        .collect();
                    println!("  [{}]", cols.join(" "));
                }
                println!("signature: ({}, {}, {})", sig.0, sig.1, sig.2);
            }
            Ok(true)
        }
        Command::Unfold {
            surface,
            svg,
            obj,
            base,
        } => {
            let (arr, lengths) = load_surface(surface)?;
            let cx = build_complex(&arr, &lengths).map_err(|e| e.to_string())?;
            let base_key = match base {
                Some(text) => {
                    io::quad_key_from_str(&arr, text, "--base").map_err(|e| e.to_string())?
                }
                None => cx.quads[0].key,
            };
            let dev =
                unfold(&cx, base_key, TreePolicy::BfsByQuadIndex).map_err(|e| e.to_string())?;
            if let Some(path) = svg {
                std::fs::write(path, export_svg(&cx, &dev, &SvgOptions::default()))
                    .map_err(|e| e.to_string())?;
            }
            if let Some(path) = obj {
                std::fs::write(path, export_obj(&cx, &dev)).map_err(|e| e.to_string())?;
            }
            if svg.is_none() && obj.is_none() {
                return Err("unfold: provide --svg and/or --obj".to_string());
            }
            println!("unfolded {} parallelograms", cx.quads.len());
            Ok(true)
        }
        Command::FrameMatrix { arr, frame } => {
            let arr = load_arrangement(arr)?;
            let spec = io::parse_frame_spec(&arr, &read(frame)?).map_err(|e| e.to_string())?;
            let m = frame_matrix(&arr, &arr.deficits, &spec).map_err(|e| e.to_string())?;
            if cli.json {
                let mut rows = String::new();
                for r in 0..m.mat.n {
                    let cols: Vec<String> =
                        (0..m.mat.n).map(|c| io::fmt_f64(m.mat[(r, c)])).collect();
                    let _ = write!(rows, "[{}]", cols.join(", "));
                    if r + 1 < m.mat.n {
                        rows.push_str(", ");
                    }
                }
                println!(
                    "{{\"labels\": [{}], \"matrix\": [{rows}], \"det\": {}}}",
                    m.labels
                        .iter()
                        .map(|l| format!("\"{l}\""))
                        .collect::<Vec<_>>()
                        .join(", "),
                    io::fmt_f64(m.det())
                );
            } else {
                println!("columns: {}", m.labels.join(" "));
                for r in 0..m.mat.n {
                    let cols: Vec<String> = (0..m.mat.n)
                        .map(|c| format!("{:10.6}", m.mat[(r, c)]))
                        .collect();
                    println!("  [{}]", cols.join(" "));
                }
                println!("det = {}", m.det());
            }
            Ok(true)
        }
        Command::CompareSides {
            a,
            b,
            loop_label,
            frame,
        } => {
            let arr_a = load_arrangement(a)?;
            let arr_b = load_arrangement(b)?;
            let v = io::parse_json(&read(frame)?).map_err(|e| e.to_string())?;
            let fa = io::frame_spec_from_value(
                &arr_a,
                v.get("frame_a").ok_or("frame file needs frame_a")?,
                "$.frame_a",
            )
            .map_err(|e| e.to_string())?;
            let fb = io::frame_spec_from_value(
                &arr_b,
                v.get("frame_b").ok_or("frame file needs frame_b")?,
                "$.frame_b",
            )
            .map_err(|e| e.to_string())?;
            let verdict = compare_face_sides(&arr_a, &arr_b, &fa, &fb, loop_label)
                .map_err(|e| e.to_string())?;
            let word = match verdict {
                SideVerdict::DifferentSide => "different",
                SideVerdict::SameSide => "same",
            };
            if cli.json {
                println!("{{\"loop\": \"{loop_label}\", \"verdict\": \"{word}\"}}");
            } else {
                println!("{word}");
            }
            Ok(true)
        }
        Command::Distance { x, y } => {
            let (arr_x, lx) = load_surface(&SurfaceArgs {
                arr: None,
                lengths: None,
                surface: Some(x.clone()),
            })?;
            let (arr_y, ly) = load_surface(&SurfaceArgs {
                arr: None,
                lengths: None,
                surface: Some(y.clone()),
            })?;
            if arr_x.loop_labels() != arr_y.loop_labels()
                || arr_x.bipartitions().map_err(|e| e.to_string())?
                    != arr_y.bipartitions().map_err(|e| e.to_string())?
            {
                return Err("surfaces live on different charts".to_string());
            }
            let q = area_form(&arr_x, &arr_x.deficits).map_err(|e| e.to_string())?;
            let px = normalize(&lx.0, &q).map_err(|e| e.to_string())?;
            let py = normalize(&ly.0, &q).map_err(|e| e.to_string())?;
            let d = distance(&px, &py, &q).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{{\"distance\": {}}}", io::fmt_f64(d));
            } else {
                println!("{d}");
            }
            Ok(true)
        }
        Command::SimplexCheck { arr } => {
            let arr = load_arrangement(arr)?;
            let q = area_form(&arr, &arr.deficits).map_err(|e| e.to_string())?;
            let report = ideal_simplex_check(&q).map_err(|e| e.to_string())?;
            if cli.json {
                let nulls: Vec<String> = report
                    .null_residuals
                    .iter()
                    .map(|v| io::fmt_f64(*v))
                    .collect();
                let sigs: Vec<String> = report
                    .facet_signatures
                    .iter()
                    .map(|s| format!("[{}, {}, {}]", s.0, s.1, s.2))
                    .collect();
                println!(
                    "{{\"vertices\": {}, \"facets\": {}, \"null_residuals\": [{}], \"facet_signatures\": [{}], \"regularity_residual\": {}}}",
                    report.n_vertices,
                    report.n_facets,
                    nulls.join(", "),
                    sigs.join(", "),
                    io::fmt_f64(report.regularity_residual)
                );
            } else {
                println!(
                    "{} ideal vertices, {} facets, facet signatures {:?}",
                    report.n_vertices, report.n_facets, report.facet_signatures[0]
                );
                println!("regularity residual: {}", report.regularity_residual);
            }
            Ok(true)
        }
        Command::Orbit { lengths } => {
            let l = lengths_vec(lengths)?;
            let rep = canonical_rep(&l).map_err(|e| e.to_string())?;
            let size = orbit_size(&l).map_err(|e| e.to_string())?;
            if cli.json {
                let items: Vec<String> = rep.iter().map(|v| io::fmt_f64(*v)).collect();
                println!(
                    "{{\"canonical\": [{}], \"orbit_size\": {size}}}",
                    items.join(", ")
                );
            } else {
                println!("canonical: {rep:?}");
                println!("orbit size: {size}");
            }
            Ok(true)
        }
        Command::Catalog { entry } => {
            let cat = catalog::builtin().map_err(|e| e.to_string())?;
            match entry {
                Some(name) => {
                    let e = cat
                        .entry(name)
                        .ok_or_else(|| format!("no catalog entry `{name}`"))?;
                    print!("{}", io::serialize_arrangement(&e.arrangement));
                }
                None => {
                    for e in &cat.entries {
                        println!(
                            "{}: {} loops on {} vertex pairs — {}",
                            e.name,
                            e.arrangement.n_loops(),
                            e.arrangement.n_pairs(),
                            e.provenance
                        );
                    }
                    for p in &cat.pairs {
                        println!(
                            "{}: {} vs {} across loop {}",
                            p.name, p.chart_a, p.chart_b, p.loop_label
                        );
                    }
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `conesphere catalog | head`) like
    // other unix filters instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
