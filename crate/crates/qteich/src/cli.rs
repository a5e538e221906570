//! Command-line surface: stable JSON artifacts over the library operations.
//!
//! Every subcommand reads fixture names or JSON files (1-based indices,
//! complex numbers as `[re, im]`; see `docs/formats.md`), prints one report
//! to stdout — JSON by default, a terse text summary with `--format human` —
//! and exits 0 on success, 1 on a domain error (singular weight, mismatched
//! representations, failed numerical gates) and 2 on malformed input.
//! Identical inputs and seed produce byte-identical JSON output.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::holonomy;
use crate::intertwine;
use crate::json as fmt;
use crate::linalg::CMat;
use crate::qalgebra::{format_complex, QParams};
use crate::rep::LocalRep;
use crate::surface::Triangulation;
use crate::transport;

/// Default verdict tolerance for cycle/scalar checks.
const CYCLE_TOL: f64 = 1e-6;
/// Default verdict tolerance for holonomy cross-checks.
const HOLONOMY_TOL: f64 = 1e-8;
/// Default classification tolerance.
const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Debug, Parser)]
#[command(
    name = "qteich",
    version,
    about = "Matrix models of quantum Teichmüller theory on triangulated punctured surfaces",
    max_term_width = 100
)]
struct Cli {
    /// Output format: machine-readable JSON or a terse text summary.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Tolerance used for PASS/FAIL verdicts (command-specific default).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for commands that draw random data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest operator dimension the tool will build.
    #[arg(long, global = true, default_value_t = 4096)]
    max_dim: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Validate a triangulation and report its combinatorial summary.
    Validate {
        /// Fixture name (triangle, square, pentagon, hexagon, torus,
        /// sphere4, monogon) or path to a triangulation JSON file.
        #[arg(long, short = 't')]
        triangulation: String,
    },
    /// Print the antisymmetric corner-count matrix sigma.
    Sigma {
        #[arg(long, short = 't')]
        triangulation: String,
    },
    /// Flip one diagonal and print the new triangulation.
    Flip {
        #[arg(long, short = 't')]
        triangulation: String,
        /// Edge to flip (1-based).
        #[arg(long, short = 'e')]
        edge: usize,
    },
    /// Transport a weight system along a flip path.
    Transport {
        #[arg(long, short = 't')]
        triangulation: String,
        /// Weights JSON file, or an inline comma-separated list of reals.
        #[arg(long, short = 'w', allow_hyphen_values = true)]
        weights: String,
        /// Comma-separated 1-based edges to flip, in order.
        #[arg(long, short = 'p', default_value = "")]
        path: String,
    },
    /// Build the deterministic local representation with given weights.
    RepBuild {
        #[arg(long, short = 't')]
        triangulation: String,
        #[arg(long, short = 'w', allow_hyphen_values = true)]
        weights: String,
        /// Root-of-unity order N of the quantum parameter.
        #[arg(long = "N", short = 'N', default_value_t = 2)]
        n: usize,
        /// Odd integer c coprime to N in q = -exp(i pi c / N).
        #[arg(long, short = 'c', default_value_t = 1, allow_hyphen_values = true)]
        c: i64,
        /// Total load exponent: h = omega^k times the principal N-th root of
        /// the weight product.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        load_root: i64,
    },
    /// Recover the edge weights and total load of a representation.
    Classify {
        /// Representation descriptor JSON file.
        #[arg(long, short = 'r')]
        rep: String,
        /// Triangulation override for descriptors without an embedded one.
        #[arg(long, short = 't')]
        triangulation: Option<String>,
    },
    /// Solve the elementary intertwiner across one diagonal exchange.
    IntertwineFlip {
        #[arg(long, short = 'r')]
        rep: String,
        /// Diagonal to flip (1-based).
        #[arg(long, short = 'e')]
        edge: usize,
        /// Optional target representation descriptor; defaults to the
        /// canonical flipped representation.
        #[arg(long)]
        target: Option<String>,
    },
    /// Compose elementary intertwiners along a flip path.
    IntertwinePath {
        #[arg(long, short = 'r')]
        rep: String,
        #[arg(long, short = 'p', default_value = "")]
        path: String,
        /// Endpoint relabeling "end:start,…" (1-based, identity by default).
        #[arg(long, default_value = "")]
        relabel: String,
        /// Close the path back onto the start and report the cycle scalar.
        #[arg(long)]
        close: bool,
    },
    /// Verify the Pentagon relation: the five-flip cycle closes to a scalar.
    PentagonCheck {
        #[arg(long = "N", short = 'N', default_value_t = 2)]
        n: usize,
        #[arg(long, short = 'c', default_value_t = 1, allow_hyphen_values = true)]
        c: i64,
    },
    /// Develop pleated-surface holonomy: a dual loop, one puncture, or the
    /// signed total-load identity.
    Holonomy {
        #[arg(long, short = 't')]
        triangulation: String,
        #[arg(long, short = 'w', allow_hyphen_values = true)]
        weights: String,
        /// Comma-separated 1-based edges of a closed dual loop out of face 1.
        #[arg(long = "loop", default_value = "", value_name = "EDGES")]
        loop_edges: String,
        /// Puncture index (1-based) for the peripheral eigenvalue check.
        #[arg(long)]
        puncture: Option<usize>,
        /// Check the signed total-load identity over all punctures.
        #[arg(long)]
        total_load: bool,
        /// Lift signs, one +1/-1 per free generator (with --total-load).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        lift_signs: String,
    },
    /// Recompute weights from the developed geometry, or check one flip
    /// geometrically.
    Roundtrip {
        #[arg(long, short = 't')]
        triangulation: String,
        #[arg(long, short = 'w', allow_hyphen_values = true)]
        weights: String,
        /// Check the coordinate change at this diagonal (1-based) against the
        /// cross-ratios of the developed quadrilateral.
        #[arg(long)]
        flip: Option<usize>,
    },
    /// Spectral invariants of a mapping class at a fixed weight system.
    Invariant {
        #[arg(long, short = 't')]
        triangulation: String,
        #[arg(long, short = 'w', allow_hyphen_values = true)]
        weights: String,
        #[arg(long, short = 'p', default_value = "")]
        path: String,
        #[arg(long, default_value = "")]
        relabel: String,
        #[arg(long = "N", short = 'N', default_value_t = 2)]
        n: usize,
        #[arg(long, short = 'c', default_value_t = 1, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        load_root: i64,
    },
}

/// Parse and run the process arguments; the binary maps errors to exit codes.
pub fn run() -> Result<()> {
    let cli = Cli::parse();
    let report = dispatch(&cli)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Human => {
            for line in human_lines(&report) {
                println!("{line}");
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Input helpers
// ---------------------------------------------------------------------------

fn load_triangulation(arg: &str) -> Result<Triangulation> {
    if std::path::Path::new(arg).is_file() {
        return fmt::triangulation_from_value(&fmt::read_value(arg)?);
    }
    fixtures::by_name(arg).map_err(|_| {
        Error::Parse(format!(
            "'{arg}' is neither a readable file nor a fixture name ({})",
            fixtures::NAMES.join(", ")
        ))
    })
}

fn load_weights(arg: &str, n_edges: usize) -> Result<Vec<Complex64>> {
    let x = if std::path::Path::new(arg).is_file() {
        fmt::weights_from_value(&fmt::read_value(arg)?)?
    } else {
        arg.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map(|r| Complex64::new(r, 0.0))
                    .map_err(|_| {
                        Error::Parse(format!(
                            "'{tok}' is not a real number; use a weights JSON file for complex values"
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?
    };
    if x.len() != n_edges {
        return Err(Error::Parse(format!(
            "{} weights supplied for a triangulation with {} edges",
            x.len(),
            n_edges
        )));
    }
    Ok(x)
}

fn parse_path(arg: &str, n_edges: usize) -> Result<Vec<usize>> {
    if arg.trim().is_empty() {
        return Ok(Vec::new());
    }
    arg.split(',')
        .map(|tok| {
            let e: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("'{tok}' is not an edge index")))?;
            if e == 0 || e > n_edges {
                return Err(Error::Parse(format!(
                    "edge {e} out of range 1..{n_edges}"
                )));
            }
            Ok(e - 1)
        })
        .collect()
}

fn parse_relabel(arg: &str, n_edges: usize) -> Result<Vec<usize>> {
    let mut relabel: Vec<usize> = (0..n_edges).collect();
    if !arg.trim().is_empty() {
        for pair in arg.split(',') {
            let (from, to) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("'{pair}' is not an end:start pair")))?;
            let from: usize = from
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("'{from}' is not an edge index")))?;
            let to: usize = to
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("'{to}' is not an edge index")))?;
            if from == 0 || from > n_edges || to == 0 || to > n_edges {
                return Err(Error::Parse(format!(
                    "relabel pair {from}:{to} out of range 1..{n_edges}"
                )));
            }
            relabel[from - 1] = to - 1;
        }
    }
    let mut seen = vec![false; n_edges];
    for &v in &relabel {
        if seen[v] {
            return Err(Error::Parse(
                "relabeling is not a permutation of the edges".into(),
            ));
        }
        seen[v] = true;
    }
    Ok(relabel)
}

fn parse_signs(arg: &str) -> Result<Option<Vec<i32>>> {
    if arg.trim().is_empty() {
        return Ok(None);
    }
    let signs = arg
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("'{tok}' is not a sign (+1 or -1)")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(signs))
}

fn edge_index(e: usize, n_edges: usize) -> Result<usize> {
    if e == 0 || e > n_edges {
        return Err(Error::Parse(format!("edge {e} out of range 1..{n_edges}")));
    }
    Ok(e - 1)
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

fn matrix_value(m: &CMat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            Value::Array(
                (0..m.ncols())
                    .map(|j| fmt::complex_value(m[(i, j)]))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn faces_table_value(t: &Triangulation) -> Value {
    Value::Array(
        t.faces()
            .iter()
            .map(|f| json!([f[0] + 1, f[1] + 1, f[2] + 1]))
            .collect(),
    )
}

fn one_based(list: &[usize]) -> Vec<usize> {
    list.iter().map(|&v| v + 1).collect()
}

fn verdict(residual: f64, tol: f64) -> &'static str {
    if residual <= tol {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Metadata header shared by every matrix the tool prints.
fn matrix_report(m: &CMat, residual: f64) -> Value {
    json!({
        "dim": m.nrows(),
        "normalization": "unit operator norm, largest-modulus entry positive real",
        "residual": residual,
        "matrix": matrix_value(m),
    })
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

fn dispatch(cli: &Cli) -> Result<Value> {
    match &cli.cmd {
        Cmd::Validate { triangulation } => {
            let t = load_triangulation(triangulation)?;
            let r = t.validate();
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "validate",
                "faces": r.faces,
                "edges": r.edges,
                "boundary_edges": r.boundary_edges,
                "interior_edges": r.interior_edges,
                "punctures": r.punctures,
                "euler_compactified": r.euler_compactified,
                "euler_punctured": r.euler_punctured,
                "components": r.components.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
            }))
        }
        Cmd::Sigma { triangulation } => {
            let t = load_triangulation(triangulation)?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "sigma",
                "sigma": t.sigma_matrix(),
            }))
        }
        Cmd::Flip { triangulation, edge } => {
            let t = load_triangulation(triangulation)?;
            let d = edge_index(*edge, t.n_edges())?;
            let flipped = t.flip(d)?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "flip",
                "edge": edge,
                "triangulation": fmt::triangulation_to_value(&flipped),
                "faces_table": faces_table_value(&flipped),
            }))
        }
        Cmd::Transport { triangulation, weights, path } => {
            let t = load_triangulation(triangulation)?;
            let x = load_weights(weights, t.n_edges())?;
            let p = parse_path(path, t.n_edges())?;
            let (t_end, y) = transport::transport(&t, &x, &p)?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "transport",
                "path": one_based(&p),
                "triangulation": fmt::triangulation_to_value(&t_end),
                "faces_table": faces_table_value(&t_end),
                "weights": fmt::complex_vec_value(&y),
            }))
        }
        Cmd::RepBuild { triangulation, weights, n, c, load_root } => {
            let t = load_triangulation(triangulation)?;
            let x = load_weights(weights, t.n_edges())?;
            let params = QParams::new(*n, *c)?;
            let product: Complex64 = x.iter().product();
            let h = params.principal_nth_root(product) * params.omega_pow(*load_root);
            let rep = LocalRep::from_edge_weights(&t, &params, &x, h, cli.max_dim)?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "rep-build",
                "dim": rep.dim(),
                "load": fmt::complex_value(h),
                "rep": fmt::rep_to_value(&rep),
            }))
        }
        Cmd::Classify { rep, triangulation } => {
            let fallback = triangulation
                .as_deref()
                .map(load_triangulation)
                .transpose()?;
            let r = fmt::rep_from_value(&fmt::read_value(rep)?, fallback.as_ref(), cli.max_dim)?;
            let tol = cli.tolerance.unwrap_or(CLASSIFY_TOL);
            let class = r.classify(tol)?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "classify",
                "tolerance": tol,
                "x": fmt::complex_vec_value(&class.x),
                "h": fmt::complex_value(class.h),
            }))
        }
        Cmd::IntertwineFlip { rep, edge, target } => {
            let source = fmt::rep_from_value(&fmt::read_value(rep)?, None, cli.max_dim)?;
            let d = edge_index(*edge, source.triangulation().n_edges())?;
            let (matrix, residual, target_rep) = match target {
                Some(path) => {
                    let tgt = fmt::rep_from_value(&fmt::read_value(path)?, None, cli.max_dim)?;
                    let iw = intertwine::solve_flip_intertwiner(&source, &tgt, d)?;
                    (iw.matrix, iw.residual, iw.target)
                }
                None => {
                    let step = intertwine::flip_step(&source, d)?;
                    (step.matrix, step.residual, step.target)
                }
            };
            let tol = cli.tolerance.unwrap_or(HOLONOMY_TOL);
            let mut report = json!({
                "schema": "qteich.report/1",
                "command": "intertwine-flip",
                "edge": edge,
                "verdict": verdict(residual, tol),
                "tolerance": tol,
                "target": fmt::rep_to_value(&target_rep),
            });
            merge(&mut report, matrix_report(&matrix, residual));
            Ok(report)
        }
        Cmd::IntertwinePath { rep, path, relabel, close } => {
            let start = fmt::rep_from_value(&fmt::read_value(rep)?, None, cli.max_dim)?;
            let n_edges = start.triangulation().n_edges();
            let p = parse_path(path, n_edges)?;
            if *close {
                let rl = parse_relabel(relabel, n_edges)?;
                let cycle = intertwine::closed_cycle(&start, &p, &rl)?;
                let tol = cli.tolerance.unwrap_or(CYCLE_TOL);
                let mut report = json!({
                    "schema": "qteich.report/1",
                    "command": "intertwine-path",
                    "path": one_based(&p),
                    "relabel": one_based(&rl),
                    "steps": cycle.step_matrices.len(),
                    "scalar": fmt::complex_value(cycle.scalar),
                    "verdict": verdict(cycle.residual, tol),
                    "tolerance": tol,
                });
                merge(&mut report, matrix_report(&cycle.total, cycle.residual));
                Ok(report)
            } else {
                let run = intertwine::compose_path(&start, &p)?;
                let steps: Vec<Value> = run
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "edge": s.edge + 1,
                            "residual": s.residual,
                        })
                    })
                    .collect();
                let worst = run.steps.iter().map(|s| s.residual).fold(0.0, f64::max);
                let mut report = json!({
                    "schema": "qteich.report/1",
                    "command": "intertwine-path",
                    "path": one_based(&p),
                    "steps": steps,
                    "final_rep": fmt::rep_to_value(&run.final_rep),
                });
                merge(&mut report, matrix_report(&run.composite, worst));
                Ok(report)
            }
        }
        Cmd::PentagonCheck { n, c } => {
            let params = QParams::new(*n, *c)?;
            let t = fixtures::pentagon();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let x: Vec<Complex64> = (0..t.n_edges())
                .map(|_| {
                    let r = rng.gen_range(0.6..1.6);
                    let th = rng.gen_range(0.0..std::f64::consts::TAU);
                    Complex64::from_polar(r, th)
                })
                .collect();
            let product: Complex64 = x.iter().product();
            let h = params.principal_nth_root(product);
            let start = LocalRep::from_edge_weights(&t, &params, &x, h, cli.max_dim)?;
            // The five-flip cycle alternates the two inner diagonals and
            // returns the fan with those diagonals exchanged.
            let path = [2usize, 4, 2, 4, 2];
            let relabel = [0usize, 1, 4, 3, 2, 5, 6];
            let cycle = intertwine::closed_cycle(&start, &path, &relabel)?;
            let tol = cli.tolerance.unwrap_or(CYCLE_TOL);
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "pentagon-check",
                "N": n,
                "c": c,
                "seed": cli.seed,
                "dim": start.dim(),
                "path": one_based(&path),
                "relabel": one_based(&relabel),
                "scalar": fmt::complex_value(cycle.scalar),
                "residual": cycle.residual,
                "tolerance": tol,
                "verdict": verdict(cycle.residual, tol),
            }))
        }
        Cmd::Holonomy { triangulation, weights, loop_edges, puncture, total_load, lift_signs } => {
            let t = load_triangulation(triangulation)?;
            let x = load_weights(weights, t.n_edges())?;
            let tol = cli.tolerance.unwrap_or(HOLONOMY_TOL);
            let modes = [!loop_edges.trim().is_empty(), puncture.is_some(), *total_load];
            if modes.iter().filter(|&&b| b).count() != 1 {
                return Err(Error::Parse(
                    "choose exactly one of --loop, --puncture, --total-load".into(),
                ));
            }
            if *total_load {
                let signs = parse_signs(lift_signs)?;
                let r = holonomy::total_load_check(&t, &x, signs.as_deref())?;
                return Ok(json!({
                    "schema": "qteich.report/1",
                    "command": "holonomy",
                    "mode": "total-load",
                    "generator_edges": one_based(&r.generator_edges),
                    "lift_signs": signs.unwrap_or_else(|| vec![1; r.generator_edges.len()]),
                    "eigenvalues": fmt::complex_vec_value(&r.eigenvalues),
                    "product": fmt::complex_value(r.product),
                    "load": fmt::complex_value(r.load),
                    "residual": r.residual,
                    "squared_residual": r.squared_residual,
                    "tolerance": tol,
                    "verdict": verdict(r.residual.max(r.squared_residual), tol),
                }));
            }
            if let Some(k) = puncture {
                let punctures = t.punctures();
                if *k == 0 || *k > punctures.len() {
                    return Err(Error::Parse(format!(
                        "puncture {k} out of range 1..{}",
                        punctures.len()
                    )));
                }
                let p = &punctures[k - 1];
                let r = holonomy::puncture_eigenvalue(&t, &x, p)?;
                return Ok(json!({
                    "schema": "qteich.report/1",
                    "command": "holonomy",
                    "mode": "puncture",
                    "puncture": k,
                    "crossed_edges": one_based(&p.crossed_edges),
                    "a_sq": fmt::complex_value(r.a_sq),
                    "combinatorial": fmt::complex_value(r.combinatorial),
                    "residual": r.residual,
                    "tolerance": tol,
                    "verdict": verdict(r.residual, tol),
                }));
            }
            let p = parse_path(loop_edges, t.n_edges())?;
            let m = holonomy::holonomy(&t, &x, &p)?;
            let lift = m.sl2_normalized()?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "holonomy",
                "mode": "loop",
                "loop": one_based(&p),
                "matrix": [
                    [fmt::complex_value(m.m[0][0]), fmt::complex_value(m.m[0][1])],
                    [fmt::complex_value(m.m[1][0]), fmt::complex_value(m.m[1][1])],
                ],
                "det": fmt::complex_value(m.det()),
                "trace": fmt::complex_value(m.trace()),
                "sl2_trace": fmt::complex_value(lift.trace()),
            }))
        }
        Cmd::Roundtrip { triangulation, weights, flip } => {
            let t = load_triangulation(triangulation)?;
            let x = load_weights(weights, t.n_edges())?;
            let tol = cli.tolerance.unwrap_or(HOLONOMY_TOL);
            if let Some(e) = flip {
                let d = edge_index(*e, t.n_edges())?;
                let r = holonomy::flip_geometric(&t, &x, d)?;
                let rows: Vec<Value> = r
                    .rows
                    .iter()
                    .map(|row| {
                        json!({
                            "edge": row.edge + 1,
                            "transported": fmt::complex_value(row.transported),
                            "geometric": fmt::complex_value(row.geometric),
                            "residual": row.residual,
                        })
                    })
                    .collect();
                return Ok(json!({
                    "schema": "qteich.report/1",
                    "command": "roundtrip",
                    "mode": "flip",
                    "edge": e,
                    "rows": rows,
                    "max_residual": r.max_residual,
                    "tolerance": tol,
                    "verdict": verdict(r.max_residual, tol),
                }));
            }
            let r = holonomy::roundtrip_weights(&t, &x)?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "roundtrip",
                "mode": "weights",
                "weights": fmt::complex_vec_value(&r.weights),
                "max_residual": r.max_residual,
                "tolerance": tol,
                "verdict": verdict(r.max_residual, tol),
            }))
        }
        Cmd::Invariant { triangulation, weights, path, relabel, n, c, load_root } => {
            let t = load_triangulation(triangulation)?;
            let x = load_weights(weights, t.n_edges())?;
            let p = parse_path(path, t.n_edges())?;
            let rl = parse_relabel(relabel, t.n_edges())?;
            let params = QParams::new(*n, *c)?;
            let inv = intertwine::mapping_class_invariant(
                &t, &params, &x, &p, &rl, *load_root, cli.max_dim,
            )?;
            Ok(json!({
                "schema": "qteich.report/1",
                "command": "invariant",
                "path": one_based(&p),
                "relabel": one_based(&rl),
                "N": n,
                "c": c,
                "load_root": load_root,
                "dim": inv.dim,
                "trace": fmt::complex_value(inv.trace),
                "scale_free_trace": inv.scale_free_trace,
                "det_normalized_trace": fmt::complex_value(inv.det_normalized_trace),
                "phase_sector": inv.phase_sector,
                "eigenvalue_ratios": fmt::complex_vec_value(&inv.eigenvalue_ratios),
            }))
        }
    }
}

/// Move the fields of `extra` into `report` (both must be objects), keeping
/// `report`'s existing fields first.
fn merge(report: &mut Value, extra: Value) {
    if let (Some(dst), Value::Object(src)) = (report.as_object_mut(), extra) {
        for (k, v) in src {
            dst.insert(k, v);
        }
    }
}

// ---------------------------------------------------------------------------
// Human rendering
// ---------------------------------------------------------------------------

fn human_complex(v: &Value) -> Option<String> {
    let arr = v.as_array()?;
    // Complex pairs are serialized as float-typed [re, im]; integer pairs
    // (edge lists and the like) stay lists.
    if arr.len() != 2 || !arr[0].is_f64() || !arr[1].is_f64() {
        return None;
    }
    let re = arr[0].as_f64()?;
    let im = arr[1].as_f64()?;
    Some(format_complex(Complex64::new(re, im)))
}

/// Terse text rendering: one `key: value` line per report field, complex
/// pairs and lists formatted, large matrices summarized by their dimension.
fn human_lines(report: &Value) -> Vec<String> {
    let mut lines = Vec::new();
    let obj = match report.as_object() {
        Some(o) => o,
        None => return vec![report.to_string()],
    };
    for (key, value) in obj {
        if key == "schema" {
            continue;
        }
        match value {
            Value::Array(rows_v) if key == "matrix" => {
                let rows = rows_v.len();
                if rows <= 4 {
                    lines.push(format!("{key}:"));
                    for row in rows_v {
                        let entries: Vec<String> = row
                            .as_array()
                            .map(|r| {
                                r.iter()
                                    .map(|z| human_complex(z).unwrap_or_else(|| z.to_string()))
                                    .collect()
                            })
                            .unwrap_or_default();
                        lines.push(format!("  [{}]", entries.join(", ")));
                    }
                } else {
                    lines.push(format!("{key}: [{rows} x {rows} complex matrix]"));
                }
            }
            Value::Array(items) => {
                if let Some(z) = human_complex(value) {
                    lines.push(format!("{key}: {z}"));
                    continue;
                }
                let rendered: Vec<String> = items
                    .iter()
                    .map(|item| {
                        human_complex(item).unwrap_or_else(|| match item {
                            Value::Object(fields) => {
                                let parts: Vec<String> = fields
                                    .iter()
                                    .map(|(k, v)| {
                                        format!(
                                            "{k}={}",
                                            human_complex(v).unwrap_or_else(|| v.to_string())
                                        )
                                    })
                                    .collect();
                                format!("({})", parts.join(", "))
                            }
                            other => other.to_string(),
                        })
                    })
                    .collect();
                lines.push(format!("{key}: [{}]", rendered.join(", ")));
            }
            Value::Object(_) => {
                lines.push(format!("{key}: {value}"));
            }
            other => lines.push(format!("{key}: {other}")),
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_relabel_parsing_is_one_based_and_validated() {
        assert_eq!(parse_path("", 5).unwrap(), Vec::<usize>::new());
        assert_eq!(parse_path("1,3,1", 5).unwrap(), vec![0, 2, 0]);
        assert!(parse_path("0", 5).is_err());
        assert!(parse_path("6", 5).is_err());
        assert!(parse_path("x", 5).is_err());

        assert_eq!(parse_relabel("", 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_relabel("3:5,5:3", 7).unwrap(), vec![0, 1, 4, 3, 2, 5, 6]);
        assert!(parse_relabel("1:2", 3).is_err()); // not a permutation
        assert!(parse_relabel("1:4", 3).is_err());
        assert!(parse_relabel("1-2", 3).is_err());
    }

    #[test]
    fn sign_parsing() {
        assert_eq!(parse_signs("").unwrap(), None);
        assert_eq!(parse_signs("1,-1").unwrap(), Some(vec![1, -1]));
        assert!(parse_signs("1,x").is_err());
    }

    #[test]
    fn fixture_names_and_files_resolve() {
        assert!(load_triangulation("square").is_ok());
        assert!(load_triangulation("no-such-fixture").is_err());
        assert!(load_weights("1,2,0.5", 3).is_ok());
        assert!(load_weights("1,2", 3).is_err());
        assert!(load_weights("1,two,3", 3).is_err());
    }
}
