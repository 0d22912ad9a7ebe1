//! Command-line front end: argument parsing, report files and exit codes.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::direction_analysis::{integrate_mu, mu_of_direction, sphere_map, sphere_map_csv};
use crate::double_cover::{
    double_graph, enumerate_pairings, min_half_curvature, parameterization_curvature,
    DEFAULT_MAX_VALENCE,
};
use crate::error::{Error, Result};
use crate::graph_model::{
    generate_example, graph_to_json, load_graph_file, Example, Point3, SpatialGraph, UnitVector,
};
use crate::refinement::{approximate_net_curvature, builtin, sequence_csv, ParametricGraph};
use crate::theta_tools::check_theta_bounds;
use crate::vertex_curvature::{
    graph_curvature_report, nc_quadrature, net_total_curvature, NcMethod, ReportOptions,
    ValueMethod,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable giving the default worker count.
pub const THREADS_ENV: &str = "NETCURV_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "netcurv",
    version,
    about = "Net total curvature of polygonal spatial graphs"
)]
struct Cli {
    /// Worker threads (0 = all cores); defaults to $NETCURV_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the machine-readable report to standard output.
    #[arg(long, global = true)]
    stdout: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Graph JSON file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Report path; defaults to `<input stem>.<command>.<ext>` next to the input.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Method {
    Exact,
    Quadrature,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a graph file against the model invariants.
    Validate {
        #[command(flatten)]
        io: Input,
    },
    /// Per-point nc, tc, mc and the totals.
    Curvature {
        #[command(flatten)]
        io: Input,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = ReportOptions::default().tc_grid)]
        tc_grid: usize,
        #[arg(long, default_value_t = ReportOptions::default().tc_restarts)]
        tc_restarts: usize,
    },
    /// Multiplicity mu at one direction or over a Fibonacci lattice.
    Mu {
        #[command(flatten)]
        io: Input,
        /// Direction `x,y,z` (normalized).
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true,
              conflicts_with = "lattice", required_unless_present = "lattice")]
        direction: Option<UnitVector>,
        /// Number of lattice directions for a CSV map.
        #[arg(long)]
        lattice: Option<usize>,
    },
    /// Compare exact N with the Monte-Carlo integral of mu.
    #[command(name = "verify-thm1")]
    VerifyThm1 {
        #[command(flatten)]
        io: Input,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Doubled graph: minimal half curvature or every pairing.
    Double {
        #[command(flatten)]
        io: Input,
        /// Evaluate every pairing instead of the separable minimum.
        #[arg(long)]
        enumerate: bool,
        /// Allow an end to be paired with its twin at vertices of valence above 1.
        #[arg(long)]
        allow_self: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VALENCE)]
        max_valence: usize,
        /// Refuse to enumerate more pairings than this.
        #[arg(long, default_value_t = 100_000)]
        max_pairings: u128,
    },
    /// N of dyadic inscriptions of a built-in or polygonal graph.
    Refine {
        #[arg(
            long = "in",
            value_name = "PATH",
            conflicts_with = "builtin",
            required_unless_present = "builtin"
        )]
        input: Option<PathBuf>,
        /// One of the parametric built-ins.
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, default_value_t = 1)]
        twists: usize,
        #[arg(long, default_value_t = 8)]
        levels: u32,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Theta graph bounds on N and mu.
    #[command(name = "theta-check")]
    ThetaCheck {
        #[command(flatten)]
        io: Input,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write a built-in example graph.
    Generate {
        #[arg(long)]
        example: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        twists: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Output path; defaults to `<example>.json`.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn parse_direction(s: &str) -> std::result::Result<UnitVector, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let [x, y, z] = parts[..] else {
        return Err("expected three comma-separated numbers".into());
    };
    UnitVector::normalize(Point3::new(x, y, z)).ok_or_else(|| "zero or non-finite direction".into())
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    /// Report files written.
    pub outputs: Vec<PathBuf>,
    /// One human-readable line (or help text, or an error message).
    pub summary: String,
    /// Machine-readable report, present with `--stdout`.
    pub stdout: Option<String>,
}

impl CommandResult {
    fn error(code: i32, message: String) -> Self {
        CommandResult {
            code,
            outputs: Vec::new(),
            summary: message,
            stdout: None,
        }
    }
}

struct Output {
    files: Vec<(PathBuf, String)>,
    summary: String,
}

impl Output {
    fn one(path: PathBuf, body: String, summary: String) -> Self {
        Output {
            files: vec![(path, body)],
            summary,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_COMPUTE
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok()
}

/// Parses `argv` (program name first) and runs one subcommand.
pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return CommandResult::error(code, e.render().to_string());
        }
    };
    let threads = cli.threads.or_else(threads_from_env).unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return CommandResult::error(EXIT_COMPUTE, format!("error: {e}")),
    };
    let to_stdout = cli.stdout;
    let result = pool.install(|| run(cli.command)).and_then(|out| {
        for (path, body) in &out.files {
            std::fs::write(path, body)?;
        }
        Ok(out)
    });
    match result {
        Ok(out) => CommandResult {
            code: EXIT_OK,
            stdout: to_stdout.then(|| {
                out.files
                    .iter()
                    .map(|(_, b)| b.as_str())
                    .collect::<Vec<_>>()
                    .join("\n")
            }),
            outputs: out.files.into_iter().map(|(p, _)| p).collect(),
            summary: out.summary,
        },
        Err(e) => CommandResult::error(exit_code(&e), format!("error: {e}")),
    }
}

fn default_out(io: &Input, command: &str, ext: &str) -> PathBuf {
    io.out
        .clone()
        .unwrap_or_else(|| derived_path(&io.input, command, ext))
}

fn derived_path(input: &Path, command: &str, ext: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into());
    input.with_file_name(format!("{stem}.{command}.{ext}"))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Validate { io } => validate(&io),
        Command::Curvature {
            io,
            method,
            samples,
            seed,
            tc_grid,
            tc_restarts,
        } => curvature(
            &io,
            method,
            samples,
            seed,
            ReportOptions {
                tc_grid,
                tc_restarts,
            },
        ),
        Command::Mu {
            io,
            direction,
            lattice,
        } => mu(&io, direction, lattice),
        Command::VerifyThm1 { io, samples, seed } => verify_thm1(&io, samples, seed),
        Command::Double {
            io,
            enumerate,
            allow_self,
            max_valence,
            max_pairings,
        } => double(&io, enumerate, allow_self, max_valence, max_pairings),
        Command::Refine {
            input,
            builtin: name,
            twists,
            levels,
            out,
        } => refine(input, name, twists, levels, out),
        Command::ThetaCheck { io, samples, seed } => theta_check(&io, samples, seed),
        Command::Generate {
            example,
            n,
            twists,
            alpha,
            out,
        } => generate(&example, n, twists, alpha, out),
    }
}

fn validate(io: &Input) -> Result<Output> {
    let g = load_graph_file(&io.input)?;
    let breakpoints: usize = g.edges().iter().map(|e| e.polyline.len()).sum();
    let report = json!({
        "valid": true,
        "vertices": g.vertices().len(),
        "edges": g.edges().len(),
        "breakpoints": breakpoints,
        "topological_vertices": g.topological_vertices(),
    });
    Ok(Output::one(
        default_out(io, "validate", "json"),
        to_json(&report)?,
        format!(
            "valid: {} vertices, {} edges, {} breakpoints",
            g.vertices().len(),
            g.edges().len(),
            breakpoints
        ),
    ))
}

fn curvature(
    io: &Input,
    method: Method,
    samples: u64,
    seed: u64,
    opts: ReportOptions,
) -> Result<Output> {
    let g = load_graph_file(&io.input)?;
    let mut report = graph_curvature_report(&g, &opts)?;
    let (n, stderr) = match method {
        Method::Exact => (report.totals.net, None),
        Method::Quadrature => {
            let mut var = 0.0;
            for (i, row) in report.rows.iter_mut().enumerate() {
                let est = nc_quadrature(
                    &g.point_star(i),
                    samples,
                    crate::sampling::mix_seed(seed, i as u64),
                );
                row.values.nc = est.estimate;
                row.values.nc_method = ValueMethod::Quadrature;
                var += est.stderr * est.stderr;
            }
            report.totals.net = report.rows.iter().map(|r| r.values.nc).sum();
            (report.totals.net, Some(var.sqrt()))
        }
    };
    let json_path = default_out(io, "curvature", "json");
    let json_path = if json_path.extension().is_some_and(|e| e == "csv") {
        json_path.with_extension("json")
    } else {
        json_path
    };
    let csv_path = json_path.with_extension("csv");
    let body = json!({
        "method": match method { Method::Exact => "exact", Method::Quadrature => "quadrature" },
        "N": n,
        "stderr": stderr,
        "samples": (method == Method::Quadrature).then_some(samples),
        "seed": (method == Method::Quadrature).then_some(seed),
        "rows": report.rows,
        "totals": report.totals,
    });
    let summary = match stderr {
        Some(s) => format!("N = {} (stderr {})", n, s),
        None => format!("N = {}", n),
    };
    Ok(Output {
        files: vec![(json_path, to_json(&body)?), (csv_path, report.to_csv()?)],
        summary,
    })
}

fn mu(io: &Input, direction: Option<UnitVector>, lattice: Option<usize>) -> Result<Output> {
    let g = load_graph_file(&io.input)?;
    match (direction, lattice) {
        (Some(e), _) => {
            let r = mu_of_direction(&g, e)?;
            Ok(Output::one(
                default_out(io, "mu", "json"),
                to_json(&r)?,
                format!("mu = {} at {}", r.mu, e),
            ))
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(Error::BadParameter("lattice must be positive".into()));
            }
            let map = sphere_map(&g, n);
            let degenerate = map.iter().filter(|s| s.mu.is_none()).count();
            let (lo, hi) = map.iter().filter_map(|s| s.mu).fold(
                (None, None),
                |(lo, hi): (Option<_>, Option<_>), m| {
                    (
                        Some(lo.map_or(m, |l: crate::graph_model::HalfInteger| l.min(m))),
                        Some(hi.map_or(m, |h: crate::graph_model::HalfInteger| h.max(m))),
                    )
                },
            );
            let range = match (lo, hi) {
                (Some(l), Some(h)) => format!("mu in [{l}, {h}]"),
                _ => "no generic direction".to_string(),
            };
            Ok(Output::one(
                default_out(io, "mu", "csv"),
                sphere_map_csv(&map),
                format!("{range} over {n} directions, {degenerate} degenerate"),
            ))
        }
        (None, None) => Err(Error::BadParameter("need --direction or --lattice".into())),
    }
}

/// Slack added to `3 * stderr` so that constant `mu` (stderr 0) still passes.
const INTEGRAL_SLACK: f64 = 1e-9;

fn verify_thm1(io: &Input, samples: u64, seed: u64) -> Result<Output> {
    let g = load_graph_file(&io.input)?;
    let exact = net_total_curvature(&g, NcMethod::Exact)?;
    let m = integrate_mu(&g, samples, seed)?;
    let deviation = (m.n_estimate - exact).abs();
    let pass = deviation <= 3.0 * m.stderr + INTEGRAL_SLACK;
    let body = json!({
        "N_exact": exact,
        "N_estimate": m.n_estimate,
        "stderr": m.stderr,
        "deviation": deviation,
        "samples": m.samples,
        "rejected": m.rejected,
        "seed": m.seed,
        "pass": pass,
    });
    Ok(Output::one(
        default_out(io, "verify-thm1", "json"),
        to_json(&body)?,
        format!(
            "N exact = {}, estimate = {} +- {}: {}",
            exact,
            m.n_estimate,
            m.stderr,
            if pass { "PASS" } else { "FAIL" }
        ),
    ))
}

fn double(
    io: &Input,
    enumerate: bool,
    allow_self: bool,
    max_valence: usize,
    max_pairings: u128,
) -> Result<Output> {
    let g = load_graph_file(&io.input)?;
    let exact = net_total_curvature(&g, NcMethod::Exact)?;
    let d = double_graph(&g);
    let path = default_out(io, "double", "json");
    if !enumerate {
        let m = min_half_curvature(&g, allow_self)?;
        let body = json!({
            "allow_self": allow_self,
            "min_half_curvature": m.value,
            "N_exact": exact,
            "edges": m.edges,
            "per_vertex": g.vertices().iter().zip(&m.per_vertex)
                .map(|(v, c)| json!({"vertex": v.label, "half_pair_angles": c}))
                .collect::<Vec<_>>(),
            "witness": m.witness.to_json(&d),
        });
        return Ok(Output::one(
            path,
            to_json(&body)?,
            format!("min C/2 = {}, N = {}", m.value, exact),
        ));
    }
    let iter = enumerate_pairings(&g, allow_self, max_valence)?;
    let total = iter.total();
    if total > max_pairings {
        return Err(Error::BadParameter(format!(
            "{total} pairings exceed --max-pairings {max_pairings}"
        )));
    }
    let mut entries = Vec::new();
    let mut best: Option<(f64, serde_json::Value)> = None;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, pairing) in iter.enumerate() {
        let p = parameterization_curvature(&g, &pairing)?;
        let half = p.half_curvature();
        lo = lo.min(half);
        hi = hi.max(half);
        if best.as_ref().is_none_or(|(b, _)| half < *b) {
            best = Some((half, pairing.to_json(&d)));
        }
        entries.push(json!({
            "index": k,
            "half_curvature": half,
            "self_pairs": pairing.self_pairs(&d),
            "circuits": p.walks.len(),
        }));
    }
    let count = entries.len();
    let body = json!({
        "allow_self": allow_self,
        "pairings": count,
        "min_half_curvature": best.as_ref().map(|b| b.0),
        "max_half_curvature": (count > 0).then_some(hi),
        "N_exact": exact,
        "witness": best.map(|b| b.1),
        "entries": entries,
    });
    let summary = if count == 0 {
        "no pairings".to_string()
    } else {
        format!("{count} pairings, C/2 in [{}, {}], N = {}", lo, hi, exact)
    };
    Ok(Output::one(path, to_json(&body)?, summary))
}

fn refine(
    input: Option<PathBuf>,
    name: Option<String>,
    twists: usize,
    levels: u32,
    out: Option<PathBuf>,
) -> Result<Output> {
    let (pg, path): (ParametricGraph, PathBuf) = match (&input, &name) {
        (Some(p), _) => (
            ParametricGraph::from_polygonal(&load_graph_file(p)?),
            out.unwrap_or_else(|| derived_path(p, "refine", "csv")),
        ),
        (None, Some(n)) => (
            builtin(n, twists)?,
            out.unwrap_or_else(|| PathBuf::from(format!("{n}.refine.csv"))),
        ),
        (None, None) => return Err(Error::BadParameter("need --in or --builtin".into())),
    };
    let rows = approximate_net_curvature(&pg, levels)?;
    let last = rows.last().expect("level 0 is always present");
    let summary = format!(
        "N = {} at level {} ({} points)",
        last.n, last.level, last.vertex_count
    );
    Ok(Output::one(path, sequence_csv(&rows), summary))
}

fn theta_check(io: &Input, samples: u64, seed: u64) -> Result<Output> {
    let g = load_graph_file(&io.input)?;
    let r = check_theta_bounds(&g, samples, seed)?;
    Ok(Output::one(
        default_out(io, "theta-check", "json"),
        to_json(&r)?,
        format!(
            "N = {}, min mu = {}, N >= 3pi: {}, N < 4pi: {}",
            r.n, r.min_mu_sampled, r.passes_3pi, r.below_4pi
        ),
    ))
}

fn generate(
    name: &str,
    n: Option<usize>,
    twists: Option<usize>,
    alpha: Option<f64>,
    out: Option<PathBuf>,
) -> Result<Output> {
    let example = Example::from_parts(name, n, twists, alpha)?;
    let g: SpatialGraph = generate_example(&example)?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
    let summary = format!(
        "{example}: {} vertices, {} edges -> {}",
        g.vertices().len(),
        g.edges().len(),
        path.display()
    );
    Ok(Output::one(path, graph_to_json(&g), summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        dispatch(std::iter::once("netcurv").chain(args.iter().copied()))
    }

    #[test]
    fn parses_directions() {
        let e = parse_direction("0, 0, 2").unwrap();
        assert_eq!(e, UnitVector::Z);
        assert!(parse_direction("1,2").is_err());
        assert!(parse_direction("0,0,0").is_err());
        assert!(parse_direction("a,b,c").is_err());
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_args(&[]).code, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(
            run_args(&["curvature", "--in", "x.json", "--method", "magic"]).code,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["mu", "--in", "x.json"]).code, EXIT_USAGE);
        assert_eq!(
            run_args(&[
                "mu",
                "--in",
                "x.json",
                "--direction",
                "0,0,1",
                "--lattice",
                "5"
            ])
            .code,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_is_not_an_error() {
        let r = run_args(&["--help"]);
        assert_eq!(r.code, EXIT_OK);
        assert!(r.summary.contains("verify-thm1"));
    }

    #[test]
    fn missing_file_is_input_error() {
        let r = run_args(&["validate", "--in", "/nonexistent/graph.json"]);
        assert_eq!(r.code, EXIT_INPUT);
        assert!(r.summary.starts_with("error:"));
    }

    #[test]
    fn derived_paths() {
        assert_eq!(
            derived_path(Path::new("/tmp/a/butterfly.json"), "mu", "csv"),
            PathBuf::from("/tmp/a/butterfly.mu.csv")
        );
    }
}
