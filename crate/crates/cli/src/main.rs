//! `schwarzian-lab`: command-line front end for the `schwarzian_lab` library.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schwarzian_lab::criteria::{
    check_analytic_part_criterion, check_dilatation_criterion, check_lemma, solve_c, CriterionVerdict,
    DEFAULT_TOLERANCE, ROOT_BRACKET,
};
use schwarzian_lab::description::MapDescription;
use schwarzian_lab::geometry::{
    boundary_curve, cusp_candidates, injectivity_scan, render_svg, self_intersections, Annotations, Canvas,
    InjectivityVerdict, DEFAULT_CUSP_TOLERANCE, DEFAULT_DELTA, DEFAULT_RESOLUTION,
};
use schwarzian_lab::maps::HarmonicMap;
use schwarzian_lab::schwarzian::{norm_bound_f_alpha, schwarzian_norm_estimate, GridSpec};
use schwarzian_lab::suites::{affine_suite, decomposition_suite, lemma_suite, SuiteReport, DEFAULT_SEED};
use schwarzian_lab::{Complex64, Error};
use serde::Serialize;

use output::{format_g, to_json, CSV_DIGITS};

const THREADS_ENV: &str = "SCHWARZIAN_LAB_THREADS";
const DEFAULT_ALPHAS: &str = "1,1.01,1.1,1.5,2";
const DEFAULT_BOUNDARY_SAMPLES: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "schwarzian-lab", version, about = "Schwarzian derivatives and univalence diagnostics for planar harmonic maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sampled Schwarzian norm (lower bound) of a map.
    Norm {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Norm estimates of f_alpha against the closed-form bound, as CSV.
    Sweep {
        /// Comma-separated alpha values, each at least 1.
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Univalence criteria, identity suites and the root constant.
    Criteria {
        #[arg(value_enum)]
        check: CriterionArg,
        /// Map description (thm3, thm4; optional for lemma, where it is the self-map).
        #[arg(long)]
        map: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Margins above `-tolerance` count as satisfied.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search for two distinct points with a common image.
    Scan {
        #[command(flatten)]
        map: MapArg,
        /// Radial and angular sample count.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Minimum distance between the two preimages.
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// SVG of the boundary curve with crossing and cusp markers.
    Render {
        #[command(flatten)]
        map: MapArg,
        /// Boundary samples.
        #[arg(long, default_value_t = DEFAULT_BOUNDARY_SAMPLES)]
        samples: usize,
        /// Canvas width and height in pixels.
        #[arg(long, default_value_t = 600)]
        size: u32,
        /// Boundary speed below which a local minimum is reported as a cusp.
        #[arg(long, default_value_t = DEFAULT_CUSP_TOLERANCE)]
        cusp_tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Thm3,
    Thm4,
    Lemma,
    Identity,
    Affine,
    Root,
}

#[derive(Debug, Args)]
struct MapArg {
    /// Map description: inline JSON or a path to a JSON file.
    #[arg(long)]
    map: String,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Number of circles in the sampling grid [default: 14].
    #[arg(long)]
    grid_levels: Option<usize>,
    /// Angular samples on the innermost circle [default: 64].
    #[arg(long)]
    grid_angular: Option<usize>,
    /// Radius of the outermost circle [default: 1 - 2^-14].
    #[arg(long)]
    grid_rmax: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Process outcome, mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Inconclusive,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load_map(spec: &str) -> Result<HarmonicMap, Failure> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("cannot read map file {spec}: {e}")))?
    };
    Ok(MapDescription::parse(&text)?.build()?)
}

fn grid_from(args: &GridArgs) -> Result<GridSpec, Failure> {
    let d = GridSpec::default();
    Ok(GridSpec::new(
        args.grid_levels.unwrap_or(d.levels),
        args.grid_angular.unwrap_or(d.angular),
        args.grid_rmax.unwrap_or(d.r_max),
    )?)
}

fn require_format(out: &OutputArgs, allowed: &[Format]) -> Result<Format, Failure> {
    let f = out.format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!("format {f:?} is not available for this command")))
    }
}

fn emit(out: &OutputArgs, text: &str) -> Outcome {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &OutputArgs, value: &T) -> Outcome {
    require_format(out, &[Format::Json])?;
    let text = to_json(value).map_err(|e| Failure::Internal(e.to_string()))?;
    emit(out, &text)
}

fn verdict_outcome(v: &CriterionVerdict) -> Outcome {
    if v.inconclusive {
        Err(Failure::Inconclusive)
    } else {
        Ok(())
    }
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    if r.unverified > 0 {
        Err(Failure::Inconclusive)
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct RootReport {
    c: f64,
    residual: f64,
    two_c_squared: f64,
    bracket: [f64; 2],
}

#[derive(Serialize)]
struct SweepRow {
    alpha: f64,
    norm_estimate: f64,
    closed_form_bound: f64,
}

fn cmd_sweep(alphas: &[f64], grid: &GridSpec, out: &OutputArgs) -> Outcome {
    let format = require_format(out, &[Format::Csv, Format::Json])?;
    if alphas.is_empty() {
        return Err(Failure::Usage("no alpha values given".into()));
    }
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let closed_form_bound = norm_bound_f_alpha(alpha)?;
        let f = schwarzian_lab::maps::make_f_alpha(alpha)?;
        let estimate = schwarzian_norm_estimate(&f, grid)?;
        if estimate.lower_bound > closed_form_bound + 1e-9 {
            log::warn!("alpha = {alpha}: estimate {} exceeds bound {closed_form_bound}", estimate.lower_bound);
        }
        rows.push(SweepRow {
            alpha,
            norm_estimate: estimate.lower_bound,
            closed_form_bound,
        });
    }
    match format {
        Format::Json => emit_json(out, &rows),
        _ => {
            let mut text = String::from("alpha,norm_estimate,closed_form_bound\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{}\n",
                    format_g(r.alpha, CSV_DIGITS),
                    format_g(r.norm_estimate, CSV_DIGITS),
                    format_g(r.closed_form_bound, CSV_DIGITS)
                ));
            }
            emit(out, &text)
        }
    }
}

fn cmd_criteria(
    check: CriterionArg,
    map: Option<&str>,
    grid: &GridArgs,
    seed: u64,
    tolerance: f64,
    out: &OutputArgs,
) -> Outcome {
    let needs_map = |name: &str| -> Result<HarmonicMap, Failure> {
        load_map(map.ok_or_else(|| Failure::Usage(format!("{name} requires --map")))?)
    };
    let no_map = |name: &str| -> Outcome {
        match map {
            Some(_) => Err(Failure::Usage(format!("{name} runs a seeded suite and takes no --map"))),
            None => Ok(()),
        }
    };
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Failure::Usage(format!("tolerance must be nonnegative, got {tolerance}")));
    }
    match check {
        CriterionArg::Thm3 => {
            let v = check_dilatation_criterion(&needs_map("thm3")?, &grid_from(grid)?, tolerance)?;
            emit_json(out, &v)?;
            verdict_outcome(&v)
        }
        CriterionArg::Thm4 => {
            let v = check_analytic_part_criterion(&needs_map("thm4")?, &grid_from(grid)?, tolerance)?;
            emit_json(out, &v)?;
            verdict_outcome(&v)
        }
        CriterionArg::Lemma => match map {
            Some(_) => {
                let f = needs_map("lemma")?;
                let v = check_lemma(f.dilatation(), &grid_from(grid)?, tolerance)?;
                emit_json(out, &v)?;
                verdict_outcome(&v)
            }
            None => {
                let r = lemma_suite(seed)?;
                emit_json(out, &r)?;
                suite_outcome(&r)
            }
        },
        CriterionArg::Identity => {
            no_map("identity")?;
            let r = decomposition_suite(seed)?;
            emit_json(out, &r)?;
            suite_outcome(&r)
        }
        CriterionArg::Affine => {
            no_map("affine")?;
            let r = affine_suite(seed)?;
            emit_json(out, &r)?;
            suite_outcome(&r)
        }
        CriterionArg::Root => {
            let c = solve_c();
            emit_json(
                out,
                &RootReport {
                    c,
                    residual: 2.0 * c * c.tan() - 1.0,
                    two_c_squared: 2.0 * c * c,
                    bracket: [ROOT_BRACKET.0, ROOT_BRACKET.1],
                },
            )
        }
    }
}

fn cmd_render(f: &HarmonicMap, samples: usize, size: u32, tol: f64, out: &OutputArgs) -> Outcome {
    require_format(out, &[Format::Svg])?;
    let curve = boundary_curve(f, samples)?;
    let crossings: Vec<Complex64> = self_intersections(&curve).crossings.iter().map(|c| c.point).collect();
    let cusps = cusp_candidates(f, samples.max(256), tol)?
        .into_iter()
        .map(|theta| f.eval(Complex64::from_polar(1.0, theta)))
        .collect::<Result<Vec<_>, _>>()?;
    log::info!("{} crossings, {} cusps", crossings.len(), cusps.len());
    let svg = render_svg(&[curve], &Annotations { crossings, cusps }, Canvas { size })?;
    emit(out, &svg)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Norm { map, grid, out } => {
            let f = load_map(&map.map)?;
            let estimate = schwarzian_norm_estimate(&f, &grid_from(&grid)?)?;
            emit_json(&out, &estimate)
        }
        Command::Sweep { alphas, grid, out } => cmd_sweep(&alphas, &grid_from(&grid)?, &out),
        Command::Criteria {
            check,
            map,
            grid,
            seed,
            tolerance,
            out,
        } => cmd_criteria(check, map.as_deref(), &grid, seed, tolerance, &out),
        Command::Scan {
            map,
            resolution,
            delta,
            out,
        } => {
            let f = load_map(&map.map)?;
            let report = injectivity_scan(&f, resolution, delta)?;
            emit_json(&out, &report)?;
            if report.verdict == InjectivityVerdict::Inconclusive {
                Err(Failure::Inconclusive)
            } else {
                Ok(())
            }
        }
        Command::Render {
            map,
            samples,
            size,
            cusp_tolerance,
            out,
        } => cmd_render(&load_map(&map.map)?, samples, size, cusp_tolerance, &out),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a nonnegative integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(format!("cannot configure thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive) => {
            eprintln!("inconclusive: some samples could not be evaluated");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(4)
        }
    }
}
