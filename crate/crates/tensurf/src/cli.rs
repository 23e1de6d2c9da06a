//! The `tensurf` command-line runner: select surfaces, identities and
//! resolutions; run verification suites, convergence studies, pointwise
//! structural checks and ambient-chart checks; emit reports as a table,
//! CSV or JSON.
//!
//! Configuration precedence: command-line flags override the config file
//! named by `TENSURF_CONFIG`, which overrides built-in defaults. Exit codes:
//! 0 when every check passes, 1 when any check fails (or a numerical error
//! aborts a run), 2 on configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use serde::Deserialize;

use crate::chart::{self, AmbientChart};
use crate::error::GeomError;
use crate::identities::{
    applicable_identities, run_identity_on_grids, check_topological_invariance, CheckOptions,
    IdentityId, IdentityReport, DEFAULT_BOUNDARY_NODES,
};
use crate::quadrature::{BoundaryGrid, McVolumeOptions, QuadratureRule, SurfaceGrid};
use crate::report::{self, ConvergenceRow, OutputFormat, PointwiseRow};
use crate::surface::{DEGENERACY_MARGIN, FD_STEP_ANALYTIC, FD_STEP_COMPUTED};
use crate::zoo::{self, ZooSurface};

/// Environment variable naming the default config file.
pub const CONFIG_ENV_VAR: &str = "TENSURF_CONFIG";

const DEFAULT_SURFACES: [&str; 7] = [
    "sphere:r=1",
    "ellipsoid:a=1,b=1.3,c=0.7",
    "torus:R=2,r=0.5",
    "hypersphere3:r=1",
    "hemisphere:r=1",
    "disk:r=1",
    "cap:r=1,theta0=0.7853981633974483",
];

const DEFAULT_POINTWISE_SURFACES: [&str; 6] = [
    "sphere:r=1",
    "ellipsoid:a=1,b=1.3,c=0.7",
    "torus:R=2,r=0.5",
    "catenoid:a=1,zmin=-1,zmax=1",
    "monge:f=paraboloid",
    "hypersphere3:r=1",
];

#[derive(Parser)]
#[command(
    name = "tensurf",
    version,
    about = "Verify the tensor apparatus and integral identities of parametric hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity checks at the largest requested resolution.
    Verify(CommonArgs),
    /// Residual-vs-resolution study with observed convergence orders.
    Converge(CommonArgs),
    /// Pointwise Weingarten / Codazzi / Gauss residuals on sample grids.
    Pointwise(PointwiseArgs),
    /// Kronecker and metrinilic checks of the ambient charts.
    AmbientCheck(AmbientArgs),
    /// List the available surfaces, identities and charts.
    List,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Zoo surface selector, repeatable (e.g. --surface torus:R=2,r=0.5).
    #[arg(long = "surface")]
    surfaces: Vec<String>,
    /// Identity id or 'all', repeatable.
    #[arg(long = "identity")]
    identities: Vec<String>,
    /// Nodes per axis; a comma-separated list runs a resolution series.
    #[arg(long = "res", value_delimiter = ',')]
    resolutions: Vec<usize>,
    /// Residual tolerance override for every check.
    #[arg(long)]
    tol: Option<f64>,
    /// Output format: table, csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the Monte Carlo volume estimator.
    #[arg(long)]
    seed: Option<u64>,
    /// Finite-difference step override.
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
    /// Estimate enclosed volumes by Monte Carlo even when an analytic value
    /// is available.
    #[arg(long = "mc-volume")]
    mc_volume: bool,
    /// Carry measured wall times into machine-format output (off by
    /// default so identical runs produce byte-identical files).
    #[arg(long)]
    timings: bool,
    /// Boundary quadrature nodes per segment for patch identities.
    #[arg(long = "boundary-nodes")]
    boundary_nodes: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct PointwiseArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sample-grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct AmbientArgs {
    /// Chart name, repeatable; defaults to all built-in charts.
    #[arg(long = "chart")]
    charts: Vec<String>,
    /// Random evaluation points per chart.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
}

/// Config-file schema; every field optional, flags win.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    surfaces: Option<Vec<String>>,
    identities: Option<Vec<String>>,
    resolutions: Option<Vec<usize>>,
    tolerance: Option<f64>,
    format: Option<String>,
    out: Option<String>,
    seed: Option<u64>,
    fd_step: Option<f64>,
    mc_volume: Option<bool>,
    timings: Option<bool>,
    boundary_nodes: Option<usize>,
    grid: Option<usize>,
    points: Option<usize>,
}

enum CliError {
    Config(String),
    Run(String),
}

impl From<GeomError> for CliError {
    fn from(err: GeomError) -> Self {
        match err {
            GeomError::InvalidParameter(_) => CliError::Config(err.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

struct ResolvedConfig {
    surfaces: Vec<String>,
    identities: Vec<String>,
    resolutions: Vec<usize>,
    tolerance: Option<f64>,
    format: OutputFormat,
    out: Option<PathBuf>,
    seed: u64,
    fd_step: Option<f64>,
    mc_volume: bool,
    timings: bool,
    boundary_nodes: usize,
    grid: usize,
}

fn load_file_config() -> Result<FileConfig, CliError> {
    match std::env::var_os(CONFIG_ENV_VAR) {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Config(format!("cannot read {CONFIG_ENV_VAR} file {path:?}: {e}"))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("malformed config file {path:?}: {e}"))
            })
        }
    }
}

fn resolve_config(
    args: &CommonArgs,
    default_surfaces: &[&str],
    default_identities: &[&str],
    grid: Option<usize>,
) -> Result<ResolvedConfig, CliError> {
    let file = load_file_config()?;
    let surfaces = if !args.surfaces.is_empty() {
        args.surfaces.clone()
    } else {
        file.surfaces.unwrap_or_else(|| default_surfaces.iter().map(|s| s.to_string()).collect())
    };
    let identities = if !args.identities.is_empty() {
        args.identities.clone()
    } else {
        file.identities
            .unwrap_or_else(|| default_identities.iter().map(|s| s.to_string()).collect())
    };
    let resolutions = if !args.resolutions.is_empty() {
        args.resolutions.clone()
    } else {
        file.resolutions.unwrap_or_else(|| vec![64])
    };
    if surfaces.is_empty() || identities.is_empty() || resolutions.is_empty() {
        return Err(CliError::Config(
            "need at least one surface, one identity and one resolution".into(),
        ));
    }
    for &res in &resolutions {
        if res < 8 {
            return Err(CliError::Config(format!("resolution {res} below the minimum of 8")));
        }
    }
    let format_name =
        args.format.clone().or(file.format).unwrap_or_else(|| "table".to_string());
    let format = OutputFormat::parse(&format_name).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ResolvedConfig {
        surfaces,
        identities,
        resolutions,
        tolerance: args.tol.or(file.tolerance),
        format,
        out: args.out.clone().or(file.out.map(PathBuf::from)),
        seed: args.seed.or(file.seed).unwrap_or(42),
        fd_step: args.fd_step.or(file.fd_step),
        mc_volume: args.mc_volume || file.mc_volume.unwrap_or(false),
        timings: args.timings || file.timings.unwrap_or(false),
        boundary_nodes: args
            .boundary_nodes
            .or(file.boundary_nodes)
            .unwrap_or(DEFAULT_BOUNDARY_NODES),
        grid: grid.or(file.grid).unwrap_or(20),
    })
}

fn check_options(config: &ResolvedConfig) -> CheckOptions {
    CheckOptions {
        tolerance: config.tolerance,
        force_mc_volume: config.mc_volume,
        mc: McVolumeOptions { seed: config.seed, ..McVolumeOptions::default() },
    }
}

/// Expands identity selectors for one surface; `all` maps to every identity
/// applicable to that surface, `topo-K` runs once globally.
fn identities_for_surface(
    requested: &[String],
    surface: &ZooSurface,
) -> Result<Vec<IdentityId>, CliError> {
    let mut out = Vec::new();
    for token in requested {
        if token.eq_ignore_ascii_case("all") {
            for id in applicable_identities(surface) {
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        } else {
            let id = IdentityId::parse(token).map_err(|e| CliError::Config(e.to_string()))?;
            if id != IdentityId::TopologicalInvariance && !out.contains(&id) {
                out.push(id);
            }
        }
    }
    Ok(out)
}

fn wants_topology(requested: &[String]) -> Result<bool, CliError> {
    for token in requested {
        if token.eq_ignore_ascii_case("all") {
            continue;
        }
        let id = IdentityId::parse(token).map_err(|e| CliError::Config(e.to_string()))?;
        if id == IdentityId::TopologicalInvariance {
            return Ok(true);
        }
    }
    Ok(false)
}

fn emit(config: &ResolvedConfig, text: String) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Run(format!("cannot write {path:?}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scrub_timings(reports: &mut [IdentityReport], keep: bool) {
    if !keep {
        for report in reports {
            report.wall_time_ms = 0.0;
        }
    }
}

fn run_verify(args: &CommonArgs) -> Result<bool, CliError> {
    let config = resolve_config(args, &DEFAULT_SURFACES, &["all", "topo-K"], None)?;
    let opts = check_options(&config);
    let top_resolution = *config.resolutions.iter().max().expect("non-empty");
    let mut reports: Vec<IdentityReport> = Vec::new();

    for selector in &config.surfaces {
        let surface = zoo::from_selector(selector).map_err(|e| CliError::Config(e.to_string()))?;
        let ids = identities_for_surface(&config.identities, &surface)?;
        if ids.is_empty() {
            continue;
        }
        let inner = surface.surface();
        let rule = QuadratureRule::for_surface(inner, &[top_resolution])?;
        let grid = SurfaceGrid::build(inner, &rule)?;
        let boundary = match surface.boundary() {
            Some(curve) => Some(BoundaryGrid::build(curve, config.boundary_nodes)?),
            None => None,
        };
        for id in ids {
            let start = Instant::now();
            let mut batch = run_identity_on_grids(&surface, id, &grid, boundary.as_ref(), &opts)?;
            let per_report = start.elapsed().as_secs_f64() * 1e3 / batch.len().max(1) as f64;
            for report in &mut batch {
                report.wall_time_ms = per_report;
            }
            reports.extend(batch);
        }
    }

    if wants_topology(&config.identities)? {
        let start = Instant::now();
        let mut report = check_topological_invariance(&[top_resolution], &opts)?;
        report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        reports.push(report);
    }

    let all_pass = reports.iter().all(|r| r.pass);
    scrub_timings(&mut reports, config.timings);
    let text = match config.format {
        OutputFormat::Table => report::render_table(&reports),
        OutputFormat::Csv => report::render_csv(&reports),
        OutputFormat::Json => report::render_json(&reports),
    };
    emit(&config, text)?;
    Ok(all_pass)
}

fn run_converge(args: &CommonArgs) -> Result<bool, CliError> {
    let config = resolve_config(args, &DEFAULT_SURFACES, &["all"], None)?;
    if config.resolutions.len() < 2 {
        return Err(CliError::Config(
            "a convergence study needs at least two resolutions (--res n1,n2,...)".into(),
        ));
    }
    let mut resolutions = config.resolutions.clone();
    resolutions.sort_unstable();
    let opts = check_options(&config);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut all_decreasing = true;

    for selector in &config.surfaces {
        let surface = zoo::from_selector(selector).map_err(|e| CliError::Config(e.to_string()))?;
        let ids = identities_for_surface(&config.identities, &surface)?;
        for id in ids {
            let mut previous: Option<(usize, f64)> = None;
            for &res in &resolutions {
                let inner = surface.surface();
                let rule = QuadratureRule::for_surface(inner, &[res])?;
                let grid = SurfaceGrid::build(inner, &rule)?;
                let boundary = match surface.boundary() {
                    Some(curve) => Some(BoundaryGrid::build(curve, config.boundary_nodes)?),
                    None => None,
                };
                let batch = run_identity_on_grids(&surface, id, &grid, boundary.as_ref(), &opts)?;
                for report in batch {
                    let observed_order = previous.map(|(prev_res, prev_residual)| {
                        let res_ratio = res as f64 / prev_res as f64;
                        (prev_residual.max(1e-300) / report.residual.max(1e-300)).log2()
                            / res_ratio.log2()
                    });
                    if let Some(order) = observed_order {
                        // Allow the floor: tiny residuals no longer shrink.
                        if order < 0.0 && report.residual > 1e-12 {
                            all_decreasing = false;
                        }
                    }
                    previous = Some((res, report.residual));
                    rows.push(ConvergenceRow {
                        identity_id: report.identity_id.clone(),
                        surface: report.surface.clone(),
                        resolution: report.resolution.clone(),
                        residual: report.residual,
                        observed_order,
                    });
                }
            }
        }
    }

    let text = match config.format {
        OutputFormat::Table => report::render_convergence_table(&rows),
        OutputFormat::Csv => report::render_convergence_csv(&rows),
        OutputFormat::Json => report::render_convergence_json(&rows),
    };
    emit(&config, text)?;
    Ok(all_decreasing)
}

fn run_pointwise(args: &PointwiseArgs) -> Result<bool, CliError> {
    let config =
        resolve_config(&args.common, &DEFAULT_POINTWISE_SURFACES, &["all"], args.grid)?;
    let weingarten_step = config.fd_step.unwrap_or(FD_STEP_ANALYTIC);
    let codazzi_step = config.fd_step.unwrap_or(FD_STEP_COMPUTED);
    let mut rows: Vec<PointwiseRow> = Vec::new();

    for selector in &config.surfaces {
        let surface = zoo::from_selector(selector).map_err(|e| CliError::Config(e.to_string()))?;
        let inner = surface.surface();
        // Three-parameter surfaces compound two chart degeneracies at domain
        // corners, so they get a coarser grid and a wider margin.
        let (per_axis, margin) = if inner.param_dim() == 3 {
            (config.grid.min(8), 1e-2)
        } else {
            (config.grid, DEGENERACY_MARGIN)
        };
        let points = inner.interior_grid(per_axis, margin);
        let mut weingarten: f64 = 0.0;
        let mut codazzi: f64 = 0.0;
        let mut gauss: f64 = 0.0;
        for p in &points {
            weingarten = weingarten.max(inner.weingarten_residual(p, weingarten_step)?);
            codazzi = codazzi.max(inner.codazzi_residual(p, codazzi_step, false)?);
            if inner.param_dim() == 2 {
                gauss = gauss.max(inner.gauss_residual(p)?);
            }
        }
        let tol = |fallback: f64| config.tolerance.unwrap_or(fallback);
        rows.push(PointwiseRow {
            subject: inner.name().to_string(),
            check: "weingarten".into(),
            samples: points.len(),
            max_residual: weingarten,
            tolerance: tol(1e-8),
            pass: weingarten <= tol(1e-8),
        });
        rows.push(PointwiseRow {
            subject: inner.name().to_string(),
            check: "codazzi".into(),
            samples: points.len(),
            max_residual: codazzi,
            tolerance: tol(1e-6),
            pass: codazzi <= tol(1e-6),
        });
        if inner.param_dim() == 2 {
            rows.push(PointwiseRow {
                subject: inner.name().to_string(),
                check: "gauss".into(),
                samples: points.len(),
                max_residual: gauss,
                tolerance: tol(1e-13),
                pass: gauss <= tol(1e-13),
            });
        }
    }

    let all_pass = rows.iter().all(|r| r.pass);
    let text = match config.format {
        OutputFormat::Table => report::render_pointwise_table(&rows),
        OutputFormat::Csv => report::render_pointwise_csv(&rows),
        OutputFormat::Json => report::render_pointwise_json(&rows),
    };
    emit(&config, text)?;
    Ok(all_pass)
}

fn ambient_rows(
    chart: &AmbientChart,
    points: usize,
    fd_step: f64,
    tolerance_override: Option<f64>,
    seed: u64,
) -> Result<Vec<PointwiseRow>, CliError> {
    use crate::tensor::Matrix;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut kronecker_metric: f64 = 0.0;
    let mut kronecker_basis: f64 = 0.0;
    let mut metrinilic_metric: f64 = 0.0;
    let mut metrinilic_basis: f64 = 0.0;
    let mut worst_order: f64 = f64::INFINITY;
    for i in 0..points {
        let z = chart::random_chart_point(chart, &mut rng);
        let frame = chart.frame_at(&z, fd_step)?;
        kronecker_metric = kronecker_metric
            .max((frame.metric_inv.matmul(&frame.metric) - Matrix::identity(3)).max_abs());
        let mut basis_dev: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == b { 1.0 } else { 0.0 };
                basis_dev =
                    basis_dev.max((frame.dual_basis[a].dot(&frame.basis[b]) - expected).abs());
            }
        }
        kronecker_basis = kronecker_basis.max(basis_dev);
        let residual = chart.metrinilic_residual(&z, fd_step)?;
        metrinilic_metric = metrinilic_metric.max(residual.metric);
        metrinilic_basis = metrinilic_basis.max(residual.basis);
        // FD-order spot check on a few of the points; residuals already at
        // the roundoff floor carry no order information.
        if i < 5 && chart.name() != "cartesian" {
            let coarse = chart.metrinilic_residual(&z, 1e-3)?;
            let fine = chart.metrinilic_residual(&z, 5e-4)?;
            for (c, f) in [(coarse.metric, fine.metric), (coarse.basis, fine.basis)] {
                if c > 1e-11 {
                    worst_order = worst_order.min((c / f).log2());
                }
            }
        }
    }
    let tol = |fallback: f64| tolerance_override.unwrap_or(fallback);
    let mut rows = vec![
        PointwiseRow {
            subject: chart.name().to_string(),
            check: "kronecker-metric".into(),
            samples: points,
            max_residual: kronecker_metric,
            tolerance: tol(1e-12),
            pass: kronecker_metric <= tol(1e-12),
        },
        PointwiseRow {
            subject: chart.name().to_string(),
            check: "kronecker-basis".into(),
            samples: points,
            max_residual: kronecker_basis,
            tolerance: tol(1e-12),
            pass: kronecker_basis <= tol(1e-12),
        },
        PointwiseRow {
            subject: chart.name().to_string(),
            check: "metrinilic-metric".into(),
            samples: points,
            max_residual: metrinilic_metric,
            tolerance: tol(1e-8),
            pass: metrinilic_metric <= tol(1e-8),
        },
        PointwiseRow {
            subject: chart.name().to_string(),
            check: "metrinilic-basis".into(),
            samples: points,
            max_residual: metrinilic_basis,
            tolerance: tol(1e-8),
            pass: metrinilic_basis <= tol(1e-8),
        },
    ];
    if worst_order.is_finite() {
        // Report the deviation of the observed FD order from 2.
        let deviation = (worst_order - 2.0).abs();
        rows.push(PointwiseRow {
            subject: chart.name().to_string(),
            check: "fd-order-deviation".into(),
            samples: 5,
            max_residual: deviation,
            tolerance: 0.3,
            pass: worst_order >= 1.7,
        });
    }
    Ok(rows)
}

fn run_ambient(args: &AmbientArgs) -> Result<bool, CliError> {
    let file = load_file_config()?;
    let chart_names: Vec<String> = if !args.charts.is_empty() {
        args.charts.clone()
    } else {
        vec!["cartesian".into(), "spherical".into(), "cylindrical".into()]
    };
    let points = args.points.or(file.points).unwrap_or(50);
    let fd_step = args.fd_step.or(file.fd_step).unwrap_or(FD_STEP_ANALYTIC);
    let seed = args.seed.or(file.seed).unwrap_or(42);
    let format_name =
        args.format.clone().or(file.format).unwrap_or_else(|| "table".to_string());
    let format = OutputFormat::parse(&format_name).map_err(|e| CliError::Config(e.to_string()))?;

    let mut rows = Vec::new();
    for name in &chart_names {
        let chart = chart::chart_by_name(name).map_err(|e| CliError::Config(e.to_string()))?;
        rows.extend(ambient_rows(&chart, points, fd_step, args.tol, seed)?);
    }
    let all_pass = rows.iter().all(|r| r.pass);
    let text = match format {
        OutputFormat::Table => report::render_pointwise_table(&rows),
        OutputFormat::Csv => report::render_pointwise_csv(&rows),
        OutputFormat::Json => report::render_pointwise_json(&rows),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Run(format!("cannot write {path:?}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(all_pass)
}

fn run_list() -> Result<bool, CliError> {
    println!("surfaces:");
    for (_, syntax) in zoo::selector_catalog() {
        println!("  {syntax}");
    }
    println!("identities:");
    for id in IdentityId::ALL {
        println!("  {id}");
    }
    println!("  all (every identity applicable to the surface)");
    println!("charts:");
    for chart in chart::builtin_charts() {
        println!("  {}", chart.name());
    }
    Ok(true)
}

/// Entry point used by `main`; maps outcomes to the exit-code contract.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Converge(args) => run_converge(args),
        Command::Pointwise(args) => run_pointwise(args),
        Command::AmbientCheck(args) => run_ambient(args),
        Command::List => run_list(),
    };
    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(message)) => {
            eprintln!("configuration error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Run(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
