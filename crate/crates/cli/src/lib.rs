//! Command-line front end for `odesurf`.
//!
//! A [`JobSpec`] names one command, its curve or surface spec, the quadrature
//! settings and the output format. [`run`] turns it into a [`Report`], whose
//! [`Report::exit_code`] follows the 0 / 1 / 2 contract: converged, error,
//! not converged.

pub mod num;
pub mod report;
pub mod spec;
pub mod tables;

use clap::{Args, Parser, Subcommand};
use odesurf::functionals::{abs_theta_total, boundary_limit_check, gauss_bonnet_check, gauss_total, kappa_total, mean_curvature_lp, theta_total};
use odesurf::quadrature::QuadConfig;
use std::path::PathBuf;

pub use report::{Format, Report, EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK};
use report::{BoundaryReport, CurveQuantity, CurveReport, GaussBonnetSummary, MeanLpReport, SurfaceGaussReport};
use spec::{parse_curve, parse_surface, CurveSpec, SurfaceSpecJson};
pub use tables::TableId;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("MalformedSpec: {0}")]
    MalformedSpec(String),
    #[error("Io: {0}")]
    Io(String),
    #[error("{0}")]
    Core(#[from] odesurf::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::MalformedSpec(_) => "MalformedSpec",
            CliError::Io(_) => "Io",
            CliError::Core(e) => e.name(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "odesurf", version, about = "Total curvatures of ODE curves and tensor-product surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Debug, Args)]
pub struct GlobalOptions {
    /// Relative tolerance for each integral.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance for each integral.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Largest half-width of the integration square before the tail step.
    #[arg(long, global = true)]
    pub max_half_width: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Total first curvature κ[σ] of a curve.
    CurveKappa {
        /// Curve spec: inline JSON or a file path.
        curve: String,
    },
    /// Total second curvature Θ[σ] of a curve.
    CurveTheta {
        curve: String,
        /// Integrate |Θ| instead.
        #[arg(long)]
        absolute: bool,
    },
    /// Total Gauss curvature K[Σ] of a surface.
    SurfaceGauss {
        /// Surface spec: inline JSON or a file path.
        surface: String,
        /// Integrate |K| instead.
        #[arg(long)]
        absolute: bool,
    },
    /// K[Σ], Θ[σ1], Θ[σ2] and the Gauss-Bonnet residual.
    GaussBonnet { surface: String },
    /// Integrability of ‖H‖^p against the area measure.
    MeanLp {
        surface: String,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
    },
    /// Edge integrals of geodesic curvature on growing squares.
    BoundaryLimit {
        surface: String,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        radii: Vec<f64>,
    },
    /// Recompute one of the published example tables.
    Reproduce {
        #[arg(value_enum)]
        table: TableId,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    CurveKappa(CurveSpec),
    CurveTheta { curve: CurveSpec, absolute: bool },
    SurfaceGauss { surface: SurfaceSpecJson, absolute: bool },
    GaussBonnet(SurfaceSpecJson),
    MeanLp { surface: SurfaceSpecJson, p: f64 },
    BoundaryLimit { surface: SurfaceSpecJson, radii: Vec<f64> },
    Reproduce(TableId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub quad: QuadConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec { command, quad: QuadConfig::default(), format: Format::Json, out: None }
    }

    /// Parse specs and settings. Curves and surfaces are validated here, so
    /// no computation starts on a bad spec.
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let o = &cli.options;
        let mut quad = QuadConfig::default();
        if let Some(x) = o.rel_tol {
            quad.rel_tol = x;
        }
        if let Some(x) = o.abs_tol {
            quad.abs_tol = x;
        }
        if let Some(x) = o.max_half_width {
            quad.max_half_width = x;
            quad.initial_half_width = quad.initial_half_width.min(x);
        }
        quad.validate()?;
        let surface = |s: &str| -> Result<SurfaceSpecJson, CliError> {
            let s = parse_surface(s)?;
            s.build()?;
            Ok(s)
        };
        let curve = |s: &str| -> Result<CurveSpec, CliError> {
            let c = parse_curve(s)?;
            c.build()?;
            Ok(c)
        };
        let command = match &cli.command {
            CliCommand::CurveKappa { curve: c } => Command::CurveKappa(curve(c)?),
            CliCommand::CurveTheta { curve: c, absolute } => Command::CurveTheta { curve: curve(c)?, absolute: *absolute },
            CliCommand::SurfaceGauss { surface: s, absolute } => {
                Command::SurfaceGauss { surface: surface(s)?, absolute: *absolute }
            }
            CliCommand::GaussBonnet { surface: s } => Command::GaussBonnet(surface(s)?),
            CliCommand::MeanLp { surface: s, p } => Command::MeanLp { surface: surface(s)?, p: *p },
            CliCommand::BoundaryLimit { surface: s, radii } => {
                if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                    return Err(odesurf::Error::PreconditionViolation("radii must be positive and finite".into()).into());
                }
                Command::BoundaryLimit { surface: surface(s)?, radii: radii.clone() }
            }
            CliCommand::Reproduce { table } => Command::Reproduce(*table),
        };
        Ok(JobSpec { command, quad, format: o.format, out: o.out.clone() })
    }
}

fn curve_report(curve: &CurveSpec, quantity: CurveQuantity, cfg: &QuadConfig) -> Result<Report, CliError> {
    let c = curve.build()?;
    let r = match quantity {
        CurveQuantity::Kappa => kappa_total(&c, cfg)?,
        CurveQuantity::Theta => theta_total(&c, cfg)?,
        CurveQuantity::AbsTheta => abs_theta_total(&c, cfg)?,
    };
    Ok(Report::Curve(CurveReport { curve: curve.clone(), quantity, result: (&r).into() }))
}

/// Run one job on the current rayon pool.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let cfg = &job.quad;
    match &job.command {
        Command::CurveKappa(c) => curve_report(c, CurveQuantity::Kappa, cfg),
        Command::CurveTheta { curve, absolute } => {
            curve_report(curve, if *absolute { CurveQuantity::AbsTheta } else { CurveQuantity::Theta }, cfg)
        }
        Command::SurfaceGauss { surface, absolute } => {
            let r = gauss_total(&surface.build()?, cfg, *absolute)?;
            Ok(Report::SurfaceGauss(SurfaceGaussReport { surface: surface.clone(), absolute: *absolute, result: (&r).into() }))
        }
        Command::GaussBonnet(surface) => {
            let r = gauss_bonnet_check(&surface.build()?, cfg)?;
            Ok(Report::GaussBonnet(GaussBonnetSummary::new(surface.clone(), &r)))
        }
        Command::MeanLp { surface, p } => {
            let d = mean_curvature_lp(&surface.build()?, *p, cfg)?;
            Ok(Report::MeanLp(MeanLpReport::new(surface.clone(), &d)))
        }
        Command::BoundaryLimit { surface, radii } => {
            let rows = boundary_limit_check(&surface.build()?, cfg, radii)?;
            Ok(Report::BoundaryLimit(BoundaryReport { surface: surface.clone(), rows: rows.iter().map(Into::into).collect() }))
        }
        Command::Reproduce(id) => Ok(Report::Table(tables::reproduce(*id, cfg)?)),
    }
}

/// Run `job` on a dedicated pool of `threads` workers, or the global pool.
pub fn run_with_threads(job: &JobSpec, threads: Option<usize>) -> Result<Report, CliError> {
    match threads {
        None => run(job),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
            pool.install(|| run(job))
        }
    }
}

/// Everything `main` does short of touching the process: the rendered
/// report (or error message) and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(cli: &Cli) -> Outcome {
    let fail = |e: CliError| Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_ERROR };
    let job = match JobSpec::from_cli(cli) {
        Ok(j) => j,
        Err(e) => return fail(e),
    };
    let report = match run_with_threads(&job, cli.options.threads) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let text = match report.render(job.format) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let code = report.exit_code();
    let stderr = if code == EXIT_NOT_CONVERGED { "warning: not converged; see tail history\n".to_string() } else { String::new() };
    match &job.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { stdout: String::new(), stderr, code },
            Err(e) => fail(CliError::Io(format!("{}: {e}", path.display()))),
        },
        None => Outcome { stdout: text, stderr, code },
    }
}
