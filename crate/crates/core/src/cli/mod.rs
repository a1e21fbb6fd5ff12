//! Command-line front end: spectra, lower-symbol grids, commutator-defect
//! tables and the invariant check suites.

mod config;
mod output;
mod suites;

use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::circlecs::{angle_operator_cyl, commutator_number_angle, lower_symbol_cyl, CylinderPoint, DistributionSpec};
use crate::halfcircle::{
    angle_upper, build_shift_family, commutator_defect_window, full_angle, sigma_isometry, AngleMethod,
};
use crate::linalg::{commutator, eigenvalues, op_norm_max, window_restrict, BasisMode, BasisSpec, TruncatedOperator};
use crate::whquant::{
    angle_matrix, canonical_angle_b, lower_symbol, quantize, PhaseSpaceFunction, PhaseSpacePoint, QuadratureScheme,
    WeightSpec,
};

pub use config::{parse_config_file, ConfigError, Construction, ExperimentConfig, Format, RawConfig};
pub use output::{CommutatorRow, SpectrumRow, SymbolRow};
pub use suites::{run_suite, Record, Status, SuiteOptions, SUITE_NAMES};

/// Exit code when every invariant passed or an output was written.
pub const EXIT_OK: u8 = 0;
/// Exit code when a check suite recorded a failure.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit code for unusable arguments or configuration.
pub const EXIT_USAGE: u8 = 2;
/// Exit code when a computation returned an error.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "anglekit", version, about = "Angle operators on truncated Hilbert spaces")]
pub struct Cli {
    /// Worker threads for sweeps and quadrature [default: all cores]
    #[arg(long, global = true, env = "ANGLEKIT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sorted eigenvalues of an angle operator
    Spectrum(RawConfig),
    /// Lower symbol of an angle operator on a (J, angle) grid
    LowerSymbol(RawConfig),
    /// Commutator defect against the expected right-hand side, per window
    Commutator(RawConfig),
    /// Run an invariant suite and report pass/fail per invariant
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// specfun, linalg, halfcircle, whquant, circlecs, moments or all
    pub suite: String,

    #[command(flatten)]
    pub config: RawConfig,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let pool = match cli.threads {
        Some(0) => {
            let _ = writeln!(err, "error: threads must be at least 1");
            return EXIT_USAGE;
        }
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let (code, o, e) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = dispatch(cli.command, &mut o, &mut e);
        (code, o, e)
    });
    let _ = out.write_all(&o);
    let _ = err.write_all(&e);
    code
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let (name, raw) = match &command {
        Command::Spectrum(r) => ("spectrum", r),
        Command::LowerSymbol(r) => ("lower-symbol", r),
        Command::Commutator(r) => ("commutator", r),
        Command::Check(c) => ("check", &c.config),
    };
    let cfg = match raw.resolve() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Command::Check(c) = &command {
        return check(&c.suite, &cfg, out, err);
    }
    let produced = match command {
        Command::Spectrum(_) => spectrum(&cfg).map(|rows| output::render_spectrum(&rows, cfg.format)),
        Command::LowerSymbol(_) => lower_symbol_grid(&cfg, err).map(|rows| output::render_symbols(&rows, cfg.format)),
        Command::Commutator(_) => commutator_table(&cfg).map(|rows| output::render_commutators(&rows, cfg.format)),
        Command::Check(_) => unreachable!("handled above"),
    };
    match produced {
        Ok(text) => match output::emit(&text, cfg.output.as_deref(), out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {name}: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err(CommandError::Usage(msg)) => {
            let _ = writeln!(err, "error: {name}: {msg}");
            EXIT_USAGE
        }
        Err(CommandError::Numerical(e)) => {
            let _ = writeln!(err, "error: {name}: {e}");
            EXIT_NUMERICAL
        }
    }
}

/// Why a command produced no output.
#[derive(Debug)]
pub enum CommandError {
    /// a valid configuration the command cannot serve (exit 2)
    Usage(String),
    /// a library error during the computation (exit 3)
    Numerical(crate::Error),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(m) => f.write_str(m),
            CommandError::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl From<crate::Error> for CommandError {
    fn from(e: crate::Error) -> Self {
        CommandError::Numerical(e)
    }
}

pub type CmdResult<T> = std::result::Result<T, CommandError>;

fn unsupported(cfg: &ExperimentConfig, what: &str) -> CommandError {
    CommandError::Usage(format!("construction `{}` has no {what}", cfg.construction.name()))
}

/// Sorted eigenvalues of the configured angle operator.
pub fn spectrum(cfg: &ExperimentConfig) -> CmdResult<Vec<SpectrumRow>> {
    let (op, param) = match cfg.construction {
        Construction::Halfcircle => {
            let fam = build_shift_family(BasisSpec::centred(cfg.mode, cfg.dim)?)?;
            (full_angle(&fam)?, cfg.mode.name().to_string())
        }
        Construction::Wh => (angle_matrix(cfg.t, cfg.dim)?, cfg.t.to_string()),
        Construction::Circle => {
            let dist = DistributionSpec::gaussian(cfg.sigma)?;
            (
                angle_operator_cyl(&dist, BasisSpec::centred(BasisMode::TwoSided, cfg.dim)?)?,
                cfg.sigma.to_string(),
            )
        }
        Construction::Canonical => {
            if cfg.mode == BasisMode::OneSided {
                return Err(CommandError::Usage(
                    "construction `canonical` needs mode two-sided or cyclic".into(),
                ));
            }
            let q = cfg.q_cutoff_or_default();
            (
                canonical_angle_b(BasisSpec::centred(cfg.mode, cfg.dim)?, q)?,
                q.to_string(),
            )
        }
    };
    let values = eigenvalues(&op)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(index, eigenvalue)| SpectrumRow {
            construction: cfg.construction.name(),
            dim: cfg.dim,
            param: param.clone(),
            index,
            eigenvalue,
        })
        .collect())
}

/// Lower symbol of the angle operator at every configured `J` and `gamma_grid`
/// equally spaced angles in `[0, 2π)`.
pub fn lower_symbol_grid(cfg: &ExperimentConfig, err: &mut dyn Write) -> CmdResult<Vec<SymbolRow>> {
    let angles: Vec<f64> = (0..cfg.gamma_grid)
        .map(|k| 2.0 * PI * k as f64 / cfg.gamma_grid as f64)
        .collect();
    let mut rows = Vec::with_capacity(angles.len() * cfg.j_values.len());
    let mut worst_leak: f64 = 0.0;
    match cfg.construction {
        Construction::Wh => {
            let a = angle_matrix(cfg.t, cfg.dim)?;
            let w = WeightSpec::thermal(cfg.t)?;
            for &j in &cfg.j_values {
                for &g in &angles {
                    let s = lower_symbol(&a, &w, PhaseSpacePoint::new(j, g)?)?;
                    worst_leak = worst_leak.max(s.leakage);
                    rows.push(SymbolRow::new(j, g, s.value));
                }
            }
        }
        Construction::Circle => {
            let dist = DistributionSpec::gaussian(cfg.sigma)?;
            let a = angle_operator_cyl(&dist, BasisSpec::centred(BasisMode::TwoSided, cfg.dim)?)?;
            for &j in &cfg.j_values {
                for &phi in &angles {
                    let s = lower_symbol_cyl(&a, &dist, CylinderPoint::new(j, phi)?)?;
                    worst_leak = worst_leak.max(s.leakage);
                    rows.push(SymbolRow::new(j, phi, s.value));
                }
            }
        }
        _ => return Err(unsupported(cfg, "lower symbol")),
    }
    if worst_leak > crate::whquant::LEAKAGE_WARNING {
        let _ = writeln!(
            err,
            "warning: coherent states lose up to {worst_leak:.3e} of their norm to the truncation"
        );
    }
    Ok(rows)
}

/// Defect of the configured commutator relation on each window, for every
/// dimension in the sweep.
///
/// halfcircle: `‖[Ǎ, N] − iΣ‖` on `|n| ≤ w` (or `[N, Ǎ]` with
/// `order = number-first`); wh: `‖[A_z, A_z̄] − I‖` on the leading `w × w`
/// block; circle: `‖[A_J, A_a] − i p_{|n−n'|}‖` on `|n| ≤ w`.
pub fn commutator_table(cfg: &ExperimentConfig) -> CmdResult<Vec<CommutatorRow>> {
    let mut rows = Vec::new();
    for &dim in &cfg.dims {
        let defects: Vec<(usize, f64)> = match cfg.construction {
            Construction::Halfcircle => {
                if cfg.mode == BasisMode::OneSided {
                    return Err(CommandError::Usage(
                        "commutator defects need mode two-sided or cyclic".into(),
                    ));
                }
                let fam = build_shift_family(BasisSpec::centred(cfg.mode, dim)?)?;
                let cs = fam.cos_sin();
                let a = angle_upper(&cs.c, AngleMethod::Spectral, Default::default())?;
                let sig = sigma_isometry(&cs.s)?;
                let mut out = Vec::new();
                for &w in &cfg.windows {
                    check_centred_window(w, dim)?;
                    let wi = w as i64;
                    out.push((w, commutator_defect_window(&fam, &a, &sig, -wi, wi, cfg.order)?));
                }
                out
            }
            Construction::Wh => {
                let quad = QuadratureScheme::new(cfg.n_j, cfg.n_gamma)?;
                let weight = WeightSpec::thermal(cfg.t)?;
                let az = quantize(&PhaseSpaceFunction::z(), &weight, &quad, dim)?.operator;
                let azb = quantize(&PhaseSpaceFunction::z_bar(), &weight, &quad, dim)?.operator;
                let k = commutator(&az, &azb)?;
                let d = k.minus(&TruncatedOperator::identity(k.basis()))?;
                let mut out = Vec::new();
                for &w in &cfg.windows {
                    if w == 0 || w > dim {
                        return Err(CommandError::Usage(format!("window {w} must lie in 1..={dim}")));
                    }
                    out.push((w, op_norm_max(&d.leading_block(w)?)));
                }
                out
            }
            Construction::Circle => {
                let dist = DistributionSpec::gaussian(cfg.sigma)?;
                let basis = BasisSpec::centred(BasisMode::TwoSided, dim)?;
                let c = commutator_number_angle(&dist, basis, 0)?;
                let d = c.from_operators.minus(&c.direct)?;
                let mut out = Vec::new();
                for &w in &cfg.windows {
                    check_centred_window(w, dim)?;
                    let wi = w as i64;
                    out.push((w, op_norm_max(&window_restrict(&d, -wi, wi)?)));
                }
                out
            }
            Construction::Canonical => return Err(unsupported(cfg, "commutator table")),
        };
        let param = match cfg.construction {
            Construction::Halfcircle => cfg.order_name().to_string(),
            Construction::Wh => cfg.t.to_string(),
            _ => cfg.sigma.to_string(),
        };
        rows.extend(defects.into_iter().map(|(window, defect)| CommutatorRow {
            construction: cfg.construction.name(),
            dim,
            param: param.clone(),
            window,
            defect,
        }));
    }
    Ok(rows)
}

fn check_centred_window(w: usize, dim: usize) -> CmdResult<()> {
    if w == 0 || 2 * w >= dim {
        return Err(CommandError::Usage(format!(
            "window {w} must satisfy 0 < 2w < D = {dim}"
        )));
    }
    Ok(())
}

fn check(suite: &str, cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&suite) {
        vec![suite]
    } else {
        let _ = writeln!(
            err,
            "error: unknown suite `{suite}` (expected one of {}, all)",
            SUITE_NAMES.join(", ")
        );
        return EXIT_USAGE;
    };
    let opts = SuiteOptions {
        dim: cfg.dim,
        mode: cfg.mode,
    };
    let mut records = Vec::new();
    for name in names {
        match run_suite(name, &opts) {
            Ok(r) => records.extend(r),
            Err(e) => {
                let _ = writeln!(err, "error: suite {name}: {e}");
                return EXIT_NUMERICAL;
            }
        }
    }
    let json = output::render_report(&records);
    let lines = output::render_check_lines(&records);
    let written = match (&cfg.output, cfg.format) {
        (Some(path), _) => output::emit(&lines, None, out).and_then(|_| output::emit(&json, Some(path), out)),
        (None, Format::Json) => output::emit(&json, None, out),
        (None, Format::Csv) => output::emit(&lines, None, out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: check: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if records.iter().any(|r| r.status == Status::Fail) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}
