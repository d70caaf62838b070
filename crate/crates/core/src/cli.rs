//! Command-line front end.
//!
//! One subcommand per verifiable property, named `verify-<property>`, plus
//! `replay` for re-executing a previously written counterexample file. Each
//! subcommand takes exactly the parameters that apply to its property:
//! `--system`, `--intbits` and `--fracbits` everywhere; `--max`/`--min`
//! (stimulus dynamic range) on the transfer-function and closed-loop rows
//! and optionally on the state-space rows (default: the full representable
//! range); `--bound` on the search-based rows; `--error` on the
//! quantization-error rows; `--cmode` as an optional override of the
//! connection mode recorded in a closed-loop system file.
//!
//! Optional flags shared by every verification subcommand, with defaults:
//! `--realization dfi`, `--overflow-mode wrap`, `--rounding floor`,
//! `--delta` (required exactly when a delta realization is chosen),
//! `--engine exhaustive`, `--samples 100000`, `--seed 1`, `--grid`
//! (stimulus stride; default = one least significant bit), and
//! `--ce-out counterexample.json`.
//!
//! Protocol: the verdict is printed to standard output as the exact string
//! `VERIFICATION SUCCESSFUL` or `VERIFICATION FAILED`; everything else
//! (progress, notes, the counterexample path) goes to standard error. Exit
//! codes: 0 = property holds, 1 = counterexample found and written,
//! 2 = usage or input error. When the exhaustive engine refuses a search
//! space larger than its budget, the run falls back to seeded random
//! sampling and says so on standard error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bmc::{
    EngineMode, Property, Verdict, VerdictStatus, VerificationTask, VerifyError,
};
use crate::counterexample::{Counterexample, Witness};
use crate::fixedpoint::{fwl_poly, FxFormat, OverflowMode, Rounding};
use crate::realization::{FxRealizer, RealizationForm, RealizationSpec};
use crate::sysmodel::{CMode, SystemDoc};
use crate::verify;

/// Entry point used by the `fwlcheck` binary. Returns the process exit
/// code: 0 = property holds, 1 = counterexample found, 2 = usage or input
/// error. (Usage errors detected by the argument parser exit directly,
/// also with code 2.)
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fwlcheck",
    version,
    about = "Verifier for fixed-point implementations of digital controllers and filters",
    after_help = "Verdicts are printed to stdout as VERIFICATION SUCCESSFUL or VERIFICATION \
                  FAILED; a failing run writes a replayable counterexample file. Exit codes: \
                  0 = holds, 1 = counterexample written, 2 = usage or input error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Path to the system description (JSON)
    #[arg(long, value_name = "FILE")]
    system: PathBuf,
    /// Integer bits I of the <I,F> fixed-point format
    #[arg(long, value_name = "I")]
    intbits: u32,
    /// Fractional bits F of the <I,F> fixed-point format
    #[arg(long, value_name = "F")]
    fracbits: u32,
    /// Realization structure for the fixed-point implementation
    #[arg(long, value_enum, default_value_t = FormOpt::Dfi)]
    realization: FormOpt,
    /// Delta operator parameter (required by the delta realizations)
    #[arg(long, allow_negative_numbers = true, value_name = "DELTA")]
    delta: Option<f64>,
    /// What happens when an arithmetic result leaves the representable range
    #[arg(long, value_enum, default_value_t = ModeOpt::Wrap)]
    overflow_mode: ModeOpt,
    /// How products are rescaled back to F fractional bits
    #[arg(long, value_enum, default_value_t = RoundOpt::Floor)]
    rounding: RoundOpt,
    /// Where to write the counterexample of a failing run
    #[arg(long, value_name = "FILE", default_value = "counterexample.json")]
    ce_out: PathBuf,
}

/// Required stimulus range (transfer-function and closed-loop rows).
#[derive(Debug, Args)]
struct RangeArgs {
    /// Maximum of the input dynamic range
    #[arg(long, allow_negative_numbers = true)]
    max: f64,
    /// Minimum of the input dynamic range
    #[arg(long, allow_negative_numbers = true)]
    min: f64,
}

/// Optional stimulus range (state-space rows; default = representable range).
#[derive(Debug, Args)]
struct SsRangeArgs {
    /// Maximum of the input dynamic range (default: largest representable)
    #[arg(long, allow_negative_numbers = true, requires = "min")]
    max: Option<f64>,
    /// Minimum of the input dynamic range (default: smallest representable)
    #[arg(long, allow_negative_numbers = true, requires = "max")]
    min: Option<f64>,
}

#[derive(Debug, Args)]
struct BoundArg {
    /// Number of execution steps k explored by the search
    #[arg(long, value_name = "K")]
    bound: usize,
}

#[derive(Debug, Args)]
struct ErrorArg {
    /// Largest tolerated |fixed-point output - reference output|
    #[arg(long, allow_negative_numbers = true, value_name = "EPS")]
    error: f64,
}

#[derive(Debug, Args)]
struct CmodeArg {
    /// Override the connection mode recorded in the system file
    #[arg(long, value_enum)]
    cmode: Option<CmodeOpt>,
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Search strategy for the bounded properties
    #[arg(long, value_enum, default_value_t = EngineOpt::Exhaustive)]
    engine: EngineOpt,
    /// Candidates drawn by the random engine
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// RNG seed for the random engine
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Stimulus grid stride in real units (default: every representable
    /// value in the dynamic range)
    #[arg(long, value_name = "STRIDE")]
    grid: Option<f64>,
}

impl Default for EngineArgs {
    fn default() -> Self {
        EngineArgs {
            engine: EngineOpt::Exhaustive,
            samples: 100_000,
            seed: 1,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormOpt {
    Dfi,
    Dfii,
    Tdfii,
    Ddfi,
    Ddfii,
    Tddfii,
}

impl From<FormOpt> for RealizationForm {
    fn from(f: FormOpt) -> Self {
        match f {
            FormOpt::Dfi => RealizationForm::Dfi,
            FormOpt::Dfii => RealizationForm::Dfii,
            FormOpt::Tdfii => RealizationForm::Tdfii,
            FormOpt::Ddfi => RealizationForm::Ddfi,
            FormOpt::Ddfii => RealizationForm::Ddfii,
            FormOpt::Tddfii => RealizationForm::Tddfii,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeOpt {
    Wrap,
    Saturate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoundOpt {
    Floor,
    NearestEven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineOpt {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CmodeOpt {
    Series,
    Feedback,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check that every pole of the quantized transfer function lies
    /// strictly inside the unit circle
    VerifyStability {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Check that every zero of the quantized transfer function lies
    /// strictly inside the unit circle
    VerifyMinimumPhase {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Search all inputs up to the bound for an arithmetic overflow
    VerifyOverflow {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Search all initial states for a zero-input limit cycle
    VerifyLimitCycle {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Search all inputs up to the bound for a fixed-point output that
    /// drifts more than the tolerance from the real-arithmetic reference
    VerifyError {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        error: ErrorArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Check stability of the loop closed over the quantized controller
    VerifyClosedStability {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        cmode: CmodeArg,
    },
    /// Search all reference inputs for excess closed-loop output error
    VerifyClosedQuantizationError {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        cmode: CmodeArg,
        #[command(flatten)]
        error: ErrorArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Search all controller and plant initial states for a zero-input
    /// closed-loop limit cycle
    VerifyClosedLimitCycle {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        cmode: CmodeArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Check that every eigenvalue of the quantized state matrix lies
    /// strictly inside the unit circle
    VerifySsStability {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: SsRangeArgs,
    },
    /// Check that the quantized pair (A, B) is controllable
    VerifySsControllability {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: SsRangeArgs,
    },
    /// Check that the quantized pair (A, C) is observable
    VerifySsObservability {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: SsRangeArgs,
    },
    /// Search all inputs up to the bound for excess state-space output error
    VerifySsQuantizationError {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        range: SsRangeArgs,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        error: ErrorArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Re-execute a counterexample file and confirm or refute it
    Replay {
        /// Path to a counterexample JSON written by a failing run
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteCe {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Verifier(#[from] crate::Error),
}

impl From<crate::fixedpoint::FxError> for CliError {
    fn from(e: crate::fixedpoint::FxError) -> Self {
        CliError::Verifier(e.into())
    }
}

impl From<crate::realization::RealizationError> for CliError {
    fn from(e: crate::realization::RealizationError) -> Self {
        CliError::Verifier(e.into())
    }
}

impl From<crate::sysmodel::SysModelError> for CliError {
    fn from(e: crate::sysmodel::SysModelError) -> Self {
        CliError::Verifier(e.into())
    }
}

impl From<crate::counterexample::CeError> for CliError {
    fn from(e: crate::counterexample::CeError) -> Self {
        CliError::Verifier(e.into())
    }
}

/// Everything a verification subcommand contributes beyond the property.
#[derive(Debug)]
struct Request {
    property: Property,
    common: CommonArgs,
    max: Option<f64>,
    min: Option<f64>,
    bound: Option<usize>,
    error: Option<f64>,
    cmode: Option<CMode>,
    engine: EngineArgs,
}

fn execute(cmd: Cmd) -> Result<i32, CliError> {
    let req = match cmd {
        Cmd::Replay { file } => return replay(&file),
        Cmd::VerifyStability { common, range } => Request {
            property: Property::Stability,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: None,
            error: None,
            cmode: None,
            engine: EngineArgs::default(),
        },
        Cmd::VerifyMinimumPhase { common, range } => Request {
            property: Property::MinimumPhase,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: None,
            error: None,
            cmode: None,
            engine: EngineArgs::default(),
        },
        Cmd::VerifyOverflow {
            common,
            range,
            bound,
            engine,
        } => Request {
            property: Property::Overflow,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: Some(bound.bound),
            error: None,
            cmode: None,
            engine,
        },
        Cmd::VerifyLimitCycle {
            common,
            range,
            bound,
            engine,
        } => Request {
            property: Property::LimitCycle,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: Some(bound.bound),
            error: None,
            cmode: None,
            engine,
        },
        Cmd::VerifyError {
            common,
            range,
            bound,
            error,
            engine,
        } => Request {
            property: Property::QuantizationError,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: Some(bound.bound),
            error: Some(error.error),
            cmode: None,
            engine,
        },
        Cmd::VerifyClosedStability {
            common,
            range,
            cmode,
        } => Request {
            property: Property::ClosedStability,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: None,
            error: None,
            cmode: cmode.cmode.map(Into::into),
            engine: EngineArgs::default(),
        },
        Cmd::VerifyClosedQuantizationError {
            common,
            range,
            bound,
            cmode,
            error,
            engine,
        } => Request {
            property: Property::ClosedQuantizationError,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: Some(bound.bound),
            error: Some(error.error),
            cmode: cmode.cmode.map(Into::into),
            engine,
        },
        Cmd::VerifyClosedLimitCycle {
            common,
            range,
            bound,
            cmode,
            engine,
        } => Request {
            property: Property::ClosedLimitCycle,
            common,
            max: Some(range.max),
            min: Some(range.min),
            bound: Some(bound.bound),
            error: None,
            cmode: cmode.cmode.map(Into::into),
            engine,
        },
        Cmd::VerifySsStability { common, range } => Request {
            property: Property::SsStability,
            common,
            max: range.max,
            min: range.min,
            bound: None,
            error: None,
            cmode: None,
            engine: EngineArgs::default(),
        },
        Cmd::VerifySsControllability { common, range } => Request {
            property: Property::SsControllability,
            common,
            max: range.max,
            min: range.min,
            bound: None,
            error: None,
            cmode: None,
            engine: EngineArgs::default(),
        },
        Cmd::VerifySsObservability { common, range } => Request {
            property: Property::SsObservability,
            common,
            max: range.max,
            min: range.min,
            bound: None,
            error: None,
            cmode: None,
            engine: EngineArgs::default(),
        },
        Cmd::VerifySsQuantizationError {
            common,
            range,
            bound,
            error,
            engine,
        } => Request {
            property: Property::SsQuantizationError,
            common,
            max: range.max,
            min: range.min,
            bound: Some(bound.bound),
            error: Some(error.error),
            cmode: None,
            engine,
        },
    };
    run_request(req)
}

impl From<CmodeOpt> for CMode {
    fn from(c: CmodeOpt) -> Self {
        match c {
            CmodeOpt::Series => CMode::Series,
            CmodeOpt::Feedback => CMode::Feedback,
        }
    }
}

fn build_task(req: &Request) -> Result<VerificationTask, CliError> {
    let mode = match req.common.overflow_mode {
        ModeOpt::Wrap => OverflowMode::Wrap,
        ModeOpt::Saturate => OverflowMode::Saturate,
    };
    let rounding = match req.common.rounding {
        RoundOpt::Floor => Rounding::Floor,
        RoundOpt::NearestEven => Rounding::NearestEven,
    };
    let mut fmt = FxFormat::new(req.common.intbits, req.common.fracbits, mode, rounding)?;
    if let (Some(min), Some(max)) = (req.min, req.max) {
        fmt = fmt.with_dynamic_range(min, max)?;
    }

    let text = std::fs::read_to_string(&req.common.system).map_err(|source| CliError::Read {
        path: req.common.system.clone(),
        source,
    })?;
    let mut doc = SystemDoc::parse(&text)?;
    if let (Some(c), SystemDoc::ClTf(d)) = (req.cmode, &mut doc) {
        d.cmode = c;
    }

    let spec = RealizationSpec::new(req.common.realization.into(), req.common.delta)?;

    let mut task = match req.bound {
        Some(k) => VerificationTask::bounded(doc, fmt, req.property, k),
        None => VerificationTask::analytic(doc, fmt, req.property),
    };
    task.realization = spec;
    task.error_bound = req.error;
    task.engine.mode = match req.engine.engine {
        EngineOpt::Exhaustive => EngineMode::Exhaustive,
        EngineOpt::Random => EngineMode::Random,
    };
    task.engine.samples = req.engine.samples;
    task.engine.seed = req.engine.seed;
    task.engine.input_grid = req.engine.grid;
    Ok(task)
}

/// Design-time stderr note when quantizing the coefficients the property
/// actually rests on already leaves the representable range. Purely
/// informational: the verdict below is about the quantized system either
/// way.
fn warn_on_coefficient_overflow(task: &VerificationTask) {
    let fmt = task.fmt;
    let flagged = match task.property {
        Property::Stability => task
            .system
            .to_tf()
            .map(|tf| fwl_poly(tf.den(), fmt).1)
            .unwrap_or(false),
        Property::MinimumPhase => task
            .system
            .to_tf()
            .map(|tf| fwl_poly(tf.num(), fmt).1)
            .unwrap_or(false),
        Property::Overflow | Property::LimitCycle | Property::QuantizationError => task
            .system
            .to_tf()
            .ok()
            .and_then(|tf| FxRealizer::new(&tf, fmt, task.realization).ok())
            .map(|r| r.coeff_flagged)
            .unwrap_or(false),
        Property::ClosedStability => task
            .system
            .to_cl_tf()
            .map(|cl| {
                fwl_poly(cl.controller.num(), fmt).1 || fwl_poly(cl.controller.den(), fmt).1
            })
            .unwrap_or(false),
        Property::ClosedLimitCycle | Property::ClosedQuantizationError => task
            .system
            .to_cl_tf()
            .ok()
            .and_then(|cl| FxRealizer::new(&cl.controller, fmt, task.realization).ok())
            .map(|r| r.coeff_flagged)
            .unwrap_or(false),
        // State-space rows: quantization clamps/wraps matrix entries
        // silently by design; the stability/rank verdicts speak for
        // themselves.
        _ => false,
    };
    if flagged {
        eprintln!(
            "note: quantizing the coefficients to {fmt} leaves the representable range; \
             the verdict concerns the wrapped/clamped implementation"
        );
    }
}

fn run_request(req: Request) -> Result<i32, CliError> {
    let mut task = build_task(&req)?;
    warn_on_coefficient_overflow(&task);
    let verdict = match verify(&task) {
        Ok(v) => v,
        Err(crate::Error::Verify(VerifyError::BudgetExceeded { space, budget }))
            if matches!(task.engine.mode, EngineMode::Exhaustive) =>
        {
            eprintln!(
                "note: exhaustive search space of {space} candidates exceeds the budget of \
                 {budget}; falling back to random sampling ({} samples, seed {})",
                task.engine.samples, task.engine.seed
            );
            task.engine.mode = EngineMode::Random;
            verify(&task)?
        }
        Err(e) => return Err(e.into()),
    };
    report(&verdict, &req.common.ce_out)
}

fn report(verdict: &Verdict, ce_out: &Path) -> Result<i32, CliError> {
    eprintln!(
        "{}: {} ({} candidate{}, {} ms)",
        verdict.property,
        verdict.stats.label,
        verdict.stats.candidates,
        if verdict.stats.candidates == 1 { "" } else { "s" },
        verdict.stats.wall_ms
    );
    match verdict.status {
        VerdictStatus::Successful => {
            println!("VERIFICATION SUCCESSFUL");
            Ok(0)
        }
        VerdictStatus::Failed => {
            let ce = verdict
                .counterexample
                .as_ref()
                .expect("failed verdicts carry a counterexample");
            std::fs::write(ce_out, ce.to_json()).map_err(|source| CliError::WriteCe {
                path: ce_out.to_path_buf(),
                source,
            })?;
            eprintln!("violation: {}", describe_violation(ce));
            eprintln!("counterexample written to {}", ce_out.display());
            println!("VERIFICATION FAILED");
            Ok(1)
        }
    }
}

fn describe_violation(ce: &Counterexample) -> String {
    let v = &ce.violation;
    let mut s = String::new();
    match &v.witness {
        Some(Witness::Root { re, im, modulus }) => {
            let _ = write!(s, "{} at {re:.6}{im:+.6}i (modulus {modulus:.6})", v.kind);
        }
        Some(Witness::Rank { rank, required }) => {
            let _ = write!(s, "{}: rank {rank} < {required}", v.kind);
        }
        None => {
            let _ = write!(s, "{} at step {}, node {}", v.kind, v.step, v.node);
        }
    }
    s
}

fn replay(file: &Path) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(file).map_err(|source| CliError::Read {
        path: file.to_path_buf(),
        source,
    })?;
    let ce = Counterexample::from_json(&text)?;
    let report = ce.replay().map_err(crate::Error::from)?;
    if report.confirmed {
        eprintln!("{}", report.detail);
        println!("REPLAY CONFIRMED");
        Ok(0)
    } else {
        eprintln!("{}", report.detail);
        println!("REPLAY REFUTED");
        Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("fwlcheck").chain(args.iter().copied()))
    }

    #[test]
    fn flag_matrix_required_flags() {
        // The benchmark invocation parses.
        assert!(parse(&[
            "verify-stability",
            "--system",
            "benchmark.json",
            "--intbits",
            "2",
            "--fracbits",
            "13",
            "--max",
            "1",
            "--min",
            "-1",
        ])
        .is_ok());
        // Dropping a required range flag is a usage error.
        let e = parse(&[
            "verify-stability",
            "--system",
            "benchmark.json",
            "--intbits",
            "2",
            "--fracbits",
            "13",
            "--max",
            "1",
        ])
        .unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::MissingRequiredArgument);
        // Search rows require --bound.
        let e = parse(&[
            "verify-overflow",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "4",
            "--max",
            "1",
            "--min",
            "-1",
        ])
        .unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::MissingRequiredArgument);
        // Error rows additionally require --error.
        let e = parse(&[
            "verify-error",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "4",
            "--max",
            "1",
            "--min",
            "-1",
            "--bound",
            "5",
        ])
        .unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::MissingRequiredArgument);
    }

    #[test]
    fn flag_matrix_rejects_out_of_row_flags() {
        // --bound does not exist on the analytic rows.
        let e = parse(&[
            "verify-stability",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "13",
            "--max",
            "1",
            "--min",
            "-1",
            "--bound",
            "5",
        ])
        .unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::UnknownArgument);
        // --cmode exists only on the closed-loop rows.
        let e = parse(&[
            "verify-overflow",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "4",
            "--max",
            "1",
            "--min",
            "-1",
            "--bound",
            "5",
            "--cmode",
            "series",
        ])
        .unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::UnknownArgument);
    }

    #[test]
    fn ss_rows_take_the_range_optionally_but_as_a_pair() {
        let base = [
            "verify-ss-stability",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "13",
        ];
        assert!(parse(&base).is_ok());
        let mut with_both = base.to_vec();
        with_both.extend(["--max", "1", "--min", "-1"]);
        assert!(parse(&with_both).is_ok());
        let mut with_one = base.to_vec();
        with_one.extend(["--max", "1"]);
        let e = parse(&with_one).unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::MissingRequiredArgument);
    }

    #[test]
    fn negative_numbers_parse_as_values() {
        let cli = parse(&[
            "verify-error",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "4",
            "--max",
            "0.5",
            "--min",
            "-0.5",
            "--bound",
            "3",
            "--error",
            "-0.25",
        ])
        .unwrap();
        match cli.cmd {
            Cmd::VerifyError { range, error, .. } => {
                assert_eq!(range.min, -0.5);
                // Negative tolerances parse (and are rejected later with a
                // proper diagnostic, not a clap usage error).
                assert_eq!(error.error, -0.25);
            }
            c => panic!("wrong subcommand: {c:?}"),
        }
    }

    #[test]
    fn defaults_match_the_documented_table() {
        let cli = parse(&[
            "verify-overflow",
            "--system",
            "s.json",
            "--intbits",
            "2",
            "--fracbits",
            "4",
            "--max",
            "1",
            "--min",
            "-1",
            "--bound",
            "5",
        ])
        .unwrap();
        match cli.cmd {
            Cmd::VerifyOverflow { common, engine, .. } => {
                assert_eq!(common.realization, FormOpt::Dfi);
                assert_eq!(common.overflow_mode, ModeOpt::Wrap);
                assert_eq!(common.rounding, RoundOpt::Floor);
                assert_eq!(common.ce_out, PathBuf::from("counterexample.json"));
                assert_eq!(engine.engine, EngineOpt::Exhaustive);
                assert_eq!(engine.samples, 100_000);
                assert_eq!(engine.seed, 1);
                assert_eq!(engine.grid, None);
            }
            c => panic!("wrong subcommand: {c:?}"),
        }
    }

    #[test]
    fn build_task_maps_flags_onto_the_task() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sys.json");
        std::fs::write(
            &path,
            r#"{"type":"cl-tf",
                "controller":{"num":[0.5],"den":[1.0],"ts":0.001},
                "plant":{"num":[1.0],"den":[1.0,-0.5],"ts":0.001},
                "cmode":"series"}"#,
        )
        .unwrap();
        let cli = parse(&[
            "verify-closed-limit-cycle",
            "--system",
            path.to_str().unwrap(),
            "--intbits",
            "3",
            "--fracbits",
            "5",
            "--max",
            "0.5",
            "--min",
            "-0.5",
            "--bound",
            "4",
            "--cmode",
            "feedback",
            "--realization",
            "tdfii",
            "--overflow-mode",
            "saturate",
            "--rounding",
            "nearest-even",
            "--engine",
            "random",
            "--samples",
            "77",
            "--seed",
            "9",
            "--grid",
            "0.25",
        ])
        .unwrap();
        let req = match cli.cmd {
            Cmd::VerifyClosedLimitCycle {
                common,
                range,
                bound,
                cmode,
                engine,
            } => Request {
                property: Property::ClosedLimitCycle,
                common,
                max: Some(range.max),
                min: Some(range.min),
                bound: Some(bound.bound),
                error: None,
                cmode: cmode.cmode.map(Into::into),
                engine,
            },
            c => panic!("wrong subcommand: {c:?}"),
        };
        let task = build_task(&req).unwrap();
        assert_eq!(task.property, Property::ClosedLimitCycle);
        assert_eq!(task.bound, 4);
        assert_eq!(task.fmt.int_bits(), 3);
        assert_eq!(task.fmt.frac_bits(), 5);
        assert_eq!(task.fmt.overflow_mode(), OverflowMode::Saturate);
        assert_eq!(task.fmt.rounding(), Rounding::NearestEven);
        assert_eq!(task.realization.form, RealizationForm::Tdfii);
        assert!(matches!(task.engine.mode, EngineMode::Random));
        assert_eq!(task.engine.samples, 77);
        assert_eq!(task.engine.seed, 9);
        assert_eq!(task.engine.input_grid, Some(0.25));
        // The --cmode flag overrode the file's "series".
        match &task.system {
            SystemDoc::ClTf(d) => assert_eq!(d.cmode, CMode::Feedback),
            d => panic!("wrong doc kind: {d:?}"),
        }
        // Dynamic range flows into the format.
        let (lo, hi) = task.fmt.dyn_raw_bounds();
        assert_eq!((lo, hi), (-16, 16));
    }

    #[test]
    fn build_task_rejects_delta_mismatches() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sys.json");
        std::fs::write(
            &path,
            r#"{"type":"tf","num":[1.0],"den":[1.0,-0.5],"ts":0.001}"#,
        )
        .unwrap();
        let mk = |form: FormOpt, delta: Option<f64>| {
            let mut args = vec![
                "verify-overflow".to_string(),
                "--system".into(),
                path.to_str().unwrap().into(),
                "--intbits".into(),
                "2".into(),
                "--fracbits".into(),
                "4".into(),
                "--max".into(),
                "1".into(),
                "--min".into(),
                "-1".into(),
                "--bound".into(),
                "2".into(),
                "--realization".into(),
                match form {
                    FormOpt::Ddfi => "ddfi".into(),
                    _ => "dfi".to_string(),
                },
            ];
            if let Some(d) = delta {
                args.push("--delta".into());
                args.push(d.to_string());
            }
            let cli =
                Cli::try_parse_from(std::iter::once("fwlcheck".to_string()).chain(args)).unwrap();
            match cli.cmd {
                Cmd::VerifyOverflow {
                    common,
                    range,
                    bound,
                    engine,
                } => Request {
                    property: Property::Overflow,
                    common,
                    max: Some(range.max),
                    min: Some(range.min),
                    bound: Some(bound.bound),
                    error: None,
                    cmode: None,
                    engine,
                },
                c => panic!("wrong subcommand: {c:?}"),
            }
        };
        // Delta form without --delta.
        assert!(build_task(&mk(FormOpt::Ddfi, None)).is_err());
        // Shift form with --delta.
        assert!(build_task(&mk(FormOpt::Dfi, Some(0.1))).is_err());
        // Delta form with --delta.
        assert!(build_task(&mk(FormOpt::Ddfi, Some(0.1))).is_ok());
    }
}
