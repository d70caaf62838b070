//! fwlcheck — a verifier for fixed-point implementations of digital
//! controllers and filters.
//!
//! A linear design that is correct in real arithmetic can misbehave once its
//! coefficients are quantized to a finite word length and its arithmetic
//! wraps or saturates. This crate decides, for a given `⟨I,F⟩` two's
//! complement format and realization topology, whether the *implemented*
//! system still satisfies:
//!
//! - **analytic properties** of the quantized coefficients — pole stability,
//!   minimum phase, closed-loop stability, state-space stability,
//!   controllability, observability — decided completely by algebra
//!   ([`analytic`]);
//! - **bounded properties** of the bit-accurate execution — overflow,
//!   zero-input limit cycles, output quantization error against the
//!   real-arithmetic reference, and their closed-loop and state-space
//!   variants — decided by exhaustive (or seeded-random) search over all
//!   stimuli up to a step bound ([`bmc`]).
//!
//! Every FAILED verdict carries a machine-checkable [`counterexample`]: a
//! self-contained JSON document holding the system, format, stimulus and
//! violation, which `Counterexample::replay` re-executes bit-for-bit.
//!
//! The module layering is strictly bottom-up: [`fixedpoint`] (formats and
//! raw arithmetic), [`sysmodel`] (polynomials, transfer functions, state
//! space, JSON system documents), [`realization`] (direct-form and
//! delta-form simulators with per-node flag monitoring), [`analytic`] and
//! [`bmc`] (the two verdict engines), [`counterexample`] (evidence
//! documents and replay), and [`cli`] (the command-line front end).
//!
//! [`verify`] is the single entry point that dispatches a
//! [`bmc::VerificationTask`] to the right engine.

pub mod analytic;
pub mod bmc;
pub mod cli;
pub mod counterexample;
pub mod fixedpoint;
pub mod realization;
pub mod sysmodel;

use thiserror::Error;

use analytic::AnalyticError;
use bmc::{Property, Verdict, VerificationTask, VerifyError};
use counterexample::CeError;
use fixedpoint::FxError;
use realization::RealizationError;
use sysmodel::SysModelError;

/// Any error the verifier can produce, from malformed input documents to
/// search budgets running out.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Fx(#[from] FxError),
    #[error(transparent)]
    Model(#[from] SysModelError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Ce(#[from] CeError),
}

/// Decide a verification task, routing analytic properties to the algebraic
/// checks and bounded properties to the search engine.
///
/// The returned verdict's counterexample (if any) always embeds the task's
/// system document verbatim and the task's realization spec, so it replays
/// against exactly what was asked.
pub fn verify(task: &VerificationTask) -> Result<Verdict, Error> {
    task.validate().map_err(Error::Verify)?;
    let fmt = task.fmt;
    let v = match task.property {
        Property::Stability => {
            let tf = task.system.to_tf().map_err(Error::Model)?;
            analytic::check_stability_tf(&tf, fmt).map_err(Error::Analytic)?
        }
        Property::MinimumPhase => {
            let tf = task.system.to_tf().map_err(Error::Model)?;
            analytic::check_minimum_phase(&tf, fmt).map_err(Error::Analytic)?
        }
        Property::ClosedStability => {
            let cl = task.system.to_cl_tf().map_err(Error::Model)?;
            analytic::check_closed_stability(&cl, fmt).map_err(Error::Analytic)?
        }
        Property::SsStability => match task.system.kind() {
            "cl-ss" => {
                // The loop is closed with the quantized gain; the resulting
                // A - B*Kq is then analyzed as-is (its entries are products
                // of on-grid values and need not be on the grid themselves).
                let cl = task.system.to_cl_ss().map_err(Error::Model)?;
                let closed = sysmodel::close_loop_ss(&cl, fmt).map_err(Error::Model)?;
                analytic::matrix_stability_verdict(closed.a(), task.system.clone(), fmt)
            }
            _ => {
                let ss = task.system.to_ss().map_err(Error::Model)?;
                analytic::check_stability_ss(&ss, fmt).map_err(Error::Analytic)?
            }
        },
        Property::SsControllability | Property::SsObservability => {
            match task.system.kind() {
                "cl-ss" => {
                    let cl = task.system.to_cl_ss().map_err(Error::Model)?;
                    let closed = sysmodel::close_loop_ss(&cl, fmt).map_err(Error::Model)?;
                    analytic::assembled_rank_verdict(
                        &closed,
                        task.property,
                        task.system.clone(),
                        fmt,
                    )
                }
                _ => {
                    let ss = task.system.to_ss().map_err(Error::Model)?;
                    let check = if task.property == Property::SsControllability {
                        analytic::check_controllability
                    } else {
                        analytic::check_observability
                    };
                    check(&ss, fmt).map_err(Error::Analytic)?
                }
            }
        }
        Property::Overflow => bmc::verify_overflow(task).map_err(Error::Verify)?,
        Property::LimitCycle => bmc::verify_limit_cycle(task).map_err(Error::Verify)?,
        Property::QuantizationError => bmc::verify_error(task).map_err(Error::Verify)?,
        Property::ClosedLimitCycle => {
            bmc::verify_closed_limit_cycle(task).map_err(Error::Verify)?
        }
        Property::ClosedQuantizationError => {
            bmc::verify_closed_error(task).map_err(Error::Verify)?
        }
        Property::SsQuantizationError => {
            bmc::verify_ss_quantization_error(task).map_err(Error::Verify)?
        }
    };
    Ok(finish(task, v))
}

/// Stamp the verdict's counterexample with the task's verbatim system
/// document and realization spec. The analytic builders reconstruct the
/// document from the parsed model, which normalizes it (monic denominator,
/// trimmed zeros); the evidence file must instead carry what the user gave.
fn finish(task: &VerificationTask, mut v: Verdict) -> Verdict {
    if let Some(ce) = v.counterexample.as_mut() {
        ce.system = task.system.clone();
        ce.realization = task.realization;
    }
    v
}
