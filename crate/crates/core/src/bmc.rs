//! Bounded verification by explicit-state search.
//!
//! Every bounded property reduces to the same shape: a deterministic
//! simulator with integer state, a finite stimulus alphabet (the
//! representable grid restricted to the declared dynamic range), and a
//! per-step violation predicate. The engine enumerates either input
//! sequences up to the bound (overflow, quantization error) or initial
//! states (limit cycles) and reports the lexicographically first violation
//! as a replayable counterexample.
//!
//! Exhaustive mode is complete up to the bound: a SUCCESSFUL verdict means
//! no reachable violation exists within `bound` steps on the stimulus grid.
//! Its cost is the full product space, so searches above
//! [`EngineConfig::budget`] candidates are refused with
//! [`VerifyError::BudgetExceeded`] rather than silently downgraded; callers
//! (the CLI does this) may then fall back to seeded random search, which is
//! only a falsifier: SUCCESSFUL there is labeled "bounded, sampled".

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::counterexample::{
    CeValue, Counterexample, EngineProvenance, Violation, ViolationKind, CE_SCHEMA,
};
use crate::fixedpoint::{quantize, quantize_raw, sub_raw, FxFormat};
use crate::realization::{
    FxRealizer, NodeId, NoopSink, FirstFlagSink, RealizationError, RealizationForm,
    RealizationSpec, RefRealizer,
};
use crate::sysmodel::{
    CMode, ClosedLoopSs, ClosedLoopTf, StateSpace, SysModelError, SystemDoc,
};

// ---------------------------------------------------------------------------
// Properties, tasks, verdicts
// ---------------------------------------------------------------------------

/// Every property the verifier knows how to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Stability,
    MinimumPhase,
    Overflow,
    LimitCycle,
    QuantizationError,
    ClosedStability,
    ClosedLimitCycle,
    ClosedQuantizationError,
    SsStability,
    SsControllability,
    SsObservability,
    SsQuantizationError,
}

impl Property {
    /// Properties decided by search rather than algebra.
    pub fn is_bounded(&self) -> bool {
        matches!(
            self,
            Property::Overflow
                | Property::LimitCycle
                | Property::QuantizationError
                | Property::ClosedLimitCycle
                | Property::ClosedQuantizationError
                | Property::SsQuantizationError
        )
    }

    /// Properties whose task must carry an error tolerance.
    pub fn needs_error_bound(&self) -> bool {
        matches!(
            self,
            Property::QuantizationError
                | Property::ClosedQuantizationError
                | Property::SsQuantizationError
        )
    }

    /// System document kinds this property applies to.
    pub fn accepted_kinds(&self) -> &'static [&'static str] {
        match self {
            Property::Stability
            | Property::MinimumPhase
            | Property::Overflow
            | Property::LimitCycle
            | Property::QuantizationError => &["tf"],
            Property::ClosedStability
            | Property::ClosedLimitCycle
            | Property::ClosedQuantizationError => &["cl-tf"],
            Property::SsStability
            | Property::SsControllability
            | Property::SsObservability
            | Property::SsQuantizationError => &["ss", "cl-ss"],
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Property::Stability => "stability",
            Property::MinimumPhase => "minimum-phase",
            Property::Overflow => "overflow",
            Property::LimitCycle => "limit-cycle",
            Property::QuantizationError => "quantization-error",
            Property::ClosedStability => "closed-stability",
            Property::ClosedLimitCycle => "closed-limit-cycle",
            Property::ClosedQuantizationError => "closed-quantization-error",
            Property::SsStability => "ss-stability",
            Property::SsControllability => "ss-controllability",
            Property::SsObservability => "ss-observability",
            Property::SsQuantizationError => "ss-quantization-error",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "stability" => Property::Stability,
            "minimum-phase" => Property::MinimumPhase,
            "overflow" => Property::Overflow,
            "limit-cycle" => Property::LimitCycle,
            "quantization-error" => Property::QuantizationError,
            "closed-stability" => Property::ClosedStability,
            "closed-limit-cycle" => Property::ClosedLimitCycle,
            "closed-quantization-error" => Property::ClosedQuantizationError,
            "ss-stability" => Property::SsStability,
            "ss-controllability" => Property::SsControllability,
            "ss-observability" => Property::SsObservability,
            "ss-quantization-error" => Property::SsQuantizationError,
            other => return Err(format!("unknown property {other:?}")),
        })
    }
}

/// Search strategy for bounded properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    /// Complete enumeration of the candidate space (refused above budget).
    Exhaustive,
    /// Seeded uniform sampling of the candidate space (falsification only).
    Random,
}

/// Engine knobs; the defaults match the CLI defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub mode: EngineMode,
    /// Candidates drawn in random mode.
    pub samples: u64,
    /// RNG seed for random mode.
    pub seed: u64,
    /// Optional stimulus stride in real units; `None` means every
    /// representable value in the dynamic range. Rounded to at least one
    /// raw step.
    pub input_grid: Option<f64>,
    /// Largest candidate space exhaustive mode will enumerate.
    pub budget: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: EngineMode::Exhaustive,
            samples: 100_000,
            seed: 1,
            input_grid: None,
            budget: 10_000_000,
        }
    }
}

/// A fully-specified verification job: system, format, property, knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationTask {
    pub system: SystemDoc,
    pub fmt: FxFormat,
    pub property: Property,
    pub realization: RealizationSpec,
    /// Number of steps explored by bounded properties (ignored by analytic
    /// ones).
    pub bound: usize,
    /// Tolerance for the quantization-error properties.
    pub error_bound: Option<f64>,
    pub engine: EngineConfig,
    /// Whether saturation clamps count as overflow violations. Wrap-mode
    /// flags always count.
    pub saturation_counts: bool,
}

impl VerificationTask {
    /// Task for an analytic (unbounded) property.
    pub fn analytic(system: SystemDoc, fmt: FxFormat, property: Property) -> Self {
        VerificationTask {
            system,
            fmt,
            property,
            realization: RealizationSpec::shift(RealizationForm::Dfi),
            bound: 0,
            error_bound: None,
            engine: EngineConfig::default(),
            saturation_counts: true,
        }
    }

    /// Task for a bounded property explored up to `bound` steps.
    pub fn bounded(system: SystemDoc, fmt: FxFormat, property: Property, bound: usize) -> Self {
        let mut t = Self::analytic(system, fmt, property);
        t.bound = bound;
        t
    }

    /// Checks the property/system/knob combination before running.
    pub fn validate(&self) -> Result<(), VerifyError> {
        let kind = self.system.kind();
        if !self.property.accepted_kinds().contains(&kind) {
            return Err(VerifyError::IncompatibleSystem {
                property: self.property,
                kind: kind.to_string(),
            });
        }
        if self.property.is_bounded() && self.bound == 0 {
            return Err(VerifyError::ZeroBound);
        }
        match (self.property.needs_error_bound(), self.error_bound) {
            (true, None) => return Err(VerifyError::MissingErrorBound(self.property)),
            (true, Some(e)) if !(e.is_finite() && e >= 0.0) => {
                return Err(VerifyError::InvalidErrorBound(e))
            }
            _ => {}
        }
        if let Some(g) = self.engine.input_grid {
            if !(g.is_finite() && g > 0.0) {
                return Err(VerifyError::InvalidGrid(g));
            }
        }
        // Re-run the spec invariants in case the struct was built literally.
        RealizationSpec::new(self.realization.form, self.realization.delta)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Successful,
    Failed,
}

/// Run accounting attached to every verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictStats {
    /// Size of the candidate space (exhaustive) or candidates drawn
    /// (random); 1 for analytic checks.
    pub candidates: u128,
    /// Simulator steps actually executed. Informational: under parallel
    /// search the exact count depends on cancellation timing.
    pub steps: u64,
    pub wall_ms: u64,
    /// Human-readable completeness claim, e.g. "exhaustive to bound 8".
    pub label: String,
}

/// The answer to a verification task.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub property: Property,
    pub counterexample: Option<Counterexample>,
    pub stats: VerdictStats,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == VerdictStatus::Successful
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("property {property} does not apply to a {kind:?} system")]
    IncompatibleSystem { property: Property, kind: String },
    #[error("bounded properties need a bound of at least 1")]
    ZeroBound,
    #[error("property {0} needs an error bound")]
    MissingErrorBound(Property),
    #[error("error bound must be finite and non-negative, got {0}")]
    InvalidErrorBound(f64),
    #[error("input grid stride must be positive and finite, got {0}")]
    InvalidGrid(f64),
    #[error("the dynamic range contains no representable stimulus values")]
    EmptyGrid,
    #[error(
        "exhaustive search space of {space} candidates exceeds the budget of {budget}; \
         rerun with --engine random or a coarser --grid"
    )]
    BudgetExceeded { space: u128, budget: u64 },
    #[error(transparent)]
    Model(#[from] SysModelError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

// ---------------------------------------------------------------------------
// Stimulus grid
// ---------------------------------------------------------------------------

/// Arithmetic description of the stimulus alphabet: `lo + i*step` raws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Grid {
    lo: i64,
    step: i64,
    count: u128,
}

impl Grid {
    pub(crate) fn new(fmt: FxFormat, stride: Option<f64>) -> Result<Grid, VerifyError> {
        let (lo, hi) = fmt.dyn_raw_bounds();
        if lo > hi {
            return Err(VerifyError::EmptyGrid);
        }
        let step = match stride {
            None => 1i64,
            Some(s) if s.is_finite() && s > 0.0 => {
                let raw = (s / fmt.resolution()).round();
                if raw >= i64::MAX as f64 {
                    i64::MAX
                } else {
                    (raw as i64).max(1)
                }
            }
            Some(s) => return Err(VerifyError::InvalidGrid(s)),
        };
        let count = ((hi as i128 - lo as i128) / step as i128 + 1) as u128;
        Ok(Grid { lo, step, count })
    }

    pub(crate) fn count(&self) -> u128 {
        self.count
    }

    pub(crate) fn get(&self, index: u64) -> i64 {
        debug_assert!((index as u128) < self.count);
        self.lo + index as i64 * self.step
    }
}

fn space_size(alphabet: u128, digits: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..digits {
        acc = acc.checked_mul(alphabet)?;
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Property simulators
// ---------------------------------------------------------------------------

/// A deterministic stepped system the engine can search.
///
/// `step` consumes one grid input per input channel and reports the first
/// violated check inside that step, if any. Limit-cycle violations are
/// detected by the engine (state recurrence), not by `step`.
pub(crate) trait SearchSim: Clone + Send + Sync {
    fn input_arity(&self) -> usize;
    fn output_arity(&self) -> usize;
    /// Dimensions of the searched initial state (limit-cycle properties).
    fn init_dims(&self) -> usize;
    /// Resets to the given initial state (raw grid values, one per
    /// dimension). An empty slice resets to zero.
    fn set_init(&mut self, raws: &[i64]);
    fn reset_zero(&mut self);
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)>;
    /// Raw renderings of the outputs produced by the last step.
    fn last_outputs(&self) -> &[i64];
    /// Whether the last output is nonzero in the sense that matters for
    /// limit cycles (real-valued for closed loops, raw for fixed-point).
    fn last_output_nonzero(&self) -> bool;
    /// Appends a bit-exact state signature (for recurrence detection).
    fn write_sig(&self, out: &mut Vec<u64>);
}

// --- open-loop transfer function sims --------------------------------------

/// Overflow search: flag any monitored node whose exact result leaves the
/// format (always in wrap mode; in saturate mode only if clamps count).
#[derive(Clone)]
pub(crate) struct TfOverflowSim {
    rz: FxRealizer,
    state: Vec<i64>,
    last: [i64; 1],
    count_flags: bool,
}

impl SearchSim for TfOverflowSim {
    fn input_arity(&self) -> usize {
        1
    }
    fn output_arity(&self) -> usize {
        1
    }
    fn init_dims(&self) -> usize {
        self.state.len()
    }
    fn set_init(&mut self, raws: &[i64]) {
        self.state.iter_mut().for_each(|s| *s = 0);
        self.state[..raws.len()].copy_from_slice(raws);
    }
    fn reset_zero(&mut self) {
        self.state.iter_mut().for_each(|s| *s = 0);
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        let mut sink = FirstFlagSink::default();
        self.last[0] = self.rz.step_raw(&mut self.state, u[0], &mut sink);
        match sink.first {
            Some(node) if self.count_flags => Some((node, ViolationKind::Overflow)),
            _ => None,
        }
    }
    fn last_outputs(&self) -> &[i64] {
        &self.last
    }
    fn last_output_nonzero(&self) -> bool {
        self.last[0] != 0
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        out.extend(self.state.iter().map(|&s| s as u64));
    }
}

/// Limit-cycle search: plain fixed-point stepping; the engine looks for
/// state recurrence under zero input.
#[derive(Clone)]
pub(crate) struct TfLcSim {
    rz: FxRealizer,
    state: Vec<i64>,
    last: [i64; 1],
}

impl SearchSim for TfLcSim {
    fn input_arity(&self) -> usize {
        1
    }
    fn output_arity(&self) -> usize {
        1
    }
    fn init_dims(&self) -> usize {
        self.state.len()
    }
    fn set_init(&mut self, raws: &[i64]) {
        self.state.iter_mut().for_each(|s| *s = 0);
        self.state[..raws.len()].copy_from_slice(raws);
    }
    fn reset_zero(&mut self) {
        self.state.iter_mut().for_each(|s| *s = 0);
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        self.last[0] = self.rz.step_raw(&mut self.state, u[0], &mut NoopSink);
        None
    }
    fn last_outputs(&self) -> &[i64] {
        &self.last
    }
    fn last_output_nonzero(&self) -> bool {
        self.last[0] != 0
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        out.extend(self.state.iter().map(|&s| s as u64));
    }
}

/// Quantization-error search: fixed-point trajectory against the exact
/// double-precision trajectory of the same realization.
#[derive(Clone)]
pub(crate) struct TfErrorSim {
    fx: FxRealizer,
    fx_state: Vec<i64>,
    rf: RefRealizer,
    rf_state: Vec<f64>,
    eps: f64,
    last: [i64; 1],
}

impl SearchSim for TfErrorSim {
    fn input_arity(&self) -> usize {
        1
    }
    fn output_arity(&self) -> usize {
        1
    }
    fn init_dims(&self) -> usize {
        self.fx_state.len()
    }
    fn set_init(&mut self, raws: &[i64]) {
        self.reset_zero();
        self.fx_state[..raws.len()].copy_from_slice(raws);
        let res = self.fx.fmt.resolution();
        for (r, &raw) in self.rf_state.iter_mut().zip(raws) {
            *r = raw as f64 * res;
        }
    }
    fn reset_zero(&mut self) {
        self.fx_state.iter_mut().for_each(|s| *s = 0);
        self.rf_state.iter_mut().for_each(|s| *s = 0.0);
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        let res = self.fx.fmt.resolution();
        let y_fx = self.fx.step_raw(&mut self.fx_state, u[0], &mut NoopSink);
        let y_rf = self.rf.step(&mut self.rf_state, u[0] as f64 * res);
        self.last[0] = y_fx;
        if (y_fx as f64 * res - y_rf).abs() > self.eps {
            Some((NodeId::Output(0), ViolationKind::QuantizationError))
        } else {
            None
        }
    }
    fn last_outputs(&self) -> &[i64] {
        &self.last
    }
    fn last_output_nonzero(&self) -> bool {
        self.last[0] != 0
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        out.extend(self.fx_state.iter().map(|&s| s as u64));
        out.extend(self.rf_state.iter().map(|s| s.to_bits()));
    }
}

// --- closed-loop sims -------------------------------------------------------

/// The fixed-point side of a closed loop: quantized controller in task
/// arithmetic, plant simulated exactly in doubles (direct form II).
///
/// Per-sample ordering is fixed by which side is strictly proper: that
/// side's output does not depend on its current input, so it is read first
/// ("peeked") and the loop algebra then proceeds causally. The plant output
/// is quantized onto the format grid (node `adc`) before the controller or
/// the comparison point consumes it.
#[derive(Clone)]
struct FxLoop {
    ctrl: FxRealizer,
    cstate: Vec<i64>,
    plant: RefRealizer,
    pstate: Vec<f64>,
    cmode: CMode,
    plant_first: bool,
    fmt: FxFormat,
    scratch_c: Vec<i64>,
    scratch_p: Vec<f64>,
    last_y: f64,
    last_y_raw: i64,
}

impl FxLoop {
    fn peek_plant(&mut self) -> f64 {
        self.scratch_p.clone_from(&self.pstate);
        self.plant.step(&mut self.scratch_p, 0.0)
    }

    fn peek_ctrl(&mut self) -> i64 {
        self.scratch_c.clone_from(&self.cstate);
        self.ctrl.step_raw(&mut self.scratch_c, 0, &mut NoopSink)
    }

    fn reset(&mut self) {
        self.cstate.iter_mut().for_each(|s| *s = 0);
        self.pstate.iter_mut().for_each(|s| *s = 0.0);
        self.last_y = 0.0;
        self.last_y_raw = 0;
    }

    /// Advances one sample with reference input `r` (raw grid value).
    fn step(&mut self, r_raw: i64) {
        let res = self.fmt.resolution();
        match (self.cmode, self.plant_first) {
            (CMode::Series, true) => {
                let y = self.peek_plant();
                let yq = quantize_raw(y, self.fmt).0;
                let e = sub_raw(r_raw, yq, self.fmt).0;
                let uc = self.ctrl.step_raw(&mut self.cstate, e, &mut NoopSink);
                self.plant.step(&mut self.pstate, uc as f64 * res);
                self.last_y = y;
                self.last_y_raw = yq;
            }
            (CMode::Series, false) => {
                let uc = self.peek_ctrl();
                let y = self.plant.step(&mut self.pstate, uc as f64 * res);
                let yq = quantize_raw(y, self.fmt).0;
                let e = sub_raw(r_raw, yq, self.fmt).0;
                self.ctrl.step_raw(&mut self.cstate, e, &mut NoopSink);
                self.last_y = y;
                self.last_y_raw = yq;
            }
            (CMode::Feedback, true) => {
                let y = self.peek_plant();
                let yq = quantize_raw(y, self.fmt).0;
                let yc = self.ctrl.step_raw(&mut self.cstate, yq, &mut NoopSink);
                let e = sub_raw(r_raw, yc, self.fmt).0;
                self.plant.step(&mut self.pstate, e as f64 * res);
                self.last_y = y;
                self.last_y_raw = yq;
            }
            (CMode::Feedback, false) => {
                let yc = self.peek_ctrl();
                let e = sub_raw(r_raw, yc, self.fmt).0;
                let y = self.plant.step(&mut self.pstate, e as f64 * res);
                let yq = quantize_raw(y, self.fmt).0;
                self.ctrl.step_raw(&mut self.cstate, yq, &mut NoopSink);
                self.last_y = y;
                self.last_y_raw = yq;
            }
        }
    }
}

/// The idealized loop: same topology and ordering, but the controller keeps
/// its real coefficients, everything runs in doubles, and nothing is
/// quantized.
#[derive(Clone)]
struct RefLoop {
    ctrl: RefRealizer,
    cstate: Vec<f64>,
    plant: RefRealizer,
    pstate: Vec<f64>,
    cmode: CMode,
    plant_first: bool,
    scratch: Vec<f64>,
    last_y: f64,
}

impl RefLoop {
    fn peek_plant(&mut self) -> f64 {
        self.scratch.clone_from(&self.pstate);
        self.plant.step(&mut self.scratch, 0.0)
    }

    fn peek_ctrl(&mut self) -> f64 {
        self.scratch.clone_from(&self.cstate);
        self.ctrl.step(&mut self.scratch, 0.0)
    }

    fn reset(&mut self) {
        self.cstate.iter_mut().for_each(|s| *s = 0.0);
        self.pstate.iter_mut().for_each(|s| *s = 0.0);
        self.last_y = 0.0;
    }

    fn step(&mut self, r: f64) {
        match (self.cmode, self.plant_first) {
            (CMode::Series, true) => {
                let y = self.peek_plant();
                let e = r - y;
                let uc = self.ctrl.step(&mut self.cstate, e);
                self.plant.step(&mut self.pstate, uc);
                self.last_y = y;
            }
            (CMode::Series, false) => {
                let uc = self.peek_ctrl();
                let y = self.plant.step(&mut self.pstate, uc);
                let e = r - y;
                self.ctrl.step(&mut self.cstate, e);
                self.last_y = y;
            }
            (CMode::Feedback, true) => {
                let y = self.peek_plant();
                let yc = self.ctrl.step(&mut self.cstate, y);
                let e = r - yc;
                self.plant.step(&mut self.pstate, e);
                self.last_y = y;
            }
            (CMode::Feedback, false) => {
                let yc = self.peek_ctrl();
                let e = r - yc;
                let y = self.plant.step(&mut self.pstate, e);
                self.ctrl.step(&mut self.cstate, y);
                self.last_y = y;
            }
        }
    }
}

fn build_fx_loop(cl: &ClosedLoopTf, fmt: FxFormat, spec: RealizationSpec) -> Result<FxLoop, VerifyError> {
    let plant_spec = RealizationSpec::shift(RealizationForm::Dfii);
    let plant = RefRealizer::new(&cl.plant, plant_spec)?;
    let plant_first = if cl.plant.is_strictly_proper() {
        true
    } else if cl.controller.is_strictly_proper() {
        false
    } else {
        return Err(SysModelError::DegenerateLoop(
            "neither the plant nor the controller is strictly proper, so the loop \
             has no causal single-rate schedule"
                .into(),
        )
        .into());
    };
    let ctrl = FxRealizer::new(&cl.controller, fmt, spec)?;
    let cstate = vec![0i64; ctrl.state_len()];
    let pstate = vec![0.0; plant.state_len()];
    Ok(FxLoop {
        scratch_c: cstate.clone(),
        scratch_p: pstate.clone(),
        ctrl,
        cstate,
        plant,
        pstate,
        cmode: cl.cmode,
        plant_first,
        fmt,
        last_y: 0.0,
        last_y_raw: 0,
    })
}

fn build_ref_loop(cl: &ClosedLoopTf, spec: RealizationSpec, plant_first: bool) -> Result<RefLoop, VerifyError> {
    let plant_spec = RealizationSpec::shift(RealizationForm::Dfii);
    let plant = RefRealizer::new(&cl.plant, plant_spec)?;
    let ctrl = RefRealizer::new(&cl.controller, spec)?;
    let cstate = vec![0.0; ctrl.state_len()];
    let pstate = vec![0.0; plant.state_len()];
    Ok(RefLoop {
        scratch: cstate.iter().chain(pstate.iter()).copied().collect(),
        ctrl,
        cstate,
        plant,
        pstate,
        cmode: cl.cmode,
        plant_first,
        last_y: 0.0,
    })
}

/// Closed-loop limit cycles: search the joint (controller, plant) initial
/// state; the plant's real-valued initial states are drawn from the same
/// grid, interpreted at the format resolution.
#[derive(Clone)]
pub(crate) struct ClosedLcSim {
    fx: FxLoop,
    last: [i64; 1],
}

impl SearchSim for ClosedLcSim {
    fn input_arity(&self) -> usize {
        1
    }
    fn output_arity(&self) -> usize {
        1
    }
    fn init_dims(&self) -> usize {
        self.fx.cstate.len() + self.fx.pstate.len()
    }
    fn set_init(&mut self, raws: &[i64]) {
        self.fx.reset();
        let nc = self.fx.cstate.len();
        let res = self.fx.fmt.resolution();
        for (i, &raw) in raws.iter().enumerate() {
            if i < nc {
                self.fx.cstate[i] = raw;
            } else {
                self.fx.pstate[i - nc] = raw as f64 * res;
            }
        }
    }
    fn reset_zero(&mut self) {
        self.fx.reset();
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        self.fx.step(u[0]);
        self.last[0] = self.fx.last_y_raw;
        None
    }
    fn last_outputs(&self) -> &[i64] {
        &self.last
    }
    fn last_output_nonzero(&self) -> bool {
        self.fx.last_y != 0.0
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        out.extend(self.fx.cstate.iter().map(|&s| s as u64));
        out.extend(self.fx.pstate.iter().map(|s| s.to_bits()));
    }
}

/// Closed-loop quantization error: the quantized loop against the ideal
/// loop, both driven by the same reference sequence.
#[derive(Clone)]
pub(crate) struct ClosedErrorSim {
    fx: FxLoop,
    rf: RefLoop,
    eps: f64,
    last: [i64; 1],
}

impl SearchSim for ClosedErrorSim {
    fn input_arity(&self) -> usize {
        1
    }
    fn output_arity(&self) -> usize {
        1
    }
    fn init_dims(&self) -> usize {
        self.fx.cstate.len() + self.fx.pstate.len()
    }
    fn set_init(&mut self, raws: &[i64]) {
        self.reset_zero();
        let nc = self.fx.cstate.len();
        let res = self.fx.fmt.resolution();
        for (i, &raw) in raws.iter().enumerate() {
            if i < nc {
                self.fx.cstate[i] = raw;
                self.rf.cstate[i] = raw as f64 * res;
            } else {
                self.fx.pstate[i - nc] = raw as f64 * res;
                self.rf.pstate[i - nc] = raw as f64 * res;
            }
        }
    }
    fn reset_zero(&mut self) {
        self.fx.reset();
        self.rf.reset();
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        let res = self.fx.fmt.resolution();
        self.fx.step(u[0]);
        self.rf.step(u[0] as f64 * res);
        self.last[0] = self.fx.last_y_raw;
        if (self.fx.last_y - self.rf.last_y).abs() > self.eps {
            Some((NodeId::Output(0), ViolationKind::QuantizationError))
        } else {
            None
        }
    }
    fn last_outputs(&self) -> &[i64] {
        &self.last
    }
    fn last_output_nonzero(&self) -> bool {
        self.fx.last_y != 0.0
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        out.extend(self.fx.cstate.iter().map(|&s| s as u64));
        out.extend(self.fx.pstate.iter().map(|s| s.to_bits()));
        out.extend(self.rf.cstate.iter().map(|s| s.to_bits()));
        out.extend(self.rf.pstate.iter().map(|s| s.to_bits()));
    }
}

// --- state-space sim ---------------------------------------------------------

/// State-space quantization error: the fixed-point recursion over the
/// quantized matrices against the exact recursion over the real matrices.
///
/// Evaluation order is documented and fixed: output rows first (C terms in
/// column order, then D terms), then state rows (A terms, then B terms),
/// each row accumulated left to right. Outputs use the pre-update state.
#[derive(Clone)]
pub(crate) struct SsErrorSim {
    n: usize,
    m: usize,
    p: usize,
    fmt: FxFormat,
    aq: Vec<i64>,
    bq: Vec<i64>,
    cq: Vec<i64>,
    dq: Vec<i64>,
    ar: Vec<f64>,
    br: Vec<f64>,
    cr: Vec<f64>,
    dr: Vec<f64>,
    x: Vec<i64>,
    xr: Vec<f64>,
    eps: f64,
    last: SmallVec<[i64; 2]>,
}

impl SsErrorSim {
    /// One row of `M1 * v1 + M2 * v2` in task arithmetic, left to right.
    fn fx_row(&self, m1: &[i64], v1: &[i64], m2: &[i64], v2: &[i64], row: usize) -> i64 {
        let mut acc: Option<i64> = None;
        let w1 = v1.len();
        for (j, &v) in v1.iter().enumerate() {
            let p = crate::fixedpoint::mul_raw(m1[row * w1 + j], v, self.fmt).0;
            acc = Some(match acc {
                None => p,
                Some(a) => crate::fixedpoint::add_raw(a, p, self.fmt).0,
            });
        }
        let w2 = v2.len();
        for (j, &v) in v2.iter().enumerate() {
            let p = crate::fixedpoint::mul_raw(m2[row * w2 + j], v, self.fmt).0;
            acc = Some(match acc {
                None => p,
                Some(a) => crate::fixedpoint::add_raw(a, p, self.fmt).0,
            });
        }
        acc.unwrap_or(0)
    }

    fn ref_row(m1: &[f64], v1: &[f64], m2: &[f64], v2: &[f64], row: usize) -> f64 {
        let mut acc = 0.0;
        let w1 = v1.len();
        for (j, &v) in v1.iter().enumerate() {
            acc += m1[row * w1 + j] * v;
        }
        let w2 = v2.len();
        for (j, &v) in v2.iter().enumerate() {
            acc += m2[row * w2 + j] * v;
        }
        acc
    }
}

impl SearchSim for SsErrorSim {
    fn input_arity(&self) -> usize {
        self.m
    }
    fn output_arity(&self) -> usize {
        self.p
    }
    fn init_dims(&self) -> usize {
        self.n
    }
    fn set_init(&mut self, raws: &[i64]) {
        self.reset_zero();
        let res = self.fmt.resolution();
        for (i, &raw) in raws.iter().enumerate() {
            self.x[i] = raw;
            self.xr[i] = raw as f64 * res;
        }
    }
    fn reset_zero(&mut self) {
        self.x.iter_mut().for_each(|s| *s = 0);
        self.xr.iter_mut().for_each(|s| *s = 0.0);
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        let res = self.fmt.resolution();
        let ur: SmallVec<[f64; 2]> = u.iter().map(|&r| r as f64 * res).collect();
        let mut viol = None;
        self.last.clear();
        for i in 0..self.p {
            let y_fx = self.fx_row(&self.cq, &self.x, &self.dq, u, i);
            let y_rf = Self::ref_row(&self.cr, &self.xr, &self.dr, &ur, i);
            self.last.push(y_fx);
            if viol.is_none() && (y_fx as f64 * res - y_rf).abs() > self.eps {
                viol = Some((NodeId::Output(i as u16), ViolationKind::QuantizationError));
            }
        }
        let mut new_x: SmallVec<[i64; 8]> = SmallVec::with_capacity(self.n);
        let mut new_xr: SmallVec<[f64; 8]> = SmallVec::with_capacity(self.n);
        for i in 0..self.n {
            new_x.push(self.fx_row(&self.aq, &self.x, &self.bq, u, i));
            new_xr.push(Self::ref_row(&self.ar, &self.xr, &self.br, &ur, i));
        }
        self.x.copy_from_slice(&new_x);
        self.xr.copy_from_slice(&new_xr);
        viol
    }
    fn last_outputs(&self) -> &[i64] {
        &self.last
    }
    fn last_output_nonzero(&self) -> bool {
        self.last.iter().any(|&y| y != 0)
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        out.extend(self.x.iter().map(|&s| s as u64));
        out.extend(self.xr.iter().map(|s| s.to_bits()));
    }
}

// ---------------------------------------------------------------------------
// Sim construction
// ---------------------------------------------------------------------------

/// Matrix quantized entrywise onto the format grid (values, not raws).
pub(crate) fn quantize_matrix(m: &DMatrix<f64>, fmt: FxFormat) -> DMatrix<f64> {
    m.map(|v| quantize(v, fmt).0.value())
}

fn matrix_raws(m: &DMatrix<f64>, fmt: FxFormat) -> Vec<i64> {
    // Row-major to match the documented row-by-row evaluation order.
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(quantize(m[(i, j)], fmt).0.raw());
        }
    }
    out
}

fn matrix_flat(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// The state-space pair searched by `ss-quantization-error`: the fixed
/// side's matrices (to be quantized) and the ideal reference matrices.
///
/// For a plain `ss` document both sides start from the same matrices. For a
/// `cl-ss` document the fixed side is the loop closed with the *quantized*
/// gain and the reference is the loop closed with the exact gain, so the
/// measured error is exactly the effect of coefficient quantization on the
/// closed loop.
fn ss_error_pair(doc: &SystemDoc, fmt: FxFormat) -> Result<(StateSpace, StateSpace), VerifyError> {
    match doc.kind() {
        "ss" => {
            let ss = doc.to_ss()?;
            Ok((ss.clone(), ss))
        }
        _ => {
            let cl = doc.to_cl_ss()?;
            let fixed = crate::sysmodel::close_loop_ss(&cl, fmt)?;
            let ideal = close_loop_ss_exact(&cl)?;
            Ok((fixed, ideal))
        }
    }
}

/// Loop closure without gain quantization (the idealized reference).
pub(crate) fn close_loop_ss_exact(cl: &ClosedLoopSs) -> Result<StateSpace, SysModelError> {
    let a_cl = cl.plant.a() - cl.plant.b() * &cl.k;
    StateSpace::new(
        a_cl,
        cl.plant.b().clone(),
        cl.plant.c().clone(),
        cl.plant.d().clone(),
        cl.plant.ts(),
    )
}

pub(crate) fn build_overflow_sim(task: &VerificationTask) -> Result<TfOverflowSim, VerifyError> {
    let tf = task.system.to_tf()?;
    let rz = FxRealizer::new(&tf, task.fmt, task.realization)?;
    let state = vec![0i64; rz.state_len()];
    let count_flags = match task.fmt.overflow_mode() {
        crate::fixedpoint::OverflowMode::Wrap => true,
        crate::fixedpoint::OverflowMode::Saturate => task.saturation_counts,
    };
    Ok(TfOverflowSim {
        rz,
        state,
        last: [0],
        count_flags,
    })
}

pub(crate) fn build_lc_sim(task: &VerificationTask) -> Result<TfLcSim, VerifyError> {
    let tf = task.system.to_tf()?;
    let rz = FxRealizer::new(&tf, task.fmt, task.realization)?;
    let state = vec![0i64; rz.state_len()];
    Ok(TfLcSim {
        rz,
        state,
        last: [0],
    })
}

pub(crate) fn build_error_sim(task: &VerificationTask) -> Result<TfErrorSim, VerifyError> {
    let tf = task.system.to_tf()?;
    let fx = FxRealizer::new(&tf, task.fmt, task.realization)?;
    let rf = RefRealizer::new(&tf, task.realization)?;
    let fx_state = vec![0i64; fx.state_len()];
    let rf_state = vec![0.0; rf.state_len()];
    Ok(TfErrorSim {
        fx,
        fx_state,
        rf,
        rf_state,
        eps: task.error_bound.expect("validated"),
        last: [0],
    })
}

pub(crate) fn build_closed_lc_sim(task: &VerificationTask) -> Result<ClosedLcSim, VerifyError> {
    let cl = task.system.to_cl_tf()?;
    let fx = build_fx_loop(&cl, task.fmt, task.realization)?;
    Ok(ClosedLcSim { fx, last: [0] })
}

pub(crate) fn build_closed_error_sim(task: &VerificationTask) -> Result<ClosedErrorSim, VerifyError> {
    let cl = task.system.to_cl_tf()?;
    let fx = build_fx_loop(&cl, task.fmt, task.realization)?;
    let rf = build_ref_loop(&cl, task.realization, fx.plant_first)?;
    Ok(ClosedErrorSim {
        fx,
        rf,
        eps: task.error_bound.expect("validated"),
        last: [0],
    })
}

pub(crate) fn build_ss_error_sim(task: &VerificationTask) -> Result<SsErrorSim, VerifyError> {
    let (fixed, ideal) = ss_error_pair(&task.system, task.fmt)?;
    let fmt = task.fmt;
    Ok(SsErrorSim {
        n: fixed.order(),
        m: fixed.inputs(),
        p: fixed.outputs(),
        fmt,
        aq: matrix_raws(fixed.a(), fmt),
        bq: matrix_raws(fixed.b(), fmt),
        cq: matrix_raws(fixed.c(), fmt),
        dq: matrix_raws(fixed.d(), fmt),
        ar: matrix_flat(ideal.a()),
        br: matrix_flat(ideal.b()),
        cr: matrix_flat(ideal.c()),
        dr: matrix_flat(ideal.d()),
        x: vec![0; fixed.order()],
        xr: vec![0.0; fixed.order()],
        eps: task.error_bound.expect("validated"),
        last: SmallVec::new(),
    })
}

/// Type-erased sim for replay, which drives any bounded property the same
/// way the engine does.
#[derive(Clone)]
pub(crate) enum AnySim {
    TfOverflow(TfOverflowSim),
    TfLc(TfLcSim),
    TfError(TfErrorSim),
    ClosedLc(ClosedLcSim),
    ClosedError(ClosedErrorSim),
    SsError(SsErrorSim),
}

macro_rules! dispatch {
    ($self:expr, $sim:ident => $body:expr) => {
        match $self {
            AnySim::TfOverflow($sim) => $body,
            AnySim::TfLc($sim) => $body,
            AnySim::TfError($sim) => $body,
            AnySim::ClosedLc($sim) => $body,
            AnySim::ClosedError($sim) => $body,
            AnySim::SsError($sim) => $body,
        }
    };
}

impl SearchSim for AnySim {
    fn input_arity(&self) -> usize {
        dispatch!(self, s => s.input_arity())
    }
    fn output_arity(&self) -> usize {
        dispatch!(self, s => s.output_arity())
    }
    fn init_dims(&self) -> usize {
        dispatch!(self, s => s.init_dims())
    }
    fn set_init(&mut self, raws: &[i64]) {
        dispatch!(self, s => s.set_init(raws))
    }
    fn reset_zero(&mut self) {
        dispatch!(self, s => s.reset_zero())
    }
    fn step(&mut self, u: &[i64]) -> Option<(NodeId, ViolationKind)> {
        dispatch!(self, s => s.step(u))
    }
    fn last_outputs(&self) -> &[i64] {
        dispatch!(self, s => s.last_outputs())
    }
    fn last_output_nonzero(&self) -> bool {
        dispatch!(self, s => s.last_output_nonzero())
    }
    fn write_sig(&self, out: &mut Vec<u64>) {
        dispatch!(self, s => s.write_sig(out))
    }
}

/// Builds the simulator matching the task's bounded property.
pub(crate) fn build_search_sim(task: &VerificationTask) -> Result<AnySim, VerifyError> {
    Ok(match task.property {
        Property::Overflow => AnySim::TfOverflow(build_overflow_sim(task)?),
        Property::LimitCycle => AnySim::TfLc(build_lc_sim(task)?),
        Property::QuantizationError => AnySim::TfError(build_error_sim(task)?),
        Property::ClosedLimitCycle => AnySim::ClosedLc(build_closed_lc_sim(task)?),
        Property::ClosedQuantizationError => AnySim::ClosedError(build_closed_error_sim(task)?),
        Property::SsQuantizationError => AnySim::SsError(build_ss_error_sim(task)?),
        p => {
            return Err(VerifyError::IncompatibleSystem {
                property: p,
                kind: "non-bounded property".into(),
            })
        }
    })
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

/// A concrete violating scenario, in raw grid values.
#[derive(Debug, Clone, PartialEq)]
struct Found {
    init: Vec<i64>,
    inputs: Vec<i64>,
    outputs: Vec<i64>,
    step: usize,
    node: NodeId,
    kind: ViolationKind,
}

/// Decodes combo index `c` (big-endian digits, most significant first) into
/// grid raws.
fn decode_combo<A: smallvec::Array<Item = i64>>(
    c: u64,
    grid: Grid,
    digits: usize,
    out: &mut SmallVec<A>,
) {
    out.clear();
    let g = grid.count() as u64;
    let mut rem = c;
    let mut div = 1u64;
    for _ in 1..digits {
        div *= g;
    }
    for _ in 0..digits {
        out.push(grid.get(rem / div));
        rem %= div;
        if div > 1 {
            div /= g;
        }
    }
}

/// Depth-first extension of a shared prefix. `levels[d]` holds the state
/// entering depth `d`; children clone it (allocation-free via `clone_from`)
/// so sibling subtrees share every prefix simulation.
#[allow(clippy::too_many_arguments)]
fn dfs_inputs<S: SearchSim>(
    levels: &mut [S],
    depth: usize,
    k: usize,
    grid: Grid,
    m: usize,
    per_level: u64,
    inputs: &mut Vec<i64>,
    outputs: &mut Vec<i64>,
    steps: &mut u64,
) -> Option<(usize, NodeId, ViolationKind)> {
    let mut u: SmallVec<[i64; 4]> = SmallVec::new();
    let out_arity = levels[0].output_arity();
    for c in 0..per_level {
        decode_combo(c, grid, m, &mut u);
        let (head, tail) = levels.split_at_mut(depth + 1);
        let sim = &mut tail[0];
        sim.clone_from(&head[depth]);
        let viol = sim.step(&u);
        *steps += 1;
        inputs.extend_from_slice(&u);
        outputs.extend_from_slice(sim.last_outputs());
        if let Some((node, kind)) = viol {
            return Some((depth, node, kind));
        }
        if depth + 1 < k {
            if let Some(hit) = dfs_inputs(levels, depth + 1, k, grid, m, per_level, inputs, outputs, steps)
            {
                return Some(hit);
            }
        }
        inputs.truncate(inputs.len() - m);
        outputs.truncate(outputs.len() - out_arity);
    }
    None
}

/// Exhaustive input search, parallel over the first step's alphabet.
/// `find_map_first` keeps the result deterministic: the lexicographically
/// first violating sequence wins regardless of thread timing.
fn search_inputs_exhaustive<S: SearchSim>(
    base: &S,
    grid: Grid,
    k: usize,
    per_level: u64,
    steps: &AtomicU64,
) -> Option<Found> {
    let m = base.input_arity();
    (0..per_level).into_par_iter().find_map_first(|c| {
        let mut levels: Vec<S> = vec![base.clone(); k + 1];
        levels[0].reset_zero();
        let mut inputs = Vec::with_capacity(k * m);
        let mut outputs = Vec::with_capacity(k * base.output_arity());
        let mut local_steps = 0u64;
        let mut u: SmallVec<[i64; 4]> = SmallVec::new();
        decode_combo(c, grid, m, &mut u);
        let (head, tail) = levels.split_at_mut(1);
        tail[0].clone_from(&head[0]);
        let viol = tail[0].step(&u);
        local_steps += 1;
        inputs.extend_from_slice(&u);
        outputs.extend_from_slice(tail[0].last_outputs());
        let hit = match viol {
            Some((node, kind)) => Some((0usize, node, kind)),
            None if k > 1 => dfs_inputs(
                &mut levels,
                1,
                k,
                grid,
                m,
                per_level,
                &mut inputs,
                &mut outputs,
                &mut local_steps,
            ),
            None => None,
        };
        steps.fetch_add(local_steps, Ordering::Relaxed);
        hit.map(|(step, node, kind)| Found {
            init: Vec::new(),
            inputs,
            outputs,
            step,
            node,
            kind,
        })
    })
}

/// Runs one limit-cycle candidate: from the given initial state, step under
/// zero input until the state recurs or the bound runs out. On recurrence
/// s(j) = s(i), a nonzero output anywhere in y(i..j) is a violation; an
/// all-zero window means the orbit is dead and the candidate passes.
fn run_lc_candidate<S: SearchSim>(
    sim: &mut S,
    init: &[i64],
    k: usize,
    sigs: &mut Vec<u64>,
    outs: &mut Vec<i64>,
    nonzero: &mut Vec<bool>,
    steps: &mut u64,
) -> Option<(usize, usize)> {
    sim.set_init(init);
    let m = sim.input_arity();
    let p = sim.output_arity();
    let zero: SmallVec<[i64; 4]> = smallvec::smallvec![0; m];
    sigs.clear();
    outs.clear();
    nonzero.clear();
    sim.write_sig(sigs);
    let sig_len = sigs.len();
    for t in 0..k {
        sim.step(&zero);
        *steps += 1;
        outs.extend_from_slice(sim.last_outputs());
        nonzero.push(sim.last_output_nonzero());
        sim.write_sig(sigs);
        let j = t + 1;
        let new = &sigs[j * sig_len..(j + 1) * sig_len];
        for i in 0..j {
            if &sigs[i * sig_len..(i + 1) * sig_len] == new {
                if nonzero[i..j].iter().any(|&nz| nz) {
                    outs.truncate(j * p);
                    return Some((i, j));
                }
                // State recurred with an all-zero window: the orbit is
                // periodic and silent from here on, so stop early.
                return None;
            }
        }
    }
    None
}

/// Exhaustive initial-state search for limit cycles, parallel over the
/// first state dimension.
fn search_inits_exhaustive<S: SearchSim>(
    base: &S,
    grid: Grid,
    k: usize,
    steps: &AtomicU64,
) -> Option<Found> {
    let dims = base.init_dims();
    if dims == 0 {
        let mut sim = base.clone();
        let mut sigs = Vec::new();
        let mut outs = Vec::new();
        let mut nz = Vec::new();
        let mut local = 0u64;
        let hit = run_lc_candidate(&mut sim, &[], k, &mut sigs, &mut outs, &mut nz, &mut local);
        steps.fetch_add(local, Ordering::Relaxed);
        return hit.map(|(i, _)| Found {
            init: Vec::new(),
            inputs: vec![0; outs.len() / sim.output_arity() * sim.input_arity()],
            outputs: outs,
            step: i,
            node: NodeId::State,
            kind: ViolationKind::LimitCycle,
        });
    }
    let g = grid.count() as u64;
    let rest = space_size(grid.count(), dims as u32 - 1).expect("budget-checked") as u64;
    (0..g).into_par_iter().find_map_first(|first| {
        let mut sim = base.clone();
        let mut init: SmallVec<[i64; 8]> = smallvec::smallvec![0; dims];
        let mut tail: SmallVec<[i64; 8]> = SmallVec::new();
        let mut sigs = Vec::new();
        let mut outs = Vec::new();
        let mut nz = Vec::new();
        let mut local = 0u64;
        let mut found = None;
        for c in 0..rest {
            decode_combo(c, grid, dims - 1, &mut tail);
            init[0] = grid.get(first);
            init[1..].copy_from_slice(&tail);
            if let Some((i, _j)) =
                run_lc_candidate(&mut sim, &init, k, &mut sigs, &mut outs, &mut nz, &mut local)
            {
                found = Some(Found {
                    init: init.to_vec(),
                    inputs: vec![0; outs.len() / sim.output_arity() * sim.input_arity()],
                    outputs: outs.clone(),
                    step: i,
                    node: NodeId::State,
                    kind: ViolationKind::LimitCycle,
                });
                break;
            }
        }
        steps.fetch_add(local, Ordering::Relaxed);
        found
    })
}

/// Seeded random falsification. Candidates are drawn up front (the whole
/// sequence or initial state at once) so the stream of draws, and therefore
/// the verdict, depends only on the seed and the task.
fn search_random<S: SearchSim>(
    base: &S,
    grid: Grid,
    k: usize,
    cfg: &EngineConfig,
    limit_cycles: bool,
    steps: &mut u64,
) -> (Option<Found>, u64) {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let g = grid.count().min(u64::MAX as u128) as u64;
    let m = base.input_arity();
    let p = base.output_arity();
    let dims = base.init_dims();
    let mut sim = base.clone();
    let mut sigs = Vec::new();
    let mut outs = Vec::new();
    let mut nz = Vec::new();
    for drawn in 0..cfg.samples {
        if limit_cycles {
            let init: Vec<i64> = (0..dims).map(|_| grid.get(rng.random_range(0..g))).collect();
            if let Some((i, _j)) =
                run_lc_candidate(&mut sim, &init, k, &mut sigs, &mut outs, &mut nz, steps)
            {
                return (
                    Some(Found {
                        inputs: vec![0; outs.len() / p * m],
                        init,
                        outputs: outs,
                        step: i,
                        node: NodeId::State,
                        kind: ViolationKind::LimitCycle,
                    }),
                    drawn + 1,
                );
            }
        } else {
            let seq: Vec<i64> = (0..k * m).map(|_| grid.get(rng.random_range(0..g))).collect();
            sim.reset_zero();
            outs.clear();
            for t in 0..k {
                let u = &seq[t * m..(t + 1) * m];
                let viol = sim.step(u);
                *steps += 1;
                outs.extend_from_slice(sim.last_outputs());
                if let Some((node, kind)) = viol {
                    return (
                        Some(Found {
                            init: Vec::new(),
                            inputs: seq[..(t + 1) * m].to_vec(),
                            outputs: outs.clone(),
                            step: t,
                            node,
                            kind,
                        }),
                        drawn + 1,
                    );
                }
            }
        }
    }
    (None, cfg.samples)
}

// ---------------------------------------------------------------------------
// Verdict assembly
// ---------------------------------------------------------------------------

fn ce_values(raws: &[i64], fmt: FxFormat) -> Vec<CeValue> {
    let res = fmt.resolution();
    raws.iter()
        .map(|&raw| CeValue {
            raw,
            value: raw as f64 * res,
        })
        .collect()
}

fn make_counterexample(task: &VerificationTask, found: &Found, grid_stride: Option<f64>) -> Counterexample {
    Counterexample {
        schema: CE_SCHEMA.to_string(),
        property: task.property,
        system: task.system.clone(),
        format: task.fmt,
        realization: task.realization,
        bound: task.bound,
        error_bound: task.error_bound,
        inputs: ce_values(&found.inputs, task.fmt),
        initial_states: ce_values(&found.init, task.fmt),
        outputs: ce_values(&found.outputs, task.fmt),
        violation: Violation {
            step: found.step,
            node: found.node.to_string(),
            kind: found.kind,
            witness: None,
        },
        engine: EngineProvenance {
            mode: match task.engine.mode {
                EngineMode::Exhaustive => "exhaustive".into(),
                EngineMode::Random => "random".into(),
            },
            seed: task.engine.seed,
            grid: grid_stride,
        },
    }
}

/// Shared engine driver for all six bounded properties.
fn run_bounded(task: &VerificationTask, limit_cycles: bool) -> Result<Verdict, VerifyError> {
    task.validate()?;
    let sim = build_search_sim(task)?;
    let grid = Grid::new(task.fmt, task.engine.input_grid)?;
    let k = task.bound;
    let start = Instant::now();
    let steps = AtomicU64::new(0);
    let digits = if limit_cycles {
        sim.init_dims() as u32
    } else {
        (sim.input_arity() * k) as u32
    };
    let (found, candidates, label) = match task.engine.mode {
        EngineMode::Exhaustive => {
            let space = space_size(grid.count(), digits)
                .filter(|&s| s <= task.engine.budget as u128)
                .ok_or_else(|| VerifyError::BudgetExceeded {
                    space: space_size(grid.count(), digits).unwrap_or(u128::MAX),
                    budget: task.engine.budget,
                })?;
            let found = if limit_cycles {
                search_inits_exhaustive(&sim, grid, k, &steps)
            } else {
                let per_level = space_size(grid.count(), sim.input_arity() as u32)
                    .expect("smaller than the full space") as u64;
                search_inputs_exhaustive(&sim, grid, k, per_level, &steps)
            };
            (found, space, format!("exhaustive to bound {k}"))
        }
        EngineMode::Random => {
            let mut local = 0u64;
            let (found, drawn) = search_random(&sim, grid, k, &task.engine, limit_cycles, &mut local);
            steps.store(local, Ordering::Relaxed);
            (found, drawn as u128, "bounded, sampled".to_string())
        }
    };
    let stats = VerdictStats {
        candidates,
        steps: steps.load(Ordering::Relaxed),
        wall_ms: start.elapsed().as_millis() as u64,
        label: if found.is_some() {
            "counterexample".to_string()
        } else {
            label
        },
    };
    Ok(match found {
        Some(f) => Verdict {
            status: VerdictStatus::Failed,
            property: task.property,
            counterexample: Some(make_counterexample(task, &f, task.engine.input_grid)),
            stats,
        },
        None => Verdict {
            status: VerdictStatus::Successful,
            property: task.property,
            counterexample: None,
            stats,
        },
    })
}

/// No monitored node leaves the format on any grid input sequence of length
/// `bound` from zero state.
pub fn verify_overflow(task: &VerificationTask) -> Result<Verdict, VerifyError> {
    expect_property(task, Property::Overflow)?;
    run_bounded(task, false)
}

/// No zero-input state recurrence with a nonzero output window is reachable
/// from any grid initial state within `bound` steps.
pub fn verify_limit_cycle(task: &VerificationTask) -> Result<Verdict, VerifyError> {
    expect_property(task, Property::LimitCycle)?;
    run_bounded(task, true)
}

/// The fixed-point output stays within `error_bound` of the exact-arithmetic
/// output on every grid input sequence of length `bound`.
pub fn verify_error(task: &VerificationTask) -> Result<Verdict, VerifyError> {
    expect_property(task, Property::QuantizationError)?;
    run_bounded(task, false)
}

/// Closed-loop limit-cycle search over the joint controller/plant state.
pub fn verify_closed_limit_cycle(task: &VerificationTask) -> Result<Verdict, VerifyError> {
    expect_property(task, Property::ClosedLimitCycle)?;
    run_bounded(task, true)
}

/// Closed-loop output deviation between the quantized and ideal loops.
pub fn verify_closed_error(task: &VerificationTask) -> Result<Verdict, VerifyError> {
    expect_property(task, Property::ClosedQuantizationError)?;
    run_bounded(task, false)
}

/// State-space trajectory deviation between the quantized and exact
/// recursions.
pub fn verify_ss_quantization_error(task: &VerificationTask) -> Result<Verdict, VerifyError> {
    expect_property(task, Property::SsQuantizationError)?;
    run_bounded(task, false)
}

fn expect_property(task: &VerificationTask, want: Property) -> Result<(), VerifyError> {
    if task.property != want {
        return Err(VerifyError::IncompatibleSystem {
            property: task.property,
            kind: format!("task routed to the {want} verifier"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::{OverflowMode, Rounding};

    fn fmt(i: u32, f: u32, mode: OverflowMode) -> FxFormat {
        FxFormat::new(i, f, mode, Rounding::Floor)
            .unwrap()
            .with_dynamic_range(-1.0, 1.0)
            .unwrap()
    }

    fn tf_doc(num: &[f64], den: &[f64]) -> SystemDoc {
        SystemDoc::parse(
            &serde_json::json!({
                "type": "tf", "num": num, "den": den, "ts": 0.001
            })
            .to_string(),
        )
        .unwrap()
    }

    fn cl_doc(cn: &[f64], cd: &[f64], pn: &[f64], pd: &[f64], cmode: &str) -> SystemDoc {
        SystemDoc::parse(
            &serde_json::json!({
                "type": "cl-tf",
                "controller": { "num": cn, "den": cd, "ts": 0.001 },
                "plant": { "num": pn, "den": pd, "ts": 0.001 },
                "cmode": cmode
            })
            .to_string(),
        )
        .unwrap()
    }

    // --- grid ---------------------------------------------------------------

    #[test]
    fn grid_covers_dynamic_range() {
        let g = Grid::new(fmt(2, 4, OverflowMode::Wrap), None).unwrap();
        assert_eq!(g.count(), 33); // raws -16..=16
        assert_eq!(g.get(0), -16);
        assert_eq!(g.get(32), 16);
    }

    #[test]
    fn grid_stride_rounds_to_raw_steps() {
        let g = Grid::new(fmt(2, 13, OverflowMode::Wrap), Some(0.25)).unwrap();
        assert_eq!(g.count(), 9); // -1.0, -0.75, ..., 1.0
        assert_eq!(g.get(1), -8192 + 2048);
    }

    // --- overflow -----------------------------------------------------------

    #[test]
    fn overflow_headline_gain_fails_on_first_input() {
        // y = 10 u in <2,4>: the coefficient itself wraps to -2.0 and the
        // first grid input u = -1.0 overflows the product node.
        let task = VerificationTask::bounded(
            tf_doc(&[10.0], &[1.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::Overflow,
            2,
        );
        let v = verify_overflow(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed);
        let ce = v.counterexample.unwrap();
        assert_eq!(ce.inputs[0].raw, -16);
        assert_eq!(ce.inputs[0].value, -1.0);
        assert_eq!(ce.violation.step, 0);
        assert_eq!(ce.violation.node, "mul_b[0]");
        assert_eq!(ce.violation.kind, ViolationKind::Overflow);
        assert!(ce.replay().unwrap().confirmed);
    }

    #[test]
    fn overflow_small_gain_is_safe_and_exhaustive() {
        let task = VerificationTask::bounded(
            tf_doc(&[0.5], &[1.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::Overflow,
            3,
        );
        let v = verify_overflow(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
        assert_eq!(v.stats.candidates, 33u128.pow(3));
        assert!(v.stats.label.contains("exhaustive to bound 3"));
    }

    #[test]
    fn saturation_counts_toggle_controls_the_verdict() {
        // y(n) = 1.5 u(n) + 1.5 u(n-1): each product stays inside <2,4>,
        // but u = (-1, -1) accumulates to -3 < -2 and clamps.
        let doc = tf_doc(&[1.5, 1.5], &[1.0, 0.0]);
        let f = fmt(2, 4, OverflowMode::Saturate);
        let mut task = VerificationTask::bounded(doc, f, Property::Overflow, 2);
        let v = verify_overflow(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed, "clamps count by default");
        let ce = v.counterexample.unwrap();
        assert_eq!(ce.violation.node, "acc_b[1]");
        assert_eq!(ce.violation.step, 1);
        task.saturation_counts = false;
        let v = verify_overflow(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
    }

    // --- limit cycles ---------------------------------------------------------

    #[test]
    fn integrator_pole_one_has_a_wrap_limit_cycle() {
        // H = 1/(z-1) in <2,4> wrap: from the lexicographically first
        // initial state (-1.0, -1.0) the output pins at the wrap boundary:
        // y(0) = -2.0, then s(1) = s(2) repeats with y = -2.0 forever.
        let task = VerificationTask::bounded(
            tf_doc(&[1.0], &[1.0, -1.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::LimitCycle,
            8,
        );
        let v = verify_limit_cycle(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed);
        let ce = v.counterexample.unwrap();
        assert_eq!(
            ce.initial_states.iter().map(|v| v.raw).collect::<Vec<_>>(),
            vec![-16, -16]
        );
        assert_eq!(ce.violation.step, 1);
        assert_eq!(ce.violation.node, "state");
        assert_eq!(
            ce.outputs.iter().map(|v| v.raw).collect::<Vec<_>>(),
            vec![-32, -32]
        );
        assert!(ce.replay().unwrap().confirmed, "{:?}", ce.replay());
    }

    #[test]
    fn contractive_filter_has_no_limit_cycle_under_floor() {
        // H = 1/(z + 0.875) in <2,4> floor rounding: magnitude truncation
        // is contractive here; verified against brute force over all 33^2
        // initial states.
        let task = VerificationTask::bounded(
            tf_doc(&[1.0], &[1.0, 0.875]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::LimitCycle,
            16,
        );
        let v = verify_limit_cycle(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
        assert_eq!(v.stats.candidates, 33u128.pow(2));
    }

    // --- quantization error -----------------------------------------------------

    #[test]
    fn pure_delay_is_exact_at_zero_tolerance() {
        // y(n) = u(n-1): integer coefficients make every product exact, so
        // the fixed-point and reference trajectories agree bit for bit.
        let mut task = VerificationTask::bounded(
            tf_doc(&[1.0], &[1.0, 0.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::QuantizationError,
            3,
        );
        task.error_bound = Some(0.0);
        let v = verify_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
    }

    #[test]
    fn rounded_coefficient_breaks_zero_tolerance() {
        // b0 = 0.3 quantizes to 0.25 in <2,4>; the very first product on a
        // grid input differs from 0.3 u, so eps = 0 fails at step 0.
        let mut task = VerificationTask::bounded(
            tf_doc(&[0.3], &[1.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::QuantizationError,
            2,
        );
        task.error_bound = Some(0.0);
        let v = verify_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed);
        let ce = v.counterexample.unwrap();
        assert_eq!(ce.violation.step, 0);
        assert_eq!(ce.violation.node, "y[0]");
        assert!(ce.replay().unwrap().confirmed);
        // A loose tolerance passes: |0.3 - 0.25| on |u| <= 1 stays under 0.5.
        task.error_bound = Some(0.5);
        let v = verify_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
    }

    #[test]
    fn tightening_eps_and_growing_bound_preserve_failure() {
        let doc = tf_doc(&[0.3], &[1.0, -0.5]);
        let f = fmt(2, 4, OverflowMode::Wrap);
        let mut task = VerificationTask::bounded(doc, f, Property::QuantizationError, 2);
        task.error_bound = Some(0.01);
        let at_k2 = verify_error(&task).unwrap();
        assert_eq!(at_k2.status, VerdictStatus::Failed);
        task.bound = 3;
        let at_k3 = verify_error(&task).unwrap();
        assert_eq!(at_k3.status, VerdictStatus::Failed, "failure is monotone in k");
        task.error_bound = Some(0.001);
        let tighter = verify_error(&task).unwrap();
        assert_eq!(tighter.status, VerdictStatus::Failed, "failure is monotone in eps");
    }

    // --- state space ---------------------------------------------------------

    fn ss_doc() -> SystemDoc {
        SystemDoc::parse(
            r#"{ "type": "ss",
                 "A": [[0.3]], "B": [[1.0]], "C": [[1.0]], "D": [[0.0]],
                 "ts": 0.001 }"#,
        )
        .unwrap()
    }

    #[test]
    fn ss_error_catches_quantized_state_matrix() {
        // A = 0.3 -> 0.25 in <2,3>: x diverges from the exact recursion at
        // the second update, visible in y at step 2.
        let f = FxFormat::new(2, 3, OverflowMode::Wrap, Rounding::Floor)
            .unwrap()
            .with_dynamic_range(-1.0, 1.0)
            .unwrap();
        let mut task = VerificationTask::bounded(ss_doc(), f, Property::SsQuantizationError, 3);
        task.error_bound = Some(0.0);
        let v = verify_ss_quantization_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed);
        let ce = v.counterexample.unwrap();
        assert_eq!(ce.violation.step, 2);
        assert_eq!(ce.violation.node, "y[0]");
        assert!(ce.replay().unwrap().confirmed);
        // Worst drift within this bound is |floor(7/4)/8 - 0.3*7/8| = 0.1375.
        task.error_bound = Some(0.15);
        let v = verify_ss_quantization_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
    }

    // --- closed loop -----------------------------------------------------------

    #[test]
    fn exact_closed_loop_is_error_free() {
        // C = 1/z, P = 1 (unit gain), series: every signal stays on the
        // grid and no product rounds, so the quantized and ideal loops
        // coincide at eps = 0. The error recursion e(n) = r(n) - e(n-1)
        // keeps |e| <= 1.25 over 4 steps on |r| <= 0.25, well inside <2,13>.
        let doc = cl_doc(&[1.0], &[1.0, 0.0], &[1.0], &[1.0], "series");
        let f = FxFormat::new(2, 13, OverflowMode::Wrap, Rounding::Floor)
            .unwrap()
            .with_dynamic_range(-0.25, 0.25)
            .unwrap();
        let mut task = VerificationTask::bounded(doc, f, Property::ClosedQuantizationError, 4);
        task.error_bound = Some(0.0);
        task.engine.input_grid = Some(0.25);
        let v = verify_closed_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful, "{:?}", v.stats);
    }

    #[test]
    fn quantized_controller_gain_shows_up_in_the_loop() {
        // C = 0.3/z quantizes to 0.25/z in <2,4>: the loop outputs diverge
        // immediately at eps = 0.
        let doc = cl_doc(&[0.3], &[1.0, 0.0], &[1.0], &[1.0], "series");
        let mut task = VerificationTask::bounded(
            doc,
            fmt(2, 4, OverflowMode::Wrap),
            Property::ClosedQuantizationError,
            3,
        );
        task.error_bound = Some(0.0);
        let v = verify_closed_error(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed);
        assert!(v.counterexample.unwrap().replay().unwrap().confirmed);
    }

    #[test]
    fn plant_delay_with_unit_controller_oscillates() {
        // C = 1 (pure gain), P = 1/z, series: y(n) = -y(n-1) exactly, so any
        // nonzero plant state is a period-2 limit cycle. The searched joint
        // state is one plant dimension; the first grid value -1.0 wins.
        let doc = cl_doc(&[1.0], &[1.0], &[1.0], &[1.0, 0.0], "series");
        let task = VerificationTask::bounded(
            doc,
            fmt(2, 4, OverflowMode::Wrap),
            Property::ClosedLimitCycle,
            8,
        );
        let v = verify_closed_limit_cycle(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Failed);
        let ce = v.counterexample.unwrap();
        assert_eq!(
            ce.initial_states.iter().map(|v| v.raw).collect::<Vec<_>>(),
            vec![-16]
        );
        assert_eq!(ce.violation.step, 0);
        assert_eq!(
            ce.outputs.iter().map(|v| v.raw).collect::<Vec<_>>(),
            vec![-16, 16]
        );
        assert!(ce.replay().unwrap().confirmed, "{:?}", ce.replay());
    }

    #[test]
    fn zero_controller_loop_is_silent() {
        let doc = cl_doc(&[0.0], &[1.0, 0.0], &[1.0], &[1.0], "series");
        let task = VerificationTask::bounded(
            doc,
            fmt(2, 4, OverflowMode::Wrap),
            Property::ClosedLimitCycle,
            6,
        );
        let v = verify_closed_limit_cycle(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
    }

    #[test]
    fn biproper_on_both_sides_is_degenerate() {
        let doc = cl_doc(&[1.0], &[1.0], &[1.0], &[1.0], "series");
        let task = VerificationTask::bounded(
            doc,
            fmt(2, 4, OverflowMode::Wrap),
            Property::ClosedLimitCycle,
            4,
        );
        assert!(matches!(
            verify_closed_limit_cycle(&task),
            Err(VerifyError::Model(SysModelError::DegenerateLoop(_)))
        ));
    }

    // --- engine modes -----------------------------------------------------------

    #[test]
    fn budget_refuses_oversized_exhaustive_searches() {
        let task = VerificationTask::bounded(
            tf_doc(&[0.5], &[1.0]),
            fmt(2, 13, OverflowMode::Wrap),
            Property::Overflow,
            10,
        );
        match verify_overflow(&task) {
            Err(VerifyError::BudgetExceeded { budget, .. }) => {
                assert_eq!(budget, 10_000_000)
            }
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn random_mode_is_seed_deterministic_and_replayable() {
        // In <2,4> the only violating stimulus is u = -1.0 (1 in 33), so a
        // 4-step candidate hits with probability ~0.116 and 2000 samples
        // find one with overwhelming margin; the seed fixes the outcome.
        let mut task = VerificationTask::bounded(
            tf_doc(&[10.0], &[1.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::Overflow,
            4,
        );
        task.engine.mode = EngineMode::Random;
        task.engine.samples = 2000;
        let a = verify_overflow(&task).unwrap();
        let b = verify_overflow(&task).unwrap();
        assert_eq!(a.status, VerdictStatus::Failed);
        assert_eq!(a.counterexample, b.counterexample, "same seed, same CE");
        assert_eq!(a.stats.label, "counterexample");
        let ce = a.counterexample.unwrap();
        assert_eq!(ce.engine.mode, "random");
        assert!(ce.replay().unwrap().confirmed);
    }

    #[test]
    fn random_success_is_labeled_sampled() {
        let mut task = VerificationTask::bounded(
            tf_doc(&[0.5], &[1.0]),
            fmt(2, 13, OverflowMode::Wrap),
            Property::Overflow,
            4,
        );
        task.engine.mode = EngineMode::Random;
        task.engine.samples = 200;
        let v = verify_overflow(&task).unwrap();
        assert_eq!(v.status, VerdictStatus::Successful);
        assert_eq!(v.stats.label, "bounded, sampled");
        assert_eq!(v.stats.candidates, 200);
    }

    #[test]
    fn task_validation_rejects_mismatches() {
        let t = VerificationTask::bounded(
            ss_doc(),
            fmt(2, 4, OverflowMode::Wrap),
            Property::Overflow,
            2,
        );
        assert!(matches!(
            t.validate(),
            Err(VerifyError::IncompatibleSystem { .. })
        ));
        let mut t = VerificationTask::bounded(
            tf_doc(&[0.5], &[1.0]),
            fmt(2, 4, OverflowMode::Wrap),
            Property::QuantizationError,
            2,
        );
        assert!(matches!(t.validate(), Err(VerifyError::MissingErrorBound(_))));
        t.error_bound = Some(f64::NAN);
        assert!(matches!(t.validate(), Err(VerifyError::InvalidErrorBound(_))));
        t.error_bound = Some(0.1);
        t.bound = 0;
        assert!(matches!(t.validate(), Err(VerifyError::ZeroBound)));
    }

    #[test]
    fn property_serde_names_are_kebab_case() {
        assert_eq!(
            serde_json::to_string(&Property::ClosedQuantizationError).unwrap(),
            "\"closed-quantization-error\""
        );
        assert_eq!(Property::SsStability.to_string(), "ss-stability");
    }

    #[test]
    fn property_names_round_trip_through_from_str() {
        for p in [
            Property::Stability,
            Property::MinimumPhase,
            Property::Overflow,
            Property::LimitCycle,
            Property::QuantizationError,
            Property::ClosedStability,
            Property::ClosedLimitCycle,
            Property::ClosedQuantizationError,
            Property::SsStability,
            Property::SsControllability,
            Property::SsObservability,
            Property::SsQuantizationError,
        ] {
            assert_eq!(p.to_string().parse::<Property>(), Ok(p));
        }
        assert!("jitter".parse::<Property>().is_err());
    }
}
