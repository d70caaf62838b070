//! Replayable counterexample files.
//!
//! Schema `fwl-ce/1` is a single JSON object:
//!
//! ```json
//! {
//!   "schema": "fwl-ce/1",
//!   "property": "overflow",
//!   "system": { "type": "tf", "num": [10.0], "den": [1.0], "ts": 0.001 },
//!   "format": { "int_bits": 2, "frac_bits": 4, "overflow_mode": "wrap",
//!               "rounding": "floor", "dyn_min": -1.0, "dyn_max": 1.0 },
//!   "realization": { "form": "dfi" },
//!   "bound": 1,
//!   "inputs": [ { "raw": -16, "value": -1.0 } ],
//!   "initial_states": [],
//!   "outputs": [ { "raw": -32, "value": -2.0 } ],
//!   "violation": { "step": 0, "node": "mul_b[0]", "kind": "overflow" },
//!   "engine": { "mode": "exhaustive", "seed": 1, "grid": null }
//! }
//! ```
//!
//! `raw` integers are authoritative; the `value` fields are advisory
//! renderings re-derived on load. An empty `initial_states` array means the
//! all-zero state. Quantization-error counterexamples carry the tolerance in
//! the optional top-level `error_bound`. Analytic counterexamples (kinds
//! `unstable_root`, `nonminimum_zero`, `rank_deficiency`) have empty
//! input/state/output arrays and put the offending root or rank into
//! `violation.witness`; replay re-runs the analytic check instead of a
//! simulation. For closed loops the recorded outputs are the on-grid
//! quantization of the real-valued loop output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bmc::{self, Property, SearchSim, VerificationTask};
use crate::fixedpoint::{FxFormat, FxNum};
use crate::realization::RealizationSpec;
use crate::sysmodel::SystemDoc;

/// Schema identifier accepted and emitted by this crate.
pub const CE_SCHEMA: &str = "fwl-ce/1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CeError {
    #[error("malformed counterexample: {0}")]
    Malformed(String),
    #[error("unsupported counterexample schema {0:?} (expected {CE_SCHEMA:?})")]
    SchemaVersion(String),
    #[error("counterexample violates an invariant: {0}")]
    Invariant(String),
    #[error("counterexample cannot be replayed: {0}")]
    Unreplayable(String),
}

/// What a violation is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Overflow,
    LimitCycle,
    QuantizationError,
    UnstableRoot,
    NonminimumZero,
    RankDeficiency,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ViolationKind::Overflow => "overflow",
            ViolationKind::LimitCycle => "limit cycle",
            ViolationKind::QuantizationError => "quantization error",
            ViolationKind::UnstableRoot => "unstable root",
            ViolationKind::NonminimumZero => "non-minimum-phase zero",
            ViolationKind::RankDeficiency => "rank deficiency",
        };
        f.write_str(name)
    }
}

impl ViolationKind {
    /// Kinds whose evidence is a recorded simulation rather than algebra.
    pub fn is_simulation(&self) -> bool {
        matches!(
            self,
            ViolationKind::Overflow | ViolationKind::LimitCycle | ViolationKind::QuantizationError
        )
    }
}

/// One grid value: authoritative raw integer plus advisory real rendering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CeValue {
    pub raw: i64,
    pub value: f64,
}

/// Analytic evidence embedded in the violation record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Root { re: f64, im: f64, modulus: f64 },
    Rank { rank: usize, required: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub step: usize,
    pub node: String,
    pub kind: ViolationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// How the counterexample was found, for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineProvenance {
    pub mode: String,
    pub seed: u64,
    pub grid: Option<f64>,
}

/// A complete, self-contained counterexample document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub schema: String,
    pub property: Property,
    pub system: SystemDoc,
    pub format: FxFormat,
    pub realization: RealizationSpec,
    pub bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    pub inputs: Vec<CeValue>,
    pub initial_states: Vec<CeValue>,
    pub outputs: Vec<CeValue>,
    pub violation: Violation,
    pub engine: EngineProvenance,
}

/// Outcome of a replay: confirmed means the recorded violation recurred
/// exactly (same step, same node, bit-identical outputs).
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub confirmed: bool,
    pub detail: String,
}

impl ReplayReport {
    fn confirmed(detail: impl Into<String>) -> Self {
        ReplayReport {
            confirmed: true,
            detail: detail.into(),
        }
    }

    fn refuted(detail: impl Into<String>) -> Self {
        ReplayReport {
            confirmed: false,
            detail: detail.into(),
        }
    }
}

impl Counterexample {
    /// Serializes to pretty JSON (the on-disk format).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counterexamples always serialize")
    }

    /// Parses and validates a counterexample document. Raw integers are
    /// authoritative: advisory `value` fields are re-derived from them.
    pub fn from_json(text: &str) -> Result<Self, CeError> {
        let mut ce: Counterexample =
            serde_json::from_str(text).map_err(|e| CeError::Malformed(e.to_string()))?;
        if ce.schema != CE_SCHEMA {
            return Err(CeError::SchemaVersion(ce.schema));
        }
        ce.normalize_values()?;
        ce.validate()?;
        Ok(ce)
    }

    fn normalize_values(&mut self) -> Result<(), CeError> {
        let fmt = self.format;
        let rederive = |vs: &mut Vec<CeValue>| -> Result<(), CeError> {
            for v in vs.iter_mut() {
                let fx = FxNum::from_raw(v.raw, fmt)
                    .map_err(|e| CeError::Invariant(e.to_string()))?;
                v.value = fx.value();
            }
            Ok(())
        };
        rederive(&mut self.inputs)?;
        rederive(&mut self.initial_states)?;
        rederive(&mut self.outputs)
    }

    /// Structural invariants beyond what serde enforces.
    pub fn validate(&self) -> Result<(), CeError> {
        RealizationSpec::new(self.realization.form, self.realization.delta)
            .map_err(|e| CeError::Invariant(e.to_string()))?;
        if self.violation.kind.is_simulation() {
            if self.outputs.is_empty() {
                return Err(CeError::Invariant(
                    "simulation counterexample has no outputs".into(),
                ));
            }
            if self.violation.step >= self.outputs.len() {
                return Err(CeError::Invariant(format!(
                    "violation step {} is not inside the {} recorded outputs",
                    self.violation.step,
                    self.outputs.len()
                )));
            }
            if self.bound == 0 {
                return Err(CeError::Invariant("bound must be at least 1".into()));
            }
        }
        if self.violation.kind == ViolationKind::QuantizationError && self.error_bound.is_none() {
            return Err(CeError::Invariant(
                "quantization-error counterexample lacks error_bound".into(),
            ));
        }
        Ok(())
    }

    fn task(&self) -> Result<VerificationTask, CeError> {
        let mut task = VerificationTask::bounded(
            self.system.clone(),
            self.format,
            self.property,
            self.bound.max(1),
        );
        task.realization = self.realization;
        task.error_bound = self.error_bound;
        task.validate().map_err(|e| CeError::Unreplayable(e.to_string()))?;
        Ok(task)
    }

    /// Deterministically re-simulates (or re-analyzes) the recorded scenario
    /// and reports whether the violation recurs exactly.
    pub fn replay(&self) -> Result<ReplayReport, CeError> {
        match self.violation.kind {
            ViolationKind::UnstableRoot
            | ViolationKind::NonminimumZero
            | ViolationKind::RankDeficiency => self.replay_analytic(),
            ViolationKind::Overflow | ViolationKind::QuantizationError => self.replay_prefix(),
            ViolationKind::LimitCycle => self.replay_limit_cycle(),
        }
    }

    fn replay_analytic(&self) -> Result<ReplayReport, CeError> {
        let task = VerificationTask::analytic(self.system.clone(), self.format, self.property);
        let verdict = crate::verify(&task).map_err(|e| CeError::Unreplayable(e.to_string()))?;
        if verdict.passed() {
            return Ok(ReplayReport::refuted(
                "re-running the analytic check now reports SUCCESSFUL",
            ));
        }
        let fresh = verdict
            .counterexample
            .as_ref()
            .and_then(|ce| ce.violation.witness);
        match (self.violation.witness, fresh) {
            (Some(Witness::Root { re, im, .. }), Some(Witness::Root { re: r2, im: i2, .. })) => {
                if (re - r2).abs() <= 1e-6 && (im - i2).abs() <= 1e-6 {
                    Ok(ReplayReport::confirmed("analytic witness root matches"))
                } else {
                    Ok(ReplayReport::refuted(format!(
                        "witness root moved: recorded {re}+{im}i, recomputed {r2}+{i2}i"
                    )))
                }
            }
            (Some(Witness::Rank { rank, required }), Some(Witness::Rank { rank: k2, .. })) => {
                if rank == k2 {
                    Ok(ReplayReport::confirmed("deficient rank matches"))
                } else {
                    Ok(ReplayReport::refuted(format!(
                        "rank changed: recorded {rank}/{required}, recomputed {k2}"
                    )))
                }
            }
            (None, _) => Ok(ReplayReport::refuted("analytic counterexample lacks a witness")),
            _ => Ok(ReplayReport::refuted("witness shape changed on replay")),
        }
    }

    fn init_raws(&self) -> Vec<i64> {
        self.initial_states.iter().map(|v| v.raw).collect()
    }

    fn replay_prefix(&self) -> Result<ReplayReport, CeError> {
        let task = self.task()?;
        let mut sim = bmc::build_search_sim(&task).map_err(|e| CeError::Unreplayable(e.to_string()))?;
        let m = sim.input_arity();
        let p = sim.output_arity();
        if m == 0 || self.inputs.len() % m != 0 {
            return Ok(ReplayReport::refuted("input count does not divide the arity"));
        }
        let steps = self.inputs.len() / m;
        if steps != self.outputs.len() / p || self.outputs.len() % p != 0 {
            return Ok(ReplayReport::refuted("input and output lengths disagree"));
        }
        if steps == 0 || self.violation.step + 1 != steps {
            return Ok(ReplayReport::refuted(
                "recorded prefix does not end at the violation step",
            ));
        }
        let init = self.init_raws();
        if init.is_empty() {
            sim.reset_zero();
        } else {
            if init.len() != sim.init_dims() {
                return Ok(ReplayReport::refuted(format!(
                    "initial state has {} entries, the realization needs {}",
                    init.len(),
                    sim.init_dims()
                )));
            }
            sim.set_init(&init);
        }
        for t in 0..steps {
            let u: Vec<i64> = self.inputs[t * m..(t + 1) * m].iter().map(|v| v.raw).collect();
            let viol = sim.step(&u);
            let got = sim.last_outputs();
            let want: Vec<i64> = self.outputs[t * p..(t + 1) * p].iter().map(|v| v.raw).collect();
            if got != want.as_slice() {
                return Ok(ReplayReport::refuted(format!(
                    "output mismatch at step {t}: recorded {want:?}, got {got:?}"
                )));
            }
            match (t == self.violation.step, viol) {
                (false, None) => {}
                (false, Some((node, _))) => {
                    return Ok(ReplayReport::refuted(format!(
                        "unexpected violation at step {t} node {node}"
                    )));
                }
                (true, None) => {
                    return Ok(ReplayReport::refuted(format!(
                        "no violation recurred at step {t}"
                    )));
                }
                (true, Some((node, kind))) => {
                    if node.to_string() != self.violation.node {
                        return Ok(ReplayReport::refuted(format!(
                            "violation moved to node {node} (recorded {})",
                            self.violation.node
                        )));
                    }
                    if kind != self.violation.kind {
                        return Ok(ReplayReport::refuted("violation kind changed"));
                    }
                }
            }
        }
        Ok(ReplayReport::confirmed(format!(
            "violation recurred at step {} node {}",
            self.violation.step, self.violation.node
        )))
    }

    fn replay_limit_cycle(&self) -> Result<ReplayReport, CeError> {
        let task = self.task()?;
        let mut sim = bmc::build_search_sim(&task).map_err(|e| CeError::Unreplayable(e.to_string()))?;
        let m = sim.input_arity();
        let p = sim.output_arity();
        let cycle_end = self.outputs.len() / p;
        if cycle_end == 0 || self.outputs.len() % p != 0 {
            return Ok(ReplayReport::refuted("limit-cycle outputs are empty or ragged"));
        }
        let i = self.violation.step;
        if i >= cycle_end {
            return Ok(ReplayReport::refuted("cycle start is past the recorded outputs"));
        }
        let init = self.init_raws();
        if init.len() != sim.init_dims() {
            if !(init.is_empty() && sim.init_dims() == 0) {
                return Ok(ReplayReport::refuted(format!(
                    "initial state has {} entries, the realization needs {}",
                    init.len(),
                    sim.init_dims()
                )));
            }
        }
        sim.set_init(&init);
        let zero = vec![0i64; m];
        let mut sig = Vec::new();
        sim.write_sig(&mut sig);
        let sig_len = sig.len();
        let mut sigs = sig;
        let mut nonzero_window = false;
        for t in 0..cycle_end {
            sim.step(&zero);
            let got = sim.last_outputs();
            let want: Vec<i64> = self.outputs[t * p..(t + 1) * p].iter().map(|v| v.raw).collect();
            if got != want.as_slice() {
                return Ok(ReplayReport::refuted(format!(
                    "output mismatch at step {t}: recorded {want:?}, got {got:?}"
                )));
            }
            if t >= i && sim.last_output_nonzero() {
                nonzero_window = true;
            }
            sim.write_sig(&mut sigs);
        }
        let start = &sigs[i * sig_len..(i + 1) * sig_len];
        let end = &sigs[cycle_end * sig_len..(cycle_end + 1) * sig_len];
        if start != end {
            return Ok(ReplayReport::refuted(format!(
                "state does not recur: s({i}) differs from s({cycle_end})"
            )));
        }
        if !nonzero_window {
            return Ok(ReplayReport::refuted("recurring window outputs are all zero"));
        }
        Ok(ReplayReport::confirmed(format!(
            "state recurrence s({i}) = s({cycle_end}) with nonzero output window"
        )))
    }
}
