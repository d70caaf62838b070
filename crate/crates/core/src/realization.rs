//! Bit-accurate simulation of transfer-function realizations.
//!
//! Six structures are supported: direct forms I and II, transposed direct
//! form II, and their delta-operator counterparts (`δ = (z-1)/Δ`, each delay
//! replaced by a forward-Euler integrator block whose output is its state).
//! The fixed-point and reference (f64) runs share one topology walker, so
//! both execute the same nodes in the same documented order:
//!
//! * **DFI** — products `mul_b[0..=n]` left to right, then `mul_a[1..=n]`;
//!   one accumulator adds the b-terms (`acc_b[i]`) then subtracts the
//!   a-terms (`acc_a[j]`); finally the input/output delay lines advance
//!   (delta blocks add `mul_d`/`acc_d` nodes, cascade index ascending).
//! * **DFII** — `mul_a[1..=n]`, then the w-accumulation `acc_w[1..=n]`
//!   starting from `u`, then `mul_b[0..=n]` and `acc_b[1..=n]`, then the
//!   w-line advances.
//! * **TDFII** — `mul_b[0]` and `acc_y` produce the output from the first
//!   state; then per state `i = 1..=n`: `mul_b[i]`, `mul_a[i]`,
//!   `acc_b[i]` (adds the old next state), `acc_a[i]` (subtracts the
//!   feedback product), and the state store (delta: `mul_d`/`acc_d`).
//!
//! State layout (the order counterexamples record): DFI keeps the input
//! line then the output line, most recent entry first; DFII/TDFII keep
//! their `n` internal states in cascade order. Delta forms keep integrator
//! states in the same slots.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::fixedpoint::{add_raw, mul_raw, quantize_raw, sub_raw, FxError, FxFormat, FxNum};
use crate::sysmodel::{Polynomial, SysModelError, TransferFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizationError {
    #[error("form {0:?} requires a delta parameter")]
    MissingDelta(RealizationForm),
    #[error("form {0:?} does not take a delta parameter")]
    UnexpectedDelta(RealizationForm),
    #[error("delta {0} must be positive and finite")]
    InvalidDelta(f64),
    #[error("delta {delta} quantizes to zero in {fmt}")]
    DeltaQuantizesToZero { delta: f64, fmt: FxFormat },
    #[error("leading denominator coefficient 1.0 is not representable in {0}")]
    LeadingCoefficientUnrepresentable(FxFormat),
    #[error("initial state has {got} entries, the realization needs {expected}")]
    StateLength { expected: usize, got: usize },
    #[error(transparent)]
    Fx(#[from] FxError),
    #[error(transparent)]
    Model(#[from] SysModelError),
}

/// The six supported realization structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealizationForm {
    Dfi,
    Dfii,
    Tdfii,
    Ddfi,
    Ddfii,
    Tddfii,
}

impl RealizationForm {
    pub fn is_delta(&self) -> bool {
        matches!(
            self,
            RealizationForm::Ddfi | RealizationForm::Ddfii | RealizationForm::Tddfii
        )
    }

    fn topology(&self) -> Topology {
        match self {
            RealizationForm::Dfi | RealizationForm::Ddfi => Topology::Df1,
            RealizationForm::Dfii | RealizationForm::Ddfii => Topology::Df2,
            RealizationForm::Tdfii | RealizationForm::Tddfii => Topology::Tdf2,
        }
    }
}

impl std::fmt::Display for RealizationForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RealizationForm::Dfi => "dfi",
            RealizationForm::Dfii => "dfii",
            RealizationForm::Tdfii => "tdfii",
            RealizationForm::Ddfi => "ddfi",
            RealizationForm::Ddfii => "ddfii",
            RealizationForm::Tddfii => "tddfii",
        };
        f.write_str(s)
    }
}

/// A realization choice: the structure plus, for delta forms, the operator
/// parameter `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizationSpec {
    pub form: RealizationForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl RealizationSpec {
    pub fn new(form: RealizationForm, delta: Option<f64>) -> Result<Self, RealizationError> {
        match (form.is_delta(), delta) {
            (true, None) => Err(RealizationError::MissingDelta(form)),
            (false, Some(_)) => Err(RealizationError::UnexpectedDelta(form)),
            (true, Some(d)) if !d.is_finite() || d <= 0.0 => {
                Err(RealizationError::InvalidDelta(d))
            }
            _ => Ok(RealizationSpec { form, delta }),
        }
    }

    /// Spec for a shift-operator form. Shift forms carry no `Δ`, so this
    /// cannot fail; it panics if handed a delta form (use [`Self::new`]).
    pub fn shift(form: RealizationForm) -> Self {
        RealizationSpec::new(form, None).expect("shift forms need no delta parameter")
    }
}

/// Number of state entries a realization of the given order carries.
pub fn state_len(form: RealizationForm, order: usize) -> usize {
    match form.topology() {
        Topology::Df1 => 2 * order,
        Topology::Df2 | Topology::Tdf2 => order,
    }
}

/// Rewrites `p(z)` as a polynomial in `δ` via the substitution
/// `z = 1 + Δ·δ` (pure substitution — no normalization; positional length
/// is preserved, leading zeros included).
pub fn to_delta_coeffs(p: &Polynomial, delta: f64) -> Result<Polynomial, RealizationError> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(RealizationError::InvalidDelta(delta));
    }
    // Iterated Horner in polynomial arithmetic: acc = acc*(Δδ + 1) + c.
    let step = Polynomial::new(vec![delta, 1.0]).expect("finite");
    let mut acc = Polynomial::constant(0.0);
    for (i, &c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            acc = acc.mul(&step);
        }
        acc = acc.add(&Polynomial::constant(c));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Node identifiers and traces
// ---------------------------------------------------------------------------

/// Which delay line a delta-integrator node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineTag {
    /// DFI input line.
    U,
    /// DFI output line.
    Y,
    /// DFII internal line.
    W,
    /// TDFII state chain.
    S,
}

impl LineTag {
    fn tag(&self) -> char {
        match self {
            LineTag::U => 'u',
            LineTag::Y => 'y',
            LineTag::W => 'w',
            LineTag::S => 's',
        }
    }
}

/// Which state-space matrix a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatTag {
    A,
    B,
    C,
    D,
}

impl MatTag {
    fn tag(&self) -> char {
        match self {
            MatTag::A => 'A',
            MatTag::B => 'B',
            MatTag::C => 'C',
            MatTag::D => 'D',
        }
    }
}

/// Identifier of one arithmetic node inside a step, in the documented
/// evaluation order. `Display` gives the stable string used in
/// counterexample files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeId {
    MulB(u16),
    MulA(u16),
    AccB(u16),
    AccA(u16),
    AccW(u16),
    AccY,
    MulD { line: LineTag, idx: u16 },
    AccD { line: LineTag, idx: u16 },
    /// Quantization of a real-valued signal entering the fixed-point side.
    Adc,
    /// The closed-loop comparison point `r - (fed-back signal)`.
    LoopSub,
    MulMat { mat: MatTag, row: u16, col: u16 },
    AccMat { mat: MatTag, row: u16, col: u16 },
    /// Output comparison node (index = output component).
    Output(u16),
    /// Whole-state node used by limit-cycle violations.
    State,
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeId::MulB(i) => write!(f, "mul_b[{i}]"),
            NodeId::MulA(i) => write!(f, "mul_a[{i}]"),
            NodeId::AccB(i) => write!(f, "acc_b[{i}]"),
            NodeId::AccA(i) => write!(f, "acc_a[{i}]"),
            NodeId::AccW(i) => write!(f, "acc_w[{i}]"),
            NodeId::AccY => write!(f, "acc_y"),
            NodeId::MulD { line, idx } => write!(f, "mul_d[{},{idx}]", line.tag()),
            NodeId::AccD { line, idx } => write!(f, "acc_d[{},{idx}]", line.tag()),
            NodeId::Adc => write!(f, "adc"),
            NodeId::LoopSub => write!(f, "loop_sub"),
            NodeId::MulMat { mat, row, col } => write!(f, "mul_{}[{row},{col}]", mat.tag()),
            NodeId::AccMat { mat, row, col } => write!(f, "acc_{}[{row},{col}]", mat.tag()),
            NodeId::Output(i) => write!(f, "y[{i}]"),
            NodeId::State => write!(f, "state"),
        }
    }
}

/// One recorded arithmetic event: the stored (post-policy) value and
/// whether the exact result was unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub node: NodeId,
    pub value: FxNum,
    pub flagged: bool,
}

/// Full record of one fixed-point step: input, output, and every
/// intermediate product/accumulation with its overflow flag.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub input: FxNum,
    pub output: FxNum,
    pub events: Vec<TraceEvent>,
}

impl StepTrace {
    /// First node whose exact result was unrepresentable, if any.
    pub fn first_flagged(&self) -> Option<NodeId> {
        self.events.iter().find(|e| e.flagged).map(|e| e.node)
    }
}

/// Consumer of per-node events; lets the hot search path skip storage.
pub(crate) trait TraceSink {
    fn record(&mut self, node: NodeId, raw: i64, flagged: bool);
}

/// Discards everything.
pub(crate) struct NoopSink;

impl TraceSink for NoopSink {
    #[inline]
    fn record(&mut self, _: NodeId, _: i64, _: bool) {}
}

/// Keeps only the earliest flagged node of a step.
#[derive(Default)]
pub(crate) struct FirstFlagSink {
    pub first: Option<NodeId>,
}

impl TraceSink for FirstFlagSink {
    #[inline]
    fn record(&mut self, node: NodeId, _: i64, flagged: bool) {
        if flagged && self.first.is_none() {
            self.first = Some(node);
        }
    }
}

/// Stores every event (public `simulate`).
pub(crate) struct FullSink {
    fmt: FxFormat,
    pub events: Vec<TraceEvent>,
}

impl FullSink {
    pub(crate) fn new(fmt: FxFormat) -> Self {
        FullSink {
            fmt,
            events: Vec::new(),
        }
    }
}

impl TraceSink for FullSink {
    fn record(&mut self, node: NodeId, raw: i64, flagged: bool) {
        let value = FxNum::from_raw(raw, self.fmt).expect("policy output fits the format");
        self.events.push(TraceEvent {
            node,
            value,
            flagged,
        });
    }
}

// ---------------------------------------------------------------------------
// Shared topology walker
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Topology {
    Df1,
    Df2,
    Tdf2,
}

/// Scalar arithmetic the walker is generic over: monitored fixed-point raws
/// or plain f64.
pub(crate) trait Arith {
    type V: Copy + PartialEq + std::fmt::Debug;
    const ZERO: Self::V;
    fn mul<S: TraceSink>(&self, a: Self::V, b: Self::V, node: NodeId, sink: &mut S) -> Self::V;
    fn add<S: TraceSink>(&self, a: Self::V, b: Self::V, node: NodeId, sink: &mut S) -> Self::V;
    fn sub<S: TraceSink>(&self, a: Self::V, b: Self::V, node: NodeId, sink: &mut S) -> Self::V;
}

pub(crate) struct FxArith {
    pub fmt: FxFormat,
}

impl Arith for FxArith {
    type V = i64;
    const ZERO: i64 = 0;

    #[inline]
    fn mul<S: TraceSink>(&self, a: i64, b: i64, node: NodeId, sink: &mut S) -> i64 {
        let (r, f) = mul_raw(a, b, self.fmt);
        sink.record(node, r, f);
        r
    }

    #[inline]
    fn add<S: TraceSink>(&self, a: i64, b: i64, node: NodeId, sink: &mut S) -> i64 {
        let (r, f) = add_raw(a, b, self.fmt);
        sink.record(node, r, f);
        r
    }

    #[inline]
    fn sub<S: TraceSink>(&self, a: i64, b: i64, node: NodeId, sink: &mut S) -> i64 {
        let (r, f) = sub_raw(a, b, self.fmt);
        sink.record(node, r, f);
        r
    }
}

pub(crate) struct RefArith;

impl Arith for RefArith {
    type V = f64;
    const ZERO: f64 = 0.0;

    #[inline]
    fn mul<S: TraceSink>(&self, a: f64, b: f64, _: NodeId, _: &mut S) -> f64 {
        a * b
    }

    #[inline]
    fn add<S: TraceSink>(&self, a: f64, b: f64, _: NodeId, _: &mut S) -> f64 {
        a + b
    }

    #[inline]
    fn sub<S: TraceSink>(&self, a: f64, b: f64, _: NodeId, _: &mut S) -> f64 {
        a - b
    }
}

/// Advances a delay line by one sample. Shift lines move entries down;
/// delta lines are integrator cascades `v_i += Δ * (previous block output)`,
/// where block outputs are the pre-update states.
fn advance_line<A: Arith, S: TraceSink>(
    ar: &A,
    line: &mut [A::V],
    injected: A::V,
    delta: Option<A::V>,
    tag: LineTag,
    sink: &mut S,
) {
    match delta {
        None => {
            for i in (1..line.len()).rev() {
                line[i] = line[i - 1];
            }
            if let Some(first) = line.first_mut() {
                *first = injected;
            }
        }
        Some(d) => {
            let mut prev = injected;
            for (i, v) in line.iter_mut().enumerate() {
                let old = *v;
                let idx = i as u16;
                let inc = ar.mul(d, prev, NodeId::MulD { line: tag, idx }, sink);
                *v = ar.add(old, inc, NodeId::AccD { line: tag, idx }, sink);
                prev = old;
            }
        }
    }
}

/// One step of the chosen topology. `b` has `n+1` entries, `a` is the monic
/// denominator (`a[0]` = one), `state` is laid out as documented on the
/// module. Returns the output.
pub(crate) fn step_topology<A: Arith, S: TraceSink>(
    ar: &A,
    topo: Topology,
    b: &[A::V],
    a: &[A::V],
    delta: Option<A::V>,
    state: &mut [A::V],
    u: A::V,
    sink: &mut S,
) -> A::V {
    let n = a.len() - 1;
    match topo {
        Topology::Df1 => {
            let (uline, yline) = state.split_at_mut(n);
            let mut pb: SmallVec<[A::V; 8]> = SmallVec::new();
            pb.push(ar.mul(b[0], u, NodeId::MulB(0), sink));
            for i in 1..=n {
                pb.push(ar.mul(b[i], uline[i - 1], NodeId::MulB(i as u16), sink));
            }
            let mut pa: SmallVec<[A::V; 8]> = SmallVec::new();
            for j in 1..=n {
                pa.push(ar.mul(a[j], yline[j - 1], NodeId::MulA(j as u16), sink));
            }
            let mut acc = pb[0];
            for i in 1..=n {
                acc = ar.add(acc, pb[i], NodeId::AccB(i as u16), sink);
            }
            for j in 1..=n {
                acc = ar.sub(acc, pa[j - 1], NodeId::AccA(j as u16), sink);
            }
            advance_line(ar, uline, u, delta, LineTag::U, sink);
            advance_line(ar, yline, acc, delta, LineTag::Y, sink);
            acc
        }
        Topology::Df2 => {
            let mut pa: SmallVec<[A::V; 8]> = SmallVec::new();
            for j in 1..=n {
                pa.push(ar.mul(a[j], state[j - 1], NodeId::MulA(j as u16), sink));
            }
            let mut w0 = u;
            for j in 1..=n {
                w0 = ar.sub(w0, pa[j - 1], NodeId::AccW(j as u16), sink);
            }
            let mut acc = ar.mul(b[0], w0, NodeId::MulB(0), sink);
            let mut pb: SmallVec<[A::V; 8]> = SmallVec::new();
            for i in 1..=n {
                pb.push(ar.mul(b[i], state[i - 1], NodeId::MulB(i as u16), sink));
            }
            for i in 1..=n {
                acc = ar.add(acc, pb[i - 1], NodeId::AccB(i as u16), sink);
            }
            advance_line(ar, state, w0, delta, LineTag::W, sink);
            acc
        }
        Topology::Tdf2 => {
            let pb0 = ar.mul(b[0], u, NodeId::MulB(0), sink);
            let y = if n == 0 {
                pb0
            } else {
                ar.add(pb0, state[0], NodeId::AccY, sink)
            };
            for i in 1..=n {
                let pb = ar.mul(b[i], u, NodeId::MulB(i as u16), sink);
                let pa = ar.mul(a[i], y, NodeId::MulA(i as u16), sink);
                let next_old = if i < n { state[i] } else { A::ZERO };
                let mut t = ar.add(pb, next_old, NodeId::AccB(i as u16), sink);
                t = ar.sub(t, pa, NodeId::AccA(i as u16), sink);
                match delta {
                    None => state[i - 1] = t,
                    Some(d) => {
                        let idx = (i - 1) as u16;
                        let inc = ar.mul(d, t, NodeId::MulD { line: LineTag::S, idx }, sink);
                        state[i - 1] =
                            ar.add(state[i - 1], inc, NodeId::AccD { line: LineTag::S, idx }, sink);
                    }
                }
            }
            y
        }
    }
}

// ---------------------------------------------------------------------------
// Realizers
// ---------------------------------------------------------------------------

/// Prepared coefficient vectors for one transfer function and realization
/// choice, before quantization: `b` padded to `n+1`, monic `a`, and the
/// delta parameter when applicable (delta coefficients are jointly
/// normalized by the denominator's leading delta-domain coefficient).
fn prepare_real_coeffs(
    tf: &TransferFunction,
    spec: RealizationSpec,
) -> Result<(Vec<f64>, Vec<f64>, Option<f64>), RealizationError> {
    RealizationSpec::new(spec.form, spec.delta)?;
    let b = tf.padded_num();
    let a = tf.den().coeffs().to_vec();
    if !spec.form.is_delta() {
        return Ok((b, a, None));
    }
    let delta = spec.delta.expect("validated above");
    let b_poly = Polynomial::new(b).expect("padded numerator is non-empty");
    let a_poly = Polynomial::new(a).expect("denominator is non-empty");
    let bd = to_delta_coeffs(&b_poly, delta)?;
    let ad = to_delta_coeffs(&a_poly, delta)?;
    let lead = ad.coeffs()[0];
    Ok((
        bd.scale(1.0 / lead).coeffs().to_vec(),
        ad.scale(1.0 / lead).coeffs().to_vec(),
        Some(delta),
    ))
}

/// A quantized, steppable fixed-point realization.
#[derive(Debug, Clone)]
pub(crate) struct FxRealizer {
    topo: Topology,
    pub fmt: FxFormat,
    b: Vec<i64>,
    a: Vec<i64>,
    delta: Option<i64>,
    /// True when quantizing any coefficient (or Δ) left the representable
    /// range — a design-time condition, not a runtime violation.
    pub coeff_flagged: bool,
}

impl FxRealizer {
    pub(crate) fn new(
        tf: &TransferFunction,
        fmt: FxFormat,
        spec: RealizationSpec,
    ) -> Result<Self, RealizationError> {
        let (b, a, delta) = prepare_real_coeffs(tf, spec)?;
        let mut flagged = false;
        let mut q = |x: f64| {
            let (raw, f) = quantize_raw(x, fmt);
            flagged |= f;
            raw
        };
        let bq: Vec<i64> = b.iter().map(|&x| q(x)).collect();
        let aq: Vec<i64> = a.iter().map(|&x| q(x)).collect();
        let dq = match delta {
            None => None,
            Some(d) => {
                let raw = q(d);
                if raw == 0 {
                    return Err(RealizationError::DeltaQuantizesToZero { delta: d, fmt });
                }
                Some(raw)
            }
        };
        let one = 1i64 << fmt.frac_bits();
        if aq[0] != one {
            return Err(RealizationError::LeadingCoefficientUnrepresentable(fmt));
        }
        Ok(FxRealizer {
            topo: spec.form.topology(),
            fmt,
            b: bq,
            a: aq,
            delta: dq,
            coeff_flagged: flagged,
        })
    }

    pub(crate) fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub(crate) fn state_len(&self) -> usize {
        match self.topo {
            Topology::Df1 => 2 * self.order(),
            _ => self.order(),
        }
    }

    /// One step over raw state; records node events into `sink`.
    pub(crate) fn step_raw<S: TraceSink>(&self, state: &mut [i64], u: i64, sink: &mut S) -> i64 {
        debug_assert_eq!(state.len(), self.state_len());
        let ar = FxArith { fmt: self.fmt };
        step_topology(&ar, self.topo, &self.b, &self.a, self.delta, state, u, sink)
    }
}

/// The same topology in exact f64 arithmetic with unquantized coefficients.
#[derive(Debug, Clone)]
pub(crate) struct RefRealizer {
    topo: Topology,
    b: Vec<f64>,
    a: Vec<f64>,
    delta: Option<f64>,
}

impl RefRealizer {
    pub(crate) fn new(
        tf: &TransferFunction,
        spec: RealizationSpec,
    ) -> Result<Self, RealizationError> {
        let (b, a, delta) = prepare_real_coeffs(tf, spec)?;
        Ok(RefRealizer {
            topo: spec.form.topology(),
            b,
            a,
            delta,
        })
    }

    pub(crate) fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub(crate) fn state_len(&self) -> usize {
        match self.topo {
            Topology::Df1 => 2 * self.order(),
            _ => self.order(),
        }
    }

    pub(crate) fn step(&self, state: &mut [f64], u: f64) -> f64 {
        debug_assert_eq!(state.len(), self.state_len());
        step_topology(
            &RefArith,
            self.topo,
            &self.b,
            &self.a,
            self.delta,
            state,
            u,
            &mut NoopSink,
        )
    }
}

// ---------------------------------------------------------------------------
// Public state type and simulation entry points
// ---------------------------------------------------------------------------

/// Delay-line contents of a fixed-point realization, in the documented
/// layout for its form.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationState {
    pub values: Vec<FxNum>,
}

impl RealizationState {
    pub fn zeros(len: usize, fmt: FxFormat) -> Self {
        RealizationState {
            values: vec![FxNum::zero(fmt); len],
        }
    }
}

fn check_inputs(fmt: FxFormat, inputs: &[FxNum]) -> Result<(), RealizationError> {
    for x in inputs {
        if x.format() != fmt {
            return Err(RealizationError::Fx(FxError::FormatMismatch(
                fmt.int_bits(),
                fmt.frac_bits(),
                x.format().int_bits(),
                x.format().frac_bits(),
            )));
        }
    }
    Ok(())
}

/// Single fixed-point step from an explicit state. Returns the output and
/// the full node trace; `state` is advanced in place.
pub fn step(
    tf: &TransferFunction,
    fmt: FxFormat,
    spec: RealizationSpec,
    state: &mut RealizationState,
    input: FxNum,
) -> Result<StepTrace, RealizationError> {
    let realizer = FxRealizer::new(tf, fmt, spec)?;
    check_inputs(fmt, &state.values)?;
    check_inputs(fmt, std::slice::from_ref(&input))?;
    if state.values.len() != realizer.state_len() {
        return Err(RealizationError::StateLength {
            expected: realizer.state_len(),
            got: state.values.len(),
        });
    }
    let mut raw_state: Vec<i64> = state.values.iter().map(|v| v.raw()).collect();
    let mut sink = FullSink::new(fmt);
    let y = realizer.step_raw(&mut raw_state, input.raw(), &mut sink);
    for (slot, raw) in state.values.iter_mut().zip(&raw_state) {
        *slot = FxNum::from_raw(*raw, fmt).expect("state stays representable");
    }
    Ok(StepTrace {
        input,
        output: FxNum::from_raw(y, fmt).expect("output fits"),
        events: sink.events,
    })
}

/// Bit-accurate fixed-point simulation: quantizes the coefficients, runs
/// the realization over `inputs` from `init` (zeros when absent), and
/// returns one trace per step.
pub fn simulate(
    tf: &TransferFunction,
    fmt: FxFormat,
    spec: RealizationSpec,
    inputs: &[FxNum],
    init: Option<&RealizationState>,
) -> Result<Vec<StepTrace>, RealizationError> {
    let realizer = FxRealizer::new(tf, fmt, spec)?;
    check_inputs(fmt, inputs)?;
    let mut raw_state = match init {
        None => vec![0i64; realizer.state_len()],
        Some(s) => {
            check_inputs(fmt, &s.values)?;
            if s.values.len() != realizer.state_len() {
                return Err(RealizationError::StateLength {
                    expected: realizer.state_len(),
                    got: s.values.len(),
                });
            }
            s.values.iter().map(|v| v.raw()).collect()
        }
    };
    let mut out = Vec::with_capacity(inputs.len());
    for &u in inputs {
        let mut sink = FullSink::new(fmt);
        let y = realizer.step_raw(&mut raw_state, u.raw(), &mut sink);
        out.push(StepTrace {
            input: u,
            output: FxNum::from_raw(y, fmt).expect("output fits"),
            events: sink.events,
        });
    }
    Ok(out)
}

/// Reference run: identical topology and node order, exact f64 arithmetic,
/// unquantized coefficients.
pub fn simulate_reference(
    tf: &TransferFunction,
    spec: RealizationSpec,
    inputs: &[f64],
    init: Option<&[f64]>,
) -> Result<Vec<f64>, RealizationError> {
    let realizer = RefRealizer::new(tf, spec)?;
    let mut state = match init {
        None => vec![0.0; realizer.state_len()],
        Some(s) => {
            if s.len() != realizer.state_len() {
                return Err(RealizationError::StateLength {
                    expected: realizer.state_len(),
                    got: s.len(),
                });
            }
            s.to_vec()
        }
    };
    Ok(inputs.iter().map(|&u| realizer.step(&mut state, u)).collect())
}
