//! Discrete-time system models: polynomials in `z`, transfer functions,
//! state-space realizations, and closed loops, plus the JSON document
//! formats the CLI reads and the counterexample files embed.
//!
//! Transfer functions are normalized on construction so the denominator is
//! monic; polynomial coefficient vectors are kept positionally (a zero
//! coefficient stays in its slot) so word-length quantization acts
//! element-wise without shifting degrees.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixedpoint::{quantize, FxFormat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SysModelError {
    #[error("polynomial has no coefficients")]
    EmptyPolynomial,
    #[error("polynomial coefficient {0} is not finite")]
    NonFiniteCoefficient(f64),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("improper transfer function: numerator degree {num} exceeds denominator degree {den}")]
    ImproperTransferFunction { num: usize, den: usize },
    #[error("sample time {0} must be positive and finite")]
    InvalidSampleTime(f64),
    #[error("controller ts {0} differs from plant ts {1}")]
    SampleTimeMismatch(f64, f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate loop: {0}")]
    DegenerateLoop(String),
    #[error("malformed system document: {0}")]
    Malformed(String),
}

/// A real polynomial, coefficients in descending powers.
///
/// The vector is stored exactly as given (leading zeros included) so that
/// coefficient-wise transformations preserve positions; analysis methods
/// work on the trimmed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, SysModelError> {
        if coeffs.is_empty() {
            return Err(SysModelError::EmptyPolynomial);
        }
        if let Some(&bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(SysModelError::NonFiniteCoefficient(bad));
        }
        Ok(Polynomial { coeffs })
    }

    /// The constant polynomial `c`.
    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c]).expect("finite constant")
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Positional degree: `len - 1`, leading zeros included.
    pub fn len_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after trimming leading zeros (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.trimmed().coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Copy with leading zeros removed (at least one coefficient remains).
    pub fn trimmed(&self) -> Polynomial {
        let first = self.coeffs.iter().position(|&c| c != 0.0);
        match first {
            Some(i) => Polynomial {
                coeffs: self.coeffs[i..].to_vec(),
            },
            None => Polynomial { coeffs: vec![0.0] },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    pub fn derivative(&self) -> Polynomial {
        let t = self.trimmed();
        let n = t.coeffs.len();
        if n == 1 {
            return Polynomial { coeffs: vec![0.0] };
        }
        let coeffs = t
            .coeffs
            .iter()
            .take(n - 1)
            .enumerate()
            .map(|(i, &c)| c * (n - 1 - i) as f64)
            .collect();
        Polynomial { coeffs }
    }

    /// Polynomial product (convolution of coefficient vectors).
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial { coeffs: out }
    }

    /// Polynomial sum; vectors are aligned at the constant term.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().rev().enumerate() {
            out[n - 1 - i] += a;
        }
        for (i, &b) in other.coeffs.iter().rev().enumerate() {
            out[n - 1 - i] += b;
        }
        Polynomial { coeffs: out }
    }
}

/// A proper discrete transfer function `num(z)/den(z)` with sample time `ts`.
/// The denominator is normalized to be monic on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Polynomial,
    den: Polynomial,
    ts: f64,
}

impl TransferFunction {
    pub fn new(num: Polynomial, den: Polynomial, ts: f64) -> Result<Self, SysModelError> {
        if !ts.is_finite() || ts <= 0.0 {
            return Err(SysModelError::InvalidSampleTime(ts));
        }
        let den = den.trimmed();
        if den.is_zero() {
            return Err(SysModelError::ZeroDenominator);
        }
        let num = num.trimmed();
        if !num.is_zero() && num.degree() > den.degree() {
            return Err(SysModelError::ImproperTransferFunction {
                num: num.degree(),
                den: den.degree(),
            });
        }
        let lead = den.coeffs[0];
        Ok(TransferFunction {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
            ts,
        })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn ts(&self) -> f64 {
        self.ts
    }

    /// Denominator degree: the order of any realization of the function.
    pub fn order(&self) -> usize {
        self.den.degree()
    }

    /// True when the numerator's effective degree is below the
    /// denominator's (no direct input-to-output path).
    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    /// Numerator coefficients padded with leading zeros to `order + 1`
    /// entries, aligning `b[i]` with `z^(order-i)`.
    pub fn padded_num(&self) -> Vec<f64> {
        let n = self.order();
        let mut b = vec![0.0; n + 1 - self.num.coeffs.len()];
        b.extend_from_slice(self.num.coeffs());
        b
    }
}

/// A discrete state-space model `x(t+1) = A x + B u`, `y = C x + D u`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
    ts: f64,
}

impl StateSpace {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        d: DMatrix<f64>,
        ts: f64,
    ) -> Result<Self, SysModelError> {
        if !ts.is_finite() || ts <= 0.0 {
            return Err(SysModelError::InvalidSampleTime(ts));
        }
        let n = a.nrows();
        if a.ncols() != n {
            return Err(SysModelError::DimensionMismatch(format!(
                "A is {}x{}, expected square",
                a.nrows(),
                a.ncols()
            )));
        }
        let m = b.ncols();
        let p = c.nrows();
        if b.nrows() != n || c.ncols() != n || d.nrows() != p || d.ncols() != m || m == 0 || p == 0
        {
            return Err(SysModelError::DimensionMismatch(format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        if [&a, &b, &c, &d].iter().any(|m| m.iter().any(|v| !v.is_finite())) {
            return Err(SysModelError::NonFiniteCoefficient(f64::NAN));
        }
        Ok(StateSpace { a, b, c, d, ts })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn ts(&self) -> f64 {
        self.ts
    }

    /// State dimension.
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Input count.
    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    /// Output count.
    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }
}

/// How a controller and plant are interconnected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CMode {
    /// Controller in the forward path, unit negative feedback.
    Series,
    /// Controller in the feedback path.
    Feedback,
}

/// A transfer-function feedback loop: digital controller plus plant.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopTf {
    pub controller: TransferFunction,
    pub plant: TransferFunction,
    pub cmode: CMode,
}

impl ClosedLoopTf {
    pub fn new(
        controller: TransferFunction,
        plant: TransferFunction,
        cmode: CMode,
    ) -> Result<Self, SysModelError> {
        if controller.ts() != plant.ts() {
            return Err(SysModelError::SampleTimeMismatch(
                controller.ts(),
                plant.ts(),
            ));
        }
        Ok(ClosedLoopTf {
            controller,
            plant,
            cmode,
        })
    }
}

/// A state-feedback loop: plant plus gain matrix `K` (control `u = -K x`).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopSs {
    pub plant: StateSpace,
    pub k: DMatrix<f64>,
}

impl ClosedLoopSs {
    pub fn new(plant: StateSpace, k: DMatrix<f64>) -> Result<Self, SysModelError> {
        if k.nrows() != plant.inputs() || k.ncols() != plant.order() {
            return Err(SysModelError::DimensionMismatch(format!(
                "K is {}x{}, expected {}x{}",
                k.nrows(),
                k.ncols(),
                plant.inputs(),
                plant.order()
            )));
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(SysModelError::NonFiniteCoefficient(f64::NAN));
        }
        Ok(ClosedLoopSs { plant, k })
    }
}

/// Closes a transfer-function loop with the controller's coefficients
/// quantized to `fmt` (the plant stays at full precision).
///
/// Both modes share the characteristic polynomial
/// `nc_q*np + dc_q*dp`; series returns `nc_q*np / char`, feedback returns
/// `np*dc_q / char`.
pub fn close_loop_tf(cl: &ClosedLoopTf, fmt: FxFormat) -> Result<TransferFunction, SysModelError> {
    let (nc, _) = crate::fixedpoint::fwl_poly(cl.controller.num(), fmt);
    let (dc, _) = crate::fixedpoint::fwl_poly(cl.controller.den(), fmt);
    let np = cl.plant.num();
    let dp = cl.plant.den();

    let char_poly = nc.mul(np).add(&dc.mul(dp));
    if char_poly.is_zero() {
        return Err(SysModelError::DegenerateLoop(
            "characteristic polynomial vanishes".into(),
        ));
    }
    let num = match cl.cmode {
        CMode::Series => nc.mul(np),
        CMode::Feedback => np.mul(&dc),
    };
    if !num.is_zero() && num.trimmed().degree() > char_poly.trimmed().degree() {
        return Err(SysModelError::DegenerateLoop(
            "loop cancels the leading characteristic coefficient".into(),
        ));
    }
    TransferFunction::new(num, char_poly, cl.plant.ts())
}

/// Closes a state-feedback loop with the gain matrix quantized to `fmt`:
/// `A_cl = A - B*K_q`; `B`, `C`, `D` are unchanged.
pub fn close_loop_ss(cl: &ClosedLoopSs, fmt: FxFormat) -> Result<StateSpace, SysModelError> {
    let kq = cl.k.map(|v| quantize(v, fmt).0.value());
    let a_cl = cl.plant.a() - cl.plant.b() * kq;
    StateSpace::new(
        a_cl,
        cl.plant.b().clone(),
        cl.plant.c().clone(),
        cl.plant.d().clone(),
        cl.plant.ts(),
    )
}

/// Controllable-canonical state-space realization of a proper transfer
/// function: companion `A` with `[-a_n ... -a_1]` in the bottom row,
/// `B = e_n`, `C = [b_n - a_n*b_0, ..., b_1 - a_1*b_0]`, `D = [b_0]`.
pub fn tf_to_ss(tf: &TransferFunction) -> Result<StateSpace, SysModelError> {
    let n = tf.order();
    let b = tf.padded_num();
    let a = tf.den().coeffs();
    let b0 = b[0];

    let mut am = DMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        am[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        am[(n.saturating_sub(1), j)] = -a[n - j];
    }
    let mut bm = DMatrix::zeros(n, 1);
    if n > 0 {
        bm[(n - 1, 0)] = 1.0;
    }
    let mut cm = DMatrix::zeros(1, n);
    for j in 0..n {
        cm[(0, j)] = b[n - j] - a[n - j] * b0;
    }
    let dm = DMatrix::from_element(1, 1, b0);
    StateSpace::new(am, bm, cm, dm, tf.ts())
}

// ---------------------------------------------------------------------------
// JSON document model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfDoc {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
    pub ts: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsDoc {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
    pub ts: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClTfDoc {
    pub controller: TfDoc,
    pub plant: TfDoc,
    pub cmode: CMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClSsDoc {
    pub plant: SsDoc,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
}

/// A parsed system document, one of the four accepted `type` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SystemDoc {
    #[serde(rename = "tf")]
    Tf(TfDoc),
    #[serde(rename = "ss")]
    Ss(SsDoc),
    #[serde(rename = "cl-tf")]
    ClTf(ClTfDoc),
    #[serde(rename = "cl-ss")]
    ClSs(ClSsDoc),
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, SysModelError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(SysModelError::Malformed(format!("ragged rows in {what}")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl TfDoc {
    pub fn to_model(&self) -> Result<TransferFunction, SysModelError> {
        TransferFunction::new(
            Polynomial::new(self.num.clone())?,
            Polynomial::new(self.den.clone())?,
            self.ts,
        )
    }

    pub fn from_model(tf: &TransferFunction) -> Self {
        TfDoc {
            num: tf.num().coeffs().to_vec(),
            den: tf.den().coeffs().to_vec(),
            ts: tf.ts(),
        }
    }
}

impl SsDoc {
    pub fn to_model(&self) -> Result<StateSpace, SysModelError> {
        StateSpace::new(
            matrix_from_rows(&self.a, "A")?,
            matrix_from_rows(&self.b, "B")?,
            matrix_from_rows(&self.c, "C")?,
            matrix_from_rows(&self.d, "D")?,
            self.ts,
        )
    }

    pub fn from_model(ss: &StateSpace) -> Self {
        SsDoc {
            a: matrix_to_rows(ss.a()),
            b: matrix_to_rows(ss.b()),
            c: matrix_to_rows(ss.c()),
            d: matrix_to_rows(ss.d()),
            ts: ss.ts(),
        }
    }
}

impl SystemDoc {
    /// Parses a system document from JSON text.
    pub fn parse(text: &str) -> Result<Self, SysModelError> {
        serde_json::from_str(text).map_err(|e| SysModelError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system documents always serialize")
    }

    /// Document kind tag as written in the `type` field.
    pub fn kind(&self) -> &'static str {
        match self {
            SystemDoc::Tf(_) => "tf",
            SystemDoc::Ss(_) => "ss",
            SystemDoc::ClTf(_) => "cl-tf",
            SystemDoc::ClSs(_) => "cl-ss",
        }
    }

    pub fn to_tf(&self) -> Result<TransferFunction, SysModelError> {
        match self {
            SystemDoc::Tf(doc) => doc.to_model(),
            _ => Err(SysModelError::Malformed(format!(
                "expected a tf document, found {}",
                self.kind()
            ))),
        }
    }

    pub fn to_ss(&self) -> Result<StateSpace, SysModelError> {
        match self {
            SystemDoc::Ss(doc) => doc.to_model(),
            _ => Err(SysModelError::Malformed(format!(
                "expected an ss document, found {}",
                self.kind()
            ))),
        }
    }

    pub fn to_cl_tf(&self) -> Result<ClosedLoopTf, SysModelError> {
        match self {
            SystemDoc::ClTf(doc) => ClosedLoopTf::new(
                doc.controller.to_model()?,
                doc.plant.to_model()?,
                doc.cmode,
            ),
            _ => Err(SysModelError::Malformed(format!(
                "expected a cl-tf document, found {}",
                self.kind()
            ))),
        }
    }

    pub fn to_cl_ss(&self) -> Result<ClosedLoopSs, SysModelError> {
        match self {
            SystemDoc::ClSs(doc) => {
                ClosedLoopSs::new(doc.plant.to_model()?, matrix_from_rows(&doc.k, "K")?)
            }
            _ => Err(SysModelError::Malformed(format!(
                "expected a cl-ss document, found {}",
                self.kind()
            ))),
        }
    }
}
