//! Two's-complement fixed-point arithmetic with explicit word-length,
//! overflow-policy and rounding-policy control.
//!
//! A format `<I,F>` stores values as `raw * 2^-F` where `raw` is a signed
//! `W = I + F` bit integer (the sign bit counts toward `I`). Every operation
//! reports, alongside its result, whether the exact result was representable:
//! that flag is what the bounded verifier monitors node by node.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sysmodel::Polynomial;

/// Errors from format construction and mixed-format arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FxError {
    #[error("invalid fixed-point format: {0}")]
    InvalidFormat(String),
    #[error("operand formats differ: <{0},{1}> vs <{2},{3}>")]
    FormatMismatch(u32, u32, u32, u32),
    #[error("raw value {0} does not fit in <{1},{2}>")]
    RawOutOfRange(i64, u32, u32),
}

/// What happens when an exact result falls outside the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverflowMode {
    /// Keep the low `W` bits (modular two's-complement arithmetic).
    Wrap,
    /// Clamp to the nearest representable bound.
    Saturate,
}

/// How fractional bits beyond `F` are discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rounding {
    /// Truncate toward negative infinity (drop LSBs).
    Floor,
    /// Round to nearest, ties to the even raw value.
    NearestEven,
}

#[derive(Serialize, Deserialize)]
struct FxFormatRepr {
    int_bits: u32,
    frac_bits: u32,
    overflow_mode: OverflowMode,
    rounding: Rounding,
    dyn_min: f64,
    dyn_max: f64,
}

/// A fixed-point format: word split, policies, and the dynamic range the
/// verifier draws stimulus from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "FxFormatRepr")]
pub struct FxFormat {
    int_bits: u32,
    frac_bits: u32,
    overflow_mode: OverflowMode,
    rounding: Rounding,
    dyn_min: f64,
    dyn_max: f64,
}

impl From<FxFormat> for FxFormatRepr {
    fn from(f: FxFormat) -> Self {
        FxFormatRepr {
            int_bits: f.int_bits,
            frac_bits: f.frac_bits,
            overflow_mode: f.overflow_mode,
            rounding: f.rounding,
            dyn_min: f.dyn_min,
            dyn_max: f.dyn_max,
        }
    }
}

impl TryFrom<FxFormatRepr> for FxFormat {
    type Error = FxError;

    fn try_from(r: FxFormatRepr) -> Result<Self, FxError> {
        FxFormat::new(r.int_bits, r.frac_bits, r.overflow_mode, r.rounding)?
            .with_dynamic_range(r.dyn_min, r.dyn_max)
    }
}

impl<'de> Deserialize<'de> for FxFormat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = FxFormatRepr::deserialize(d)?;
        FxFormat::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl FxFormat {
    /// Builds a `<int_bits, frac_bits>` format. The dynamic range defaults to
    /// the full representable range.
    pub fn new(
        int_bits: u32,
        frac_bits: u32,
        overflow_mode: OverflowMode,
        rounding: Rounding,
    ) -> Result<Self, FxError> {
        if int_bits == 0 {
            return Err(FxError::InvalidFormat(
                "int_bits must be at least 1 (sign bit)".into(),
            ));
        }
        let width = int_bits as u64 + frac_bits as u64;
        if width > 64 {
            return Err(FxError::InvalidFormat(format!(
                "total width {width} exceeds 64 bits"
            )));
        }
        let mut fmt = FxFormat {
            int_bits,
            frac_bits,
            overflow_mode,
            rounding,
            dyn_min: 0.0,
            dyn_max: 0.0,
        };
        fmt.dyn_min = fmt.min_value();
        fmt.dyn_max = fmt.max_value();
        Ok(fmt)
    }

    /// Restricts the stimulus range used by the bounded verifier.
    pub fn with_dynamic_range(mut self, dyn_min: f64, dyn_max: f64) -> Result<Self, FxError> {
        if !dyn_min.is_finite() || !dyn_max.is_finite() || dyn_min >= dyn_max {
            return Err(FxError::InvalidFormat(format!(
                "dynamic range [{dyn_min}, {dyn_max}] is not a proper interval"
            )));
        }
        if dyn_min < self.min_value() || dyn_max > self.max_value() {
            return Err(FxError::InvalidFormat(format!(
                "dynamic range [{dyn_min}, {dyn_max}] leaves the representable range [{}, {}]",
                self.min_value(),
                self.max_value()
            )));
        }
        self.dyn_min = dyn_min;
        self.dyn_max = dyn_max;
        Ok(self)
    }

    pub fn int_bits(&self) -> u32 {
        self.int_bits
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn overflow_mode(&self) -> OverflowMode {
        self.overflow_mode
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }

    pub fn dyn_min(&self) -> f64 {
        self.dyn_min
    }

    pub fn dyn_max(&self) -> f64 {
        self.dyn_max
    }

    /// Total word width `I + F`.
    pub fn width(&self) -> u32 {
        self.int_bits + self.frac_bits
    }

    /// Value of one least-significant bit, `2^-F`.
    pub fn resolution(&self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    fn raw_bounds_i128(&self) -> (i128, i128) {
        let half = 1i128 << (self.width() - 1);
        (-half, half - 1)
    }

    /// Smallest representable raw value, `-2^(W-1)`.
    pub fn raw_min(&self) -> i64 {
        self.raw_bounds_i128().0 as i64
    }

    /// Largest representable raw value, `2^(W-1) - 1`.
    pub fn raw_max(&self) -> i64 {
        self.raw_bounds_i128().1 as i64
    }

    /// Smallest representable value.
    pub fn min_value(&self) -> f64 {
        self.raw_min() as f64 * self.resolution()
    }

    /// Largest representable value.
    pub fn max_value(&self) -> f64 {
        self.raw_max() as f64 * self.resolution()
    }

    /// Raw bounds of the dynamic range: the grid the verifier enumerates.
    /// The bounds are the innermost raws, so every returned raw is both
    /// representable and inside `[dyn_min, dyn_max]`.
    pub fn dyn_raw_bounds(&self) -> (i64, i64) {
        let scale = (self.frac_bits as f64).exp2();
        let lo = (self.dyn_min * scale).ceil() as i128;
        let hi = (self.dyn_max * scale).floor() as i128;
        let (rmin, rmax) = self.raw_bounds_i128();
        (lo.clamp(rmin, rmax) as i64, hi.clamp(rmin, rmax) as i64)
    }
}

impl std::fmt::Display for FxFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{},{}>", self.int_bits, self.frac_bits)
    }
}

/// A fixed-point number: a raw integer bound to its format.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FxNum {
    raw: i64,
    fmt: FxFormat,
}

impl FxNum {
    /// Wraps an existing raw value; errors if it does not fit the format.
    pub fn from_raw(raw: i64, fmt: FxFormat) -> Result<Self, FxError> {
        let (lo, hi) = fmt.raw_bounds_i128();
        if (raw as i128) < lo || (raw as i128) > hi {
            return Err(FxError::RawOutOfRange(raw, fmt.int_bits, fmt.frac_bits));
        }
        Ok(FxNum { raw, fmt })
    }

    /// The zero of a format.
    pub fn zero(fmt: FxFormat) -> Self {
        FxNum { raw: 0, fmt }
    }

    pub fn raw(&self) -> i64 {
        self.raw
    }

    pub fn format(&self) -> FxFormat {
        self.fmt
    }

    /// Real value `raw * 2^-F`. Exact whenever the total width is at most 53
    /// bits (f64 mantissa); all practical controller formats qualify.
    pub fn value(&self) -> f64 {
        self.raw as f64 * self.fmt.resolution()
    }
}

fn ensure_same_format(a: FxFormat, b: FxFormat) -> Result<(), FxError> {
    if a != b {
        return Err(FxError::FormatMismatch(
            a.int_bits,
            a.frac_bits,
            b.int_bits,
            b.frac_bits,
        ));
    }
    Ok(())
}

/// Applies the overflow policy to an exact (infinitely wide) raw result.
/// Returns the stored raw and whether the exact value was unrepresentable.
pub(crate) fn apply_policy(exact: i128, fmt: FxFormat) -> (i64, bool) {
    let (lo, hi) = fmt.raw_bounds_i128();
    if exact >= lo && exact <= hi {
        return (exact as i64, false);
    }
    let stored = match fmt.overflow_mode {
        OverflowMode::Saturate => {
            if exact < lo {
                lo as i64
            } else {
                hi as i64
            }
        }
        OverflowMode::Wrap => wrap_to_width(exact, fmt.width()),
    };
    (stored, true)
}

/// Two's-complement reinterpretation of the low `w` bits.
fn wrap_to_width(v: i128, w: u32) -> i64 {
    let modulus = 1u128 << w;
    let masked = (v as u128) & (modulus - 1);
    if masked >= modulus >> 1 {
        (masked as i128 - modulus as i128) as i64
    } else {
        masked as i64
    }
}

/// Drops `F` fractional bits from a double-width product under the format's
/// rounding policy. The result still has to pass the overflow policy.
fn rescale(p: i128, fmt: FxFormat) -> i128 {
    let f = fmt.frac_bits;
    if f == 0 {
        return p;
    }
    match fmt.rounding {
        Rounding::Floor => p >> f,
        Rounding::NearestEven => {
            let q = p >> f;
            let r = p - (q << f);
            let half = 1i128 << (f - 1);
            if r > half || (r == half && (q & 1) != 0) {
                q + 1
            } else {
                q
            }
        }
    }
}

pub(crate) fn quantize_raw(x: f64, fmt: FxFormat) -> (i64, bool) {
    let scaled = x * (fmt.frac_bits as f64).exp2();
    if scaled.is_nan() {
        return (0, true);
    }
    let ideal = match fmt.rounding {
        Rounding::Floor => scaled.floor(),
        Rounding::NearestEven => scaled.round_ties_even(),
    };
    // The float-to-int cast saturates, which only matters for inputs far
    // beyond any representable magnitude; the flag is set either way.
    apply_policy(ideal as i128, fmt)
}

pub(crate) fn add_raw(a: i64, b: i64, fmt: FxFormat) -> (i64, bool) {
    apply_policy(a as i128 + b as i128, fmt)
}

pub(crate) fn sub_raw(a: i64, b: i64, fmt: FxFormat) -> (i64, bool) {
    apply_policy(a as i128 - b as i128, fmt)
}

pub(crate) fn mul_raw(a: i64, b: i64, fmt: FxFormat) -> (i64, bool) {
    apply_policy(rescale(a as i128 * b as i128, fmt), fmt)
}

/// Quantizes a real value onto the format grid. The flag reports whether the
/// rounded value fell outside the representable range (before the policy).
pub fn quantize(x: f64, fmt: FxFormat) -> (FxNum, bool) {
    let (raw, flag) = quantize_raw(x, fmt);
    (FxNum { raw, fmt }, flag)
}

/// Fixed-point addition. The flag reports an unrepresentable exact sum.
pub fn fx_add(a: FxNum, b: FxNum) -> Result<(FxNum, bool), FxError> {
    ensure_same_format(a.fmt, b.fmt)?;
    let (raw, flag) = add_raw(a.raw, b.raw, a.fmt);
    Ok((FxNum { raw, fmt: a.fmt }, flag))
}

/// Fixed-point subtraction `a - b`.
pub fn fx_sub(a: FxNum, b: FxNum) -> Result<(FxNum, bool), FxError> {
    ensure_same_format(a.fmt, b.fmt)?;
    let (raw, flag) = sub_raw(a.raw, b.raw, a.fmt);
    Ok((FxNum { raw, fmt: a.fmt }, flag))
}

/// Fixed-point multiplication: exact double-width product, rescaled to `F`
/// fractional bits under the rounding policy, then the overflow policy.
pub fn fx_mul(a: FxNum, b: FxNum) -> Result<(FxNum, bool), FxError> {
    ensure_same_format(a.fmt, b.fmt)?;
    let (raw, flag) = mul_raw(a.raw, b.raw, a.fmt);
    Ok((FxNum { raw, fmt: a.fmt }, flag))
}

/// Element-wise coefficient quantization of a polynomial (the finite
/// word-length effect applied to a design). Degree positions are preserved:
/// a coefficient that quantizes to zero stays in place rather than shifting
/// its neighbours. The flag is the OR of the per-coefficient flags.
pub fn fwl_poly(p: &Polynomial, fmt: FxFormat) -> (Polynomial, bool) {
    let mut flagged = false;
    let coeffs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|&c| {
            let (q, f) = quantize(c, fmt);
            flagged |= f;
            q.value()
        })
        .collect();
    let q = Polynomial::new(coeffs).expect("quantized coefficients stay finite");
    (q, flagged)
}
