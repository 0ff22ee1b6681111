//! Symbolic values `e^{coeff·α_index}`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::sequences::ExponentSequence;

/// The real number `e^{coeff·α_index}` over some exponent sequence.
///
/// The value is never materialized; comparisons reduce to comparing
/// `coeff·α_index` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogTermOf<T> {
    pub coeff: T,
    pub index: usize,
}

impl<T: Scalar> LogTermOf<T> {
    pub fn new(coeff: T, index: usize) -> Self {
        LogTermOf { coeff, index }
    }

    /// `coeff·α_index`, reading an already-extended prefix.
    pub fn exponent(&self, seq: &ExponentSequence<T>) -> Result<T> {
        Ok(self.coeff.mul_ref(seq.get(self.index)?.as_ref()))
    }

    /// `coeff·α_index`, extending the sequence if needed.
    pub fn exponent_extending(&self, seq: &mut ExponentSequence<T>) -> Result<T> {
        seq.ensure(self.index)?;
        self.exponent(seq)
    }
}

impl<T: Scalar> fmt::Display for LogTermOf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({}·α_{})", self.coeff.to_exact_string(), self.index)
    }
}

/// Exact order of the denoted reals.
pub fn logterm_cmp<T: Scalar>(
    x: &LogTermOf<T>,
    y: &LogTermOf<T>,
    seq: &mut ExponentSequence<T>,
) -> Result<Ordering> {
    let ex = x.exponent_extending(seq)?;
    let ey = y.exponent_extending(seq)?;
    Ok(ex.total_cmp(&ey))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Clamp {
    /// The true value is positive but below the smallest representable float.
    Underflow,
    /// The true value exceeds the largest finite float.
    Overflow,
}

/// Display-only float image of a [`LogTermOf`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatImage {
    pub value: f64,
    pub clamp: Option<Clamp>,
}

/// Best-effort `f64` conversion of `e^{exponent}`; never used in decisions.
pub fn exp_to_float<T: Scalar>(exponent: &T) -> FloatImage {
    let e = exponent.to_f64_lossy();
    let value = e.exp();
    let clamp = if value == 0.0 {
        Some(Clamp::Underflow)
    } else if value.is_infinite() {
        Some(Clamp::Overflow)
    } else {
        None
    };
    let value = match clamp {
        Some(Clamp::Overflow) => f64::MAX,
        _ => value,
    };
    FloatImage { value, clamp }
}

pub fn logterm_to_float<T: Scalar>(
    x: &LogTermOf<T>,
    seq: &mut ExponentSequence<T>,
) -> Result<FloatImage> {
    Ok(exp_to_float(&x.exponent_extending(seq)?))
}
