//! Scalar types for exponents and log-domain coefficients.
//!
//! Everything in this crate is generic over [`Scalar`]. The exact instance is
//! [`Rational`] (arbitrary precision, always reduced); `f64` and `f32` are
//! provided for quick approximate previews and are never used by the CLI.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Numeric domain for exponent sequences and log-coefficients.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Whether comparisons in this type are exact.
    const EXACT: bool;

    /// `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_u64(n: u64) -> Self;

    /// `self * other` without consuming either side.
    ///
    /// The rational override keeps products of a huge integer with a small
    /// coefficient linear in the size of the integer.
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    /// Total order. For exact types this is the real-number order.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// `ln |x|`, finite even when `x` is far outside the `f64` range.
    /// Returns `-inf` for zero.
    fn ln_abs(&self) -> f64;

    /// Best-effort conversion; may be infinite.
    fn to_f64_lossy(&self) -> f64;

    /// Canonical text form: `"p/q"` for rationals.
    fn to_exact_string(&self) -> String;

    /// Parses `"p/q"` or an integer string (floats also accept decimals).
    fn parse_scalar(s: &str) -> Option<Self>;
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return n.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

pub(crate) fn ln_bigint(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_u64(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let g1 = gcd_unbalanced(self.numer(), other.denom());
        let g2 = gcd_unbalanced(other.numer(), self.denom());
        let numer = (self.numer() / &g1) * (other.numer() / &g2);
        let denom = (self.denom() / &g2) * (other.denom() / &g1);
        Rational::new_raw(numer, denom)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        rational_cmp(self, other)
    }

    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }

    fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if let (Some(n), Some(d)) = (self.numer().to_f64(), self.denom().to_f64()) {
            if n.is_finite() && d.is_finite() && d != 0.0 {
                return n / d;
            }
        }
        let sign = if self.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
        sign * self.ln_abs().exp()
    }

    fn to_exact_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

/// Parses `"p/q"` or `"p"`; rejects zero denominators.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            const EXACT: bool = false;

            fn from_ratio(num: i64, den: i64) -> Self {
                assert!(den != 0, "zero denominator");
                (num as f64 / den as f64) as $f
            }

            fn from_u64(n: u64) -> Self {
                n as $f
            }

            fn total_cmp(&self, other: &Self) -> Ordering {
                <$f>::total_cmp(self, other)
            }

            fn ln_abs(&self) -> f64 {
                (self.abs() as f64).ln()
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn to_exact_string(&self) -> String {
                format!("{:?}", self)
            }

            fn parse_scalar(s: &str) -> Option<Self> {
                if let Some(r) = parse_rational(s) {
                    return Some(r.to_f64_lossy() as $f);
                }
                s.trim().parse().ok()
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// gcd that stays cheap when one side fits in a machine word; num-bigint's
/// binary gcd is quadratic against a tiny operand.
fn gcd_unbalanced(a: &BigInt, b: &BigInt) -> BigInt {
    let (big, small) = if a.bits() >= b.bits() { (a, b) } else { (b, a) };
    match small.magnitude().to_u64() {
        Some(0) => big.abs(),
        Some(m) => {
            let r = (big.magnitude() % m).to_u64().expect("remainder below a u64");
            BigInt::from(r.gcd(&m))
        }
        None => big.gcd(small),
    }
}

/// Exact order of two rationals.
pub fn rational_cmp(a: &Rational, b: &Rational) -> Ordering {
    // Same-sign cross multiplication; denominators are positive.
    let lhs = a.numer() * b.denom();
    let rhs = b.numer() * a.denom();
    lhs.cmp(&rhs)
}

/// `c_pq = -1/p + 1/q`, the (negative) ratio exponent off the band.
pub fn c_pq<T: Scalar>(p: u64, q: u64) -> T {
    T::from_ratio(-1, p as i64) + T::from_ratio(1, q as i64)
}

/// `A_pq = 1 + pq/(q-p)`, the threshold multiplier when locating blue terms.
pub fn a_pq<T: Scalar>(p: u64, q: u64) -> T {
    T::one() + T::from_ratio((p * q) as i64, (q - p) as i64)
}

/// Smallest integer not below `x`.
pub fn ceil_rational(x: &Rational) -> BigInt {
    let floor = x.numer().div_floor(x.denom());
    if &(&floor * x.denom()) == x.numer() {
        floor
    } else {
        floor + BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn mul_ref_matches_reduced_product() {
        let big = Rational::from_integer(BigInt::from(3u8).pow(400) * BigInt::from(10u8));
        for (a, b) in [(r(-1, 6), big.clone()), (r(4, 9), r(-27, 8)), (r(0, 1), r(5, 7)), (big.clone(), big.recip())] {
            assert_eq!(a.mul_ref(&b), a.clone() * b.clone());
            assert_eq!(b.mul_ref(&a), a * b);
        }
    }

    #[test]
    fn cmp_sign_and_magnitude() {
        assert_eq!(rational_cmp(&r(-1, 2), &r(-3, 2)), Ordering::Greater);
        assert_eq!(rational_cmp(&r(2, 4), &r(1, 2)), Ordering::Equal);
        assert_eq!(rational_cmp(&r(1, 3), &(r(1, 6) + r(1, 6))), Ordering::Equal);
    }

    #[test]
    fn reduced_with_positive_denominator() {
        let x = r(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_exact_string(), "-3/2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/2"), Some(r(3, 2)));
        assert_eq!(parse_rational(" 7 "), Some(r(7, 1)));
        assert_eq!(parse_rational("4/-6"), Some(r(-2, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(f64::parse_scalar("2.5"), Some(2.5));
    }

    #[test]
    fn band_constants() {
        assert_eq!(c_pq::<Rational>(1, 2), r(-1, 2));
        assert_eq!(c_pq::<Rational>(2, 5), r(-3, 10));
        assert_eq!(a_pq::<Rational>(1, 2), r(3, 1));
        assert_eq!(a_pq::<Rational>(3, 7), r(25, 4));
    }

    #[test]
    fn ceil_values() {
        assert_eq!(ceil_rational(&r(7, 2)), BigInt::from(4));
        assert_eq!(ceil_rational(&r(6, 1)), BigInt::from(6));
        assert_eq!(ceil_rational(&r(-7, 2)), BigInt::from(-3));
    }

    #[test]
    fn ln_of_huge_values() {
        let big = Rational::from_integer(BigInt::from(10u32).pow(2000));
        let ln = big.ln_abs();
        assert!((ln - 2000.0 * 10f64.ln()).abs() < 1e-6);
        assert!(big.to_f64_lossy().is_infinite());
    }
}
