//! Exponent sequences `α = (α_n)`, their generators and finite-prefix
//! classification.
//!
//! Recursive kinds (factorial, superproduct) and file-backed sequences keep a
//! memo that grows on demand through `&mut self`; closed-form kinds (linear,
//! polynomial) are evaluated directly. The intended concurrent pattern is to
//! [`ExponentSequence::ensure`] a prefix once and then share `&self`.

use std::borrow::Cow;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// `α_n = n`
    Linear,
    /// `α_n = n!`
    Factorial,
    /// `α_n = ∏_{i=0}^{n-1} (1 + i(i+1))`
    Superproduct,
    /// `α_n = n^d`
    Polynomial(u32),
    /// One value per line, read from disk.
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeclaredClass {
    Stable,
    Unstable,
    Unspecified,
}

impl fmt::Display for DeclaredClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeclaredClass::Stable => "stable",
            DeclaredClass::Unstable => "unstable",
            DeclaredClass::Unspecified => "unspecified",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ExponentSequence<T> {
    name: String,
    kind: SequenceKind,
    memo: Vec<T>,
    declared: DeclaredClass,
}

impl<T: Scalar> ExponentSequence<T> {
    pub fn linear() -> Self {
        Self::with_kind("linear", SequenceKind::Linear, DeclaredClass::Stable)
    }

    pub fn factorial() -> Self {
        Self::with_kind("factorial", SequenceKind::Factorial, DeclaredClass::Unstable)
    }

    pub fn superproduct() -> Self {
        Self::with_kind("superproduct", SequenceKind::Superproduct, DeclaredClass::Unstable)
    }

    pub fn polynomial(degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParameter("polynomial degree must be at least 1".into()));
        }
        Ok(Self::with_kind(
            &format!("poly:{degree}"),
            SequenceKind::Polynomial(degree),
            DeclaredClass::Stable,
        ))
    }

    fn with_kind(name: &str, kind: SequenceKind, declared: DeclaredClass) -> Self {
        ExponentSequence { name: name.to_string(), kind, memo: Vec::new(), declared }
    }

    /// Builds a sequence from explicit values `α_1, α_2, …`.
    pub fn from_values(name: &str, values: Vec<T>, declared: DeclaredClass) -> Result<Self> {
        validate_increasing(&values)?;
        Ok(ExponentSequence {
            name: name.to_string(),
            kind: SequenceKind::File(PathBuf::from(name)),
            memo: values,
            declared,
        })
    }

    /// Loads one value per line (`p/q` or an integer); blank lines and lines
    /// starting with `#` are skipped. Strict increase is enforced here.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let v = T::parse_scalar(trimmed).ok_or_else(|| Error::ParseValue {
                path: path.to_path_buf(),
                line: i + 1,
                text: trimmed.to_string(),
            })?;
            values.push(v);
        }
        validate_increasing(&values)?;
        Ok(ExponentSequence {
            name: format!("file:{}", path.display()),
            kind: SequenceKind::File(path.to_path_buf()),
            memo: values,
            declared: DeclaredClass::Unspecified,
        })
    }

    /// `linear | factorial | superproduct | poly:<d> | file:<path>`
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.trim() {
            "linear" => Ok(Self::linear()),
            "factorial" => Ok(Self::factorial()),
            "superproduct" => Ok(Self::superproduct()),
            other => {
                if let Some(d) = other.strip_prefix("poly:") {
                    let degree = d
                        .parse::<u32>()
                        .map_err(|_| Error::UnknownAlphaSpec(spec.to_string()))?;
                    Self::polynomial(degree)
                } else if let Some(path) = other.strip_prefix("file:") {
                    Self::from_file(Path::new(path))
                } else {
                    Err(Error::UnknownAlphaSpec(spec.to_string()))
                }
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn declared(&self) -> DeclaredClass {
        self.declared
    }

    pub fn set_declared(&mut self, declared: DeclaredClass) {
        self.declared = declared;
    }

    fn is_closed_form(&self) -> bool {
        matches!(self.kind, SequenceKind::Linear | SequenceKind::Polynomial(_))
    }

    /// Largest index readable through [`get`](Self::get) without extension.
    pub fn available(&self) -> usize {
        if self.is_closed_form() {
            usize::MAX
        } else {
            self.memo.len()
        }
    }

    /// Makes `α_1..=α_n` readable through `&self`.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n == 0 || self.is_closed_form() || n <= self.memo.len() {
            return Ok(());
        }
        match self.kind {
            SequenceKind::Factorial => {
                while self.memo.len() < n {
                    let next = self.memo.len() as u64 + 1;
                    let prev = self.memo.last().cloned().unwrap_or_else(T::one);
                    self.memo.push(prev.mul_ref(&T::from_u64(next)));
                }
            }
            SequenceKind::Superproduct => {
                while self.memo.len() < n {
                    // α_{m+1} = α_m · (1 + m(m+1)), α_1 = 1
                    let m = self.memo.len() as u64;
                    let value = match self.memo.last() {
                        None => T::one(),
                        Some(prev) => prev.mul_ref(&T::from_u64(1 + m * (m + 1))),
                    };
                    self.memo.push(value);
                }
            }
            SequenceKind::File(_) => {
                return Err(Error::PrefixExhausted { needed: n, available: self.memo.len() });
            }
            SequenceKind::Linear | SequenceKind::Polynomial(_) => unreachable!(),
        }
        Ok(())
    }

    /// Exact `α_n`, extending the memo as needed.
    pub fn value(&mut self, n: usize) -> Result<T> {
        self.ensure(n)?;
        self.get(n).map(Cow::into_owned)
    }

    /// Exact `α_n` from an already-extended prefix.
    pub fn get(&self, n: usize) -> Result<Cow<'_, T>> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        match self.kind {
            SequenceKind::Linear => Ok(Cow::Owned(T::from_u64(n as u64))),
            SequenceKind::Polynomial(d) => {
                let base = T::from_u64(n as u64);
                let mut acc = T::one();
                for _ in 0..d {
                    acc = acc * base.clone();
                }
                Ok(Cow::Owned(acc))
            }
            SequenceKind::File(_) if n > self.memo.len() => {
                Err(Error::PrefixExhausted { needed: n, available: self.memo.len() })
            }
            _ => self
                .memo
                .get(n - 1)
                .map(Cow::Borrowed)
                .ok_or(Error::NotMemoized { index: n }),
        }
    }
}

fn validate_increasing<T: Scalar>(values: &[T]) -> Result<()> {
    if let Some(first) = values.first() {
        if !first.is_positive() {
            return Err(Error::NotStrictlyIncreasing { index: 1 });
        }
    }
    for (i, w) in values.windows(2).enumerate() {
        if w[1].total_cmp(&w[0]) != std::cmp::Ordering::Greater {
            return Err(Error::NotStrictlyIncreasing { index: i + 2 });
        }
    }
    Ok(())
}

/// Finite-prefix view of the stability definitions.
#[derive(Clone, Debug)]
pub struct ClassificationReport<T> {
    pub horizon: usize,
    /// `max α_{2n}/α_n` over `n ≤ N/2`, with its argument.
    pub max_doubling_ratio: (usize, T),
    /// `max α_{n+1}/α_n` over `n < N`.
    pub max_successor_ratio: (usize, T),
    /// `min α_{n+1}/α_n` over the last tenth of the prefix.
    pub min_successor_ratio_last_decade: (usize, T),
    /// Maximum doubling ratio inside each tenth of `[1, N/2]`.
    pub doubling_window_maxima: Vec<T>,
    /// Least index from which `α_{n+1}/α_n` is strictly increasing up to `N`,
    /// if that index lies in the first half of the prefix.
    pub increasing_from: Option<usize>,
    pub declared: DeclaredClass,
    pub stable_consistent: bool,
    pub unstable_consistent: bool,
    pub consistent_with_declared: bool,
}

impl<T: Scalar> ExponentSequence<T> {
    /// Checks the necessary finite-prefix conditions behind the declared class.
    ///
    /// Stable-consistent: the doubling ratio's maximum over the last tenth of
    /// `[1, N/2]` is at most twice its maximum over the first tenth.
    /// Unstable-consistent: the successor ratio is strictly increasing from
    /// some index in the first half of the prefix up to `N`.
    pub fn classify_prefix(&mut self, horizon: usize) -> Result<ClassificationReport<T>> {
        if horizon < 4 {
            return Err(Error::InvalidParameter("classification horizon must be at least 4".into()));
        }
        self.ensure(horizon)?;
        let alpha = |n: usize| self.get(n).map(Cow::into_owned);

        let half = horizon / 2;
        let mut doubling = Vec::with_capacity(half);
        for n in 1..=half {
            doubling.push(alpha(2 * n)? / alpha(n)?);
        }
        let mut successor = Vec::with_capacity(horizon - 1);
        for n in 1..horizon {
            successor.push(alpha(n + 1)? / alpha(n)?);
        }

        let argmax = |xs: &[T], offset: usize| {
            let mut best = 0;
            for (i, x) in xs.iter().enumerate() {
                if x.total_cmp(&xs[best]) == std::cmp::Ordering::Greater {
                    best = i;
                }
            }
            (best + offset, xs[best].clone())
        };
        let max_doubling_ratio = argmax(&doubling, 1);
        let max_successor_ratio = argmax(&successor, 1);

        let decade_start = (horizon - horizon / 10).max(1).min(horizon - 1);
        let mut min_last = (decade_start, successor[decade_start - 1].clone());
        for n in decade_start..horizon {
            if successor[n - 1].total_cmp(&min_last.1) == std::cmp::Ordering::Less {
                min_last = (n, successor[n - 1].clone());
            }
        }

        let window = (half / 10).max(1);
        let doubling_window_maxima: Vec<T> = doubling
            .chunks(window)
            .map(|chunk| argmax(chunk, 0).1)
            .collect();
        let first = doubling_window_maxima.first().cloned().unwrap_or_else(T::one);
        let last = doubling_window_maxima.last().cloned().unwrap_or_else(T::one);
        let two = T::from_u64(2);
        let stable_consistent = last.total_cmp(&(first * two)) != std::cmp::Ordering::Greater;

        // successor[i] is the ratio at n = i + 1
        let mut start = successor.len();
        while start > 1
            && successor[start - 2].total_cmp(&successor[start - 1]) == std::cmp::Ordering::Less
        {
            start -= 1;
        }
        let increasing_from = if start <= successor.len() / 2 { Some(start) } else { None };
        let unstable_consistent = increasing_from.is_some();

        let consistent_with_declared = match self.declared {
            DeclaredClass::Stable => stable_consistent,
            DeclaredClass::Unstable => unstable_consistent,
            DeclaredClass::Unspecified => true,
        };

        Ok(ClassificationReport {
            horizon,
            max_doubling_ratio,
            max_successor_ratio,
            min_successor_ratio_last_decade: min_last,
            doubling_window_maxima,
            increasing_from,
            declared: self.declared,
            stable_consistent,
            unstable_consistent,
            consistent_with_declared,
        })
    }

    /// Samples `ln(n)/α_n` at `n = N/10, 2N/10, …, N` (floating point, display
    /// only). Consistent when the samples are non-increasing and the last one
    /// is below the first.
    pub fn finitely_nuclear_probe(&mut self, horizon: usize) -> Result<NuclearityProbe> {
        if horizon < 10 {
            return Err(Error::InvalidParameter("nuclearity probe horizon must be at least 10".into()));
        }
        self.ensure(horizon)?;
        let step = horizon / 10;
        let mut samples = Vec::with_capacity(10);
        for i in 1..=10 {
            let n = i * step;
            let alpha = self.get(n)?;
            // ln(n)/α_n = exp(ln ln n − ln α_n)
            let value = if n == 1 {
                0.0
            } else {
                ((n as f64).ln().ln() - alpha.ln_abs()).exp()
            };
            samples.push((n, value));
        }
        let non_increasing = samples.windows(2).all(|w| w[1].1 <= w[0].1);
        let consistent = non_increasing && samples.last().unwrap().1 < samples[0].1;
        Ok(NuclearityProbe { samples, consistent })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NuclearityProbe {
    /// `(n, ln(n)/α_n)`; floats are display-only.
    pub samples: Vec<(usize, f64)>,
    pub consistent: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Signed;

    fn int(n: u64) -> Rational {
        Rational::from_u64(n)
    }

    #[test]
    fn generator_values() {
        let mut sp = ExponentSequence::<Rational>::superproduct();
        assert_eq!(sp.value(1).unwrap(), int(1));
        assert_eq!(sp.value(4).unwrap(), int(273));
        let mut f = ExponentSequence::<Rational>::factorial();
        assert_eq!(f.value(5).unwrap(), int(120));
        let mut l = ExponentSequence::<Rational>::linear();
        assert_eq!(l.value(7).unwrap(), int(7));
        let mut p = ExponentSequence::<Rational>::polynomial(3).unwrap();
        assert_eq!(p.value(4).unwrap(), int(64));
    }

    #[test]
    fn superproduct_matches_product_definition() {
        let mut sp = ExponentSequence::<Rational>::superproduct();
        for n in 1..=60u64 {
            let direct: num_bigint::BigInt = (0..n).map(|i| num_bigint::BigInt::from(1 + i * (i + 1))).product();
            assert_eq!(sp.value(n as usize).unwrap(), Rational::from_integer(direct));
        }
    }

    #[test]
    fn builtins_strictly_increasing() {
        for spec in ["linear", "factorial", "superproduct", "poly:2"] {
            let mut s = ExponentSequence::<Rational>::from_spec(spec).unwrap();
            let horizon = if spec == "superproduct" || spec == "factorial" { 600 } else { 10_000 };
            s.ensure(horizon + 1).unwrap();
            let mut prev = s.get(1).unwrap().into_owned();
            assert!(prev.is_positive());
            for n in 2..=horizon + 1 {
                let cur = s.get(n).unwrap().into_owned();
                assert!(cur > prev, "{spec} not increasing at {n}");
                prev = cur;
            }
        }
    }

    #[test]
    fn zero_index_rejected() {
        let s = ExponentSequence::<Rational>::linear();
        assert!(matches!(s.get(0), Err(Error::ZeroIndex)));
    }

    #[test]
    fn unmemoized_read_is_an_error() {
        let s = ExponentSequence::<Rational>::factorial();
        assert!(matches!(s.get(3), Err(Error::NotMemoized { index: 3 })));
    }

    #[test]
    fn file_prefix_exhausted() {
        let mut s = ExponentSequence::from_values("t", vec![int(1), int(2), int(5)], DeclaredClass::Unspecified)
            .unwrap();
        assert_eq!(s.value(3).unwrap(), int(5));
        assert!(matches!(s.value(4), Err(Error::PrefixExhausted { needed: 4, available: 3 })));
    }

    #[test]
    fn non_increasing_values_rejected() {
        let r = ExponentSequence::from_values("t", vec![int(1), int(3), int(3)], DeclaredClass::Unspecified);
        assert!(matches!(r, Err(Error::NotStrictlyIncreasing { index: 3 })));
        let r = ExponentSequence::<Rational>::from_values("t", vec![int(0), int(3)], DeclaredClass::Unspecified);
        assert!(matches!(r, Err(Error::NotStrictlyIncreasing { index: 1 })));
    }

    #[test]
    fn unknown_spec() {
        assert!(matches!(
            ExponentSequence::<Rational>::from_spec("cubic"),
            Err(Error::UnknownAlphaSpec(_))
        ));
        assert!(ExponentSequence::<Rational>::from_spec("poly:0").is_err());
    }

    #[test]
    fn linear_classification() {
        let mut s = ExponentSequence::<Rational>::linear();
        let r = s.classify_prefix(1000).unwrap();
        assert_eq!(r.max_doubling_ratio.1, int(2));
        assert!(r.doubling_window_maxima.iter().all(|x| *x == int(2)));
        assert!(r.stable_consistent);
        assert!(!r.unstable_consistent);
        assert!(r.consistent_with_declared);
    }

    #[test]
    fn factorial_and_superproduct_classification() {
        let mut f = ExponentSequence::<Rational>::factorial();
        let r = f.classify_prefix(50).unwrap();
        assert_eq!(r.increasing_from, Some(1));
        assert_eq!(r.max_successor_ratio, (49, int(50)));
        assert!(r.consistent_with_declared);

        let mut sp = ExponentSequence::<Rational>::superproduct();
        let r = sp.classify_prefix(30).unwrap();
        assert_eq!(r.max_successor_ratio, (29, int(1 + 29 * 30)));
        assert_eq!(r.increasing_from, Some(1));
        assert!(r.consistent_with_declared);
        assert!(!r.stable_consistent);
    }

    #[test]
    fn nuclearity_probe() {
        let mut l = ExponentSequence::<Rational>::linear();
        let p = l.finitely_nuclear_probe(10_000).unwrap();
        assert!(p.consistent);
        assert!(p.samples.last().unwrap().1 < 1e-3);
        let mut f = ExponentSequence::<Rational>::factorial();
        assert!(f.finitely_nuclear_probe(100).unwrap().consistent);
    }
}
