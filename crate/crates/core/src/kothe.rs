//! The matrix `a_{k,n}` in log form and its exact criterion checks.
//!
//! For `n ∈ I_s`, `log a_{k,n} = e(k,s)·α_n` with `e(k,s) = -1/k` when
//! `k ≤ s` and `1 - 1/k` otherwise. Every check below compares rational
//! multiples of a single `α_n`, so all verdicts are exact.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::grid::{column_element, column_of};
use crate::logterm::LogTermOf;
use crate::report::{CheckReport, Verdict, Witness};
use crate::scalar::{c_pq, Scalar};
use crate::sequences::ExponentSequence;

/// Witnesses kept per report; the total count is recorded separately.
pub const WITNESS_CAP: usize = 16;

/// `e(k, s)`: exponent coefficient of `a_{k,n}` for `n ∈ I_s`.
pub fn entry_coeff<T: Scalar>(k: u64, s: u64) -> T {
    let base = T::from_ratio(-1, k as i64);
    if k <= s {
        base
    } else {
        base + T::one()
    }
}

/// Coefficient of `log(a_{p,n}/a_{q,n})` in units of `α_n`.
pub fn ratio_coeff<T: Scalar>(p: u64, q: u64, n: u64) -> T {
    let s = column_of(n);
    let c = c_pq::<T>(p, q);
    if p <= s && s < q {
        c - T::one()
    } else {
        c
    }
}

/// Admissible DN exponent bound `(1/p - 1/(p+1)) / (2 - 1/(p+1))`.
pub fn dn_bound<T: Scalar>(p: u64) -> T {
    let gap = T::from_ratio(1, p as i64) - T::from_ratio(1, p as i64 + 1);
    gap / (T::from_u64(2) - T::from_ratio(1, p as i64 + 1))
}

/// Least admissible Ω exponent `(1/(p+1) - 1/k + 1) / (1/p - 1/(p+1))`.
pub fn omega_bound<T: Scalar>(p: u64, k: u64) -> T {
    let num = T::from_ratio(1, p as i64 + 1) - T::from_ratio(1, k as i64) + T::one();
    num / (T::from_ratio(1, p as i64) - T::from_ratio(1, p as i64 + 1))
}

/// `(j+2)/(j(j+1))`
pub fn d2_coeff<T: Scalar>(j: u64) -> T {
    T::from_ratio(j as i64 + 2, (j * (j + 1)) as i64)
}

#[derive(Clone, Debug)]
pub struct D2Witness<T> {
    pub j: u64,
    /// The witness position, an element of `I_j`.
    pub n: u64,
    /// Its row within `I_j`.
    pub y: u64,
    pub coeff: T,
    /// `coeff·α_n`
    pub exponent: T,
}

/// The family `𝒦_α` for one exponent sequence.
#[derive(Clone, Debug)]
pub struct KotheFamily<T> {
    pub seq: ExponentSequence<T>,
}

fn alpha<T: Scalar>(seq: &mut ExponentSequence<T>, n: u64) -> Result<T> {
    seq.value(n as usize)
}

impl<T: Scalar> KotheFamily<T> {
    pub fn new(seq: ExponentSequence<T>) -> Self {
        KotheFamily { seq }
    }

    pub fn log_entry(&self, k: u64, n: u64) -> Result<LogTermOf<T>> {
        if k == 0 || n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(LogTermOf::new(entry_coeff(k, column_of(n)), n as usize))
    }

    pub fn log_ratio(&self, p: u64, q: u64, n: u64) -> Result<LogTermOf<T>> {
        crate::grid::validate_pair(p, q)?;
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(LogTermOf::new(ratio_coeff(p, q, n), n as usize))
    }

    /// Per-term bound `a_{k,n}/a_{k+1,n} ≤ e^{(-1/k + 1/(k+1))α_n}` for
    /// `n ≤ N`, plus a display-only partial sum of the series.
    pub fn check_nuclearity(&mut self, k: u64, horizon: u64) -> Result<CheckReport> {
        if k == 0 {
            return Err(Error::ZeroIndex);
        }
        let mut report = CheckReport::new("nuclearity").param("k", k).param("l", k + 1).param("N", horizon);
        let bound = c_pq::<T>(k, k + 1);
        let mut failures = 0u64;
        let mut partial_sum = 0f64;
        let mut dominates_index = true;
        for n in 1..=horizon {
            let s = column_of(n);
            let a = alpha(&mut self.seq, n)?;
            let coeff = entry_coeff::<T>(k, s) - entry_coeff::<T>(k + 1, s);
            let lhs = coeff.mul_ref(&a);
            let rhs = bound.mul_ref(&a);
            if lhs.total_cmp(&rhs) == Ordering::Greater {
                failures += 1;
                if report.witnesses.len() < WITNESS_CAP {
                    report.witnesses.push(Witness::new(
                        n,
                        "log(a_k/a_{k+1}) > (-1/k+1/(k+1))·α_n",
                        lhs.to_exact_string(),
                        rhs.to_exact_string(),
                    ));
                }
            }
            partial_sum += lhs.to_f64_lossy().exp();
            if a.total_cmp(&T::from_u64(n)) == Ordering::Less {
                dominates_index = false;
            }
        }
        report.verdict = if failures == 0 { Verdict::Pass } else { Verdict::Fail };
        report.detail("failures", failures);
        report.detail("partial_sum_display_only", format!("{partial_sum:.12e}"));
        if dominates_index {
            // Σ_{n>N} e^{c n} when α_n ≥ n continues past the prefix
            let c = bound.to_f64_lossy();
            let tail = (c * (horizon as f64 + 1.0)).exp() / (1.0 - c.exp());
            report.detail("geometric_tail_bound_display_only", format!("{tail:.12e}"));
            report.detail("tail_certificate", "conditional on α_n ≥ n beyond the prefix");
        } else {
            report.detail("tail_certificate", "none: α_n < n somewhere in the prefix");
        }
        Ok(report)
    }

    /// DN with `p₀ = 1`, `q = p + 1`, `C = 1`:
    /// `e(p,s) ≤ λ·e(1,s) + (1-λ)·e(p+1,s)` at every `n ≤ N`.
    pub fn check_dn(&mut self, p: u64, lambda: &T, horizon: u64) -> Result<CheckReport> {
        if p == 0 {
            return Err(Error::ZeroIndex);
        }
        if !(lambda.is_positive() && lambda.total_cmp(&T::one()) == Ordering::Less) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie in (0,1), got {}",
                lambda.to_exact_string()
            )));
        }
        let mut report = CheckReport::new("dn")
            .param("p", p)
            .param("q", p + 1)
            .param("p0", 1)
            .param("lambda", lambda.to_exact_string())
            .param("N", horizon);
        report.detail("bound", dn_bound::<T>(p).to_exact_string());

        let margin = |s: u64| -> T {
            let rhs = lambda.clone() * entry_coeff::<T>(1, s)
                + (T::one() - lambda.clone()) * entry_coeff::<T>(p + 1, s);
            rhs - entry_coeff::<T>(p, s)
        };
        let mut regions: Vec<(&str, Option<u64>)> = vec![("s>=p+1", Some(p + 1)), ("s=p", Some(p))];
        regions.push(("s<p", if p >= 2 { Some(p - 1) } else { None }));
        let region_of = |s: u64| if s > p { 0 } else if s == p { 1 } else { 2 };
        let symbolic = symbolic_regions(&mut report, &regions, margin);

        let per_n = self.per_n_scan(&mut report, horizon, &margin, |s| symbolic[region_of(s)])?;
        report.verdict = if per_n { Verdict::Pass } else { Verdict::Fail };
        Ok(report)
    }

    /// Ω with `q = p + 1`, `C = 1`:
    /// `j·e(p,s) + e(k,s) ≤ (j+1)·e(p+1,s)` at every `n ≤ N`.
    pub fn check_omega(&mut self, p: u64, k: u64, j: &T, horizon: u64) -> Result<CheckReport> {
        if p == 0 {
            return Err(Error::ZeroIndex);
        }
        if k <= p {
            return Err(Error::InvalidParameter(format!("need k > p, got p={p}, k={k}")));
        }
        if j.is_negative() {
            return Err(Error::InvalidParameter("j must be non-negative".into()));
        }
        let mut report = CheckReport::new("omega")
            .param("p", p)
            .param("q", p + 1)
            .param("k", k)
            .param("j", j.to_exact_string())
            .param("N", horizon);
        report.detail("bound", omega_bound::<T>(p, k).to_exact_string());

        let margin = |s: u64| -> T {
            let lhs = j.clone() * entry_coeff::<T>(p, s) + entry_coeff::<T>(k, s);
            (j.clone() + T::one()) * entry_coeff::<T>(p + 1, s) - lhs
        };
        let regions: Vec<(&str, Option<u64>)> = vec![
            ("s<p", if p >= 2 { Some(p - 1) } else { None }),
            ("s=p", Some(p)),
            ("p+1<=s<k", if p + 1 < k { Some(p + 1) } else { None }),
            ("s>=k", Some(k)),
        ];
        let region_of = |s: u64| {
            if s < p {
                0
            } else if s == p {
                1
            } else if s < k {
                2
            } else {
                3
            }
        };
        let symbolic = symbolic_regions(&mut report, &regions, margin);

        let per_n = self.per_n_scan(&mut report, horizon, &margin, |s| symbolic[region_of(s)])?;
        report.verdict = if per_n { Verdict::Pass } else { Verdict::Fail };
        Ok(report)
    }

    /// Evaluates `margin(s)·α_n ≥ 0` for `n ≤ N`, records witnesses, and
    /// cross-checks each per-`n` outcome against its region's symbolic
    /// verdict. Returns whether every `n` passed.
    fn per_n_scan(
        &mut self,
        report: &mut CheckReport,
        horizon: u64,
        margin: impl Fn(u64) -> T,
        symbolic: impl Fn(u64) -> Option<bool>,
    ) -> Result<bool> {
        let mut failures = 0u64;
        let mut disagreements = 0u64;
        for n in 1..=horizon {
            let s = column_of(n);
            let m = margin(s);
            let value = m.mul_ref(&alpha(&mut self.seq, n)?);
            let ok = !value.is_negative();
            if Some(ok) != symbolic(s) {
                disagreements += 1;
            }
            if !ok {
                failures += 1;
                if report.witnesses.len() < WITNESS_CAP {
                    report.witnesses.push(Witness::new(
                        n,
                        format!("s={s}: rhs - lhs < 0"),
                        value.to_exact_string(),
                        "0/1",
                    ));
                }
            }
        }
        report.detail("failures", failures);
        report.detail("symbolic_per_n_disagreements", disagreements);
        if disagreements > 0 {
            return Err(Error::SelfCheck(format!(
                "{}: {disagreements} per-n outcomes disagree with the symbolic region verdict",
                report.criterion
            )));
        }
        Ok(failures == 0)
    }

    /// Least `n ∈ I_j` with `((j+2)/(j(j+1)))·α_n > B`, scanning at most
    /// `search_cap` rows of the column.
    pub fn check_d2_failure(&mut self, j: u64, bound: &T, search_cap: u64) -> Result<D2Witness<T>> {
        if j == 0 {
            return Err(Error::ZeroIndex);
        }
        let coeff = d2_coeff::<T>(j);
        // a_{1,n}·a_{j+1,n}/a_{j,n}² for n ∈ I_j, read off the matrix
        let from_matrix =
            entry_coeff::<T>(1, j) + entry_coeff::<T>(j + 1, j) - T::from_u64(2) * entry_coeff::<T>(j, j);
        if from_matrix != coeff {
            return Err(Error::SelfCheck(format!(
                "d2 coefficient {} differs from the matrix value {}",
                coeff.to_exact_string(),
                from_matrix.to_exact_string()
            )));
        }
        for y in 0..search_cap {
            let n = column_element(j, y);
            let exponent = coeff.mul_ref(&alpha(&mut self.seq, n)?);
            if exponent.total_cmp(bound) == Ordering::Greater {
                return Ok(D2Witness { j, n, y, coeff, exponent });
            }
        }
        Err(Error::SearchCapExhausted { cap: search_cap })
    }

    /// `(1 + s(s+1))·α_n ≤ α_{n+1}` for `n ∈ I_s`.
    pub fn regularity_criterion(&mut self, n: u64) -> Result<bool> {
        let s = column_of(n);
        let lhs = T::from_u64(1 + s * (s + 1)).mul_ref(&alpha(&mut self.seq, n)?);
        Ok(lhs.total_cmp(&alpha(&mut self.seq, n + 1)?) != Ordering::Greater)
    }

    /// `a_{k+1,n}/a_{k,n} ≤ a_{k+1,n+1}/a_{k,n+1}` checked directly on the matrix.
    pub fn regularity_definition(&mut self, k: u64, n: u64) -> Result<bool> {
        let (s, s_next) = (column_of(n), column_of(n + 1));
        let r = |s: u64| entry_coeff::<T>(k + 1, s) - entry_coeff::<T>(k, s);
        let lhs = r(s).mul_ref(&alpha(&mut self.seq, n)?);
        let rhs = r(s_next).mul_ref(&alpha(&mut self.seq, n + 1)?);
        Ok(lhs.total_cmp(&rhs) != Ordering::Greater)
    }

    /// Criterion check for `n ≤ N`, with the matrix-level definition checked
    /// for `k ≤ K` as a cross-validation.
    ///
    /// At `n = 1` the criterion asks `3α_1 ≤ α_2`, which the definition does
    /// not require (positions 1 and 2 share column `I_1`). From `n = 2` on the
    /// two agree index by index once `K > s`.
    pub fn check_regularity(&mut self, horizon: u64, rows: u64) -> Result<CheckReport> {
        let mut report = CheckReport::new("regularity").param("N", horizon).param("K", rows);
        self.seq.ensure(horizon as usize + 1)?;
        let mut failures = 0u64;
        let mut definition_failures = 0u64;
        let mut first_definition_failure = None;
        for n in 1..=horizon {
            let s = column_of(n);
            if !self.regularity_criterion(n)? {
                failures += 1;
                if report.witnesses.len() < WITNESS_CAP {
                    let lhs = alpha(&mut self.seq, n + 1)? / alpha(&mut self.seq, n)?;
                    report.witnesses.push(Witness::new(
                        n,
                        format!("α_{{n+1}}/α_n < 1 + s(s+1) with s={s}"),
                        lhs.to_exact_string(),
                        T::from_u64(1 + s * (s + 1)).to_exact_string(),
                    ));
                }
            }
            for k in 1..=rows {
                if !self.regularity_definition(k, n)? {
                    definition_failures += 1;
                    first_definition_failure.get_or_insert((n, k));
                }
            }
        }
        report.verdict = if failures == 0 { Verdict::Pass } else { Verdict::Fail };
        report.detail("failures", failures);
        report.detail("definition_failures", definition_failures);
        if let Some((n, k)) = first_definition_failure {
            report.detail("definition_first_failure", format!("n={n} k={k}"));
        }
        Ok(report)
    }
}

/// Records the symbolic verdict of each region; returns them in order
/// (`None` for empty regions).
fn symbolic_regions<T: Scalar>(
    report: &mut CheckReport,
    regions: &[(&str, Option<u64>)],
    margin: impl Fn(u64) -> T,
) -> Vec<Option<bool>> {
    regions
        .iter()
        .map(|(name, rep)| match rep {
            None => {
                report.detail(&format!("region {name}"), "empty");
                None
            }
            Some(s) => {
                let m = margin(*s);
                let ok = !m.is_negative();
                report.detail(
                    &format!("region {name}"),
                    format!("{} (margin {})", if ok { "pass" } else { "fail" }, m.to_exact_string()),
                );
                Some(ok)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ceil_rational, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn linear() -> KotheFamily<Rational> {
        KotheFamily::new(ExponentSequence::linear())
    }

    #[test]
    fn entries() {
        let fam = linear();
        let e = fam.log_entry(1, 3).unwrap();
        assert_eq!((e.coeff.clone(), e.index), (r(-1, 1), 3));
        assert_eq!(fam.log_entry(3, 3).unwrap().coeff, r(2, 3));
        assert_eq!(fam.log_entry(2, 1).unwrap().coeff, r(1, 2));
    }

    #[test]
    fn ratio_cases() {
        assert_eq!(ratio_coeff::<Rational>(1, 2, 1), r(-3, 2));
        assert_eq!(ratio_coeff::<Rational>(1, 2, 3), r(-1, 2));
        assert_eq!(ratio_coeff::<Rational>(2, 5, 1), r(-3, 10));
    }

    #[test]
    fn ratio_is_entry_difference() {
        for (p, q) in [(1, 2), (2, 5), (3, 4)] {
            for n in 1..200 {
                let s = column_of(n);
                let diff = entry_coeff::<Rational>(p, s) - entry_coeff::<Rational>(q, s);
                assert_eq!(ratio_coeff::<Rational>(p, q, n), diff);
            }
        }
    }

    #[test]
    fn nuclearity() {
        assert!(linear().check_nuclearity(1, 1000).unwrap().passed());
        let mut f = KotheFamily::<Rational>::new(ExponentSequence::factorial());
        assert!(f.check_nuclearity(2, 50).unwrap().passed());
    }

    #[test]
    fn dn_bounds_and_verdicts() {
        assert_eq!(dn_bound::<Rational>(1), r(1, 3));
        let mut fam = linear();
        assert!(fam.check_dn(1, &r(1, 6), 10_000).unwrap().passed());
        assert!(fam.check_dn(3, &(dn_bound::<Rational>(3) / r(2, 1)), 2000).unwrap().passed());
        // with p = 1 there is no column s < p, so even λ = 1/2 passes
        assert!(fam.check_dn(1, &r(1, 2), 2000).unwrap().passed());
        let rep = fam.check_dn(2, &r(1, 2), 2000).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.witnesses[0].n, 1);
        assert!(fam.check_dn(1, &r(1, 1), 10).is_err());
    }

    #[test]
    fn omega_bounds_and_verdicts() {
        assert_eq!(omega_bound::<Rational>(1, 2), r(2, 1));
        let mut fam = linear();
        assert!(fam.check_omega(1, 2, &r(2, 1), 5000).unwrap().passed());
        let j = Rational::from_integer(ceil_rational(&omega_bound::<Rational>(2, 8)));
        assert!(fam.check_omega(2, 8, &j, 5000).unwrap().passed());
        let rep = fam.check_omega(2, 8, &(j - r(1, 1)), 5000).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(column_of(rep.witnesses[0].n), 3);
    }

    #[test]
    fn omega_with_adjacent_k_holds_for_any_j() {
        // k = p+1 leaves no column with p+1 ≤ s < k, the only region that binds
        let mut fam = linear();
        for j in [r(0, 1), r(1, 1), r(1, 3)] {
            let rep = fam.check_omega(1, 2, &j, 3000).unwrap();
            assert!(rep.passed(), "j = {j}");
            assert_eq!(rep.details["region p+1<=s<k"], "empty");
        }
        let rep = fam.check_omega(1, 3, &r(2, 1), 3000).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(column_of(rep.witnesses[0].n), 2);
    }

    #[test]
    fn d2_witnesses() {
        assert_eq!(d2_coeff::<Rational>(1), r(3, 2));
        let mut fam = linear();
        let w = fam.check_d2_failure(1, &r(1_000_000, 1), 1_000_000).unwrap();
        assert_eq!(column_of(w.n), 1);
        assert!(r(3, 2) * Rational::from_u64(w.n) > r(1_000_000, 1));
        let prev = column_element(1, w.y - 1);
        assert!(r(3, 2) * Rational::from_u64(prev) <= r(1_000_000, 1));

        let mut f = KotheFamily::<Rational>::new(ExponentSequence::factorial());
        let w = f.check_d2_failure(2, &r(1000, 1), 100).unwrap();
        assert_eq!(column_of(w.n), 2);
        assert!(w.n <= 10);
    }

    #[test]
    fn regularity() {
        let mut sp = KotheFamily::<Rational>::new(ExponentSequence::superproduct());
        let rep = sp.check_regularity(200, 8).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.details["definition_failures"], "0");

        let mut f = KotheFamily::<Rational>::new(ExponentSequence::factorial());
        let rep = f.check_regularity(50, 8).unwrap();
        let w3 = rep.witnesses.iter().find(|w| w.n == 3).unwrap();
        assert_eq!((w3.lhs.as_str(), w3.rhs.as_str()), ("4/1", "7/1"));

        let rep = linear().check_regularity(50, 8).unwrap();
        let w1 = &rep.witnesses[0];
        assert_eq!((w1.n, w1.lhs.as_str(), w1.rhs.as_str()), (1, "2/1", "3/1"));
    }

    #[test]
    fn criterion_matches_definition_from_two() {
        let seqs = [
            ExponentSequence::<Rational>::linear(),
            ExponentSequence::factorial(),
            ExponentSequence::superproduct(),
            ExponentSequence::polynomial(3).unwrap(),
        ];
        for seq in seqs {
            let mut fam = KotheFamily::new(seq);
            for n in 2..120u64 {
                let crit = fam.regularity_criterion(n).unwrap();
                let rows = column_of(n) + 2;
                let mut def = true;
                for k in 1..=rows {
                    def &= fam.regularity_definition(k, n).unwrap();
                }
                assert_eq!(crit, def, "{} n={n}", fam.seq.name());
            }
        }
    }
}
