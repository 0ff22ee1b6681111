//! Theorem-level checks over certified diameter tables.
//!
//! "Sufficiently large" is always searched for inside the certified horizon
//! and reported; not finding it is inconclusive, never a refutation.

use std::cmp::Ordering;

use serde::Serialize;

use crate::diameters::{DiameterTableOf, Segment};
use crate::error::{Error, Result};
use crate::grid::in_band;
use crate::kothe::ratio_coeff;
use crate::report::{CheckReport, Verdict, Witness};
use crate::scalar::{c_pq, Scalar};
use crate::sequences::{DeclaredClass, ExponentSequence};

fn exponent_at<T: Scalar>(table: &DiameterTableOf<T>, n: usize, seq: &mut ExponentSequence<T>) -> Result<T> {
    table.entries[n].value.exponent_extending(seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub p: u64,
    pub q: u64,
    /// Indices examined: `1..=horizon` (`α_0` does not exist, so `n = 0` is
    /// outside both bounds).
    pub horizon: usize,
    /// Least `N` with the lower bound holding on `[N, horizon]`.
    pub n_found: Option<usize>,
    /// Violations, at most [`crate::kothe::WITNESS_CAP`] per side.
    pub violations: Vec<(usize, Side)>,
    pub upper_violations: usize,
    pub lower_violations: usize,
    pub max_lower_violation: Option<usize>,
    pub verdict: Verdict,
}

/// `c_pq·α_{4n} ≤ log d_n ≤ c_pq·α_n` over the certified range.
pub fn verify_sandwich<T: Scalar>(
    table: &DiameterTableOf<T>,
    seq: &mut ExponentSequence<T>,
) -> Result<SandwichReport> {
    let horizon = table.len().saturating_sub(1);
    seq.ensure(4 * horizon.max(1))?;
    let c = table.c();
    let mut violations = Vec::new();
    let (mut upper, mut lower) = (0, 0);
    let mut max_lower = None;
    for n in 1..=horizon {
        let ld = exponent_at(table, n, seq)?;
        let hi = c.mul_ref(seq.get(n)?.as_ref());
        let lo = c.mul_ref(seq.get(4 * n)?.as_ref());
        if ld.total_cmp(&hi) == Ordering::Greater {
            upper += 1;
            if upper <= crate::kothe::WITNESS_CAP {
                violations.push((n, Side::Upper));
            }
        }
        if lo.total_cmp(&ld) == Ordering::Greater {
            lower += 1;
            max_lower = Some(n);
            if lower <= crate::kothe::WITNESS_CAP {
                violations.push((n, Side::Lower));
            }
        }
    }
    let n_found = match max_lower {
        None if horizon >= 1 => Some(1),
        None => None,
        Some(m) if m < horizon => Some(m + 1),
        Some(_) => None,
    };
    let verdict = if upper > 0 {
        Verdict::Fail
    } else if n_found.is_none() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(SandwichReport {
        p: table.p,
        q: table.q,
        horizon,
        n_found,
        violations,
        upper_violations: upper,
        lower_violations: lower,
        max_lower_violation: max_lower,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EaddRow<T> {
    pub a: usize,
    pub n_a: u64,
    /// `ε_{n_a-1}/α_{n_a}`
    pub ratio: T,
}

/// `ε_{n_a-1}/α_{n_a}` for every red `a ≥ a₀` inside the table.
///
/// Needs a closed-form table (for `a₀`) over a sequence not declared stable.
pub fn eadd_ratio<T: Scalar>(
    table: &DiameterTableOf<T>,
    seq: &mut ExponentSequence<T>,
) -> Result<Vec<EaddRow<T>>> {
    if seq.declared() == DeclaredClass::Stable {
        return Err(Error::StableSequence(seq.name().to_string()));
    }
    let plan = table
        .plan
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("EADD ratios need a closed-form table".into()))?;
    let a0 = plan.a0.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no unstable tail within {} diameters for ({}, {})",
            table.len(),
            table.p,
            table.q
        ))
    })?;
    let mut rows = Vec::new();
    for red in &plan.reds[a0 - 1..] {
        let n = red.n_a as usize - 1;
        if n >= table.len() {
            break;
        }
        let eps = table.epsilon(n)?.exponent_extending(seq)?;
        let ratio = eps / seq.value(red.n_a as usize)?;
        rows.push(EaddRow { a: red.a, n_a: red.n_a, ratio });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct AaPair<T> {
    pub p: u64,
    pub q: u64,
    /// `(n, ε_n/α_{n+1})` over the window.
    pub ratios: Vec<(usize, T)>,
    pub sup: Option<(usize, T)>,
    /// Extremes over the window indices `n` with `n + 1 ∈ I` and
    /// `d_n = e^{(c_pq-1)α_{n+1}}` (the `n_a - 1` positions).
    pub red_min: Option<(usize, T)>,
    pub red_sup: Option<(usize, T)>,
    /// `1 - c_pq`
    pub red_law: T,
}

impl<T: Scalar> AaPair<T> {
    /// The window sup along the red positions stays at or above 1.
    pub fn red_nondecaying(&self) -> Option<bool> {
        self.red_min.as_ref().map(|(_, v)| v.total_cmp(&T::one()) != Ordering::Less)
    }
}

#[derive(Clone, Debug)]
pub struct AaStatistic<T> {
    pub pairs: Vec<AaPair<T>>,
    /// `min_p max_{q} sup_window ε_n/α_{n+1}` over the supplied pairs.
    pub proxy: Option<T>,
}

/// Finite-window proxy for `inf_p sup_q limsup_n ε_n(p,q)/ε_n` with
/// `ε_n = α_{n+1}`. One-sided: it can refute coincidence of the approximate
/// diametral dimensions, never prove it.
pub fn aa_statistic<T: Scalar>(
    tables: &[DiameterTableOf<T>],
    seq: &mut ExponentSequence<T>,
    window: std::ops::Range<usize>,
) -> Result<AaStatistic<T>> {
    let mut pairs = Vec::new();
    for table in tables {
        let red_coeff = table.c() - T::one();
        let mut ratios = Vec::new();
        let mut sup: Option<(usize, T)> = None;
        let mut red_min: Option<(usize, T)> = None;
        let mut red_sup: Option<(usize, T)> = None;
        for n in window.clone() {
            if n >= table.len() {
                break;
            }
            let eps = table.epsilon(n)?.exponent_extending(seq)?;
            let ratio = eps / seq.value(n + 1)?;
            let entry = &table.entries[n];
            let red = in_band(table.p, table.q, n as u64 + 1)
                && entry.value.index == n + 1
                && entry.value.coeff == red_coeff;
            let better = |cur: &Option<(usize, T)>, ord| {
                cur.as_ref().is_none_or(|(_, v)| ratio.total_cmp(v) == ord)
            };
            if better(&sup, Ordering::Greater) {
                sup = Some((n, ratio.clone()));
            }
            if red {
                if better(&red_min, Ordering::Less) {
                    red_min = Some((n, ratio.clone()));
                }
                if better(&red_sup, Ordering::Greater) {
                    red_sup = Some((n, ratio.clone()));
                }
            }
            ratios.push((n, ratio));
        }
        pairs.push(AaPair {
            p: table.p,
            q: table.q,
            ratios,
            sup,
            red_min,
            red_sup,
            red_law: T::one() - table.c(),
        });
    }

    let mut ps: Vec<u64> = pairs.iter().map(|x| x.p).collect();
    ps.sort_unstable();
    ps.dedup();
    let mut proxy: Option<T> = None;
    for p in ps {
        let best_q = pairs
            .iter()
            .filter(|x| x.p == p)
            .filter_map(|x| x.sup.as_ref().map(|(_, v)| v.clone()))
            .max_by(|a, b| a.total_cmp(b));
        if let Some(v) = best_q {
            if proxy.as_ref().is_none_or(|cur| v.total_cmp(cur) == Ordering::Less) {
                proxy = Some(v);
            }
        }
    }
    Ok(AaStatistic { pairs, proxy })
}

/// Looks for a threshold past which the ratio sequence is non-increasing,
/// and checks that `d_n` is the `(n+1)`-th ratio from there on.
///
/// The threshold counts as found only if the descending run covers at least
/// the second half of the table.
pub fn edd_tail_check<T: Scalar>(
    table: &DiameterTableOf<T>,
    seq: &mut ExponentSequence<T>,
) -> Result<CheckReport> {
    let (p, q) = (table.p, table.q);
    let mut report = CheckReport::new("edd-tail").param("p", p).param("q", q).param("count", table.len());
    let len = table.len();
    if len < 2 {
        report.verdict = Verdict::Inconclusive;
        report.detail("threshold", "table too short");
        return Ok(report);
    }
    seq.ensure(len + 1)?;
    let ratio = |m: usize, seq: &ExponentSequence<T>| -> Result<T> {
        Ok(ratio_coeff::<T>(p, q, m as u64).mul_ref(seq.get(m)?.as_ref()))
    };
    // last ascent among ratio indices 1..=len
    let mut threshold = 0;
    let mut next = ratio(len, seq)?;
    for m in (1..len).rev() {
        let cur = ratio(m, seq)?;
        if cur.total_cmp(&next) == Ordering::Less {
            threshold = m;
            break;
        }
        next = cur;
    }
    if let Some(t) = table.plan.as_ref().and_then(|pl| pl.tail_start) {
        report.detail("closed_form_tail_start", t);
    }
    if threshold > len / 2 {
        report.verdict = Verdict::Inconclusive;
        report.detail("threshold", format!("not found (last ascent at ratio index {threshold})"));
        return Ok(report);
    }
    report.detail("threshold", threshold);
    let mut mismatches = 0;
    for n in threshold..len {
        let d = exponent_at(table, n, seq)?;
        let r = ratio(n + 1, seq)?;
        if d.total_cmp(&r) != Ordering::Equal {
            mismatches += 1;
            if report.witnesses.len() < crate::kothe::WITNESS_CAP {
                report.witnesses.push(Witness::new(
                    n as u64,
                    "log d_n differs from the (n+1)-th ratio",
                    d.to_exact_string(),
                    r.to_exact_string(),
                ));
            }
        }
    }
    report.verdict = if mismatches == 0 { Verdict::Pass } else { Verdict::Fail };
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    /// No tail law is available; only the empirical prefix sup is reported.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct PairProbe<T> {
    pub p: u64,
    pub q: u64,
    pub verdict: Boundedness,
    /// `max_n θ·α_{n+1} + log d_n` over the table.
    pub empirical_sup: Option<(usize, T)>,
    /// The table's tail entries show the sign pattern the verdict predicts.
    pub empirical_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyVerdict {
    pub member: Option<bool>,
    /// For a non-member: a `p` such that no `q > p` gives a bounded sequence.
    pub witness_p: Option<u64>,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct DeltaProbe<T> {
    pub theta: T,
    pub kothe_pairs: Vec<PairProbe<T>>,
    pub power_pairs: Vec<PairProbe<T>>,
    pub kothe: FamilyVerdict,
    pub power: FamilyVerdict,
}

impl<T> DeltaProbe<T> {
    pub fn coincide(&self) -> bool {
        self.kothe.member.is_some() && self.kothe.member == self.power.member
    }
}

/// Membership of `t_n = e^{θ·α_{n+1}}` in the diametral dimensions of `𝒦_α`
/// and of `Λ₁(α_{n+1})`.
///
/// Where `d_n` follows the ratio sequence (`Λ₁` always; `𝒦_α` in its
/// unstable tail), `θ·α_{n+1} + log d_n` is `(θ + c_pq)·α_{n+1}` on blue
/// positions and `(θ + c_pq - 1)·α_{n+1}` on red ones, so the pair is bounded
/// iff `θ ≤ -c_pq`. A family member needs, for every `p`, some `q` with
/// `θ ≤ 1/p - 1/q`, which holds iff `θ ≤ 0`.
pub fn delta_membership_probe<T: Scalar>(
    theta: &T,
    kothe_tables: &[DiameterTableOf<T>],
    power_tables: &[DiameterTableOf<T>],
    seq: &mut ExponentSequence<T>,
) -> Result<DeltaProbe<T>> {
    let pair_rule = |p: u64, q: u64| {
        let bounded = theta.total_cmp(&(-c_pq::<T>(p, q))) != Ordering::Greater;
        if bounded {
            Boundedness::Bounded
        } else {
            Boundedness::Unbounded
        }
    };

    let mut kothe_pairs = Vec::new();
    let mut all_tails = !kothe_tables.is_empty();
    for table in kothe_tables {
        let tail = table.plan.as_ref().and_then(|pl| pl.tail_start);
        all_tails &= tail.is_some();
        let verdict = if tail.is_some() { pair_rule(table.p, table.q) } else { Boundedness::Undecided };
        kothe_pairs.push(probe_pair(theta, table, tail, verdict, seq)?);
    }
    let mut power_pairs = Vec::new();
    for table in power_tables {
        let verdict = pair_rule(table.p, table.q);
        power_pairs.push(probe_pair(theta, table, Some(0), verdict, seq)?);
    }

    let (member, witness_p) = family_rule(theta);
    let power = FamilyVerdict {
        member: Some(member),
        witness_p,
        reason: "ratio law θ ≤ 1/p - 1/q for some q > p, for every p".into(),
    };
    let unstable = seq.declared() == DeclaredClass::Unstable;
    let kothe = if unstable && all_tails {
        FamilyVerdict {
            member: Some(member),
            witness_p,
            reason: "unstable tail: d_n is the (n+1)-th ratio, same law as the power series side".into(),
        }
    } else {
        FamilyVerdict {
            member: None,
            witness_p: None,
            reason: if unstable {
                "some supplied pair has no unstable tail in range".into()
            } else {
                "the tail law needs an unstable exponent sequence".into()
            },
        }
    };
    Ok(DeltaProbe { theta: theta.clone(), kothe_pairs, power_pairs, kothe, power })
}

/// `(member, witness p)`: `θ ≤ 0` is a member; otherwise `p = ⌊1/θ⌋ + 1`
/// has `1/p < θ`, so `1/p - 1/q < θ` for every `q`.
fn family_rule<T: Scalar>(theta: &T) -> (bool, Option<u64>) {
    if !theta.is_positive() {
        return (true, None);
    }
    let mut p = 1u64;
    // smallest p with 1/p < θ; no closed floor for a generic scalar
    while T::from_ratio(1, p as i64).total_cmp(theta) != Ordering::Less {
        p += 1;
    }
    (false, Some(p))
}

fn probe_pair<T: Scalar>(
    theta: &T,
    table: &DiameterTableOf<T>,
    tail_start: Option<usize>,
    verdict: Boundedness,
    seq: &mut ExponentSequence<T>,
) -> Result<PairProbe<T>> {
    let mut sup: Option<(usize, T)> = None;
    let mut tail_values: Vec<(bool, T)> = Vec::new();
    for n in 0..table.len() {
        let w = theta.mul_ref(&seq.value(n + 1)?) + exponent_at(table, n, seq)?;
        if sup.as_ref().is_none_or(|(_, v)| w.total_cmp(v) == Ordering::Greater) {
            sup = Some((n, w.clone()));
        }
        if tail_start.is_some_and(|t| n >= t) {
            let blue = table.entries[n].value.coeff == table.c();
            tail_values.push((blue, w));
        }
    }
    let blues: Vec<&T> = tail_values.iter().filter(|(b, _)| *b).map(|(_, w)| w).collect();
    let empirical_consistent = match verdict {
        Boundedness::Bounded => tail_values.iter().all(|(_, w)| !w.is_positive()),
        Boundedness::Unbounded => {
            blues.windows(2).all(|w| w[1].total_cmp(w[0]) == Ordering::Greater) && blues.len() >= 2
        }
        Boundedness::Undecided => true,
    };
    Ok(PairProbe { p: table.p, q: table.q, verdict, empirical_sup: sup, empirical_consistent })
}

/// Count of entries per segment, for summaries.
pub fn segment_histogram<T>(table: &DiameterTableOf<T>) -> Vec<(Segment, usize)> {
    let order = [Segment::Head, Segment::J, Segment::K, Segment::L, Segment::M, Segment::Tail, Segment::Oracle];
    order
        .iter()
        .map(|s| (*s, table.entries.iter().filter(|e| e.segment == *s).count()))
        .filter(|(_, c)| *c > 0)
        .collect()
}
