//! Kolmogorov diameters `d_n(U_q, U_p)` of `𝒦_α`.
//!
//! `d_n` is the `(n+1)`-th largest ratio `a_{p,m}/a_{q,m} = e^{coeff(m)·α_m}`,
//! where `coeff(m) = c_pq - 1` on the band `I` ("red" positions) and `c_pq`
//! elsewhere ("blue" positions). Two independent constructions are provided:
//!
//! * [`oracle_diameters`] sorts a finite prefix of the ratios exactly and
//!   certifies entries that no unseen ratio can displace;
//! * [`closedform_diameters`] places each red term by counting the blue terms
//!   above it and fills the gaps with the head/J/K/L/M/tail segment formulas.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    band_count_up_to, band_element, in_band, k_min, k_of_outside, n_at_s, s_index, validate_pair,
};
use crate::kothe::ratio_coeff;
use crate::logterm::LogTermOf;
use crate::scalar::{a_pq, c_pq, Scalar};
use crate::sequences::ExponentSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Segment {
    #[serde(rename = "head")]
    Head,
    J,
    K,
    L,
    M,
    #[serde(rename = "tail")]
    Tail,
    #[serde(rename = "oracle")]
    Oracle,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Segment::Head => "head",
            Segment::J => "J",
            Segment::K => "K",
            Segment::L => "L",
            Segment::M => "M",
            Segment::Tail => "tail",
            Segment::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterEntry<T> {
    /// `d_n` itself; `value.index` is the ratio index it came from.
    pub value: LogTermOf<T>,
    pub segment: Segment,
}

impl<T> DiameterEntry<T> {
    pub fn source_ratio_index(&self) -> usize {
        self.value.index
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Closed,
}

/// Certified prefix `d_0, …, d_H` of the diameters.
#[derive(Clone, Debug)]
pub struct DiameterTableOf<T> {
    pub p: u64,
    pub q: u64,
    pub method: Method,
    /// Every stored entry is exact and final.
    pub entries: Vec<DiameterEntry<T>>,
    /// Ratio-prefix length used by the oracle.
    pub prefix_len: Option<usize>,
    pub plan: Option<SegmentPlan>,
    pub diagnostic: Option<String>,
}

impl<T: Scalar> DiameterTableOf<T> {
    /// Largest certified diameter index.
    pub fn certified_horizon(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn c(&self) -> T {
        c_pq(self.p, self.q)
    }

    /// `ε_n = -log d_n`, as a log term with negated coefficient.
    pub fn epsilon(&self, n: usize) -> Result<LogTermOf<T>> {
        let e = self.entries.get(n).ok_or(Error::Uncertified {
            index: n,
            horizon: self.certified_horizon(),
        })?;
        Ok(LogTermOf::new(-e.value.coeff.clone(), e.value.index))
    }

    pub fn truncate(&mut self, count: usize) {
        self.entries.truncate(count);
    }
}

fn ratio_term<T: Scalar>(p: u64, q: u64, m: u64) -> LogTermOf<T> {
    LogTermOf::new(ratio_coeff(p, q, m), m as usize)
}

/// Sorting oracle over the ratio prefix `m ≤ M`.
///
/// Entries strictly above `e^{c_pq·α_{M+1}}` are certified: every unseen ratio
/// has coefficient at most `c_pq` and index beyond `M`. Ties are ordered by
/// smaller ratio index first. An uncertifiable prefix yields an empty table
/// with a diagnostic.
pub fn oracle_diameters<T: Scalar>(
    seq: &mut ExponentSequence<T>,
    p: u64,
    q: u64,
    prefix_len: usize,
) -> Result<DiameterTableOf<T>> {
    validate_pair(p, q)?;
    if prefix_len < 2 {
        return Err(Error::InvalidParameter("oracle prefix length must be at least 2".into()));
    }
    seq.ensure(prefix_len + 1)?;
    let mut terms = Vec::with_capacity(prefix_len);
    for m in 1..=prefix_len {
        let t = ratio_term::<T>(p, q, m as u64);
        let e = t.exponent(seq)?;
        terms.push((e, t));
    }
    terms.sort_by(|(ea, ta), (eb, tb)| eb.total_cmp(ea).then(ta.index.cmp(&tb.index)));

    let bound = c_pq::<T>(p, q).mul_ref(seq.get(prefix_len + 1)?.as_ref());
    let entries: Vec<_> = terms
        .into_iter()
        .take_while(|(e, _)| e.total_cmp(&bound) == Ordering::Greater)
        .map(|(_, value)| DiameterEntry { value, segment: Segment::Oracle })
        .collect();
    let diagnostic = entries
        .is_empty()
        .then(|| Error::NothingCertified { prefix: prefix_len }.to_string());
    Ok(DiameterTableOf {
        p,
        q,
        method: Method::Oracle,
        entries,
        prefix_len: Some(prefix_len),
        plan: None,
        diagnostic,
    })
}

/// Grows the oracle prefix until at least `count` diameters are certified,
/// then truncates to exactly `count`.
pub fn oracle_certified<T: Scalar>(
    seq: &mut ExponentSequence<T>,
    p: u64,
    q: u64,
    count: usize,
) -> Result<DiameterTableOf<T>> {
    let mut prefix = (count + count / 2 + 8).max(2);
    loop {
        let mut table = oracle_diameters(seq, p, q, prefix)?;
        if table.len() >= count {
            table.truncate(count);
            return Ok(table);
        }
        prefix += prefix / 2;
    }
}

/// Placement data for the `a`-th red term `n_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedRecord {
    pub a: usize,
    pub n_a: u64,
    /// Largest `m` with `α_m ≤ A_pq·α_{n_a}`.
    pub bound_index: u64,
    /// Largest blue position `≤ bound_index`; decides `k_a` and `j_a`.
    pub blue_floor: Option<u64>,
    /// Largest blue `m > n_a` with `α_m ≤ A_pq·α_{n_a}`; absent in the
    /// unstable regime.
    pub i_a: Option<u64>,
    pub k_a: i64,
    /// Diameter index taken by this red term: `d_{j_a} = e^{(c_pq-1)α_{n_a}}`.
    pub j_a: usize,
}

/// How an interval of diameter indices reads its ratio index `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Formula {
    /// `m = n + offset`, coefficient `c_pq`.
    Blue { offset: i64 },
    /// `m = n_a`, coefficient `c_pq - 1`.
    Red { a: usize },
    /// `m = n + 1`.
    Tail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub segment: Segment,
    /// Red label of the segment (for `M_a` this is the red it precedes).
    pub a: usize,
    pub k: Option<i64>,
    pub start: usize,
    /// Inclusive.
    pub end: usize,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentPlan {
    pub p: u64,
    pub q: u64,
    pub k_min: i64,
    pub reds: Vec<RedRecord>,
    /// First red from which every relevant red is in the unstable regime.
    pub a0: Option<usize>,
    /// First diameter index from which `d_n` is the `(n+1)`-th ratio.
    pub tail_start: Option<usize>,
    pub intervals: Vec<Interval>,
}

impl SegmentPlan {
    pub fn red(&self, a: usize) -> Option<&RedRecord> {
        a.checked_sub(1).and_then(|i| self.reds.get(i))
    }
}

/// Closed-form diameters `d_0, …, d_{count-1}`.
///
/// Red `a` sits at `j_a = i_a - s_{k_a+1} + a` (with the blue floor in place
/// of `i_a`, and `0` when there is none). Between consecutive reds the blues
/// follow in order, split by the `s_k` lines into the L, K and M intervals;
/// the head is the `L` interval before the first red. Once every red is in
/// the unstable regime the table continues as the ratio sequence itself.
///
/// Coverage is verified: every index below `count` is claimed by exactly one
/// interval, and every blue formula lands on a blue position of the right
/// rank.
pub fn closedform_diameters<T: Scalar>(
    seq: &mut ExponentSequence<T>,
    p: u64,
    q: u64,
    count: usize,
) -> Result<DiameterTableOf<T>> {
    validate_pair(p, q)?;
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let kmin = k_min(p, q);
    let a_mult = a_pq::<T>(p, q);
    let s = |k: i64| s_index(p, q, k) as i64;
    let n_s = |k: i64| n_at_s(p, q, k) as i64;

    // Place the reds.
    let mut reds: Vec<RedRecord> = Vec::new();
    let mut bound = 1u64;
    for a in 1usize.. {
        let n_a = band_element(p, q, a as u64);
        let threshold = a_mult.mul_ref(&seq.value(n_a as usize)?);
        bound = bound.max(n_a);
        while seq.value(bound as usize + 1)?.total_cmp(&threshold) != Ordering::Greater {
            bound += 1;
        }
        let mut floor = bound;
        while floor >= 1 && in_band(p, q, floor) {
            floor -= 1;
        }
        let blue_floor = (floor >= 1).then_some(floor);
        let i_a = blue_floor.filter(|&m| m > n_a);
        let k_a = blue_floor.map_or(kmin - 1, |m| k_of_outside(p, q, m));
        let j = blue_floor.unwrap_or(0) as i64 - s(k_a + 1) + a as i64;
        let blues_up_to = (bound - band_count_up_to(p, q, bound)) as i64;
        if j != blues_up_to + a as i64 - 1 {
            return Err(Error::SelfCheck(format!(
                "red a={a}: index formula gives j={j}, direct count gives {}",
                blues_up_to + a as i64 - 1
            )));
        }
        let j_a = j as usize;
        reds.push(RedRecord { a, n_a, bound_index: bound, blue_floor, i_a, k_a, j_a });
        if j_a >= count && n_a as usize > count {
            break;
        }
    }

    // Intervals between consecutive reds (red 0 is a sentinel at j = -1).
    let j_of = |a: usize| if a == 0 { -1 } else { reds[a - 1].j_a as i64 };
    let k_of = |a: usize| if a == 0 { kmin - 1 } else { reds[a - 1].k_a };
    let mut intervals = Vec::new();
    let mut push = |segment, a, k, start: i64, end: i64, formula| {
        let end = end.min(count as i64 - 1);
        if start <= end {
            intervals.push(Interval { segment, a, k, start: start as usize, end: end as usize, formula });
        }
    };
    for a in 0..reds.len() {
        let (ja, ka) = (j_of(a), k_of(a));
        if ja >= count as i64 {
            break;
        }
        if a >= 1 {
            push(Segment::J, a, None, ja, ja, Formula::Red { a });
        }
        let (jn, kn) = (j_of(a + 1), k_of(a + 1));
        let ai = a as i64;
        let l_segment = if a == 0 { Segment::Head } else { Segment::L };
        let l_formula = Formula::Blue { offset: s(ka + 1) - ai };
        if ka == kn {
            push(l_segment, a, Some(ka), ja + 1, jn - 1, l_formula);
            continue;
        }
        push(l_segment, a, Some(ka), ja + 1, n_s(ka + 1) - s(ka + 1) + ai - 1, l_formula);
        for k in ka + 1..kn {
            let start = n_s(k) - s(k) + ai;
            let end = n_s(k + 1) - s(k + 1) + ai - 1;
            push(Segment::K, a, Some(k), start, end, Formula::Blue { offset: s(k + 1) - ai });
        }
        push(
            Segment::M,
            a + 1,
            Some(kn),
            n_s(kn) - s(kn) + ai,
            jn - 1,
            Formula::Blue { offset: s(kn + 1) - ai },
        );
    }

    // Coverage: every index claimed exactly once.
    let mut owner: Vec<Option<usize>> = vec![None; count];
    for (id, iv) in intervals.iter().enumerate() {
        for (n, slot) in owner.iter_mut().enumerate().take(iv.end + 1).skip(iv.start) {
            if let Some(prev) = *slot {
                return Err(Error::CoverageOverlap {
                    index: n,
                    first: describe(&intervals[prev]),
                    second: describe(iv),
                });
            }
            *slot = Some(id);
        }
    }

    // Unstable tail: reds whose ratio position lies in range decide it.
    let relevant = reds.iter().take_while(|r| r.n_a as usize <= count).count();
    let mut a0 = None;
    for r in reds[..relevant].iter().rev() {
        if r.i_a.is_some() {
            break;
        }
        a0 = Some(r.a);
    }
    let tail_start = a0.and_then(|a0| {
        let t = if a0 == 1 { reds[0].n_a as usize - 1 } else { reds[a0 - 2].j_a + 1 };
        (t < count).then_some(t)
    });

    let c = c_pq::<T>(p, q);
    let red_coeff = c.clone() - T::one();
    let mut entries = Vec::with_capacity(count);
    let mut reds_before = 0usize;
    for (n, slot) in owner.iter().enumerate() {
        let id = slot.ok_or(Error::CoverageGap { index: n })?;
        let iv = &intervals[id];
        let (m, coeff) = match iv.formula {
            Formula::Red { a } => {
                reds_before += 1;
                (reds[a - 1].n_a, red_coeff.clone())
            }
            Formula::Blue { offset } => {
                let m = n as i64 + offset;
                if m < 1 || in_band(p, q, m as u64) {
                    return Err(Error::SelfCheck(format!(
                        "{} maps diameter index {n} to ratio index {m}, not a blue position",
                        describe(iv)
                    )));
                }
                let m = m as u64;
                let rank = m - band_count_up_to(p, q, m);
                if rank as usize != n - reds_before + 1 {
                    return Err(Error::SelfCheck(format!(
                        "{} maps diameter index {n} to blue rank {rank}, expected {}",
                        describe(iv),
                        n - reds_before + 1
                    )));
                }
                (m, c.clone())
            }
            Formula::Tail => unreachable!("tail intervals are added after coverage"),
        };
        let in_tail = tail_start.is_some_and(|t| n >= t);
        if in_tail && m != n as u64 + 1 {
            return Err(Error::SelfCheck(format!(
                "tail index {n}: segment formula gives ratio index {m}, expected {}",
                n + 1
            )));
        }
        let segment = if in_tail { Segment::Tail } else { iv.segment };
        entries.push(DiameterEntry { value: LogTermOf::new(coeff, m as usize), segment });
    }

    if let Some(t) = tail_start {
        intervals.retain(|iv| iv.start < t);
        for iv in &mut intervals {
            iv.end = iv.end.min(t - 1);
        }
        intervals.push(Interval {
            segment: Segment::Tail,
            a: a0.unwrap_or(0),
            k: None,
            start: t,
            end: count - 1,
            formula: Formula::Tail,
        });
    }
    intervals.sort_by_key(|iv| iv.start);

    Ok(DiameterTableOf {
        p,
        q,
        method: Method::Closed,
        entries,
        prefix_len: None,
        plan: Some(SegmentPlan { p, q, k_min: kmin, reds, a0, tail_start, intervals }),
        diagnostic: None,
    })
}

/// Diameters of the power series space `Λ₁(α_{n+1})`, whose matrix is
/// `e^{-α_{n+1}/k}` with coordinates counted from `n = 0`. Its ratios are
/// already decreasing, so `d_n = e^{c_pq·α_{n+1}}`.
pub fn power_series_diameters<T: Scalar>(p: u64, q: u64, count: usize) -> Result<DiameterTableOf<T>> {
    validate_pair(p, q)?;
    let c = c_pq::<T>(p, q);
    let entries = (0..count)
        .map(|n| DiameterEntry { value: LogTermOf::new(c.clone(), n + 1), segment: Segment::Tail })
        .collect();
    Ok(DiameterTableOf {
        p,
        q,
        method: Method::Closed,
        entries,
        prefix_len: None,
        plan: None,
        diagnostic: None,
    })
}

fn describe(iv: &Interval) -> String {
    match iv.k {
        Some(k) => format!("{}(a={}, k={k})[{}..={}]", iv.segment, iv.a, iv.start, iv.end),
        None => format!("{}(a={})[{}..={}]", iv.segment, iv.a, iv.start, iv.end),
    }
}

/// First index where the two tables denote different reals, over their
/// common prefix.
pub fn first_disagreement<T: Scalar>(
    a: &DiameterTableOf<T>,
    b: &DiameterTableOf<T>,
    seq: &mut ExponentSequence<T>,
) -> Result<Option<usize>> {
    for (n, (x, y)) in a.entries.iter().zip(&b.entries).enumerate() {
        if x.value == y.value {
            continue;
        }
        let ex = x.value.exponent_extending(seq)?;
        let ey = y.value.exponent_extending(seq)?;
        if ex.total_cmp(&ey) != Ordering::Equal {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
