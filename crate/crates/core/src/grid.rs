//! Enumeration of `ℕ₀²` along diagonals, the column partition `ℕ = ⋃ I_s`,
//! and the band `I = ⋃_{p≤s<q} I_s` used for the `(p, q)` diameters.
//!
//! Positions are 1-based: `(0,0) ↦ 1`, `(0,1) ↦ 2`, `(1,0) ↦ 3`, …
//! Column `I_s` is the set of positions with `x = s - 1`.

use num_integer::Roots;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct GridIndex {
    pub x: u64,
    pub y: u64,
    pub n: u64,
}

/// `(x+1)(x+2)/2 + y(x+1) + y(y-1)/2`, equivalently `d(d+1)/2 + x + 1`
/// with `d = x + y`.
pub fn pair_index(x: u64, y: u64) -> u64 {
    let d = x + y;
    d * (d + 1) / 2 + x + 1
}

/// Inverse of [`pair_index`]. Panics on `n == 0`.
pub fn unpair(n: u64) -> (u64, u64) {
    assert!(n >= 1, "grid positions start at 1");
    let m = n - 1;
    // largest d with d(d+1)/2 <= m
    let mut d = ((8 * m as u128 + 1).sqrt() as u64 - 1) / 2;
    while d * (d + 1) / 2 > m {
        d -= 1;
    }
    while (d + 1) * (d + 2) / 2 <= m {
        d += 1;
    }
    let x = m - d * (d + 1) / 2;
    (x, d - x)
}

pub fn grid_index(n: u64) -> GridIndex {
    let (x, y) = unpair(n);
    GridIndex { x, y, n }
}

/// The `s` with `n ∈ I_s`.
pub fn column_of(n: u64) -> u64 {
    unpair(n).0 + 1
}

/// Least element of `I_s`.
pub fn column_min(s: u64) -> u64 {
    assert!(s >= 1);
    pair_index(s - 1, 0)
}

/// The `y`-th element (0-based) of column `I_s`.
pub fn column_element(s: u64, y: u64) -> u64 {
    pair_index(s - 1, y)
}

/// Diagonal `x + y = d` of a position.
pub fn line_of(n: u64) -> u64 {
    let (x, y) = unpair(n);
    x + y
}

/// Index machinery for the band `I = ⋃_{p≤s<q} I_s` (columns `x ∈ [p-1, q-2]`).
///
/// `n_i` is the `i`-th element of `I` (1-based). `s_k` is the position in
/// `(n_i)` of the element of `I_p` on the line `x + y = q + k - 2`. The
/// definition extends to negative `k ≥ p + 1 - q`, where the line still
/// exists but meets fewer than `q - p` columns of the band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandIndexing {
    pub p: u64,
    pub q: u64,
    /// `n_1, n_2, …` (stored 0-based).
    pub n_list: Vec<u64>,
    /// `s_0, s_1, …` (stored 0-based in `k`).
    pub s_list: Vec<u64>,
}

impl BandIndexing {
    /// Enumerates at least `count` elements of `I` and every `s_k` that
    /// points inside the enumerated prefix.
    pub fn new(p: u64, q: u64, count: usize) -> Result<Self> {
        validate_pair(p, q)?;
        if count == 0 {
            return Err(Error::InvalidParameter("band count must be at least 1".into()));
        }
        let mut n_list = Vec::with_capacity(count);
        let mut n = 1;
        while n_list.len() < count {
            if in_band(p, q, n) {
                n_list.push(n);
            }
            n += 1;
        }
        let mut s_list = Vec::new();
        let mut k = 0;
        loop {
            let s = s_index(p, q, k);
            if s as usize > n_list.len() {
                break;
            }
            s_list.push(s);
            k += 1;
        }
        Ok(BandIndexing { p, q, n_list, s_list })
    }

    pub fn contains(&self, n: u64) -> bool {
        in_band(self.p, self.q, n)
    }

    /// `n_i`, 1-based.
    pub fn n(&self, i: usize) -> Option<u64> {
        i.checked_sub(1).and_then(|i| self.n_list.get(i).copied())
    }

    /// `s_k` for `k ≥ 0`.
    pub fn s(&self, k: usize) -> Option<u64> {
        self.s_list.get(k).copied()
    }
}

pub fn validate_pair(p: u64, q: u64) -> Result<()> {
    if p == 0 || q <= p {
        return Err(Error::InvalidParameter(format!("need q > p >= 1, got p={p}, q={q}")));
    }
    Ok(())
}

/// Membership of `n` in `I = ⋃_{p≤s<q} I_s`.
pub fn in_band(p: u64, q: u64, n: u64) -> bool {
    let s = column_of(n);
    p <= s && s < q
}

/// Number of band elements on the line `x + y = line`.
pub fn band_count_on_line(p: u64, q: u64, line: u64) -> u64 {
    if line + 1 < p {
        return 0;
    }
    line.min(q - 2) + 2 - p
}

/// Number of band elements on the lines `0..line` (exclusive).
pub fn band_count_before_line(p: u64, q: u64, line: u64) -> u64 {
    // lines p-1 ..= q-2 hold 1, 2, …, q-p elements; later lines hold q-p
    let first = p - 1;
    if line <= first {
        return 0;
    }
    let partial = (line - first).min(q - p);
    let mut total = partial * (partial + 1) / 2;
    let full_start = q - 1;
    if line > full_start {
        total += (line - full_start) * (q - p);
    }
    total
}

/// `#{m ∈ I : m ≤ n}`.
pub fn band_count_up_to(p: u64, q: u64, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let (x, y) = unpair(n);
    let line = x + y;
    let before = band_count_before_line(p, q, line);
    let on_line = if x + 1 < p {
        0
    } else {
        (x.min(q - 2) + 2 - p).min(band_count_on_line(p, q, line))
    };
    before + on_line
}

/// `n_i` (1-based) computed directly.
pub fn band_element(p: u64, q: u64, i: u64) -> u64 {
    assert!(i >= 1);
    // smallest line whose cumulative count reaches i
    let mut lo = p - 1;
    let mut hi = lo + 1;
    while band_count_before_line(p, q, hi + 1) < i {
        hi = hi * 2 + 1;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if band_count_before_line(p, q, mid + 1) >= i {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let line = lo;
    let offset = i - band_count_before_line(p, q, line) - 1;
    let x = p - 1 + offset;
    pair_index(x, line - x)
}

/// Least admissible `k` for the generalized `s_k` (where `s_k = 1`).
pub fn k_min(p: u64, q: u64) -> i64 {
    p as i64 + 1 - q as i64
}

/// `s_k` for any `k ≥ k_min(p, q)`: one plus the number of band elements on
/// lines before `x + y = q + k - 2`.
pub fn s_index(p: u64, q: u64, k: i64) -> u64 {
    assert!(k >= k_min(p, q), "s_k undefined below k_min");
    let line = (q as i64 + k - 2) as u64;
    1 + band_count_before_line(p, q, line)
}

/// `n_{s_k}`: the element of `I_p` on the line `x + y = q + k - 2`.
pub fn n_at_s(p: u64, q: u64, k: i64) -> u64 {
    assert!(k >= k_min(p, q));
    let line = (q as i64 + k - 2) as u64;
    pair_index(p - 1, line - (p - 1))
}

/// The `k` locating a non-band position `m` between consecutive `s_k`:
/// `#{I ∩ [1, m]} = s_{k+1} - 1`. Positions before any band element get
/// `k_min - 1`.
pub fn k_of_outside(p: u64, q: u64, m: u64) -> i64 {
    let (x, y) = unpair(m);
    let line = (x + y) as i64;
    let kmin = k_min(p, q);
    if x + 1 < p {
        // before the band elements of this line
        (line - q as i64 + 1).max(kmin - 1)
    } else {
        // past the band on this line (x ≥ q - 1)
        line - q as i64 + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_labels() {
        assert_eq!(pair_index(0, 0), 1);
        assert_eq!(pair_index(1, 1), 5);
        assert_eq!(pair_index(0, 3), 7);
        assert_eq!(pair_index(3, 0), 10);
        assert_eq!(unpair(6), (2, 0));
        assert_eq!(unpair(1), (0, 0));
    }

    #[test]
    fn matches_the_displayed_formula() {
        for x in 0..60u64 {
            for y in 0..60u64 {
                let lhs = (x + 1) * (x + 2) / 2 + y * (x + 1) + (y * y.saturating_sub(1)) / 2;
                assert_eq!(pair_index(x, y), lhs);
            }
        }
    }

    #[test]
    fn columns() {
        assert_eq!(column_of(3), 2);
        assert_eq!(column_of(6), 3);
        assert_eq!(column_of(10), 4);
        for s in 1..=50 {
            assert_eq!(column_min(s), s * (s + 1) / 2);
        }
    }

    #[test]
    fn band_one_two() {
        let b = BandIndexing::new(1, 2, 8).unwrap();
        assert_eq!(&b.n_list[..6], &[1, 2, 4, 7, 11, 16]);
        for k in 0..b.s_list.len() {
            assert_eq!(b.s(k), Some(k as u64 + 1));
        }
    }

    #[test]
    fn s_steps() {
        for (p, q) in [(1, 2), (2, 3), (1, 3), (2, 5), (3, 7)] {
            let b = BandIndexing::new(p, q, 500).unwrap();
            for w in b.s_list.windows(2) {
                assert_eq!(w[1] - w[0], q - p);
            }
            for (k, &s) in b.s_list.iter().enumerate() {
                assert_eq!(b.n(s as usize).unwrap(), n_at_s(p, q, k as i64));
            }
        }
    }

    #[test]
    fn generalized_s_below_zero() {
        let (p, q) = (2, 5);
        assert_eq!(k_min(p, q), -2);
        assert_eq!(s_index(p, q, -2), 1);
        assert_eq!(n_at_s(p, q, -2), band_element(p, q, 1));
        // s(k) = 1 + m(m+1)/2, m = q + k - 1 - p
        for k in -2..6i64 {
            let m = (q as i64 + k - 1 - p as i64) as u64;
            let expected = if k <= 0 { 1 + m * (m + 1) / 2 } else { s_index(p, q, 0) + k as u64 * (q - p) };
            assert_eq!(s_index(p, q, k), expected);
        }
    }

    #[test]
    fn counting_agrees_with_enumeration() {
        for (p, q) in [(1, 2), (2, 3), (2, 5), (3, 7), (4, 5)] {
            let mut count = 0;
            for n in 1..3000u64 {
                if in_band(p, q, n) {
                    count += 1;
                    assert_eq!(band_element(p, q, count), n);
                }
                assert_eq!(band_count_up_to(p, q, n), count, "p={p} q={q} n={n}");
            }
        }
    }

    #[test]
    fn outside_k_brackets_position() {
        for (p, q) in [(1, 2), (2, 3), (2, 5), (3, 7)] {
            for m in 1..2000u64 {
                if in_band(p, q, m) {
                    continue;
                }
                let k = k_of_outside(p, q, m);
                assert_eq!(band_count_up_to(p, q, m), s_index(p, q, k + 1) - 1, "p={p} q={q} m={m}");
            }
        }
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(BandIndexing::new(2, 2, 5).is_err());
        assert!(BandIndexing::new(0, 2, 5).is_err());
    }
}
