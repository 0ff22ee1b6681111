use kothe::diameters::power_series_diameters;
use kothe::grid::{column_min, column_of, pair_index, unpair};
use kothe::kothe::{dn_bound, entry_coeff, omega_bound};
use kothe::{
    closedform_diameters, first_disagreement, logterm_cmp, oracle_certified, parse_rational, Alpha, AlphaF64,
    DeclaredClass, DiameterTable, Error, Kothe, LogTerm, Rational, Scalar, Verdict,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::cmp::Ordering;

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Strictly increasing rational sequence; some steps multiply, some add, so
/// prefixes mix stable and unstable stretches.
fn alpha_strategy(len: usize) -> impl Strategy<Value = Alpha> {
    (1i64..8, prop::collection::vec((0u8..4, 1i64..20, 1i64..5), len)).prop_map(|(start, steps)| {
        let mut values = vec![r(start, 1)];
        for (kind, a, b) in steps {
            let last = values.last().unwrap().clone();
            let next = match kind {
                0 => last.clone() * r(a + b, b),
                _ => last + r(a, b),
            };
            values.push(next);
        }
        Alpha::from_values("random", values, DeclaredClass::Unspecified).unwrap()
    })
}

fn pair_strategy() -> impl Strategy<Value = (u64, u64)> {
    (1u64..6, 1u64..5).prop_map(|(p, gap)| (p, p + gap))
}

fn exponents(table: &DiameterTable, seq: &mut Alpha) -> Vec<Rational> {
    table.entries.iter().map(|e| e.value.exponent_extending(seq).unwrap()).collect()
}

proptest! {
    #[test]
    fn rational_text_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let x = Rational::new(BigInt::from(n), BigInt::from(d));
        let text = x.to_exact_string();
        prop_assert!(text.contains('/'));
        prop_assert_eq!(parse_rational(&text), Some(x));
    }

    #[test]
    fn pairing_is_a_bijection(x in 0u64..5000, y in 0u64..5000, n in 1u64..50_000_000) {
        prop_assert_eq!(unpair(pair_index(x, y)), (x, y));
        let (a, b) = unpair(n);
        prop_assert_eq!(pair_index(a, b), n);
        prop_assert_eq!(column_of(n), a + 1);
        prop_assert!(column_min(a + 1) <= n);
    }

    #[test]
    fn logterm_order_is_total(
        terms in prop::collection::vec((-40i64..40, 1i64..12, 1usize..300), 3),
        factorial in any::<bool>(),
    ) {
        let mut seq = if factorial { Alpha::factorial() } else { Alpha::linear() };
        let t: Vec<LogTerm> = terms.iter().map(|&(n, d, i)| LogTerm::new(r(n, d), i)).collect();
        let cmp = |a: &LogTerm, b: &LogTerm, seq: &mut Alpha| logterm_cmp(a, b, seq).unwrap();
        for a in &t {
            prop_assert_eq!(cmp(a, a, &mut seq), Ordering::Equal);
            for b in &t {
                prop_assert_eq!(cmp(a, b, &mut seq), cmp(b, a, &mut seq).reverse());
                for c in &t {
                    if cmp(a, b, &mut seq) != Ordering::Greater && cmp(b, c, &mut seq) != Ordering::Greater {
                        prop_assert_ne!(cmp(a, c, &mut seq), Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn kothe_entries_increase_with_k(k in 1u64..=20, n in 1u64..=10_000) {
        let s = column_of(n);
        prop_assert!(entry_coeff::<Rational>(k, s) <= entry_coeff::<Rational>(k + 1, s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_oracle(mut seq in alpha_strategy(600), (p, q) in pair_strategy(), count in 5usize..60) {
        let oracle = match oracle_certified(&mut seq, p, q, count) {
            Ok(t) => t,
            Err(Error::PrefixExhausted { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let closed = match closedform_diameters(&mut seq, p, q, count) {
            Ok(t) => t,
            Err(Error::PrefixExhausted { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(closed.len(), count);
        prop_assert_eq!(first_disagreement(&closed, &oracle, &mut seq).unwrap(), None);
    }

    #[test]
    fn diameters_are_non_increasing(mut seq in alpha_strategy(600), (p, q) in pair_strategy(), count in 5usize..60) {
        let Ok(table) = closedform_diameters(&mut seq, p, q, count) else { return Ok(()) };
        let e = exponents(&table, &mut seq);
        for w in e.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(e.iter().all(|x| x < &Rational::from_integer(0.into())));
    }

    /// `d_n` is the (n+1)-th largest ratio: it dominates the minimum over any
    /// n+1 ratios and is dominated by the maximum outside any n ratios.
    #[test]
    fn diameters_sit_in_the_subset_bracket(
        mut seq in alpha_strategy(400),
        (p, q) in pair_strategy(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 30),
        n in 0usize..20,
    ) {
        let Ok(table) = oracle_certified(&mut seq, p, q, 25) else { return Ok(()) };
        let horizon = table.prefix_len.unwrap();
        let kothe = Kothe::new(seq.clone());
        let ratio = |m: usize| kothe.log_ratio(p, q, m as u64).unwrap().exponent(&kothe.seq).unwrap();
        let d = table.entries[n].value.exponent(&seq).unwrap();

        let mut chosen: Vec<usize> = picks.iter().map(|i| 1 + i.index(horizon)).collect();
        chosen.sort_unstable();
        chosen.dedup();
        let upper: Vec<usize> = chosen.iter().copied().take(n).collect();
        if chosen.len() > n {
            let lower = chosen.iter().take(n + 1).map(|&m| ratio(m)).min().unwrap();
            prop_assert!(lower <= d);
        }
        if upper.len() == n {
            let outside = (1..=horizon).filter(|m| !upper.contains(m)).map(ratio).max().unwrap();
            prop_assert!(outside >= d);
        }
    }

    #[test]
    fn regularity_criterion_matches_definition(mut seq in alpha_strategy(300), n in 2u64..250) {
        seq.ensure(n as usize + 1).unwrap();
        let mut fam = Kothe::new(seq);
        let rows = column_of(n) + 1;
        let criterion = fam.regularity_criterion(n).unwrap();
        let mut definition = true;
        for k in 1..=rows {
            definition &= fam.regularity_definition(k, n).unwrap();
        }
        prop_assert_eq!(criterion, definition);
    }

    /// The per-n scans error out if they ever disagree with the symbolic
    /// region verdicts, so reaching a verdict is the property.
    #[test]
    fn dn_and_omega_scans_agree_with_regions(
        p in 1u64..6,
        gap in 1u64..4,
        num in 1i64..40,
        jshift in -2i64..3,
        linear in any::<bool>(),
    ) {
        let seq = if linear { Alpha::linear() } else { Alpha::factorial() };
        let horizon = if linear { 3000 } else { 200 };
        let mut fam = Kothe::new(seq);
        let lambda = dn_bound::<Rational>(p) * r(num, 20);
        let dn = fam.check_dn(p, &lambda, horizon).unwrap();
        prop_assert_eq!(dn.verdict == Verdict::Fail, !dn.witnesses.is_empty());
        let k = p + gap;
        let j = omega_bound::<Rational>(p, k).ceil() + r(jshift, 1);
        let omega = fam.check_omega(p, k, &j, horizon).unwrap();
        prop_assert_eq!(omega.verdict == Verdict::Fail, !omega.witnesses.is_empty());
    }
}

#[test]
fn power_series_tables_follow_shifted_sequence() {
    let t = power_series_diameters::<Rational>(2, 5, 6).unwrap();
    let mut seq = Alpha::factorial();
    let e = exponents(&t, &mut seq);
    let c = r(-1, 2) + r(1, 5);
    let expected: Vec<Rational> = (1..=6).map(|m| c.clone() * seq.value(m).unwrap()).collect();
    assert_eq!(e, expected);
}

#[test]
fn f64_alias_tracks_the_exact_table() {
    let mut exact = Alpha::linear();
    let mut approx = AlphaF64::linear();
    for (p, q) in [(1, 2), (2, 5)] {
        let te = closedform_diameters(&mut exact, p, q, 80).unwrap();
        let ta = closedform_diameters(&mut approx, p, q, 80).unwrap();
        for (x, y) in te.entries.iter().zip(&ta.entries) {
            assert_eq!(x.value.index, y.value.index);
            assert_eq!(x.segment, y.segment);
            let ex = x.value.exponent(&exact).unwrap().to_f64_lossy();
            let ey = y.value.exponent(&approx).unwrap();
            assert!((ex - ey).abs() <= 1e-9 * ex.abs().max(1.0));
        }
    }
}
