//! One builder per subcommand; each returns a [`Document`].

use kothe::diameters::power_series_diameters;
use kothe::grid::{band_element, in_band, k_min, line_of, n_at_s, s_index, validate_pair};
use kothe::kothe::{dn_bound, entry_coeff, omega_bound};
use kothe::logterm::exp_to_float;
use kothe::scalar::ceil_rational;
use kothe::verify::{aa_statistic, delta_membership_probe, eadd_ratio, edd_tail_check, verify_sandwich, PairProbe};
use kothe::{
    closedform_diameters, column_of, first_disagreement, oracle_certified, oracle_diameters, parse_rational, unpair,
    Alpha, CheckReport, DeclaredClass, DiameterTable, Error, Kothe, Rational, Scalar, Verdict, Witness,
};
use serde_json::{json, Value};

use crate::output::{approx, Document};
use crate::{
    CheckArgs, CliError, Criterion, DiameterArgs, GridArgs, GridTable, MatrixArgs, MethodArg, PlotArgs, VerifyArgs,
    VerifyWhat,
};

type Result<T> = std::result::Result<T, CliError>;

fn load_alpha(spec: &str) -> Result<Alpha> {
    Ok(Alpha::from_spec(spec)?)
}

fn parse_rat(flag: &str, text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| CliError::usage(format!("--{flag}: cannot parse {text:?} as a rational")))
}

fn need<T: Copy>(value: Option<T>, flag: &str, criterion: &str) -> Result<T> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for {criterion}")))
}

/// `"1:2,2:3"`
pub fn parse_pairs(text: &str) -> Result<Vec<(u64, u64)>> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::usage(format!("--pairs: expected p:q, got {item:?}"));
        let (p, q) = item.split_once(':').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        validate_pair(p, q)?;
        pairs.push((p, q));
    }
    if pairs.is_empty() {
        return Err(CliError::usage("--pairs: no pairs given"));
    }
    Ok(pairs)
}

fn stem(parts: &[&str]) -> String {
    parts
        .join("-")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn ex(x: &Rational) -> String {
    x.to_exact_string()
}

fn exp_approx(exponent: &Rational) -> String {
    approx(exp_to_float(exponent).value)
}

/// Fail beats inconclusive beats pass.
fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        _ => Verdict::Pass,
    })
}

pub fn grid(a: &GridArgs) -> Result<Document> {
    let count = a.count.to_string();
    let band_pair = || -> Result<(u64, u64)> {
        let p = need(a.p, "p", "band tables")?;
        let q = need(a.q, "q", "band tables")?;
        validate_pair(p, q)?;
        Ok((p, q))
    };
    let doc = match a.what {
        GridTable::Pairing => {
            let mut doc = Document::new("grid", stem(&["grid", "pairing", &count]), &["n", "x", "y", "column", "line"]);
            for n in 1..=a.count {
                let (x, y) = unpair(n);
                doc.rows.push(vec![n.to_string(), x.to_string(), y.to_string(), (x + 1).to_string(), (x + y).to_string()]);
            }
            doc
        }
        GridTable::Band => {
            let (p, q) = band_pair()?;
            let (ps, qs) = (p.to_string(), q.to_string());
            let mut doc =
                Document::new("grid", stem(&["grid", "band", &ps, &qs, &count]), &["i", "n", "x", "y", "column", "line"]);
            doc.summary("p", p);
            doc.summary("q", q);
            for i in 1..=a.count {
                let n = band_element(p, q, i);
                let (x, y) = unpair(n);
                doc.rows.push(vec![
                    i.to_string(),
                    n.to_string(),
                    x.to_string(),
                    y.to_string(),
                    column_of(n).to_string(),
                    line_of(n).to_string(),
                ]);
            }
            doc
        }
        GridTable::Steps => {
            let (p, q) = band_pair()?;
            let (ps, qs) = (p.to_string(), q.to_string());
            let mut doc = Document::new("grid", stem(&["grid", "steps", &ps, &qs, &count]), &["k", "s_k", "n_s_k"]);
            doc.summary("p", p);
            doc.summary("q", q);
            doc.summary("k_min", k_min(p, q));
            let start = k_min(p, q);
            for k in start..start + a.count as i64 {
                doc.rows.push(vec![k.to_string(), s_index(p, q, k).to_string(), n_at_s(p, q, k).to_string()]);
            }
            doc
        }
    };
    Ok(doc)
}

pub fn gen_matrix(a: &MatrixArgs) -> Result<Document> {
    if a.rows == 0 || a.cols == 0 {
        return Err(CliError::usage("--rows and --cols must be at least 1"));
    }
    let mut seq = load_alpha(&a.alpha)?;
    let mut doc = Document::new(
        "gen-matrix",
        stem(&["matrix", seq.name(), &a.rows.to_string(), &a.cols.to_string()]),
        &["k", "n", "column", "coeff", "alpha_n", "log_entry", "approx_log_entry"],
    );
    doc.summary("alpha", seq.name());
    doc.summary("entry", "a_{k,n} = exp(coeff * alpha_n)");
    doc.set("alpha", seq.name());
    for k in 1..=a.rows {
        for n in 1..=a.cols {
            let s = column_of(n);
            let coeff = entry_coeff::<Rational>(k, s);
            let alpha = seq.value(n as usize)?;
            let log_entry = coeff.mul_ref(&alpha);
            doc.rows.push(vec![
                k.to_string(),
                n.to_string(),
                s.to_string(),
                ex(&coeff),
                ex(&alpha),
                ex(&log_entry),
                approx(log_entry.to_f64_lossy()),
            ]);
        }
    }
    Ok(doc)
}

fn oracle_table(seq: &mut Alpha, p: u64, q: u64, count: usize, horizon: Option<usize>) -> Result<DiameterTable> {
    let Some(m) = horizon else {
        return Ok(oracle_certified(seq, p, q, count)?);
    };
    let mut table = oracle_diameters(seq, p, q, m)?;
    if table.is_empty() {
        return Err(Error::NothingCertified { prefix: m }.into());
    }
    if table.len() < count {
        return Err(Error::Uncertified { index: table.len(), horizon: table.certified_horizon() }.into());
    }
    table.truncate(count);
    Ok(table)
}

fn table_summary(doc: &mut Document, seq: &Alpha, table: &DiameterTable) {
    doc.summary("alpha", seq.name());
    doc.summary("p", table.p);
    doc.summary("q", table.q);
    doc.summary("c_pq", ex(&table.c()));
    doc.summary("count", table.len());
    doc.set("alpha", seq.name());
    doc.set("p", table.p);
    doc.set("q", table.q);
    doc.set("c_pq", ex(&table.c()));
    doc.set("count", table.len());
    if let Some(plan) = &table.plan {
        doc.summary("reds", plan.reds.len());
        doc.summary("a0", plan.a0.map_or("none".into(), |a| a.to_string()));
        doc.summary("tail_start", plan.tail_start.map_or("none".into(), |t| t.to_string()));
        doc.set("plan", serde_json::to_value(plan).expect("plan serializes"));
    }
}

pub fn diameters(a: &DiameterArgs) -> Result<Document> {
    if a.count == 0 {
        return Err(CliError::usage("--count must be at least 1"));
    }
    let mut seq = load_alpha(&a.alpha)?;
    let (p, q) = (a.p, a.q);
    validate_pair(p, q)?;
    let method = match a.method {
        MethodArg::Oracle => "oracle",
        MethodArg::Closed => "closed",
        MethodArg::Both => "both",
    };
    let name = stem(&["diameters", seq.name(), &p.to_string(), &q.to_string(), &a.count.to_string(), method]);

    if a.method == MethodArg::Both {
        let closed = closedform_diameters(&mut seq, p, q, a.count)?;
        let oracle = oracle_table(&mut seq, p, q, a.count, a.horizon)?;
        let mut doc = Document::new(
            "diameters",
            name,
            &[
                "n",
                "oracle_coeff",
                "oracle_alpha_index",
                "oracle_exponent",
                "closed_coeff",
                "closed_alpha_index",
                "closed_exponent",
                "segment",
                "approx_value",
                "certified",
            ],
        );
        table_summary(&mut doc, &seq, &closed);
        doc.summary("method", method);
        doc.set("method", method);
        let disagreement = first_disagreement(&closed, &oracle, &mut seq)?;
        doc.summary("first_disagreement", disagreement.map_or("none".into(), |n| n.to_string()));
        for (n, (o, c)) in oracle.entries.iter().zip(&closed.entries).enumerate() {
            let oe = o.value.exponent_extending(&mut seq)?;
            let ce = c.value.exponent_extending(&mut seq)?;
            doc.rows.push(vec![
                n.to_string(),
                ex(&o.value.coeff),
                o.value.index.to_string(),
                ex(&oe),
                ex(&c.value.coeff),
                c.value.index.to_string(),
                ex(&ce),
                c.segment.to_string(),
                exp_approx(&ce),
                "true".into(),
            ]);
        }
        doc.set_verdict(if disagreement.is_none() { Verdict::Pass } else { Verdict::Fail });
        return Ok(doc);
    }

    let table = match a.method {
        MethodArg::Oracle => oracle_table(&mut seq, p, q, a.count, a.horizon)?,
        _ => closedform_diameters(&mut seq, p, q, a.count)?,
    };
    let mut doc = Document::new(
        "diameters",
        name,
        &["n", "coeff", "alpha_index", "exponent", "segment", "approx_value", "certified"],
    );
    table_summary(&mut doc, &seq, &table);
    doc.summary("method", method);
    doc.set("method", method);
    if let Some(m) = table.prefix_len {
        doc.summary("oracle_prefix", m);
        doc.set("oracle_prefix", m);
    }
    for (n, e) in table.entries.iter().enumerate() {
        let exponent = e.value.exponent_extending(&mut seq)?;
        doc.rows.push(vec![
            n.to_string(),
            ex(&e.value.coeff),
            e.value.index.to_string(),
            ex(&exponent),
            e.segment.to_string(),
            exp_approx(&exponent),
            "true".into(),
        ]);
    }
    Ok(doc)
}

pub fn check(a: &CheckArgs) -> Result<Document> {
    let mut fam = Kothe::new(load_alpha(&a.alpha)?);
    let horizon = |default: u64| a.horizon.unwrap_or(default);
    let report = match a.criterion {
        Criterion::Nuclearity => fam.check_nuclearity(a.k.unwrap_or(1), horizon(10_000))?,
        Criterion::Dn => {
            let p = need(a.p, "p", "dn")?;
            let lambda = match &a.lambda {
                Some(t) => parse_rat("lambda", t)?,
                None => dn_bound::<Rational>(p) / Rational::from_u64(2),
            };
            fam.check_dn(p, &lambda, horizon(10_000))?
        }
        Criterion::Omega => {
            let p = need(a.p, "p", "omega")?;
            let k = need(a.k, "k", "omega")?;
            let j = match &a.j {
                Some(t) => parse_rat("j", t)?,
                None => Rational::from_integer(ceil_rational(&omega_bound::<Rational>(p, k))),
            };
            fam.check_omega(p, k, &j, horizon(10_000))?
        }
        Criterion::D2 => {
            let text = a.j.as_deref().ok_or_else(|| CliError::usage("--j is required for d2"))?;
            let j: u64 = text.parse().map_err(|_| CliError::usage(format!("--j: d2 needs a column index, got {text:?}")))?;
            let bound = parse_rat("bound", &a.bound)?;
            let w = fam.check_d2_failure(j, &bound, a.cap)?;
            let mut report = CheckReport::new("d2").param("j", j).param("B", ex(&bound)).param("cap", a.cap);
            report.witnesses.push(Witness::new(
                w.n,
                format!("n in I_{j} (row {}) with coeff*alpha_n > B, so (d2) fails", w.y),
                ex(&w.exponent),
                ex(&bound),
            ));
            report.detail("coeff", ex(&w.coeff));
            report
        }
        Criterion::Regularity => fam.check_regularity(horizon(5000), a.rows)?,
        Criterion::Stability => {
            let n = horizon(1000) as usize;
            let c = fam.seq.classify_prefix(n)?;
            let mut report = CheckReport::new("stability").param("N", n).param("declared", format!("{:?}", c.declared));
            let pair = |(i, v): &(usize, Rational)| format!("{} at n={i}", ex(v));
            report.detail("max_doubling_ratio", pair(&c.max_doubling_ratio));
            report.detail("max_successor_ratio", pair(&c.max_successor_ratio));
            report.detail("min_successor_ratio_last_decade", pair(&c.min_successor_ratio_last_decade));
            report.detail("increasing_from", c.increasing_from.map_or("none".into(), |i| i.to_string()));
            report.detail("stable_consistent", c.stable_consistent);
            report.detail("unstable_consistent", c.unstable_consistent);
            report.verdict = match c.declared {
                DeclaredClass::Unspecified => Verdict::Inconclusive,
                _ if c.consistent_with_declared => Verdict::Pass,
                _ => Verdict::Fail,
            };
            report
        }
    };

    let mut doc = Document::new(
        "check",
        stem(&["check", &report.criterion, fam.seq.name()]),
        &["n", "detail", "lhs", "rhs"],
    );
    doc.rows_key = "witnesses";
    doc.summary("criterion", &report.criterion);
    doc.summary("alpha", fam.seq.name());
    for (k, v) in &report.params {
        doc.summary(k, v);
    }
    for (k, v) in &report.details {
        doc.summary(k, v);
    }
    doc.set("criterion", report.criterion.clone());
    doc.set("alpha", fam.seq.name());
    doc.set("params", json!(report.params));
    doc.set("details", json!(report.details));
    for w in &report.witnesses {
        doc.rows.push(vec![w.n.to_string(), w.detail.clone(), w.lhs.clone(), w.rhs.clone()]);
    }
    doc.set_verdict(report.verdict);
    Ok(doc)
}

/// Closed-form tables, one worker per pair; results keep the pair order.
fn closed_tables(seq: &Alpha, pairs: &[(u64, u64)], count: usize) -> Result<Vec<DiameterTable>> {
    std::thread::scope(|scope| {
        let workers: Vec<_> = pairs
            .iter()
            .map(|&(p, q)| {
                let mut local = seq.clone();
                scope.spawn(move || closedform_diameters(&mut local, p, q, count))
            })
            .collect();
        workers
            .into_iter()
            .map(|w| w.join().expect("table worker panicked").map_err(CliError::from))
            .collect()
    })
}

fn parse_window(text: &str) -> Result<std::ops::Range<usize>> {
    let bad = || CliError::usage(format!("--window: expected a..b, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok(a..b)
}

pub fn verify(a: &VerifyArgs) -> Result<Document> {
    if a.count == 0 {
        return Err(CliError::usage("--count must be at least 1"));
    }
    let mut seq = load_alpha(&a.alpha)?;
    let pairs = parse_pairs(&a.pairs)?;
    let theta = parse_rat("theta", &a.theta)?;
    let window = a.window.as_deref().map(parse_window).transpose()?;
    let tables = closed_tables(&seq, &pairs, a.count)?;
    let what = match a.what {
        VerifyWhat::Sandwich => "sandwich",
        VerifyWhat::Eadd => "eadd",
        VerifyWhat::Aa => "aa",
        VerifyWhat::EddTail => "edd-tail",
        VerifyWhat::DeltaProbe => "delta-probe",
    };
    let pair_text = pairs.iter().map(|(p, q)| format!("{p}:{q}")).collect::<Vec<_>>().join(",");
    let name = stem(&["verify", what, seq.name(), &pair_text, &a.count.to_string()]);
    let header = |doc: &mut Document, seq: &Alpha| {
        doc.summary("what", what);
        doc.summary("alpha", seq.name());
        doc.summary("pairs", &pair_text);
        doc.summary("count", a.count);
        doc.set("what", what);
        doc.set("alpha", seq.name());
        doc.set("pairs", pair_text.clone());
        doc.set("count", a.count);
    };

    let doc = match a.what {
        VerifyWhat::Sandwich => {
            let mut doc = Document::new(
                "verify",
                name,
                &["p", "q", "horizon", "n_found", "upper_violations", "lower_violations", "max_lower_violation", "verdict"],
            );
            header(&mut doc, &seq);
            let mut verdicts = Vec::new();
            for t in &tables {
                let r = verify_sandwich(t, &mut seq)?;
                let opt = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
                doc.rows.push(vec![
                    r.p.to_string(),
                    r.q.to_string(),
                    r.horizon.to_string(),
                    opt(r.n_found),
                    r.upper_violations.to_string(),
                    r.lower_violations.to_string(),
                    opt(r.max_lower_violation),
                    r.verdict.to_string(),
                ]);
                verdicts.push(r.verdict);
            }
            doc.set_verdict(combine(verdicts));
            doc
        }
        VerifyWhat::Eadd => {
            let mut doc =
                Document::new("verify", name, &["p", "q", "a", "n_a", "ratio", "approx_ratio", "law", "equal"]);
            header(&mut doc, &seq);
            let mut all_equal = true;
            for t in &tables {
                let law = Rational::from_u64(1) - t.c();
                for row in eadd_ratio(t, &mut seq)? {
                    let equal = row.ratio == law;
                    all_equal &= equal;
                    doc.rows.push(vec![
                        t.p.to_string(),
                        t.q.to_string(),
                        row.a.to_string(),
                        row.n_a.to_string(),
                        ex(&row.ratio),
                        approx(row.ratio.to_f64_lossy()),
                        ex(&law),
                        equal.to_string(),
                    ]);
                }
            }
            doc.set_verdict(if all_equal { Verdict::Pass } else { Verdict::Fail });
            doc
        }
        VerifyWhat::Aa => {
            let mut doc = Document::new("verify", name, &["p", "q", "n", "ratio", "approx_ratio", "red"]);
            header(&mut doc, &seq);
            doc.summary("note", "finite-window proxy; it can refute coincidence of the diametral dimensions, never prove it");
            let window = window.unwrap_or(0..a.count);
            let stat = aa_statistic(&tables, &mut seq, window)?;
            let mut per_pair = Vec::new();
            for pair in &stat.pairs {
                let fmt = |x: &Option<(usize, Rational)>| x.as_ref().map_or("none".into(), |(n, v)| format!("{} at n={n}", ex(v)));
                doc.summary(&format!("{}:{} sup", pair.p, pair.q), fmt(&pair.sup));
                doc.summary(&format!("{}:{} red_min", pair.p, pair.q), fmt(&pair.red_min));
                doc.summary(&format!("{}:{} red_law", pair.p, pair.q), ex(&pair.red_law));
                per_pair.push(json!({
                    "p": pair.p,
                    "q": pair.q,
                    "sup": fmt(&pair.sup),
                    "red_min": fmt(&pair.red_min),
                    "red_sup": fmt(&pair.red_sup),
                    "red_law": ex(&pair.red_law),
                    "red_nondecaying": pair.red_nondecaying(),
                }));
                let table = tables.iter().find(|t| (t.p, t.q) == (pair.p, pair.q)).expect("one table per pair");
                let red_coeff = table.c() - Rational::from_u64(1);
                for (n, ratio) in &pair.ratios {
                    let entry = &table.entries[*n].value;
                    let red = in_band(pair.p, pair.q, *n as u64 + 1) && entry.index == n + 1 && entry.coeff == red_coeff;
                    doc.rows.push(vec![
                        pair.p.to_string(),
                        pair.q.to_string(),
                        n.to_string(),
                        ex(ratio),
                        approx(ratio.to_f64_lossy()),
                        red.to_string(),
                    ]);
                }
            }
            let proxy = stat.proxy.as_ref().map_or("none".into(), ex);
            doc.summary("proxy", &proxy);
            doc.set("proxy", proxy);
            doc.set("pair_statistics", Value::Array(per_pair));
            if seq.declared() == DeclaredClass::Unstable {
                let flags: Vec<Option<bool>> = stat.pairs.iter().map(|p| p.red_nondecaying()).collect();
                let verdict = if flags.contains(&Some(false)) {
                    Verdict::Fail
                } else if flags.contains(&Some(true)) {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                };
                doc.set_verdict(verdict);
            }
            doc
        }
        VerifyWhat::EddTail => {
            let mut doc =
                Document::new("verify", name, &["p", "q", "verdict", "threshold", "closed_form_tail_start", "mismatches"]);
            header(&mut doc, &seq);
            let mut verdicts = Vec::new();
            for t in &tables {
                let r = edd_tail_check(t, &mut seq)?;
                let get = |k: &str| r.details.get(k).cloned().unwrap_or_default();
                doc.rows.push(vec![
                    t.p.to_string(),
                    t.q.to_string(),
                    r.verdict.to_string(),
                    get("threshold"),
                    get("closed_form_tail_start"),
                    get("mismatches"),
                ]);
                verdicts.push(r.verdict);
            }
            doc.set_verdict(combine(verdicts));
            doc
        }
        VerifyWhat::DeltaProbe => {
            let power = pairs
                .iter()
                .map(|&(p, q)| power_series_diameters::<Rational>(p, q, a.count))
                .collect::<kothe::Result<Vec<_>>>()?;
            let probe = delta_membership_probe(&theta, &tables, &power, &mut seq)?;
            let mut doc = Document::new(
                "verify",
                name,
                &["family", "p", "q", "boundedness", "sup_n", "sup_exponent", "approx_sup_exponent", "empirical_consistent"],
            );
            header(&mut doc, &seq);
            doc.summary("theta", ex(&theta));
            doc.set("theta", ex(&theta));
            let member = |m: Option<bool>| m.map_or("undecided".to_string(), |b| if b { "member" } else { "non-member" }.into());
            for (family, verdict) in [("kothe", &probe.kothe), ("power", &probe.power)] {
                doc.summary(family, member(verdict.member));
                if let Some(p) = verdict.witness_p {
                    doc.summary(&format!("{family} witness_p"), p);
                }
                doc.summary(&format!("{family} reason"), &verdict.reason);
                doc.set(family, serde_json::to_value(verdict).expect("verdict serializes"));
            }
            let rows = |family: &str, probes: &[PairProbe<Rational>], doc: &mut Document| {
                for pp in probes {
                    let (n, v) = match &pp.empirical_sup {
                        Some((n, v)) => (n.to_string(), Some(v)),
                        None => (String::new(), None),
                    };
                    doc.rows.push(vec![
                        family.to_string(),
                        pp.p.to_string(),
                        pp.q.to_string(),
                        format!("{:?}", pp.verdict).to_lowercase(),
                        n,
                        v.map_or(String::new(), ex),
                        v.map_or(String::new(), |v| approx(v.to_f64_lossy())),
                        pp.empirical_consistent.to_string(),
                    ]);
                }
            };
            rows("kothe", &probe.kothe_pairs, &mut doc);
            rows("power", &probe.power_pairs, &mut doc);
            doc.summary("coincide", probe.coincide());
            doc.set("coincide", probe.coincide());
            doc.set_verdict(if probe.coincide() {
                Verdict::Pass
            } else if probe.kothe.member.is_none() {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            });
            doc
        }
    };
    Ok(doc)
}

pub fn plot_data(a: &PlotArgs) -> Result<Document> {
    let mut seq = load_alpha(&a.alpha)?;
    validate_pair(a.p, a.q)?;
    let mut doc = Document::new(
        "plot-data",
        stem(&["plot", seq.name(), &a.p.to_string(), &a.q.to_string(), &a.count.to_string()]),
        &[
            "n",
            "neg_log_d",
            "approx_neg_log_d",
            "alpha_next",
            "approx_alpha_next",
            "ratio",
            "approx_ratio",
        ],
    );
    doc.summary("alpha", seq.name());
    doc.summary("p", a.p);
    doc.summary("q", a.q);
    doc.set("alpha", seq.name());
    doc.set("p", a.p);
    doc.set("q", a.q);
    if a.count == 0 {
        return Ok(doc);
    }
    let table = closedform_diameters(&mut seq, a.p, a.q, a.count)?;
    for n in 0..table.len() {
        let eps = table.epsilon(n)?.exponent_extending(&mut seq)?;
        let next = seq.value(n + 1)?;
        let ratio = eps.clone() / next.clone();
        doc.rows.push(vec![
            n.to_string(),
            ex(&eps),
            approx(eps.to_f64_lossy()),
            ex(&next),
            approx(next.to_f64_lossy()),
            ex(&ratio),
            approx(ratio.to_f64_lossy()),
        ]);
    }
    Ok(doc)
}
