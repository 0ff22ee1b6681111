use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kothe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kothe"))
        .args(args)
        .env_remove("KOTHE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header row plus data rows of a CSV document, comment lines dropped.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let split = |l: &str| l.split(',').map(str::to_string).collect::<Vec<_>>();
    let header = split(lines.next().expect("header row"));
    (header, lines.map(split).collect())
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].clone()).collect()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn both_methods_give_identical_exponent_columns() {
    let out = kothe(&["diameters", "--alpha", "linear", "--p", "1", "--q", "2", "--count", "100", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 100);
    assert_eq!(column(&header, &rows, "oracle_exponent"), column(&header, &rows, "closed_exponent"));
}

#[test]
fn superproduct_regularity_passes() {
    let out = kothe(&["check", "--criterion", "regularity", "--alpha", "superproduct", "--N", "5000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["criterion"], "regularity");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 0);
}

#[test]
fn factorial_eadd_ratio_is_three_halves() {
    let out = kothe(&["verify", "--what", "eadd", "--alpha", "factorial", "--pairs", "1:2"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert!(!rows.is_empty());
    assert!(column(&header, &rows, "ratio").iter().all(|r| r == "3/2"));
}

#[test]
fn dn_violation_exits_one_with_witness() {
    let out = kothe(&["check", "--criterion", "dn", "--p", "2", "--lambda", "1/2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["witnesses"][0]["n"], 1);
}

#[test]
fn plot_data_spikes_at_red_positions() {
    let out = kothe(&["plot-data", "--alpha", "factorial", "--p", "1", "--q", "2", "--count", "30"]);
    let (header, rows) = csv_rows(&stdout(&out));
    let ratio = column(&header, &rows, "ratio");
    // n_a - 1 for the reds n_a = 4, 7, 11, 16, 22, 29
    for n in [3, 6, 10, 15, 21, 28] {
        assert_eq!(ratio[n], "3/2", "n={n}");
    }
}

#[test]
fn empty_plot_data_is_header_only() {
    let out = kothe(&["plot-data", "--p", "1", "--q", "2", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header[0], "n");
    assert!(rows.is_empty());
}

#[test]
fn json_keeps_rationals_as_strings() {
    let out = kothe(&["diameters", "--alpha", "factorial", "--p", "2", "--q", "3", "--count", "20", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["c_pq"], "-1/6");
    for row in v["rows"].as_array().unwrap() {
        assert!(row["exponent"].as_str().unwrap().contains('/'));
        assert!(row["coeff"].as_str().unwrap().contains('/'));
        assert!(row["approx_value"].is_number());
    }
    assert!(v["plan"]["reds"].is_array());
}

#[test]
fn output_is_deterministic_past_the_version_line() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, format: &str| {
        let path = dir.path().join(name);
        let out = kothe(&[
            "verify",
            "--what",
            "sandwich",
            "--alpha",
            "factorial",
            "--pairs",
            "1:2,2:5,3:7",
            "--count",
            "300",
            "--format",
            format,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        fs::read_to_string(path).unwrap()
    };
    let body = |s: String| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(run("a.csv", "csv")), body(run("b.csv", "csv")));
    assert_eq!(run("a.json", "json"), run("b.json", "json"));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_kothe"))
        .args(["grid", "--what", "band", "--p", "2", "--q", "4", "--count", "6"])
        .env("KOTHE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("grid-band-2-4-6.csv")).unwrap();
    let (header, rows) = csv_rows(&text);
    assert_eq!(column(&header, &rows, "n"), ["3", "5", "6", "8", "9", "12"]);
}

#[test]
fn error_classes_have_distinct_exit_codes() {
    let bad_alpha = kothe(&["diameters", "--alpha", "cubic", "--p", "1", "--q", "2"]);
    assert_eq!(bad_alpha.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_alpha.stderr).contains("unknown alpha spec"));

    let short = kothe(&["diameters", "--p", "1", "--q", "2", "--count", "100", "--method", "oracle", "--horizon", "40"]);
    assert_eq!(short.status.code(), Some(3));

    let blocker = tempfile::NamedTempFile::new().unwrap();
    let target = blocker.path().join("out.csv");
    let io = kothe(&["grid", "--out", target.to_str().unwrap()]);
    assert_eq!(io.status.code(), Some(4));

    let missing = kothe(&["diameters", "--alpha", "file:/nonexistent/alpha.txt", "--p", "1", "--q", "2"]);
    assert_eq!(missing.status.code(), Some(4));
}

fn write_alpha(dir: &Path, name: &str, values: &[String]) -> String {
    let path = dir.join(name);
    fs::write(&path, values.join("\n")).unwrap();
    format!("file:{}", path.display())
}

#[test]
fn file_backed_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let squares: Vec<String> = (1..=400u64).map(|n| (n * n).to_string()).collect();
    let spec = write_alpha(dir.path(), "squares.txt", &squares);
    let out = kothe(&["diameters", "--alpha", &spec, "--p", "1", "--q", "3", "--count", "40", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(column(&header, &rows, "oracle_exponent"), column(&header, &rows, "closed_exponent"));

    let flat = write_alpha(dir.path(), "flat.txt", &["1".into(), "2".into(), "2".into()]);
    let out = kothe(&["diameters", "--alpha", &flat, "--p", "1", "--q", "2", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let short = write_alpha(dir.path(), "short.txt", &squares[..10]);
    let out = kothe(&["diameters", "--alpha", &short, "--p", "1", "--q", "2", "--count", "50"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn delta_probe_on_the_theta_grid() {
    for (theta, member) in [("-1", true), ("-1/2", true), ("0", true), ("1/100", false), ("1/2", false)] {
        let out = kothe(&[
            "verify",
            "--what",
            "delta-probe",
            "--alpha",
            "superproduct",
            "--pairs",
            "1:2,2:3",
            "--count",
            "200",
            "--theta",
            theta,
            "--format",
            "json",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["coincide"], true);
        assert_eq!(v["kothe"]["member"], member, "theta {theta}");
        assert_eq!(v["power"]["member"], member);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kothe(&["check", "--criterion", "omega", "--p", "2"]).status.code(), Some(2));
    assert_eq!(kothe(&["verify", "--what", "sandwich", "--pairs", "3:2"]).status.code(), Some(2));
    assert_eq!(kothe(&["diameters", "--q", "2"]).status.code(), Some(2));
    assert_eq!(kothe(&["check", "--criterion", "dn", "--p", "1", "--lambda", "x"]).status.code(), Some(2));
}
