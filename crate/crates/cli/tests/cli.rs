use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const HISTORICAL: &str = "\
var L = 106.65;  dL/dt = 0.02549605 * L;  role labor L;
var K = 100.70;  dK/dt = 0.06472564 * K;  role capital K;
var Y = 106.08;  dY/dt = 0.03592651 * Y;  role output Y;
";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }

    fn error(&self) -> Value {
        serde_json::from_str(&self.stderr).unwrap_or_else(|e| panic!("{e}: {}", self.stderr))
    }
}

fn prodfn(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_prodfn"))
        .args(args)
        .env("PRODFN_LOG", "off")
        .output()
        .unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Exact exponentials for `years` starting 1899.
fn synthetic_csv(years: usize, ln0: [f64; 3], rates: [f64; 3]) -> String {
    let mut csv = String::from("year,L,K,Y\n");
    for t in 0..years {
        let v = |i: usize| (ln0[i] + rates[i] * t as f64).exp();
        csv.push_str(&format!("{},{},{},{}\n", 1899 + t, v(0), v(1), v(2)));
    }
    csv
}

fn fit_args(csv: &Path) -> Vec<&str> {
    vec!["fit", "--csv", s(csv), "--year-col", "year", "--labor-col", "L", "--capital-col", "K", "--output-col", "Y"]
}

#[test]
fn fit_recovers_synthetic_generators() {
    let dir = TempDir::new().unwrap();
    let rates = [0.02, 0.065, 0.035];
    let ln0 = [4.6, 4.7, 4.65];
    let csv = write(&dir, "d.csv", &synthetic_csv(24, ln0, rates));
    let r = prodfn(&fit_args(&csv));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    assert_eq!(j["base_year"], 1899);
    for (key, want) in ["b1", "b2", "b3"].iter().zip(rates) {
        assert!(rel(num(&j["model"][key]), want) <= 1e-10);
    }
    for key in ["labor", "capital", "output"] {
        assert!(num(&j["diagnostics"][key]["r_squared"]) >= 1.0 - 1e-12);
        assert_eq!(j["diagnostics"][key]["n_points"], 24);
    }
}

#[test]
fn fit_two_rows() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", "year,L,K,Y\n2000,100,100,100\n2001,105,110,102\n");
    let j = prodfn(&fit_args(&csv)).json();
    assert_eq!(j["diagnostics"]["labor"]["n_points"], 2);
    assert_eq!(num(&j["diagnostics"]["labor"]["r_squared"]), 1.0);
    assert!(rel(num(&j["model"]["b1"]), 1.05f64.ln()) < 1e-12);
}

#[test]
fn fit_normalize_puts_intercepts_at_log_100() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", &synthetic_csv(10, [1.0, 2.0, 3.0], [0.01, 0.02, 0.03]));
    let mut args = fit_args(&csv);
    args.push("--normalize");
    let j = prodfn(&args).json();
    assert_eq!(j["normalized"], true);
    for key in ["ln_L0", "ln_K0", "ln_Y0"] {
        assert!((num(&j["model"][key]) - 100f64.ln()).abs() < 1e-12);
    }
}

#[test]
fn fit_errors_are_data_errors() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", "year,L,K,Y\n1899,100,0,100\n");
    let r = prodfn(&fit_args(&csv));
    assert_eq!(r.code, 3);
    let e = r.error();
    assert_eq!(e["error"]["kind"], "data");
    assert!(e["error"]["message"].as_str().unwrap().contains("row 2"));

    let csv = write(&dir, "short.csv", "year,L,K,Y\n1899,100,100,100\n");
    assert_eq!(prodfn(&fit_args(&csv)).code, 3);
    let missing = dir.path().join("nope.csv");
    assert_eq!(prodfn(&fit_args(&missing)).code, 3);
}

#[test]
fn derive_historical_cobb_douglas_default_alpha() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let r = prodfn(&["derive", "--from-spec", s(&spec), "--family", "cobb-douglas"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    let f = &j["functions"][0]["function"];
    assert_eq!(f["kind"], "cobb_douglas");
    assert!((num(&f["alpha"]) - 0.7341175376).abs() < 1e-9);
    assert!((num(&f["beta"]) - 0.2658824627).abs() < 1e-9);
    assert!((num(&j["crs_elasticities"]["alpha"]) - 0.7341175376).abs() < 1e-9);
    assert!((num(&f["A"]) - 1.01).abs() < 0.005);
    assert!(num(&j["functions"][0]["max_relative_deviation"]) <= 1e-10);
    assert_eq!(j["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn derive_ces_on_equal_factor_growth() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "m.model",
        "var L = 1; dL/dt = 0.5 * L; var K = 1; dK/dt = 0.5 * K; var Y = 1; dY/dt = 0.25 * Y;\n\
         role labor L; role capital K; role output Y;\n",
    );
    let r = prodfn(&["derive", "--from-spec", s(&spec), "--family", "ces", "--alpha", "0.4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    let f = &j["functions"][0]["function"];
    assert_eq!(f["kind"], "ces");
    assert_eq!((num(&f["A"]), num(&f["alpha"]), num(&f["p"]), num(&f["v"])), (1.0, 0.4, 2.0, 0.5));
    assert_eq!(num(&f["sigma"]), -1.0);
    assert!(j["crs_elasticities"].is_null());
    let codes: Vec<&str> = j["warnings"].as_array().unwrap().iter().map(|w| w["code"].as_str().unwrap()).collect();
    assert_eq!(codes, vec!["non_standard_substitution"]);
}

#[test]
fn derive_fundamental_invariants() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let j = prodfn(&["derive", "--from-spec", s(&spec), "--family", "fundamental"]).json();
    let fs = j["functions"].as_array().unwrap();
    assert_eq!(fs.len(), 2);
    assert_eq!(fs[0]["function"]["input"], "labor");
    assert_eq!(fs[1]["function"]["input"], "capital");
    assert!(rel(num(&fs[0]["function"]["exponent"]), 0.03592651 / 0.02549605) < 1e-15);
    assert!(rel(num(&fs[1]["function"]["exponent"]), 0.03592651 / 0.06472564) < 1e-15);
    assert!(j["alpha"].is_null());
}

#[test]
fn derive_ces_like_and_fallback_share() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "m.model",
        "var L = 100; dL/dt = 0.02 * L; var K = 100; dK/dt = 0.06 * K; var Y = 100; dY/dt = 0.08 * Y;\n\
         role labor L; role capital K; role output Y;\n",
    );
    let j = prodfn(&["derive", "--from-spec", s(&spec), "--family", "ces-like"]).json();
    assert_eq!(num(&j["alpha"]), 0.5);
    let codes: Vec<&str> = j["warnings"].as_array().unwrap().iter().map(|w| w["code"].as_str().unwrap()).collect();
    assert_eq!(codes, vec!["elasticity_out_of_range", "fallback_share"]);
    assert!(num(&j["functions"][0]["max_relative_deviation"]) <= 1e-9);
}

#[test]
fn derive_error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let r = prodfn(&["derive", "--from-spec", s(&spec), "--family", "ces"]);
    assert_eq!(r.code, 4);
    assert!(r.error()["error"]["message"].as_str().unwrap().contains("not reducible"));

    let flat = write(
        &dir,
        "flat.model",
        "var L = 1; dL/dt = 0 * L; var K = 1; dK/dt = 0.1 * K; var Y = 1; dY/dt = 0.1 * Y;\n\
         role labor L; role capital K; role output Y;\n",
    );
    let r = prodfn(&["derive", "--from-spec", s(&flat), "--family", "fundamental"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("b1 is zero"));

    assert_eq!(prodfn(&["derive", "--from-spec", s(&spec), "--family", "cobb-douglas", "--alpha", "1.5"]).code, 2);
    assert_eq!(prodfn(&["derive", "--from-spec", s(&spec), "--family", "quadratic"]).code, 2);
    assert_eq!(prodfn(&["derive", "--family", "ces"]).code, 2);
    let bad = write(&dir, "bad.model", "var L = 1;\ndL/dt = 0.1 * K;\n");
    let r = prodfn(&["derive", "--from-spec", s(&bad), "--family", "ces"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("2:15"));
}

#[test]
fn fit_then_derive_preserves_model_exactly() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", &synthetic_csv(24, [4.6, 4.7, 4.65], [0.0211, 0.0637, 0.0333]));
    let fit = prodfn(&fit_args(&csv));
    let fit_path = write(&dir, "fit.json", &fit.stdout);
    let derive = prodfn(&["derive", "--from-fit", s(&fit_path), "--family", "cobb-douglas"]);
    assert_eq!(derive.code, 0, "{}", derive.stderr);
    assert_eq!(fit.json()["model"], derive.json()["model"]);
}

#[test]
fn check_self_derived_and_perturbed() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let derived = prodfn(&["derive", "--from-spec", s(&spec), "--family", "ces-like", "--alpha", "0.5"]);
    let report = write(&dir, "derive.json", &derived.stdout);
    let table = dir.path().join("table.csv");
    let r = prodfn(&[
        "check", "--model", s(&spec), "--function", s(&report), "--grid", "0:24:0.5", "--table", s(&table),
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let j = r.json();
    assert!(num(&j["max_relative_deviation"]) <= 1e-10);
    assert_eq!(j["table"].as_array().unwrap().len(), 49);
    let csv = std::fs::read_to_string(&table).unwrap();
    assert!(csv.starts_with("t,Y_model,Y_fn,rel_dev\n"));
    assert_eq!(csv.lines().count(), 50);

    let mut f: Value = derived.json()["functions"][0]["function"].clone();
    f["eK"] = Value::from(num(&f["eK"]) * 1.01);
    let perturbed = write(&dir, "perturbed.json", &f.to_string());
    let r = prodfn(&["check", "--model", s(&spec), "--function", s(&perturbed), "--grid", "0:24:1"]);
    assert_eq!(r.code, 1);
    assert!(num(&r.json()["max_relative_deviation"]) > 1e-9);
    assert_eq!(r.json()["pass"], false);
}

#[test]
fn check_single_point_at_origin() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let j = prodfn(&["derive", "--from-spec", s(&spec), "--family", "cobb-douglas", "--alpha", "0.2"]).json();
    let mut f = j["functions"][0]["function"].clone();
    f["beta"] = Value::from(num(&f["beta"]) + 0.05);
    let ln = j["model"].clone();
    let a = (num(&ln["ln_Y0"]) - num(&f["alpha"]) * num(&ln["ln_L0"]) - num(&f["beta"]) * num(&ln["ln_K0"])).exp();
    f["A"] = Value::from(a);
    let path = write(&dir, "f.json", &f.to_string());
    let r = prodfn(&["check", "--model", s(&spec), "--function", s(&path), "--grid", "0:0:1"]);
    assert_eq!(r.code, 0);
    assert!(num(&r.json()["max_relative_deviation"]) <= 1e-14);
    let r = prodfn(&["check", "--model", s(&spec), "--function", s(&path), "--grid", "0:5:1"]);
    assert_eq!(r.code, 1);
}

#[test]
fn check_rejects_malformed_function() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let f = write(&dir, "f.json", "{\"kind\": \"cobb_douglas\", \"A\": 1");
    let r = prodfn(&["check", "--model", s(&spec), "--function", s(&f), "--grid", "0:1:1"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("malformed JSON"));
    let f = write(&dir, "g.json", "{\"kind\": \"cobb_douglas\", \"A\": 1, \"alpha\": 2, \"beta\": 0}");
    assert_eq!(prodfn(&["check", "--model", s(&spec), "--function", s(&f), "--grid", "0:1:1"]).code, 3);
    assert_eq!(prodfn(&["check", "--model", s(&spec), "--function", s(&f), "--grid", "0:1:0"]).code, 2);
}

#[test]
fn simulate_rows() {
    let dir = TempDir::new().unwrap();
    let model = write(
        &dir,
        "m.json",
        r#"{"base_year": 1899, "b1": 0.02549605, "b2": 0.06472564, "b3": 0.03592651,
            "ln_L0": 4.66953290, "ln_K0": 4.61213588, "ln_Y0": 4.66415363}"#,
    );
    let r = prodfn(&["simulate", "--model", s(&model), "--grid", "0:23:1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<Vec<f64>> = r
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(r.stdout.lines().next(), Some("t,L,K,Y"));
    assert_eq!(rows.len(), 24);
    assert_eq!(rows[0], vec![0.0, 4.66953290f64.exp(), 4.61213588f64.exp(), 4.66415363f64.exp()]);
    assert!(rel(rows[23][1], (4.66953290 + 23.0 * 0.02549605f64).exp()) < 1e-15);

    let flat = write(
        &dir,
        "flat.model",
        "var L = 3; dL/dt = 0 * L; var K = 4; dK/dt = 0 * K; var Y = 5; dY/dt = 0 * Y;\n\
         role labor L; role capital K; role output Y;\n",
    );
    let out = prodfn(&["simulate", "--model", s(&flat), "--grid", "0:10:2"]).stdout;
    let bodies: Vec<&str> = out.lines().skip(1).map(|l| l.split_once(',').unwrap().1).collect();
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));

    let r = prodfn(&["simulate", "--model", s(&model), "--grid", "0:100000:100000"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("overflows"));
}

#[test]
fn export_round_trips_values() {
    let dir = TempDir::new().unwrap();
    let text = "year,L,K\n1899,100,0.1\n1900,105.123456789012345,3e-7\n1901,1e300,12\n";
    let csv = write(&dir, "d.csv", text);
    let r = prodfn(&["export", "--csv", s(&csv), "--col", "L", "--col", "K"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let again = write(&dir, "e.csv", &r.stdout);
    let r2 = prodfn(&["export", "--csv", s(&again), "--col", "L", "--col", "K"]);
    assert_eq!(r.stdout, r2.stdout);
    let parse = |t: &str| -> Vec<Vec<f64>> {
        t.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
    };
    let a = parse(text);
    let b = parse(&r.stdout);
    assert!(a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "m.model", HISTORICAL);
    let args = ["derive", "--from-spec", s(&spec), "--family", "ces-like"];
    assert_eq!(prodfn(&args).stdout, prodfn(&args).stdout);
    let keys: Vec<String> = prodfn(&args).stdout.lines().filter(|l| l.starts_with("  \"")).map(String::from).collect();
    assert!(keys[0].contains("\"command\""));
    assert!(keys[1].contains("\"family\""));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(prodfn(&[]).code, 2);
    let r = prodfn(&["fit"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.error()["error"]["kind"], "usage");
    assert!(r.error()["error"]["message"].as_str().unwrap().contains("--csv"));
    assert_eq!(prodfn(&["frobnicate"]).code, 2);
    assert_eq!(prodfn(&["--help"]).code, 0);
}
