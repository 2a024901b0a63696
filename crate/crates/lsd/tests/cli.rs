use serde_json::Value;
use std::f64::consts::{LN_2, PI};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn lsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsd")).args(args).env_remove("LSD_GRID_POINTS").output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const G4: &str = r#"{"type": "gaussian", "mean": 0, "var": 4}"#;
const STD: &str = r#"{"type": "gaussian", "mean": 0, "var": 1}"#;

/// `E Δ(|Z|)` by a trapezoid sum.
fn expected_delta_abs() -> f64 {
    let h = 1e-4;
    let s: f64 = (0..=120_000)
        .map(|k| {
            let z = k as f64 * h;
            let w = if k == 0 { 0.5 } else { 1.0 };
            w * (z - z.ln_1p()) * (-0.5 * z * z).exp()
        })
        .sum();
    2.0 * s * h / (2.0 * PI).sqrt()
}

fn distance(path: &Path, metric: &str) -> f64 {
    let out = lsd(&["distance", "--dist", path.to_str().unwrap(), "--metric", metric]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["metric"], metric);
    assert!(v["error"].as_f64().unwrap() >= 0.0);
    v["value"].as_f64().unwrap()
}

#[test]
fn distances_of_a_wide_gaussian() {
    let dir = TempDir::new().unwrap();
    let g4 = write(dir.path(), "g4.json", G4);
    let kl = distance(&g4, "kl");
    assert!((kl - (3.0 - 2.0 * LN_2) / 2.0).abs() < 1e-9, "{kl}");
    assert!((kl - 0.806_852_8).abs() < 1e-7);
    let w1 = distance(&g4, "w1");
    let t = distance(&g4, "tdelta");
    assert!(t > 0.0 && t <= w1);
    assert!((t - expected_delta_abs()).abs() < 1e-8, "{t}");
    assert!((w1 - (2.0 / PI).sqrt()).abs() < 1e-8);
    assert!((distance(&g4, "w2") - 1.0).abs() < 1e-9);
    assert!((distance(&g4, "fisher") - 2.25).abs() < 1e-9);
    assert!((distance(&g4, "deficit") - (1.125 - kl)).abs() < 1e-9);
    let std = write(dir.path(), "std.json", STD);
    assert!(distance(&std, "w2").abs() < 1e-12);
    assert!(distance(&std, "tv").abs() < 1e-12);
}

#[test]
fn distance_against_a_file_reference() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", r#"{"type": "gaussian", "mean": 1, "var": 1}"#);
    let b = write(dir.path(), "b.json", r#"{"type": "gaussian", "mean": -1, "var": 1}"#);
    let out = lsd(&["distance", "--dist", a.to_str().unwrap(), "--metric", "kl", "--ref", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!((json(&out)["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn product_transport_needs_one_dimension() {
    let dir = TempDir::new().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"type": "product", "factors": [{"type": "gaussian", "mean": 0, "var": 4}, {"type": "gaussian", "mean": 3, "var": 1}]}"#,
    );
    assert!((distance(&p, "w2") - 10f64.sqrt()).abs() < 1e-8);
    let out = lsd(&["distance", "--dist", p.to_str().unwrap(), "--metric", "w1"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

fn certify(path: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["certify", "--dist", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = lsd(&args);
    (code(&out), json(&out))
}

fn find<'a>(list: &'a Value, id: &str) -> Option<&'a Value> {
    list.as_array().unwrap().iter().find(|c| c["bound_id"] == id)
}

#[test]
fn certify_standard_gaussian() {
    let dir = TempDir::new().unwrap();
    let (status, r) = certify(&write(dir.path(), "std.json", STD), &[]);
    assert_eq!(status, 0);
    assert_eq!(r["counts"]["fail"], 0);
    assert!(r["failed"].as_array().unwrap().is_empty());
    let certs = r["certificates"].as_array().unwrap();
    for c in certs {
        assert_eq!(c["pass"], true, "{c}");
        let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["bound_id", "lhs", "rhs", "slack", "pass", "tol", "constants", "notes"] {
            assert!(keys.contains(&k), "{k} missing");
        }
    }
    for id in ["lsi", "thm1.1-a", "talagrand", "hwi", "thm1.3", "eq1.8", "pinsker"] {
        let c = find(&r["certificates"], id).unwrap();
        assert!(c["slack"].as_f64().unwrap().abs() < 1e-8, "{c}");
    }
}

#[test]
fn moment_hypothesis_skips_on_a_wide_gaussian() {
    let dir = TempDir::new().unwrap();
    let (status, r) = certify(&write(dir.path(), "g4.json", G4), &[]);
    assert_eq!(status, 0);
    for id in ["eq1.8", "cor1.2"] {
        let s = find(&r["skipped"], id).unwrap_or_else(|| panic!("{id} not skipped"));
        assert!(s["reason"].as_str().unwrap().starts_with("moment hypothesis"));
        assert!(find(&r["certificates"], id).is_none());
    }
    let c = find(&r["certificates"], "thm1.1-a").unwrap();
    assert!((c["lhs"].as_f64().unwrap() - 0.636_294_4).abs() < 1e-7);
    assert!(c["slack"].as_f64().unwrap().abs() < 1e-8);
    let c = find(&r["certificates"], "cor4.3").unwrap();
    assert!((c["lhs"].as_f64().unwrap() - 0.318_147_2).abs() < 1e-7);
    assert_eq!(c["constants"]["c_entropy_form"]["provenance"], "paper");
    assert_eq!(c["constants"]["c"]["provenance"], "derived-from-proof");
}

#[test]
fn moment_hypothesis_holds_on_a_narrow_gaussian() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "g.json", r#"{"type": "gaussian", "mean": 0, "var": 0.25}"#);
    let (status, r) = certify(&p, &["--bounds", "eq1.8,cor1.2"]);
    assert_eq!(status, 0);
    let c = find(&r["certificates"], "eq1.8").unwrap();
    // I_rel = 2.25, D = (ln 4 − 0.75)/2
    let (i, d) = (2.25, (4f64.ln() - 0.75) / 2.0);
    assert!((c["lhs"].as_f64().unwrap() - (i - 2.0 * d)).abs() < 1e-8);
    assert!((c["rhs"].as_f64().unwrap() - (i - (1.0f64 + i).ln())).abs() < 1e-8);
    assert_eq!(c["pass"], true);
    assert_eq!(r["certificates"].as_array().unwrap().len(), 2);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"type": "gaussian", "mean": 0}"#);
    let out = lsd(&["certify", "--dist", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bad.json"));
    let neg = write(dir.path(), "neg.json", r#"{"type": "gaussian", "mean": 0, "var": -1}"#);
    assert_eq!(code(&lsd(&["distance", "--dist", neg.to_str().unwrap(), "--metric", "kl"])), 2);
    let g = write(dir.path(), "g.json", G4);
    let out = lsd(&["certify", "--dist", g.to_str().unwrap(), "--bounds", "nope"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nope"));
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&lsd(&["distance", "--dist", missing.to_str().unwrap(), "--metric", "kl"])), 2);
    assert_eq!(code(&lsd(&["distance", "--dist", g.to_str().unwrap(), "--metric", "entropy"])), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"{"type": "mixture", "components": [{"w": 0.3, "mean": -1, "var": 1}, {"w": 0.7, "mean": 0.5, "var": 0.5}]}"#,
    );
    let a = lsd(&["certify", "--dist", m.to_str().unwrap()]);
    let b = lsd(&["certify", "--dist", m.to_str().unwrap()]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    for p in [&x, &y] {
        let out = lsd(&["sweep", "--family", "mixture-gap", "--range", "0:2:0.5", "--out", p.to_str().unwrap(), "--format", "csv"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(fs::read(&x).unwrap(), fs::read(&y).unwrap());
}

fn sweep_json(dir: &Path, family: &str, range: &str, extra: &[&str]) -> Value {
    let out = dir.join(format!("{family}.json"));
    let mut args = vec!["sweep", "--family", family, "--range", range, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let r = lsd(&args);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    serde_json::from_slice(&fs::read(out).unwrap()).unwrap()
}

fn column(r: &Value, name: &str) -> Vec<Option<f64>> {
    r["columns"][name].as_array().unwrap().iter().map(Value::as_f64).collect()
}

#[test]
fn sweep_near_the_standard_gaussian() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("s.csv");
    let out = lsd(&[
        "sweep", "--family", "gaussian-sigma", "--range", "0.9:1.1:0.01", "--out", csv.to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&header[..4], ["sigma", "d", "i_rel", "deficit"]);
    let k = header.iter().position(|h| *h == "deficit_over_dev2").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert_eq!(r.len(), header.len());
        let s: f64 = r[0].parse().unwrap();
        if (s - 1.0).abs() < 0.015 && (s - 1.0).abs() > 1e-9 {
            let v: f64 = r[k].parse().unwrap();
            assert!((v - 1.0).abs() < 0.05, "sigma {s}: {v}");
        }
        if s == 1.0 {
            assert_eq!(r[k], "");
        }
    }
}

#[test]
fn translations_have_no_deficit() {
    let dir = TempDir::new().unwrap();
    let r = sweep_json(dir.path(), "gaussian-shift", "-2:2:0.5", &[]);
    let values: Vec<f64> = r["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(values, [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]);
    for d in column(&r, "deficit") {
        assert!(d.unwrap().abs() <= 1e-8);
    }
    assert_eq!(r["parameter"], "shift");
}

#[test]
fn sweep_certificates_pass() {
    let dir = TempDir::new().unwrap();
    let r = sweep_json(dir.path(), "gaussian-sigma", "0.5:2:0.25", &[]);
    assert_eq!(r["values"].as_array().unwrap().len(), 7);
    for f in column(&r, "failures") {
        assert_eq!(f, Some(0.0));
    }
    let slack = column(&r, "slack_thm1.1-a");
    assert!(slack.iter().all(|s| s.unwrap().abs() < 1e-6));
    // E|X|² = σ² > 1 past σ = 1
    let eq18 = column(&r, "slack_eq1.8");
    assert!(eq18[0].is_some() && eq18[6].is_none());
    let n = r["values"].as_array().unwrap().len();
    for (_, col) in r["columns"].as_object().unwrap() {
        assert_eq!(col.as_array().unwrap().len(), n);
    }
}

#[test]
fn grid_size_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("e.json");
    let r = Command::new(env!("CARGO_BIN_EXE_lsd"))
        .args(["sweep", "--family", "gaussian-sigma", "--range", "1.5:1.5:1", "--bounds", "lsi", "--out"])
        .arg(&out)
        .env("LSD_GRID_POINTS", "1025")
        .output()
        .unwrap();
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let v: Value = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    assert_eq!(v["metadata"]["grid_points"], 1025);
    assert!((v["columns"]["d"][0].as_f64().unwrap() - 0.5 * (1.25 - 2.0 * 1.5f64.ln())).abs() < 1e-9);
}

#[test]
fn bad_ranges_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    for range in ["1:0:0.1", "0:1", "0:1:0", "a:1:0.1"] {
        let r = lsd(&["sweep", "--family", "gaussian-shift", "--range", range, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&r), 2, "{range}");
    }
}

#[test]
fn default_report_has_no_failures() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let r = lsd(&["report", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let v: Value = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    assert_eq!(v["counts"]["fail"], 0);
    let members = v["members"].as_array().unwrap().len();
    let bounds = v["bounds"].as_array().unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), members * bounds.len());
    for b in bounds {
        let total = ["pass", "fail", "skip"].iter().map(|k| b[k].as_u64().unwrap()).sum::<u64>();
        assert_eq!(total as usize, members);
        if b["pass"].as_u64().unwrap() > 0 {
            assert!(b["worst_slack"].as_f64().unwrap() >= -1e-6, "{b}");
            assert!(b["worst_member"].is_string());
        }
    }
}

#[test]
fn report_on_a_directory() {
    let dir = TempDir::new().unwrap();
    let suite = dir.path().join("suite");
    fs::create_dir(&suite).unwrap();
    let out = dir.path().join("r.json");
    let r = lsd(&["report", "--suite", suite.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&r), 0);
    let v: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert!(v["members"].as_array().unwrap().is_empty() && v["entries"].as_array().unwrap().is_empty());
    assert_eq!(v["counts"]["pass"], 0);

    write(&suite, "b_wide.json", G4);
    write(&suite, "a_std.json", STD);
    write(&suite, "notes.txt", "ignored");
    let r = lsd(&["report", "--suite", suite.to_str().unwrap(), "--out", out.to_str().unwrap(), "--bounds", "lsi,eq1.8"]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let v: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["members"], serde_json::json!(["a_std", "b_wide"]));
    assert_eq!(v["counts"], serde_json::json!({"pass": 3, "fail": 0, "skip": 1}));
    assert_eq!(v["entries"][3]["status"], "skipped");

    write(&suite, "c_broken.json", r#"{"type": "mixture", "components": ["#);
    let r = lsd(&["report", "--suite", suite.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("c_broken.json"), "{}", stderr(&r));
}
