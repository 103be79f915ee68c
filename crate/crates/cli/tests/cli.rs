use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn weyl_suite_passes() {
    let out = ame(&["suite", "weyl", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(check(&r, "order of W(C)")["actual"], "648");
}

#[test]
fn local_symmetry_order_is_reported_as_computed() {
    let out = ame(&["suite", "local-symmetry", "--only", "order of", "--parallel", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(check(&r, "order of N(C)")["status"], "pass");
    let s = check(&r, "order of S(|Phi>)");
    assert_eq!(s["status"], "fail");
    assert_eq!(s["expected"], "5832");
    assert_eq!(s["actual"], "1944");
    assert_eq!(check(&r, "generators fix |Phi>")["status"], "skip");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(ame(&["suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(ame(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn suite_reports_are_deterministic() {
    let strip = |mut v: Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["elapsed"] = Value::Null;
        }
        v
    };
    let args = ["suite", "invariants", "--seed", "3", "--format", "json"];
    assert_eq!(strip(json(&ame(&args))), strip(json(&ame(&args))));
}

#[test]
fn ingest_shipped_files() {
    let out = ame(&["ingest", &data("phi.state"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["report"]["kind"], "state");
    assert!(r["report"]["summary"].as_str().unwrap().contains("[3, 3, 3, 3]"));

    let r = json(&ame(&["ingest", &data("c332.code"), "--format", "json"]));
    assert!(r["report"]["summary"].as_str().unwrap().contains("K = 3"));

    for f in ["weyl-generators.ops", "local-symmetry-generators.ops", "coset-reps.ops"] {
        assert_eq!(ame(&["ingest", &data(f)]).status.code(), Some(0), "{f}");
    }
}

#[test]
fn ingest_write_roundtrips() {
    let copy = scratch("copy.code");
    let out = ame(&["ingest", &data("c332.code"), "--write", copy.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let original = std::fs::read_to_string(data("c332.code")).unwrap();
    assert_eq!(std::fs::read_to_string(&copy).unwrap(), original);
}

#[test]
fn non_orthonormal_code_is_rejected() {
    let text = std::fs::read_to_string(data("c332.code")).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let mut v: Value = serde_json::from_str(&body).unwrap();
    let first = v["basis"][0].clone();
    v["basis"][1] = first;
    let path = scratch("bad.code");
    std::fs::write(&path, v.to_string()).unwrap();
    let out = ame(&["ingest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orthonormal"));
}

#[test]
fn invariants_eval_at_ones() {
    let out = ame(&["invariants", "eval", "--point", "1,1,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["report"]["invariants"]["i6"]["coeffs"][0], "-27/1");
    assert_eq!(r["report"]["fingerprint"]["branch"], "i6");

    let r = json(&ame(&["invariants", "eval", "--point", "0,0,0", "--format", "json"]));
    assert!(r["report"]["fingerprint"].is_null());
    assert!(r["report"]["fingerprint_error"].is_string());
}

#[test]
fn invariants_check_weyl_passes() {
    assert_eq!(ame(&["invariants", "check-weyl", "--trials", "20"]).status.code(), Some(0));
}

#[test]
fn cosets_from_file() {
    assert_eq!(ame(&["group", "verify-cosets"]).status.code(), Some(0));
    assert_eq!(
        ame(&["group", "verify-cosets", "--reps", &data("coset-reps.ops")]).status.code(),
        Some(0)
    );
    // the Weyl generators as single-site operators do not even act on three sites
    assert_ne!(
        ame(&["group", "verify-cosets", "--reps", &data("weyl-generators.ops")]).status.code(),
        Some(0)
    );
}

#[test]
fn group_close_from_file() {
    let out = ame(&["group", "close", "--gens", &data("weyl-generators.ops"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["order"], 648);
    let out = ame(&["group", "close", "--gens", &data("weyl-generators.ops"), "--cap", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kempfness_commands() {
    let out = ame(&["kempfness", "critical", "--state", &data("phi.state"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["critical"], true);

    // the seed is mandatory
    assert_eq!(ame(&["kempfness", "flow", "--state", &data("phi.state")]).status.code(), Some(2));

    let report = scratch("flow.json");
    let out = ame(&[
        "kempfness", "flow", "--state", &data("phi.state"), "--seed", "1", "--perturb", "0.3",
        "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["report"]["outcome"], "converged");
    // |Phi> as shipped has norm 3
    assert!((r["report"]["final_norm_sqr"].as_f64().unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn correspond_on_files() {
    for f in ["phi.state", "c332.code"] {
        let out = ame(&["correspond", &data(f), "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{f}");
        assert_eq!(json(&out)["report"]["roundtrip_exact"], true);
    }
}
