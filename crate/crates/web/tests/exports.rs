use ame_web::{criticality_path_json, flow_trace_json, weyl_orbit_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn orbit_of_generic_point() {
    let r = parse(weyl_orbit_json("1", "2", "-1/3").unwrap());
    assert_eq!(r["group_order"], 648);
    assert_eq!(r["invariants_constant"], true);
    // a generic point has trivial stabilizer in W(C)
    assert_eq!(r["orbit_size"], 648);
}

#[test]
fn orbit_of_origin_is_a_point() {
    let r = parse(weyl_orbit_json("0", "0", "0").unwrap());
    assert_eq!(r["orbit_size"], 1);
    assert!(r["fingerprint"].is_null());
}

#[test]
fn bad_coordinate_is_an_error() {
    assert!(weyl_orbit_json("x", "0", "0").is_err());
}

#[test]
fn flow_returns_to_norm_one() {
    let r = parse(flow_trace_json(7, 0.4, 0.5).unwrap());
    assert_eq!(r["outcome"], "converged");
    let trace = r["norm_trace"].as_array().unwrap();
    assert!(trace[0].as_f64().unwrap() > 1.0);
    assert!((trace.last().unwrap().as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(flow_trace_json(7, -1.0, 0.5).is_err());
}

#[test]
fn path_starts_critical() {
    let r = parse(criticality_path_json(3, 10).unwrap());
    let pts = r.as_array().unwrap();
    assert_eq!(pts.len(), 11);
    assert!(pts[0]["lie"].as_f64().unwrap() < 1e-10);
    assert!(pts[10]["lie"].as_f64().unwrap() > 1e-3);
    assert!(criticality_path_json(3, 0).is_err());
}
