//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they can be tested natively.

use std::collections::HashSet;
use std::sync::OnceLock;

use ame_core::constants;
use ame_core::cyclo::{self, Cyclo};
use ame_core::groups::{self, CodeGate, MatrixGroup};
use ame_core::invariants::{self, CartanPoint};
use ame_core::kempfness::{self, FlowOptions, FloatState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const CONDUCTOR: u32 = 12;

fn weyl() -> Result<&'static MatrixGroup<CodeGate>, String> {
    static W: OnceLock<Result<MatrixGroup<CodeGate>, String>> = OnceLock::new();
    W.get_or_init(|| groups::weyl_group().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(Clone::clone)
}

#[derive(Serialize)]
struct OrbitReport {
    point: [String; 3],
    i6: String,
    i9: String,
    i12: String,
    fingerprint: Option<(String, [String; 2])>,
    group_order: usize,
    orbit_size: usize,
    invariants_constant: bool,
    sample: Vec<[String; 3]>,
}

/// Invariants of a Cartan point and a check that they are constant on its
/// W(C) orbit. Coordinates are rationals like "3" or "-1/2".
pub fn weyl_orbit_json(a: &str, b: &str, c: &str) -> Result<String, String> {
    let coord = |s: &str| {
        cyclo::parse_rational(s.trim())
            .map(|q| Cyclo::from_rational(&q, CONDUCTOR))
            .map_err(|e| e.to_string())
    };
    let p = CartanPoint::new(coord(a)?, coord(b)?, coord(c)?);
    let base = invariants::eval_invariants(&p);
    let w = weyl()?;
    let mut seen = HashSet::new();
    let mut sample = Vec::new();
    let mut constant = true;
    for g in w.elements() {
        let q = p.act(g).map_err(|e| e.to_string())?;
        if seen.insert(q.clone()) {
            constant &= invariants::eval_invariants(&q) == base;
            if sample.len() < 12 {
                sample.push(q.coords().map(|x| x.to_string()));
            }
        }
    }
    let fingerprint = invariants::invariant_ratio_fingerprint(&p).ok().map(|f| {
        let branch = format!("{:?}", f.branch);
        (branch, f.ratios.map(|r| r.to_string()))
    });
    let report = OrbitReport {
        point: p.coords().map(|x| x.to_string()),
        i6: base.i6.to_string(),
        i9: base.i9.to_string(),
        i12: base.i12.to_string(),
        fingerprint,
        group_order: w.order(),
        orbit_size: seen.len(),
        invariants_constant: constant,
        sample,
    };
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Kempf–Ness flow from a random SL₃^{⊗4} perturbation of |Φ⟩.
pub fn flow_trace_json(seed: u32, perturb: f64, step: f64) -> Result<String, String> {
    if !(perturb >= 0.0 && step > 0.0) {
        return Err("perturbation must be >= 0 and step > 0".into());
    }
    let phi = FloatState::from_exact(&constants::phi_normalized()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.into());
    let g = kempfness::random_sl(phi.dims(), perturb, &mut rng);
    let start = phi.apply_local(&g).map_err(|e| e.to_string())?;
    let opts = FlowOptions {
        max_iters: 2000,
        step,
        ..FlowOptions::default()
    };
    let report = kempfness::norm_minimization_flow(&start, opts);
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct PathPoint {
    t: f64,
    lie: f64,
    marginal: f64,
}

/// Criticality residuals along the normalized segment from |Φ⟩ to a random
/// state. Only the t = 0 end is critical in general.
pub fn criticality_path_json(seed: u32, steps: u32) -> Result<String, String> {
    if steps == 0 || steps > 1000 {
        return Err("steps must be in 1..=1000".into());
    }
    let phi = FloatState::from_exact(&constants::phi_normalized()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.into());
    let other = FloatState::random(phi.dims().to_vec(), &mut rng).normalized();
    let mut out = Vec::with_capacity(steps as usize + 1);
    for k in 0..=steps {
        let t = f64::from(k) / f64::from(steps);
        let amps = phi
            .amps()
            .iter()
            .zip(other.amps())
            .map(|(x, y)| x * (1.0 - t) + y * t)
            .collect();
        let v = FloatState::new(phi.dims().to_vec(), amps)
            .map_err(|e| e.to_string())?
            .normalized();
        out.push(PathPoint {
            t,
            lie: kempfness::lie_residual(&v),
            marginal: kempfness::marginal_residual(&v),
        });
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn weyl_orbit(a: &str, b: &str, c: &str) -> Result<String, JsError> {
    weyl_orbit_json(a, b, c).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn flow_trace(seed: u32, perturb: f64, step: f64) -> Result<String, JsError> {
    flow_trace_json(seed, perturb, step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn criticality_path(seed: u32, steps: u32) -> Result<String, JsError> {
    criticality_path_json(seed, steps).map_err(|e| JsError::new(&e))
}
