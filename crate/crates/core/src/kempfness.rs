//! Kempf–Ness criticality and norm minimization over SL_{d₀} ⊗ … ⊗ SL_{d_{n−1}}.
//!
//! This module is floating point. Exact states are converted with
//! [`FloatState::from_exact`]. The objective is f(g) = log⟨v|g†g|v⟩; along
//! g = exp(tH) at site k its derivative at t = 0 is 2·Tr(ρ̂ₖH), where ρ̂ₖ is the
//! trace-normalized single-site reduction. The flow steps each site by
//! exp(−η(ρ̂ₖ − I/dₖ)), which is Hermitian with determinant 1.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::PureState;

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_CRITICAL_TOL: f64 = 1e-8;
pub const DEFAULT_FLOW_TOL: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct FloatState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl FloatState {
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if dims.is_empty() || len != amps.len() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {len} amplitudes, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let s = FloatState { dims, amps };
        if s.norm_sqr() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(s)
    }

    pub fn from_exact(v: &PureState) -> Result<Self> {
        FloatState::new(
            v.dims().to_vec(),
            v.amps().iter().map(|a| a.to_complex()).collect(),
        )
    }

    /// Complex amplitudes with real and imaginary parts uniform in [−1, 1].
    pub fn random<R: Rng>(dims: Vec<usize>, rng: &mut R) -> Self {
        let len = dims.iter().product();
        let amps = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        FloatState::new(dims, amps).expect("nonzero with probability 1")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let s = 1.0 / self.norm_sqr().sqrt();
        FloatState {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    fn stride(&self, site: usize) -> usize {
        self.dims[site + 1..].iter().product()
    }

    /// Applies `m` on one site.
    pub fn apply_at(&self, site: usize, m: &CMatrix) -> Result<Self> {
        let d = *self.dims.get(site).ok_or(Error::IndexOutOfRange {
            index: site,
            bound: self.dims.len(),
        })?;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "site {site} has dimension {d}, operator is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let stride = self.stride(site);
        let block = d * stride;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for base in (0..self.amps.len()).step_by(block) {
            for low in 0..stride {
                for i in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..d {
                        acc += m[(i, j)] * self.amps[base + j * stride + low];
                    }
                    out[base + i * stride + low] = acc;
                }
            }
        }
        Ok(FloatState {
            dims: self.dims.clone(),
            amps: out,
        })
    }

    /// g₀ ⊗ g₁ ⊗ … applied site by site.
    pub fn apply_local(&self, g: &[CMatrix]) -> Result<Self> {
        if g.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} factors for {} sites",
                g.len(),
                self.dims.len()
            )));
        }
        g.iter()
            .enumerate()
            .try_fold(self.clone(), |v, (k, m)| v.apply_at(k, m))
    }

    /// ρ̂ₖ: the reduction to site k divided by its trace.
    pub fn reduced(&self, site: usize) -> CMatrix {
        let d = self.dims[site];
        let stride = self.stride(site);
        let block = d * stride;
        let mut rho = CMatrix::zeros(d, d);
        for base in (0..self.amps.len()).step_by(block) {
            for low in 0..stride {
                for i in 0..d {
                    let ai = self.amps[base + i * stride + low];
                    for j in 0..d {
                        rho[(i, j)] += ai * self.amps[base + j * stride + low].conj();
                    }
                }
            }
        }
        rho / Complex64::new(self.norm_sqr(), 0.0)
    }
}

/// The d² − 1 generalized Gell-Mann matrices, normalized to Tr(EᵢEⱼ) = 2δᵢⱼ.
pub fn gell_mann(d: usize) -> Vec<CMatrix> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut basis = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = one;
            s[(k, j)] = one;
            basis.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = -i;
            a[(k, j)] = i;
            basis.push(a);
        }
    }
    for l in 1..d {
        let c = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut h = CMatrix::zeros(d, d);
        for m in 0..l {
            h[(m, m)] = Complex64::new(c, 0.0);
        }
        h[(l, l)] = Complex64::new(-c * l as f64, 0.0);
        basis.push(h);
    }
    basis
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalityReport {
    pub critical: bool,
    /// max over sites and Gell-Mann E of |⟨v|E|v⟩| / ⟨v|v⟩.
    pub residual_lie: f64,
    /// max over sites of the largest entry of |ρ̂ₖ − I/dₖ|.
    pub residual_marginal: f64,
    pub lie_critical: bool,
    pub marginal_critical: bool,
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn centered(rho: &CMatrix) -> CMatrix {
    let d = rho.nrows();
    rho - CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0)
}

pub fn lie_residual(v: &FloatState) -> f64 {
    let mut r = 0.0_f64;
    for (k, &d) in v.dims().iter().enumerate() {
        let rho = v.reduced(k);
        for e in gell_mann(d) {
            r = r.max((&rho * &e).trace().norm());
        }
    }
    r
}

pub fn marginal_residual(v: &FloatState) -> f64 {
    (0..v.dims().len())
        .map(|k| max_abs(&centered(&v.reduced(k))))
        .fold(0.0, f64::max)
}

pub fn is_critical(v: &FloatState, tol: f64) -> CriticalityReport {
    let residual_lie = lie_residual(v);
    let residual_marginal = marginal_residual(v);
    let lie_critical = residual_lie <= tol;
    let marginal_critical = residual_marginal <= tol;
    CriticalityReport {
        critical: lie_critical && marginal_critical,
        residual_lie,
        residual_marginal,
        lie_critical,
        marginal_critical,
    }
}

/// Rescales g so that det g = 1.
pub fn normalize_det(g: &CMatrix) -> CMatrix {
    let d = g.nrows() as f64;
    let det = g.determinant();
    g / det.powf(1.0 / d)
}

fn random_traceless<R: Rng>(d: usize, scale: f64, rng: &mut R) -> CMatrix {
    let mut a = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
    });
    let t = a.trace() / Complex64::new(d as f64, 0.0);
    for i in 0..d {
        a[(i, i)] -= t;
    }
    a
}

fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// exp(A) with A traceless and entries uniform in a box of half-width `scale`.
pub fn random_sl<R: Rng>(dims: &[usize], scale: f64, rng: &mut R) -> Vec<CMatrix> {
    dims.iter()
        .map(|&d| normalize_det(&random_traceless(d, scale, rng).exp()))
        .collect()
}

/// exp(iH) with H Hermitian.
pub fn random_unitary<R: Rng>(dims: &[usize], rng: &mut R) -> Vec<CMatrix> {
    dims.iter()
        .map(|&d| {
            let h = hermitian_part(&random_traceless(d, std::f64::consts::PI, rng));
            (h * Complex64::new(0.0, 1.0)).exp()
        })
        .collect()
}

/// Objective log⟨v|v⟩.
pub fn log_norm(v: &FloatState) -> f64 {
    v.norm_sqr().ln()
}

/// Per-site gradient of log⟨gv|gv⟩ at g = I in the traceless Hermitian
/// directions: 2(ρ̂ₖ − I/dₖ).
pub fn gradient(v: &FloatState) -> Vec<CMatrix> {
    (0..v.dims().len())
        .map(|k| centered(&v.reduced(k)) * Complex64::new(2.0, 0.0))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowOutcome {
    Converged,
    MaxIterations,
    /// The norm fell below 1e−12 of its initial value: the orbit closure meets 0.
    NormVanishing,
    LineSearchFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub initial_norm_sqr: f64,
    pub final_norm_sqr: f64,
    pub iterations: usize,
    pub criticality_residual: f64,
    pub converged: bool,
    pub outcome: FlowOutcome,
    /// ⟨v|v⟩ after each accepted step, starting with the initial value.
    pub norm_trace: Vec<f64>,
    #[serde(skip)]
    pub final_state: Option<FloatState>,
    /// Accumulated g with det gₖ = 1, so that final = g·initial.
    #[serde(skip)]
    pub group_element: Vec<CMatrix>,
}

impl FlowReport {
    pub fn monotone(&self, slack: f64) -> bool {
        self.norm_trace.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FlowOptions {
    pub max_iters: usize,
    pub step: f64,
    pub tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            max_iters: 5000,
            step: 0.5,
            tol: DEFAULT_FLOW_TOL,
        }
    }
}

/// Steepest descent of log⟨gv|gv⟩ with multiplicative updates and Armijo
/// backtracking. Stops when the Lie residual drops below `tol`.
pub fn norm_minimization_flow(v: &FloatState, opts: FlowOptions) -> FlowReport {
    let initial = v.norm_sqr();
    let mut state = v.clone();
    let mut g: Vec<CMatrix> = v.dims().iter().map(|&d| CMatrix::identity(d, d)).collect();
    let mut trace = vec![initial];
    let mut step = opts.step;
    let mut iterations = 0;
    let mut residual = lie_residual(&state);

    let outcome = loop {
        if residual < opts.tol {
            break FlowOutcome::Converged;
        }
        if state.norm_sqr() < 1e-12 * initial {
            break FlowOutcome::NormVanishing;
        }
        if iterations == opts.max_iters {
            break FlowOutcome::MaxIterations;
        }
        let grad = gradient(&state);
        let slope: f64 = grad.iter().map(|m| m.norm_squared()).sum::<f64>() / 2.0;
        let f0 = log_norm(&state);
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let steps: Vec<CMatrix> = grad
                .iter()
                .map(|m| normalize_det(&(m * Complex64::new(-step / 2.0, 0.0)).exp()))
                .collect();
            let next = state.apply_local(&steps).expect("dims agree");
            let f1 = log_norm(&next);
            // Near a critical point the required decrease drops below the
            // rounding error of f0. Then ask for a smaller residual instead.
            let noise = 64.0 * f64::EPSILON * f0.abs().max(1.0);
            let ok = if ARMIJO * step * slope > noise {
                f1 <= f0 - ARMIJO * step * slope
            } else {
                f1 <= f0 + noise && lie_residual(&next) < residual
            };
            if ok {
                accepted = Some((next, steps));
                break;
            }
            step /= 2.0;
        }
        let Some((next, steps)) = accepted else {
            break FlowOutcome::LineSearchFailed;
        };
        for (gk, sk) in g.iter_mut().zip(&steps) {
            *gk = sk * &*gk;
        }
        state = next;
        trace.push(state.norm_sqr());
        iterations += 1;
        residual = lie_residual(&state);
        step = (step * 2.0).min(opts.step);
    };

    FlowReport {
        initial_norm_sqr: initial,
        final_norm_sqr: state.norm_sqr(),
        iterations,
        criticality_residual: residual,
        converged: outcome == FlowOutcome::Converged,
        outcome,
        norm_trace: trace,
        final_state: Some(state),
        group_element: g,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    /// Whether the input passed `is_critical` at the default tolerance.
    pub critical: bool,
    pub samples: usize,
    /// min over sampled g of ⟨gv|gv⟩ / ⟨v|v⟩.
    pub min_ratio: f64,
    /// Number of samples with ratio < 1 − 1e−9.
    pub below_one: usize,
}

/// Samples random g ∈ SL and records ⟨gv|gv⟩/⟨v|v⟩. For a critical v every
/// ratio is at least 1. Each g = exp(A) has entries of A drawn from a box whose
/// half-width is itself uniform in (0, `scale`), so g near I is covered too.
pub fn kempf_ness_inequality_test<R: Rng>(
    v: &FloatState,
    samples: usize,
    scale: f64,
    rng: &mut R,
) -> InequalityReport {
    let n0 = v.norm_sqr();
    let mut min_ratio = f64::INFINITY;
    let mut below_one = 0;
    for _ in 0..samples {
        let s = scale * rng.gen_range(1e-6..1.0);
        let g = random_sl(v.dims(), s, rng);
        let r = v.apply_local(&g).expect("dims agree").norm_sqr() / n0;
        min_ratio = min_ratio.min(r);
        if r < 1.0 - 1e-9 {
            below_one += 1;
        }
    }
    InequalityReport {
        critical: is_critical(v, DEFAULT_CRITICAL_TOL).critical,
        samples,
        min_ratio,
        below_one,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradientCheck {
    pub samples: usize,
    pub max_relative_error: f64,
}

/// Compares the analytic directional derivative Σₖ Tr(∇ₖHₖ) with a central
/// difference of log⟨v|v⟩ along exp(tH), H traceless Hermitian per site.
pub fn gradient_check<R: Rng>(v: &FloatState, samples: usize, h: f64, rng: &mut R) -> GradientCheck {
    let grad = gradient(v);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let dir: Vec<CMatrix> = v
            .dims()
            .iter()
            .map(|&d| hermitian_part(&random_traceless(d, 1.0, rng)))
            .collect();
        let analytic: f64 = grad.iter().zip(&dir).map(|(g, e)| (g * e).trace().re).sum();
        let along = |t: f64| -> f64 {
            let g: Vec<CMatrix> = dir.iter().map(|e| (e * Complex64::new(t, 0.0)).exp()).collect();
            log_norm(&v.apply_local(&g).expect("dims agree"))
        };
        let numeric = (along(h) - along(-h)) / (2.0 * h);
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-12);
        worst = worst.max(rel);
    }
    GradientCheck {
        samples,
        max_relative_error: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn phi() -> FloatState {
        FloatState::from_exact(&constants::phi_normalized()).unwrap()
    }

    fn basis(dims: Vec<usize>, index: usize) -> FloatState {
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.iter().product()];
        amps[index] = Complex64::new(1.0, 0.0);
        FloatState::new(dims, amps).unwrap()
    }

    #[test]
    fn gell_mann_is_orthonormal_and_traceless() {
        for d in 2..5 {
            let b = gell_mann(d);
            assert_eq!(b.len(), d * d - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(x.trace().norm() < 1e-14);
                for (j, y) in b.iter().enumerate() {
                    let expected = if i == j { 2.0 } else { 0.0 };
                    assert_relative_eq!((x * y).trace().re, expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn known_critical_states() {
        assert!(is_critical(&phi(), 1e-10).critical);
        assert!(!is_critical(&basis(vec![3; 3], 0), 1e-10).critical);
        let s1 = FloatState::from_exact(&constants::code_basis()[0]).unwrap();
        assert!(is_critical(&s1, 1e-10).critical);
    }

    #[test]
    fn flow_from_phi_is_immediate() {
        let r = norm_minimization_flow(&phi(), FlowOptions::default());
        assert!(r.converged);
        assert!(r.iterations <= 1);
    }

    #[test]
    fn flow_recovers_phi_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = phi();
        let start = v.apply_local(&random_sl(v.dims(), 0.3, &mut rng)).unwrap();
        assert!(start.norm_sqr() >= 1.0 - 1e-12);
        let r = norm_minimization_flow(&start, FlowOptions::default());
        assert!(r.converged, "{:?}", r.outcome);
        assert!(r.monotone(1e-12));
        assert!((r.final_norm_sqr - 1.0).abs() < 1e-6);
        // g stays in SL
        for gk in &r.group_element {
            assert!((gk.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn unstable_state_flows_toward_zero() {
        // |001⟩ on three qutrits
        let r = norm_minimization_flow(&basis(vec![3; 3], 1), FlowOptions::default());
        assert!(!r.converged);
        assert!(matches!(
            r.outcome,
            FlowOutcome::NormVanishing | FlowOutcome::MaxIterations
        ));
        assert!(r.monotone(1e-12));
        assert!(r.final_norm_sqr < 1e-6);
    }

    #[test]
    fn inequality_holds_for_phi_and_fails_for_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = kempf_ness_inequality_test(&phi(), 200, 0.5, &mut rng);
        assert!(r.critical && r.min_ratio >= 1.0 - 1e-9);
        let r = kempf_ness_inequality_test(&basis(vec![3; 3], 0), 200, 0.5, &mut rng);
        assert!(!r.critical && r.below_one > 0);
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = FloatState::random(vec![3, 3, 2], &mut rng);
        assert!(gradient_check(&v, 10, 1e-5, &mut rng).max_relative_error < 1e-5);
    }

    #[test]
    fn criticality_is_lu_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = phi();
        let u = random_unitary(v.dims(), &mut rng);
        assert!(is_critical(&v.apply_local(&u).unwrap(), 1e-8).critical);
    }
}
