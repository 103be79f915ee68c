//! Named verification suites. Each suite is a list of independent checks, so
//! `--parallel` can run them on scoped threads and still report in order.

use ame_core::correspondence;
use ame_core::groups::{self, CodeGate};
use ame_core::invariants::{self, CartanPoint};
use ame_core::kempfness::{self, FloatState, FlowOptions};
use ame_core::qecc::{self, CodeSubspace};
use ame_core::{constants, Cyclo, Matrix, PureState, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Check;

pub const SUITES: &[&str] = &[
    "code332",
    "ame4",
    "correspondence",
    "weyl",
    "local-symmetry",
    "invariants",
    "kempfness",
    "code442-qubit",
    "all",
];

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: u64,
    /// Criticality tolerance for the Kempf–Ness checks.
    pub tol: f64,
    /// Closure cap multiplier override.
    pub cap: Option<usize>,
}

pub struct Job {
    pub name: &'static str,
    run: Box<dyn Fn(&Settings) -> Check + Send + Sync>,
}

fn job<F>(name: &'static str, f: F) -> Job
where
    F: Fn(&Settings) -> Result<(bool, String, String)> + Send + Sync + 'static,
{
    Job {
        name,
        run: Box::new(move |s| Check::run(name, || f(s))),
    }
}

fn c332() -> Result<CodeSubspace> {
    CodeSubspace::new(constants::code_basis(), Some(2))
}

fn eq<T: PartialEq + ToString>(expected: T, actual: T) -> (bool, String, String) {
    (expected == actual, expected.to_string(), actual.to_string())
}

fn code332() -> Vec<Job> {
    vec![
        job("kl_check(C, 2) pure code", |_| {
            let r = qecc::kl_check(&c332()?, 2)?;
            Ok(eq("code, pure".into(), format!(
                "{}, {}",
                if r.is_code { "code" } else { "not a code" },
                if r.is_pure { "pure" } else { "impure" }
            )))
        }),
        job("kl_check(C, 3) fails", |_| {
            Ok(eq(false, qecc::kl_check(&c332()?, 3)?.is_code))
        }),
        job("distance(C)", |_| Ok(eq(2, qecc::distance(&c332()?)?))),
        job("stabilizer fixed space equals C", |_| {
            let gens = constants::stabilizer_generators(3, 3, 12)?;
            let space = qecc::stabilizer_subspace(&gens)?;
            let same = space.same_span(&c332()?)?;
            Ok((
                space.dimension() == 3 && same,
                "dimension 3, span(s1, s2, s3)".into(),
                format!("dimension {}, same span {same}", space.dimension()),
            ))
        }),
        job("centralizer <X^3, Z^3>", |_| {
            let r = groups::centralizer_containment_check()?;
            Ok((
                r.passed(),
                "order 9, fixes C pointwise, in SL".into(),
                format!(
                    "order {}, fixes C {}, SL {}, commute {}",
                    r.order, r.fixes_code_pointwise, r.special_linear, r.generators_commute
                ),
            ))
        }),
    ]
}

fn ame4() -> Vec<Job> {
    vec![
        job("|Phi> is 2-uniform", |_| {
            let r = qecc::r_uniform_check(&constants::phi_normalized(), 2)?;
            Ok(eq(
                "6 subsets uniform".to_string(),
                format!("{} subsets {}", r.subsets_checked, if r.uniform { "uniform" } else { "not uniform" }),
            ))
        }),
        job("uniformity(|Phi>)", |_| Ok(eq(2, qecc::uniformity(&constants::phi())?))),
        job("|Phi> is critical", |s| {
            let v = FloatState::from_exact(&constants::phi_normalized())?;
            let r = kempfness::is_critical(&v, s.tol);
            Ok((r.critical, "critical".into(), format!("residual {:.1e}", r.residual_lie)))
        }),
    ]
}

fn correspondence_suite() -> Vec<Job> {
    vec![
        job("roundtrip(C)", |_| {
            let r = correspondence::roundtrip_code(&c332()?)?;
            Ok(eq(true, r.roundtrip_exact && r.ame_verified && r.kl_verified))
        }),
        job("roundtrip(|Phi>)", |_| {
            let r = correspondence::roundtrip_state(&constants::phi())?;
            Ok(eq(true, r.roundtrip_exact && r.ame_verified && r.kl_verified))
        }),
        job("purify(C) = |Phi>/sqrt(3)", |_| {
            Ok(eq(true, correspondence::purify_code(&c332()?)? == constants::phi_normalized()))
        }),
    ]
}

fn weyl_cap(s: &Settings) -> usize {
    s.cap.unwrap_or(10 * groups::WEYL_ORDER)
}

fn weyl() -> Vec<Job> {
    vec![
        job("reflections reproduce R1, R2, R3", |_| {
            let built = groups::weyl_generators()?;
            let tabulated = constants::tabulated_weyl_generators();
            Ok(eq(true, built.iter().zip(&tabulated).all(|(b, p)| b.matrix() == p)))
        }),
        job("order of W(C)", |s| {
            Ok(eq(groups::WEYL_ORDER, groups::weyl_group_with_cap(weyl_cap(s))?.order()))
        }),
        job("coset representatives", |_| {
            let r = groups::verify_tabulated_cosets()?;
            let mismatches: usize = r.checks.iter().map(|c| c.mismatches.len()).sum();
            Ok((
                r.passed,
                "mu(Q_i) = R_i, Q_i in SU(3)^3".into(),
                format!("{mismatches} entry mismatches, passed {}", r.passed),
            ))
        }),
        job("transversal group equals W(C)", |s| {
            let code = c332()?;
            let t = groups::transversal_group(&code, &groups::normalizer_generators(), weyl_cap(s))?;
            let w = groups::weyl_group_with_cap(weyl_cap(s))?;
            Ok(eq(true, t.set_equals(&w)))
        }),
    ]
}

fn local_symmetry() -> Vec<Job> {
    vec![
        job("generators fix |Phi>", |_| {
            let phi = constants::phi();
            let fixed = constants::local_symmetry_generators()
                .iter()
                .map(|g| g.apply(&phi).map(|v| v == phi))
                .collect::<Result<Vec<_>>>()?;
            Ok(eq(5, fixed.iter().filter(|&&b| b).count()))
        }),
        job("order of N(C)", |s| {
            let cap = s.cap.unwrap_or(10 * groups::NORMALIZER_ORDER);
            let n = groups::close_operators(&groups::normalizer_generators(), cap)?;
            Ok(eq(groups::NORMALIZER_ORDER, n.order()))
        }),
        job("order of S(|Phi>)", |s| {
            let cap = s.cap.unwrap_or(10 * groups::LOCAL_SYMMETRY_ORDER);
            let g = groups::local_symmetry_group_with_cap(cap)?;
            Ok(eq(groups::LOCAL_SYMMETRY_ORDER, g.order()))
        }),
        job("every element fixes |Phi>", |s| {
            let cap = s.cap.unwrap_or(10 * groups::LOCAL_SYMMETRY_ORDER);
            let g = groups::local_symmetry_group_with_cap(cap)?;
            let phi = constants::phi();
            let mut fixed = 0;
            for e in g.elements() {
                if e.apply(&phi)? == phi {
                    fixed += 1;
                }
            }
            Ok(eq(g.order(), fixed))
        }),
        job("sampled elements have the conj(mu) form", |s| {
            let cap = s.cap.unwrap_or(10 * groups::LOCAL_SYMMETRY_ORDER);
            let g = groups::local_symmetry_group_with_cap(cap)?;
            let phi = constants::phi();
            let code = c332()?;
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut ok = 0;
            for _ in 0..100 {
                if groups::has_conjugate_mu_form(g.random_element(&mut rng), &phi, &code)? {
                    ok += 1;
                }
            }
            Ok(eq(100, ok))
        }),
    ]
}

fn invariants_suite() -> Vec<Job> {
    vec![
        job("I(1,1,1)", |_| {
            let t = invariants::eval_invariants(&CartanPoint::from_ints(1, 1, 1, 12));
            Ok(eq(
                "(-27, 0, 0)".to_string(),
                format!("({}, {}, {})", t.i6, t.i9, t.i12),
            ))
        }),
        job("R1, R2, R3 fix I6, I9, I12", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut invariant = 0;
            for r in constants::tabulated_weyl_generators() {
                if invariants::check_weyl_invariance(&CodeGate::new(r)?, 50, &mut rng)?.invariant {
                    invariant += 1;
                }
            }
            Ok(eq(3, invariant))
        }),
        job("diag(2, 1/2, 1) is rejected", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let gate = CodeGate::new(Matrix::diagonal(&[
                Cyclo::from_int(2, 12),
                Cyclo::from_ratio(1, 2, 12),
                Cyclo::one(12),
            ]))?;
            Ok(eq(false, invariants::check_weyl_invariance(&gate, 50, &mut rng)?.invariant))
        }),
        job("homogeneity", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut ok = 0;
            for _ in 0..20 {
                let p = invariants::random_point(&mut rng, 12);
                let t = Cyclo::from_ratio(rng.gen_range(-50..=50), rng.gen_range(1..=50), 12);
                let a = invariants::eval_invariants(&p);
                let b = invariants::eval_invariants(&p.scale(&t));
                if b.i6 == &a.i6 * &t.pow(6) && b.i9 == &a.i9 * &t.pow(9) && b.i12 == &a.i12 * &t.pow(12) {
                    ok += 1;
                }
            }
            Ok(eq(20, ok))
        }),
    ]
}

fn kempfness_suite() -> Vec<Job> {
    vec![
        job("Kempf-Ness inequality at |Phi>", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let v = FloatState::from_exact(&constants::phi_normalized())?;
            let r = kempfness::kempf_ness_inequality_test(&v, 1000, 0.5, &mut rng);
            Ok((
                r.min_ratio >= 1.0 - 1e-9,
                ">= 1 - 1e-9".into(),
                format!("{:.12}", r.min_ratio),
            ))
        }),
        job("flow from 20 perturbed starts", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let phi = FloatState::from_exact(&constants::phi_normalized())?;
            let mut worst = 0.0_f64;
            let mut converged = 0;
            for _ in 0..20 {
                let start = phi.apply_local(&kempfness::random_sl(phi.dims(), 0.3, &mut rng))?;
                let r = kempfness::norm_minimization_flow(
                    &start,
                    FlowOptions { tol: 1e-8, ..FlowOptions::default() },
                );
                if r.converged && r.monotone(1e-12) && r.criticality_residual < 1e-6 {
                    converged += 1;
                }
                worst = worst.max((r.final_norm_sqr - 1.0).abs());
            }
            Ok((
                converged == 20 && worst < 1e-6,
                "20 converged, norm gap < 1e-6".into(),
                format!("{converged} converged, norm gap {worst:.1e}"),
            ))
        }),
        job("gradient vs finite differences", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let v = FloatState::random(vec![3, 3, 3, 3], &mut rng);
            let r = kempfness::gradient_check(&v, 10, 1e-5, &mut rng);
            Ok((
                r.max_relative_error < 1e-5,
                "< 1e-5".into(),
                format!("{:.1e}", r.max_relative_error),
            ))
        }),
        job("criticality definitions agree", |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let basis = constants::code_basis();
            let mut agree = 0;
            for k in 0..100 {
                let v = if k % 2 == 0 {
                    FloatState::random(vec![3, 3, 3], &mut rng)
                } else {
                    let p = invariants::random_point(&mut rng, 12);
                    let mut st = PureState::zero(vec![3; 3], 12);
                    for (c, u) in p.coords().into_iter().zip(&basis) {
                        st = st.try_add(&u.scale(c))?;
                    }
                    if st.is_zero() {
                        st = basis[0].clone();
                    }
                    let f = FloatState::from_exact(&st)?;
                    f.apply_local(&kempfness::random_unitary(f.dims(), &mut rng))?
                };
                let r = kempfness::is_critical(&v, s.tol);
                if r.lie_critical == r.marginal_critical {
                    agree += 1;
                }
            }
            Ok(eq(100, agree))
        }),
    ]
}

fn code442() -> Vec<Job> {
    vec![
        job("stabilizer space of X^4, Z^4", |_| {
            let gens = constants::stabilizer_generators(2, 4, 24)?;
            Ok(eq(4, qecc::stabilizer_subspace(&gens)?.dimension()))
        }),
        job("pure ((4,4,2))_2", |_| {
            let gens = constants::stabilizer_generators(2, 4, 24)?;
            let r = qecc::kl_check(&qecc::stabilizer_subspace(&gens)?, 2)?;
            Ok(eq(true, r.is_code && r.is_pure))
        }),
    ]
}

pub fn jobs(name: &str) -> Option<Vec<Job>> {
    Some(match name {
        "code332" => code332(),
        "ame4" => ame4(),
        "correspondence" => correspondence_suite(),
        "weyl" => weyl(),
        "local-symmetry" => local_symmetry(),
        "invariants" => invariants_suite(),
        "kempfness" => kempfness_suite(),
        "code442-qubit" => code442(),
        "all" => SUITES[..SUITES.len() - 1]
            .iter()
            .flat_map(|s| jobs(s).expect("known suite"))
            .collect(),
        _ => return None,
    })
}

/// Runs the checks whose name contains `only` (all when `None`); the rest are
/// reported as skipped.
pub fn run(jobs: &[Job], settings: &Settings, only: Option<&str>, parallel: bool) -> Vec<Check> {
    let selected = |j: &Job| only.is_none_or(|o| j.name.contains(o));
    let one = |j: &Job| {
        if selected(j) {
            (j.run)(settings)
        } else {
            Check::skip(j.name, "not selected by --only")
        }
    };
    if !parallel {
        return jobs.iter().map(one).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs.iter().map(|j| scope.spawn(move || one(j))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    })
}
