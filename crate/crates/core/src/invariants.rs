//! The degree 6, 9 and 12 invariants of W(C) on the Cartan coordinates (a, b, c)
//! of a|s₁⟩ + b|s₂⟩ + c|s₃⟩, and randomized identity testing of their invariance.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::groups::CodeGate;

/// Largest degree among the three invariants.
pub const MAX_DEGREE: u32 = 12;
/// Numerator and denominator bound of the sampling set.
pub const HEIGHT: i64 = 100;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CartanPoint {
    pub a: Cyclo,
    pub b: Cyclo,
    pub c: Cyclo,
}

impl CartanPoint {
    pub fn new(a: Cyclo, b: Cyclo, c: Cyclo) -> Self {
        CartanPoint { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, conductor: u32) -> Self {
        CartanPoint::new(
            Cyclo::from_int(a, conductor),
            Cyclo::from_int(b, conductor),
            Cyclo::from_int(c, conductor),
        )
    }

    pub fn coords(&self) -> [&Cyclo; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn scale(&self, t: &Cyclo) -> Self {
        CartanPoint::new(&self.a * t, &self.b * t, &self.c * t)
    }

    /// The coordinate action p ↦ g·p.
    pub fn act(&self, gate: &CodeGate) -> Result<Self> {
        let m = gate.matrix();
        if m.rows() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "Cartan points need a 3x3 gate, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let v = m.mul_vec(&[self.a.clone(), self.b.clone(), self.c.clone()])?;
        let [a, b, c]: [Cyclo; 3] = v.try_into().expect("length 3");
        Ok(CartanPoint::new(a, b, c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantTriple {
    pub i6: Cyclo,
    pub i9: Cyclo,
    pub i12: Cyclo,
}

pub fn eval_invariants(p: &CartanPoint) -> InvariantTriple {
    let n = p.a.conductor();
    let k = |v: i64| Cyclo::from_int(v, n);
    let (a3, b3, c3) = (p.a.pow(3), p.b.pow(3), p.c.pow(3));
    let (a6, b6, c6) = (a3.pow(2), b3.pow(2), c3.pow(2));
    let (a9, b9, c9) = (&a6 * &a3, &b6 * &b3, &c6 * &c3);

    let i6 = &a6 + &b6 + &c6 - k(10) * (&a3 * &b3 + &a3 * &c3 + &b3 * &c3);
    let i9 = (&a3 - &b3) * (&a3 - &c3) * (&b3 - &c3);
    let i12 = &a9 * &(&b3 + &c3) + &b9 * &(&a3 + &c3) + &c9 * &(&a3 + &b3)
        - k(4) * (&a6 * &b6 + &a6 * &c6 + &b6 * &c6)
        + k(2) * (&a6 * &b3 * &c3 + &a3 * &b6 * &c3 + &a3 * &b3 * &c6);
    InvariantTriple { i6, i9, i12 }
}

/// The distinct rationals p/q with |p| ≤ 100 and 1 ≤ q ≤ 100, sorted.
pub fn sample_set() -> &'static [BigRational] {
    static SET: OnceLock<Vec<BigRational>> = OnceLock::new();
    SET.get_or_init(|| {
        let mut set = BTreeSet::new();
        for q in 1..=HEIGHT {
            for p in -HEIGHT..=HEIGHT {
                set.insert(BigRational::new(BigInt::from(p), BigInt::from(q)));
            }
        }
        set.into_iter().collect()
    })
}

pub fn random_point<R: Rng>(rng: &mut R, conductor: u32) -> CartanPoint {
    let s = sample_set();
    let mut pick = || Cyclo::from_rational(&s[rng.gen_range(0..s.len())], conductor);
    CartanPoint::new(pick(), pick(), pick())
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub trials: usize,
    /// Size of the set the coordinates are drawn from.
    pub sample_set_size: usize,
    /// Upper bound on the chance that a non-invariant gate passes every trial:
    /// (12 / |S|)^trials, since I(g·x) − I(x) has degree at most 12.
    pub false_pass_bound: f64,
    /// First point where some invariant changed.
    pub counterexample: Option<CartanPoint>,
}

/// Randomized identity test of I(g·p) = I(p) for all three invariants.
pub fn check_weyl_invariance<R: Rng>(
    gate: &CodeGate,
    trials: usize,
    rng: &mut R,
) -> Result<InvarianceReport> {
    let conductor = gate.matrix().conductor();
    let size = sample_set().len();
    let mut counterexample = None;
    for _ in 0..trials {
        let p = random_point(rng, conductor);
        if eval_invariants(&p.act(gate)?) != eval_invariants(&p) {
            counterexample = Some(p);
            break;
        }
    }
    Ok(InvarianceReport {
        invariant: counterexample.is_none(),
        trials,
        sample_set_size: size,
        false_pass_bound: (f64::from(MAX_DEGREE) / size as f64).powi(trials as i32),
        counterexample,
    })
}

/// Which invariant the fingerprint ratios are taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// (I₉²/I₆³, I₁₂/I₆²)
    I6,
    /// I₆ = 0: (I₆³/I₉², I₁₂³/I₉⁴)
    I9,
    /// I₆ = I₉ = 0: (I₆²/I₁₂, I₉⁴/I₁₂³)
    I12,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub branch: Branch,
    pub ratios: [Cyclo; 2],
}

/// Degree-0 ratios of the invariants. Equal fingerprints are necessary for two
/// Cartan points to lie in the same orbit.
pub fn invariant_ratio_fingerprint(p: &CartanPoint) -> Result<Fingerprint> {
    let t = eval_invariants(p);
    let (branch, ratios) = if !t.i6.is_zero() {
        (
            Branch::I6,
            [t.i9.pow(2).try_div(&t.i6.pow(3))?, t.i12.try_div(&t.i6.pow(2))?],
        )
    } else if !t.i9.is_zero() {
        (
            Branch::I9,
            [t.i6.pow(3).try_div(&t.i9.pow(2))?, t.i12.pow(3).try_div(&t.i9.pow(4))?],
        )
    } else if !t.i12.is_zero() {
        (
            Branch::I12,
            [t.i6.pow(2).try_div(&t.i12)?, t.i9.pow(4).try_div(&t.i12.pow(3))?],
        )
    } else {
        return Err(Error::InvalidArgument(
            "all three invariants vanish, fingerprint undefined".into(),
        ));
    };
    Ok(Fingerprint { branch, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::linalg::Matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: u32 = 12;

    fn triple(i6: i64, i9: i64, i12: i64) -> InvariantTriple {
        InvariantTriple {
            i6: Cyclo::from_int(i6, N),
            i9: Cyclo::from_int(i9, N),
            i12: Cyclo::from_int(i12, N),
        }
    }

    // Direct integer evaluation of the three polynomials.
    fn oracle(a: i64, b: i64, c: i64) -> (i64, i64, i64) {
        let (a3, b3, c3) = (a.pow(3), b.pow(3), c.pow(3));
        let i6 = a3 * a3 + b3 * b3 + c3 * c3 - 10 * (a3 * b3 + a3 * c3 + b3 * c3);
        let i9 = (a3 - b3) * (a3 - c3) * (b3 - c3);
        let i12 = a3.pow(3) * (b3 + c3) + b3.pow(3) * (a3 + c3) + c3.pow(3) * (a3 + b3)
            - 4 * (a3 * a3 * b3 * b3 + a3 * a3 * c3 * c3 + b3 * b3 * c3 * c3)
            + 2 * a3 * b3 * c3 * (a3 + b3 + c3);
        (i6, i9, i12)
    }

    #[test]
    fn known_values() {
        assert_eq!(eval_invariants(&CartanPoint::from_ints(1, 0, 0, N)), triple(1, 0, 0));
        assert!(eval_invariants(&CartanPoint::from_ints(1, 1, 0, N)).i9.is_zero());
        assert_eq!(eval_invariants(&CartanPoint::from_ints(1, 1, 1, N)), triple(-27, 0, 0));
        for (a, b, c) in [(2, -1, 3), (0, 1, -2), (3, 2, 1)] {
            let (i6, i9, i12) = oracle(a, b, c);
            assert_eq!(eval_invariants(&CartanPoint::from_ints(a, b, c, N)), triple(i6, i9, i12));
        }
    }

    #[test]
    fn weyl_generators_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in constants::tabulated_weyl_generators() {
            let gate = CodeGate::new(r).unwrap();
            let report = check_weyl_invariance(&gate, 50, &mut rng).unwrap();
            assert!(report.invariant);
            assert!(report.false_pass_bound < 1e-100);
        }
    }

    #[test]
    fn rescaling_gate_is_caught() {
        let half = Cyclo::from_ratio(1, 2, N);
        let gate = CodeGate::new(Matrix::diagonal(&[Cyclo::from_int(2, N), half, Cyclo::one(N)])).unwrap();
        // I₆(2, 1/2, 0) = 64 + 1/64 − 10 ≠ 1 + 1 − 10
        let moved = CartanPoint::from_ints(1, 1, 0, N).act(&gate).unwrap();
        assert_ne!(eval_invariants(&moved).i6, Cyclo::from_int(-8, N));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let report = check_weyl_invariance(&gate, 50, &mut rng).unwrap();
        assert!(!report.invariant);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn fingerprints() {
        let f = invariant_ratio_fingerprint(&CartanPoint::from_ints(1, 0, 0, N)).unwrap();
        assert_eq!(f.branch, Branch::I6);
        assert!(f.ratios.iter().all(Cyclo::is_zero));
        let p = CartanPoint::from_ints(2, -1, 3, N);
        assert_eq!(
            invariant_ratio_fingerprint(&p).unwrap(),
            invariant_ratio_fingerprint(&p.scale(&Cyclo::from_int(5, N))).unwrap()
        );
        assert!(invariant_ratio_fingerprint(&CartanPoint::from_ints(0, 0, 0, N)).is_err());
    }

    #[test]
    fn sample_set_has_distinct_values() {
        let s = sample_set();
        assert!(s.len() > 10_000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
