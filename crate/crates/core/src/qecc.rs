//! Quantum error-correcting codes over qudits: Pauli error bases, the
//! Knill–Laflamme conditions, purity, brute-force distance, r-uniformity and the
//! quantum Singleton bound.
//!
//! Everything here is exact; "zero" always means the zero coefficient vector.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tensor::{self, LocalOperator, PureState};

/// An orthonormal basis of a code subspace of (C^D)^{⊗n}.
#[derive(Clone, Debug)]
pub struct CodeSubspace {
    basis: Vec<PureState>,
    claimed_distance: Option<usize>,
}

impl CodeSubspace {
    /// Validates that the basis is nonempty, shares one uniform local dimension,
    /// and is exactly orthonormal.
    pub fn new(basis: Vec<PureState>, claimed_distance: Option<usize>) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::InvalidCode("empty basis".into()))?;
        let dims = first.dims().to_vec();
        if dims.iter().any(|&d| d != dims[0]) {
            return Err(Error::InvalidCode(format!("non-uniform local dims {dims:?}")));
        }
        for (i, u) in basis.iter().enumerate() {
            if u.dims() != dims.as_slice() {
                return Err(Error::InvalidCode(format!("basis vector {i} has dims {:?}", u.dims())));
            }
            for (j, v) in basis.iter().enumerate().skip(i) {
                let g = tensor::inner(u, v)?;
                let ok = if i == j { g.is_one() } else { g.is_zero() };
                if !ok {
                    return Err(Error::InvalidCode(format!(
                        "basis is not orthonormal: <u{i}|u{j}> = {g}"
                    )));
                }
            }
        }
        Ok(CodeSubspace {
            basis,
            claimed_distance,
        })
    }

    pub fn basis(&self) -> &[PureState] {
        &self.basis
    }

    /// Number of sites n.
    pub fn sites(&self) -> usize {
        self.basis[0].sites()
    }

    /// Code dimension K.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Local dimension D.
    pub fn local_dim(&self) -> usize {
        self.basis[0].dims()[0]
    }

    pub fn conductor(&self) -> u32 {
        self.basis[0].conductor()
    }

    pub fn claimed_distance(&self) -> Option<usize> {
        self.claimed_distance
    }

    pub fn with_claimed_distance(mut self, d: Option<usize>) -> Self {
        self.claimed_distance = d;
        self
    }

    /// Exact span equality with another code on the same space.
    pub fn same_span(&self, other: &CodeSubspace) -> Result<bool> {
        if self.basis[0].dims() != other.basis[0].dims() {
            return Ok(false);
        }
        let a: Vec<Vec<Cyclo>> = self.basis.iter().map(|s| s.amps().to_vec()).collect();
        let b: Vec<Vec<Cyclo>> = other.basis.iter().map(|s| s.amps().to_vec()).collect();
        linalg::same_span(&a, &b)
    }

    /// Whether `v` lies in the span of the basis.
    pub fn contains(&self, v: &PureState) -> Result<bool> {
        let mut rest = v.clone();
        for u in &self.basis {
            let c = tensor::inner(u, v)?;
            rest = rest.try_add(&u.scale(&-c))?;
        }
        Ok(rest.is_zero())
    }
}

/// An n-site Pauli product X^{a₁}Z^{b₁} ⊗ … ⊗ X^{a_n}Z^{b_n}.
#[derive(Clone, Debug)]
pub struct ErrorBasisElement {
    pub op: LocalOperator,
    pub exponents: Vec<(u32, u32)>,
    weight: usize,
}

impl ErrorBasisElement {
    pub fn new(d: usize, exponents: Vec<(u32, u32)>, conductor: u32) -> Result<Self> {
        let x = crate::constants::pauli_x(d, conductor);
        let z = crate::constants::pauli_z(d, conductor);
        let factors = exponents
            .iter()
            .map(|&(a, b)| {
                let mut m = Matrix::identity(d, conductor);
                for _ in 0..a {
                    m = &m * &x;
                }
                for _ in 0..b {
                    m = &m * &z;
                }
                m
            })
            .collect();
        let op = LocalOperator::new(Cyclo::one(conductor), factors)?;
        let weight = op.weight();
        Ok(ErrorBasisElement {
            op,
            exponents,
            weight,
        })
    }

    /// Number of non-identity factors, recomputed from the operator.
    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Per-site exponent pairs, e.g. "(1,0)(0,0)(0,2)".
    pub fn label(&self) -> String {
        self.exponents
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect()
    }
}

pub fn is_prime(d: u32) -> bool {
    d >= 2 && (2..).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p))
}

fn check_local_dim(d: usize, conductor: u32) -> Result<()> {
    if !is_prime(d as u32) {
        return Err(Error::NotPrime(d as u32));
    }
    if !(conductor as usize).is_multiple_of(d) {
        return Err(Error::ConductorNotDivisible {
            conductor,
            required: d as u32,
        });
    }
    Ok(())
}

/// All Pauli products on `n` sites of weight exactly `weight`, in lexicographic
/// exponent order.
pub fn pauli_errors_of_weight(
    n: usize,
    d: usize,
    weight: usize,
    conductor: u32,
) -> Result<Vec<ErrorBasisElement>> {
    check_local_dim(d, conductor)?;
    let site_choices: Vec<(u32, u32)> = (0..d as u32).cartesian_product(0..d as u32).collect();
    let mut out = Vec::new();
    for exps in (0..n).map(|_| site_choices.iter().copied()).multi_cartesian_product() {
        if exps.iter().filter(|&&e| e != (0, 0)).count() == weight {
            out.push(ErrorBasisElement::new(d, exps, conductor)?);
        }
    }
    if n == 0 && weight == 0 {
        out.push(ErrorBasisElement::new(d, vec![], conductor)?);
    }
    Ok(out)
}

/// All Pauli products on `n` sites with weight ≤ `max_weight`, identity first.
pub fn pauli_error_basis(
    n: usize,
    d: usize,
    max_weight: usize,
    conductor: u32,
) -> Result<Vec<ErrorBasisElement>> {
    if max_weight > n {
        return Err(Error::InvalidArgument(format!(
            "max_weight {max_weight} exceeds site count {n}"
        )));
    }
    let mut out = Vec::new();
    for w in 0..=max_weight {
        out.extend(pauli_errors_of_weight(n, d, w, conductor)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeParameters {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub local_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub error_label: String,
    pub i: usize,
    pub j: usize,
    pub value: Cyclo,
}

#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub parameters: CodeParameters,
    pub is_code: bool,
    pub is_pure: bool,
    /// c(E) = ⟨u₀|E|u₀⟩ for each checked error.
    #[serde(skip)]
    pub c_table: Vec<(String, Cyclo)>,
    pub violations: Vec<Violation>,
}

struct WeightOutcome {
    violations: Vec<Violation>,
    c_table: Vec<(String, Cyclo)>,
    impure: bool,
}

fn check_errors(code: &CodeSubspace, errors: &[ErrorBasisElement]) -> Result<WeightOutcome> {
    let mut out = WeightOutcome {
        violations: Vec::new(),
        c_table: Vec::new(),
        impure: false,
    };
    let basis = code.basis();
    for e in errors {
        let images = basis
            .iter()
            .map(|u| e.op.apply(u))
            .collect::<Result<Vec<_>>>()?;
        let c = tensor::inner(&basis[0], &images[0])?;
        for (i, ui) in basis.iter().enumerate() {
            for (j, img) in images.iter().enumerate() {
                if i == 0 && j == 0 {
                    continue;
                }
                let v = tensor::inner(ui, img)?;
                let bad = if i == j { v != c } else { !v.is_zero() };
                if bad {
                    out.violations.push(Violation {
                        error_label: e.label(),
                        i,
                        j,
                        value: v,
                    });
                }
            }
        }
        if e.weight() > 0 && !c.is_zero() {
            out.impure = true;
        }
        out.c_table.push((e.label(), c));
    }
    Ok(out)
}

/// Checks ⟨uᵢ|E|uⱼ⟩ = c(E)δᵢⱼ for every Pauli error of weight < d.
pub fn kl_check(code: &CodeSubspace, d: usize) -> Result<KlReport> {
    if d == 0 {
        return Err(Error::InvalidArgument("distance must be at least 1".into()));
    }
    let n = code.sites();
    let max_w = (d - 1).min(n);
    let errors = pauli_error_basis(n, code.local_dim(), max_w, code.conductor())?;
    let outcome = check_errors(code, &errors)?;
    let is_code = outcome.violations.is_empty();
    Ok(KlReport {
        parameters: CodeParameters {
            n,
            k: code.dimension(),
            d,
            local_dim: code.local_dim(),
        },
        is_code,
        is_pure: is_code && !outcome.impure,
        c_table: outcome.c_table,
        violations: outcome.violations,
    })
}

/// The largest d for which the Knill–Laflamme conditions hold, found by sweeping
/// weights upward until some error of that weight fails. When every error passes
/// (for example K = 1) the result is n + 1.
pub fn distance(code: &CodeSubspace) -> Result<usize> {
    let n = code.sites();
    for w in 0..=n {
        let errors = pauli_errors_of_weight(n, code.local_dim(), w, code.conductor())?;
        if !check_errors(code, &errors)?.violations.is_empty() {
            return Ok(w);
        }
    }
    Ok(n + 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub r: usize,
    pub uniform: bool,
    /// The keep-set with the largest deviation, when any deviates.
    pub worst_subset: Option<Vec<usize>>,
    /// Largest |entry| of (reduced state − I/Dʳ), evaluated in floating point.
    pub worst_deviation: f64,
    pub subsets_checked: usize,
}

/// Whether every r-site reduction of v/‖v‖ equals I/(∏ kept dims), exactly.
pub fn r_uniform_check(v: &PureState, r: usize) -> Result<UniformityReport> {
    let n = v.sites();
    if r == 0 || r > n {
        return Err(Error::InvalidArgument(format!("r = {r} outside 1..={n}")));
    }
    let inv_norm = v.norm_sqr().inv()?;
    let mut report = UniformityReport {
        r,
        uniform: true,
        worst_subset: None,
        worst_deviation: 0.0,
        subsets_checked: 0,
    };
    for keep in (0..n).combinations(r) {
        let rho = v.partial_trace(&keep)?.scale(&inv_norm);
        let dim: usize = keep.iter().map(|&k| v.dims()[k]).product();
        let target = Matrix::identity(dim, v.conductor())
            .scale(&Cyclo::from_ratio(1, dim as i64, v.conductor()));
        let diff = rho.matrix().try_sub(&target)?;
        report.subsets_checked += 1;
        if !diff.is_zero() {
            let dev = diff
                .entries()
                .iter()
                .map(|x| x.to_complex().norm())
                .fold(0.0, f64::max);
            if report.uniform || dev > report.worst_deviation {
                report.worst_deviation = dev;
                report.worst_subset = Some(keep.clone());
            }
            report.uniform = false;
        }
    }
    Ok(report)
}

/// The largest r for which v is r-uniform (0 if not even 1-uniform).
pub fn uniformity(v: &PureState) -> Result<usize> {
    let mut best = 0;
    for r in 1..=v.sites() / 2 {
        if r_uniform_check(v, r)?.uniform {
            best = r;
        } else {
            break;
        }
    }
    Ok(best)
}

fn pow(base: usize, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), e)
}

/// log_D K ≤ n − 2(d−1), evaluated as K·D^{2(d−1)} ≤ Dⁿ.
pub fn singleton_check(n: usize, k: usize, d: usize, local_dim: usize) -> bool {
    BigUint::from(k) * pow(local_dim, 2 * d.saturating_sub(1)) <= pow(local_dim, n)
}

/// Equality in the Singleton bound (an MDS code).
pub fn singleton_saturated(n: usize, k: usize, d: usize, local_dim: usize) -> bool {
    BigUint::from(k) * pow(local_dim, 2 * d.saturating_sub(1)) == pow(local_dim, n)
}

/// The simultaneous +1 eigenspace of the given operators, with an exact
/// orthonormal basis.
pub fn stabilizer_subspace(gens: &[LocalOperator]) -> Result<CodeSubspace> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
    let dims = first.dims();
    let conductor = first.conductor();
    if let Some(g) = gens.iter().find(|g| g.dims() != dims) {
        return Err(Error::DimensionMismatch(format!(
            "generator dims {:?} vs {:?}",
            g.dims(),
            dims
        )));
    }
    let len: usize = dims.iter().product();
    let id = Matrix::identity(len, conductor);
    let mut rows: Vec<Vec<Cyclo>> = Vec::new();
    for g in gens {
        let m = g.to_dense().try_sub(&id)?;
        rows.extend((0..len).map(|i| m.row(i).to_vec()));
    }
    let kernel = Matrix::from_rows(rows)?.kernel();
    let basis = linalg::orthonormalize(&kernel)?
        .into_iter()
        .map(|amps| PureState::new(dims.clone(), amps))
        .collect::<Result<Vec<_>>>()?;
    if basis.is_empty() {
        return Err(Error::InvalidCode("fixed space is trivial".into()));
    }
    CodeSubspace::new(basis, None)
}

/// Number of errors of weight ≤ w on n sites: Σ C(n,k)(D²−1)^k.
pub fn error_count(n: usize, local_dim: usize, max_weight: usize) -> usize {
    (0..=max_weight)
        .map(|k| {
            let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
            binom * pow(local_dim * local_dim - 1, k).to_usize().unwrap_or(usize::MAX)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;

    const N: u32 = 12;

    fn c332() -> CodeSubspace {
        CodeSubspace::new(constants::code_basis(), Some(2)).unwrap()
    }

    #[test]
    fn error_basis_sizes() {
        assert_eq!(pauli_error_basis(3, 3, 1, N).unwrap().len(), 25);
        let single = pauli_error_basis(1, 2, 0, 24).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single[0].op.is_identity());
        assert_eq!(pauli_error_basis(3, 3, 3, N).unwrap().len(), 729);
        assert_eq!(error_count(3, 3, 1), 25);
        assert!(matches!(pauli_error_basis(2, 4, 1, N), Err(Error::NotPrime(4))));
        for e in pauli_error_basis(3, 3, 2, N).unwrap() {
            let nontrivial = e.exponents.iter().filter(|&&x| x != (0, 0)).count();
            assert_eq!(e.weight(), nontrivial);
        }
    }

    #[test]
    fn code_332_is_pure_distance_two() {
        let code = c332();
        let r = kl_check(&code, 2).unwrap();
        assert!(r.is_code && r.is_pure);
        assert_eq!(r.c_table.len(), 25);
        let r3 = kl_check(&code, 3).unwrap();
        assert!(!r3.is_code);
        assert!(!r3.violations.is_empty());
        assert_eq!(distance(&code).unwrap(), 2);
        assert!(singleton_saturated(3, 3, 2, 3));
    }

    #[test]
    fn trivial_and_repetition_codes() {
        let zero = PureState::basis(vec![3, 3, 3], &[0, 0, 0], N).unwrap();
        let code = CodeSubspace::new(vec![zero], None).unwrap();
        let r = kl_check(&code, 1).unwrap();
        assert!(r.is_code);

        let a = PureState::basis(vec![2, 2, 2], &[0, 0, 0], 24).unwrap();
        let b = PureState::basis(vec![2, 2, 2], &[1, 1, 1], 24).unwrap();
        let rep = CodeSubspace::new(vec![a, b], None).unwrap();
        assert_eq!(distance(&rep).unwrap(), 1);
    }

    #[test]
    fn uniformity_checks() {
        assert!(r_uniform_check(&constants::phi(), 2).unwrap().uniform);
        assert!(r_uniform_check(&constants::code_basis()[0], 1).unwrap().uniform);
        let prod = PureState::basis(vec![3, 3, 3], &[0, 0, 0], N).unwrap();
        let rep = r_uniform_check(&prod, 1).unwrap();
        assert!(!rep.uniform);
        assert!(rep.worst_subset.is_some());
        assert!(rep.worst_deviation > 0.5);
        assert_eq!(uniformity(&constants::phi()).unwrap(), 2);
    }

    #[test]
    fn singleton_examples() {
        assert!(singleton_check(3, 3, 2, 3) && singleton_saturated(3, 3, 2, 3));
        // ((3,2,2))_2 meets the bound with equality even though no such code exists
        assert!(singleton_check(3, 2, 2, 2) && singleton_saturated(3, 2, 2, 2));
        assert!(!singleton_saturated(4, 2, 2, 2));
        assert!(singleton_check(2, 1, 2, 2) && singleton_saturated(2, 1, 2, 2));
        assert!(!singleton_check(3, 3, 3, 3));
    }

    #[test]
    fn stabilizer_fixed_spaces() {
        let gens = constants::stabilizer_generators(3, 3, N).unwrap();
        let code = stabilizer_subspace(&gens).unwrap();
        assert_eq!(code.dimension(), 3);
        assert!(code.same_span(&c332()).unwrap());

        let id = LocalOperator::identity(&[3, 3], N);
        assert_eq!(stabilizer_subspace(&[id]).unwrap().dimension(), 9);

        let gens = constants::stabilizer_generators(2, 4, 24).unwrap();
        let q442 = stabilizer_subspace(&gens).unwrap();
        assert_eq!(q442.dimension(), 4);
        let r = kl_check(&q442, 2).unwrap();
        assert!(r.is_code && r.is_pure);
        assert_eq!(distance(&q442).unwrap(), 2);

        let mixed = [
            LocalOperator::identity(&[3, 3], N),
            LocalOperator::identity(&[3, 3, 3], N),
        ];
        assert!(stabilizer_subspace(&mixed).is_err());
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let a = PureState::basis(vec![3], &[0], N).unwrap();
        let b = a.scale(&Cyclo::from_int(2, N));
        assert!(CodeSubspace::new(vec![a.clone(), a.clone()], None).is_err());
        assert!(CodeSubspace::new(vec![b], None).is_err());
    }
}
