//! Finite matrix groups by closure.
//!
//! Elements are kept in canonical form (factored operators with leading-1
//! factors, or plain exact matrices), so set membership is exact. Closure is a
//! breadth-first search that left-multiplies every discovered element by each
//! generator in the order given, which makes the element order reproducible.

use std::hash::Hash;

use indexmap::IndexSet;
use rand::seq::IteratorRandom;
use rand::Rng;
use serde::Serialize;

use crate::constants;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qecc::CodeSubspace;
use crate::tensor::{self, LocalOperator, PureState};

/// Expected orders, used for the default closure caps (10× expected).
pub const CENTRALIZER_ORDER: usize = 9;
pub const WEYL_ORDER: usize = 648;
/// |N(C)| = |W(C)|·|C(C)| as operators on (C³)^{⊗3}.
pub const NORMALIZER_ORDER: usize = 5832;
/// The expected order of the local symmetry group of |Φ⟩. The closure of its
/// generators as operators on (C³)^{⊗4} has order 1944 = 5832/3, because
/// A ↦ conj(μ(A))⊗A sends ωI₂₇ ∈ N(C) to the identity.
pub const LOCAL_SYMMETRY_ORDER: usize = 5832;
/// |N(C)| / |{I, ωI, ω²I}|.
pub const LOCAL_SYMMETRY_OPERATOR_ORDER: usize = NORMALIZER_ORDER / 3;

pub trait GroupElement: Clone + Eq + Hash {
    /// self · other
    fn compose(&self, other: &Self) -> Self;
}

impl GroupElement for LocalOperator {
    fn compose(&self, other: &Self) -> Self {
        LocalOperator::compose(self, other).expect("generators share dims")
    }
}

/// A K×K matrix acting on code coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeGate {
    matrix: Matrix,
}

impl CodeGate {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("code gate must be square".into()));
        }
        Ok(CodeGate { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.matrix.is_unitary()
    }

    pub fn identity(k: usize, conductor: u32) -> Self {
        CodeGate {
            matrix: Matrix::identity(k, conductor),
        }
    }
}

impl GroupElement for CodeGate {
    fn compose(&self, other: &Self) -> Self {
        CodeGate {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MatrixGroup<T> {
    generators: Vec<T>,
    elements: IndexSet<T>,
    cap: usize,
}

impl<T: GroupElement> MatrixGroup<T> {
    pub fn generators(&self) -> &[T] {
        &self.generators
    }

    pub fn elements(&self) -> &IndexSet<T> {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn contains(&self, g: &T) -> bool {
        self.elements.contains(g)
    }

    /// Same element set.
    pub fn set_equals(&self, other: &MatrixGroup<T>) -> bool {
        self.order() == other.order() && self.elements.iter().all(|g| other.contains(g))
    }

    /// Checks g·h ∈ G for every generator g and up to `sample` elements h
    /// (all of them when `sample` ≥ order).
    pub fn verify_closed<R: Rng>(&self, sample: usize, rng: &mut R) -> bool {
        let hs: Vec<&T> = if sample >= self.order() {
            self.elements.iter().collect()
        } else {
            self.elements.iter().choose_multiple(rng, sample)
        };
        hs.iter()
            .all(|h| self.generators.iter().all(|g| self.contains(&g.compose(h))))
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> &T {
        &self.elements[rng.gen_range(0..self.order())]
    }
}

/// Breadth-first closure of `gens` starting from `identity`.
pub fn closure<T: GroupElement>(gens: &[T], identity: T, cap: usize) -> Result<MatrixGroup<T>> {
    let mut elements = IndexSet::new();
    elements.insert(identity);
    let mut next = 0;
    while next < elements.len() {
        let h = elements[next].clone();
        for g in gens {
            elements.insert(g.compose(&h));
            if elements.len() > cap {
                return Err(Error::ClosureCapExceeded(cap));
            }
        }
        next += 1;
    }
    Ok(MatrixGroup {
        generators: gens.to_vec(),
        elements,
        cap,
    })
}

/// Closure of factored operators, checking they act on the same sites.
pub fn close_operators(gens: &[LocalOperator], cap: usize) -> Result<MatrixGroup<LocalOperator>> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
    let dims = first.dims();
    if let Some(g) = gens.iter().find(|g| g.dims() != dims || g.conductor() != first.conductor()) {
        return Err(Error::DimensionMismatch(format!(
            "generator on {:?} among generators on {:?}",
            g.dims(),
            dims
        )));
    }
    if gens.iter().any(LocalOperator::is_zero) {
        return Err(Error::InvalidArgument("zero operator is not invertible".into()));
    }
    closure(gens, LocalOperator::identity(&dims, first.conductor()), cap)
}

/// A complex reflection s_{a,d}: fixes a^⊥ and sends a to e^{2πi/d}·a.
#[derive(Clone, Debug)]
pub struct ReflectionSpec {
    pub vector: Vec<Cyclo>,
    pub order: u32,
}

/// I − (1 − ζ_d)·a a† / (a† a).
pub fn reflection(spec: &ReflectionSpec) -> Result<CodeGate> {
    let a = &spec.vector;
    let first = a.first().ok_or(Error::ZeroVector)?;
    let conductor = first.conductor();
    if spec.order == 0 || conductor % spec.order != 0 {
        return Err(Error::ConductorNotDivisible {
            conductor,
            required: spec.order.max(1),
        });
    }
    let norm = crate::linalg::inner(a, a)?;
    if norm.is_zero() {
        return Err(Error::ZeroVector);
    }
    let zeta = Cyclo::root_of_unity((conductor / spec.order) as i64, conductor);
    let coef = (Cyclo::one(conductor) - zeta).try_div(&norm)?;
    let k = a.len();
    let mut m = Matrix::identity(k, conductor);
    for i in 0..k {
        for j in 0..k {
            let v = m.get(i, j) - &(&coef * &(&a[i] * &a[j].conj()));
            m.set(i, j, v);
        }
    }
    CodeGate::new(m)
}

/// R₁, R₂, R₃ built from the reflection formula.
pub fn weyl_generators() -> Result<Vec<CodeGate>> {
    constants::reflection_vectors()
        .into_iter()
        .map(|vector| reflection(&ReflectionSpec { vector, order: 3 }))
        .collect()
}

pub fn weyl_group() -> Result<MatrixGroup<CodeGate>> {
    weyl_group_with_cap(10 * WEYL_ORDER)
}

pub fn weyl_group_with_cap(cap: usize) -> Result<MatrixGroup<CodeGate>> {
    closure(
        &weyl_generators()?,
        CodeGate::identity(3, constants::zeta12().conductor()),
        cap,
    )
}

/// μ(g)ᵢⱼ = ⟨uᵢ|g|uⱼ⟩, after checking that g maps every basis vector back into
/// the code.
pub fn mu_matrix(g: &LocalOperator, code: &CodeSubspace) -> Result<CodeGate> {
    let basis = code.basis();
    let k = basis.len();
    let mut m = Matrix::zeros(k, k, code.conductor());
    for (j, u) in basis.iter().enumerate() {
        let image = g.apply(u)?;
        let mut residual = image.clone();
        for (i, ui) in basis.iter().enumerate() {
            let c = tensor::inner(ui, &image)?;
            residual = residual.try_add(&ui.scale(&-&c))?;
            m.set(i, j, c);
        }
        if !residual.is_zero() {
            return Err(Error::NotInvariant(j));
        }
    }
    CodeGate::new(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryMismatch {
    pub row: usize,
    pub col: usize,
    pub expected: Cyclo,
    pub actual: Cyclo,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetCheck {
    pub index: usize,
    pub maps_to_generator: bool,
    pub special_unitary: bool,
    pub mismatches: Vec<EntryMismatch>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetReport {
    pub passed: bool,
    pub checks: Vec<CosetCheck>,
}

/// Checks μ(Qᵢ) = Rᵢ entry for entry and that each Qᵢ lies in SU₃^{⊗3}.
pub fn verify_coset_representatives(
    reps: &[LocalOperator],
    targets: &[Matrix],
    code: &CodeSubspace,
) -> Result<CosetReport> {
    if reps.len() != targets.len() {
        return Err(Error::InvalidArgument("one target per representative".into()));
    }
    let mut checks = Vec::new();
    for (index, (q, r)) in reps.iter().zip(targets).enumerate() {
        let special_unitary = q.is_special_unitary_product()?;
        let (mismatches, error) = match mu_matrix(q, code) {
            Ok(mu) => {
                let mut mm = Vec::new();
                for i in 0..r.rows() {
                    for j in 0..r.cols() {
                        if mu.matrix().get(i, j) != r.get(i, j) {
                            mm.push(EntryMismatch {
                                row: i,
                                col: j,
                                expected: r.get(i, j).clone(),
                                actual: mu.matrix().get(i, j).clone(),
                            });
                        }
                    }
                }
                (mm, None)
            }
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        checks.push(CosetCheck {
            index,
            maps_to_generator: error.is_none() && mismatches.is_empty(),
            special_unitary,
            mismatches,
            error,
        });
    }
    Ok(CosetReport {
        passed: checks.iter().all(|c| c.maps_to_generator && c.special_unitary),
        checks,
    })
}

/// The built-in representatives against the tabulated R₁, R₂, R₃ on the code C.
pub fn verify_tabulated_cosets() -> Result<CosetReport> {
    let code = CodeSubspace::new(constants::code_basis(), Some(2))?;
    verify_coset_representatives(
        &constants::coset_representatives(),
        &constants::tabulated_weyl_generators(),
        &code,
    )
}

/// Closure of μ over the stabilizer generators and the coset representatives.
pub fn transversal_group(
    code: &CodeSubspace,
    normalizer_gens: &[LocalOperator],
    cap: usize,
) -> Result<MatrixGroup<CodeGate>> {
    let gens = normalizer_gens
        .iter()
        .map(|g| mu_matrix(g, code))
        .collect::<Result<Vec<_>>>()?;
    closure(&gens, CodeGate::identity(code.dimension(), code.conductor()), cap)
}

/// X^{⊗3}, Z^{⊗3}, Q₁, Q₂, Q₃.
pub fn normalizer_generators() -> Vec<LocalOperator> {
    let mut gens: Vec<LocalOperator> =
        constants::stabilizer_generators(3, 3, constants::zeta12().conductor())
            .expect("3 | 12")
            .to_vec();
    gens.extend(constants::coset_representatives());
    gens
}

/// N(C) as factored operators on three qutrits.
pub fn normalizer_group() -> Result<MatrixGroup<LocalOperator>> {
    close_operators(&normalizer_generators(), 10 * NORMALIZER_ORDER)
}

pub fn transversal_group_of_c() -> Result<MatrixGroup<CodeGate>> {
    let code = CodeSubspace::new(constants::code_basis(), Some(2))?;
    transversal_group(&code, &normalizer_generators(), 10 * WEYL_ORDER)
}

pub fn local_symmetry_group() -> Result<MatrixGroup<LocalOperator>> {
    local_symmetry_group_with_cap(10 * LOCAL_SYMMETRY_ORDER)
}

pub fn local_symmetry_group_with_cap(cap: usize) -> Result<MatrixGroup<LocalOperator>> {
    close_operators(&constants::local_symmetry_generators(), cap)
}

/// Checks that g = s·F₀⊗F₁⊗F₂⊗F₃ has the form conj(μ(A))⊗A with A = F₁⊗F₂⊗F₃
/// up to the global scalar fixed by g|Φ⟩ = |Φ⟩. Returns false when A does not
/// preserve the code or the forms differ.
pub fn has_conjugate_mu_form(g: &LocalOperator, phi: &PureState, code: &CodeSubspace) -> Result<bool> {
    let conductor = g.conductor();
    let a = LocalOperator::new(Cyclo::one(conductor), g.factors()[1..].to_vec())?;
    let mu = match mu_matrix(&a, code) {
        Ok(mu) => mu,
        Err(Error::NotInvariant(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let mut factors = vec![mu.matrix().conj()];
    factors.extend(g.factors()[1..].iter().cloned());
    let candidate = LocalOperator::new(Cyclo::one(conductor), factors)?;
    let image = candidate.apply(phi)?;
    let Some(lambda) = crate::correspondence::proportional(phi, &image)? else {
        return Ok(false);
    };
    let expected = LocalOperator::new(
        candidate.scalar().try_div(&lambda)?,
        candidate.factors().to_vec(),
    )?;
    Ok(expected == *g)
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerReport {
    pub order: usize,
    pub fixes_code_pointwise: bool,
    pub special_linear: bool,
    pub order_matches_quotient: bool,
    pub generators_commute: bool,
}

impl CentralizerReport {
    pub fn passed(&self) -> bool {
        self.order == CENTRALIZER_ORDER
            && self.fixes_code_pointwise
            && self.special_linear
            && self.order_matches_quotient
            && self.generators_commute
    }
}

/// Checks that the kernel of μ contains ⟨X^{⊗3}, Z^{⊗3}⟩ and that the sizes fit:
/// the subgroup has order 9, fixes every code vector, lies in SL₃^{⊗3}, and
/// 9 = |N(C)|/|W(C)|.
pub fn centralizer_containment_check() -> Result<CentralizerReport> {
    let conductor = constants::zeta12().conductor();
    let gens = constants::stabilizer_generators(3, 3, conductor)?;
    let group = close_operators(&gens, 10 * CENTRALIZER_ORDER)?;
    let basis = constants::code_basis();
    let mut fixes = true;
    let mut special = true;
    for g in group.elements() {
        for s in &basis {
            fixes &= g.apply(s)? == *s;
        }
        special &= g.is_special_unitary_product()?;
    }
    let xz = gens[0].compose(&gens[1])?;
    let zx = gens[1].compose(&gens[0])?;
    Ok(CentralizerReport {
        order: group.order(),
        fixes_code_pointwise: fixes,
        special_linear: special,
        order_matches_quotient: NORMALIZER_ORDER / WEYL_ORDER == group.order()
            && NORMALIZER_ORDER.is_multiple_of(WEYL_ORDER),
        generators_commute: xz == zx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: u32 = 12;

    #[test]
    fn small_closures() {
        let gens = constants::stabilizer_generators(3, 3, N).unwrap();
        assert_eq!(close_operators(&gens, 90).unwrap().order(), 9);
        let id = LocalOperator::identity(&[3], N);
        assert_eq!(close_operators(&[id], 10).unwrap().order(), 1);
        let x = LocalOperator::uniform(&constants::pauli_x(3, N), 1).unwrap();
        let z = LocalOperator::uniform(&constants::pauli_z(3, N), 1).unwrap();
        let p1 = close_operators(&[x, z], 270).unwrap();
        assert_eq!(p1.order(), 27);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(p1.verify_closed(100, &mut rng));
    }

    #[test]
    fn closure_cap_is_enforced() {
        let x = LocalOperator::uniform(&constants::pauli_x(3, N), 1).unwrap();
        let z = LocalOperator::uniform(&constants::pauli_z(3, N), 1).unwrap();
        assert!(matches!(
            close_operators(&[x, z], 20),
            Err(Error::ClosureCapExceeded(20))
        ));
    }

    #[test]
    fn reflections_match_tabulated_generators() {
        let built = weyl_generators().unwrap();
        let tabulated = constants::tabulated_weyl_generators();
        for (b, p) in built.iter().zip(&tabulated) {
            assert_eq!(b.matrix(), p);
            assert!(b.is_unitary());
            // eigenvalues 1, 1, ω: trace 2 + ω and determinant ω
            assert_eq!(b.matrix().trace(), Cyclo::from_int(2, N) + constants::omega(1));
            assert_eq!(b.matrix().det().unwrap(), constants::omega(1));
        }
        let trivial = reflection(&ReflectionSpec {
            vector: constants::reflection_vectors()[1].clone(),
            order: 1,
        })
        .unwrap();
        assert!(trivial.matrix().is_identity());
        let zero = ReflectionSpec {
            vector: vec![Cyclo::zero(N); 3],
            order: 3,
        };
        assert!(matches!(reflection(&zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn mu_of_stabilizers_and_representatives() {
        let code = CodeSubspace::new(constants::code_basis(), Some(2)).unwrap();
        for g in constants::stabilizer_generators(3, 3, N).unwrap() {
            assert!(mu_matrix(&g, &code).unwrap().matrix().is_identity());
        }
        let id = LocalOperator::identity(&[3, 3, 3], N);
        assert!(mu_matrix(&id, &code).unwrap().matrix().is_identity());
        let q1 = &constants::coset_representatives()[0];
        assert_eq!(
            mu_matrix(q1, &code).unwrap().matrix(),
            &constants::tabulated_weyl_generators()[0]
        );
        let x1 = LocalOperator::new(
            Cyclo::one(N),
            vec![
                constants::pauli_x(3, N),
                Matrix::identity(3, N),
                Matrix::identity(3, N),
            ],
        )
        .unwrap();
        assert!(matches!(mu_matrix(&x1, &code), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn builtin_cosets_verify_and_perturbation_is_caught() {
        let report = verify_tabulated_cosets().unwrap();
        assert!(report.passed, "{report:?}");

        let code = CodeSubspace::new(constants::code_basis(), Some(2)).unwrap();
        let mut reps = constants::coset_representatives().to_vec();
        let q2 = &reps[1];
        let mut f0 = q2.factors()[0].clone();
        f0.set(0, 1, f0.get(0, 1) * &constants::omega(1));
        let mut factors = q2.factors().to_vec();
        factors[0] = f0;
        reps[1] = LocalOperator::new(q2.scalar().clone(), factors).unwrap();
        let report =
            verify_coset_representatives(&reps, &constants::tabulated_weyl_generators(), &code).unwrap();
        assert!(!report.passed);
        assert!(report.checks[0].maps_to_generator);
        assert!(!report.checks[1].maps_to_generator);
        assert!(report.checks[1].error.is_some() || !report.checks[1].mismatches.is_empty());
    }

    #[test]
    fn local_symmetry_is_normalizer_mod_cube_roots() {
        let n = normalizer_group().unwrap();
        assert_eq!(n.order(), NORMALIZER_ORDER);
        let w = LocalOperator::new(constants::omega(1), vec![Matrix::identity(3, N); 3]).unwrap();
        assert!(n.contains(&w));
        // conj(μ(ωI))⊗ωI is the identity on four qutrits
        let code = CodeSubspace::new(constants::code_basis(), None).unwrap();
        let mu = mu_matrix(&w, &code).unwrap();
        let mut factors = vec![mu.matrix().conj()];
        factors.extend(w.factors().iter().cloned());
        let image = LocalOperator::new(w.scalar().clone(), factors).unwrap();
        assert!(image.is_identity());

        let s = local_symmetry_group().unwrap();
        assert_eq!(s.order(), LOCAL_SYMMETRY_OPERATOR_ORDER);
        let phi = constants::phi();
        for g in constants::local_symmetry_generators() {
            assert!(has_conjugate_mu_form(&g, &phi, &code).unwrap());
        }
    }

    #[test]
    fn centralizer_report_passes() {
        assert!(centralizer_containment_check().unwrap().passed());
    }
}
