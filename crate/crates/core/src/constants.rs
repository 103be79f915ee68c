//! The concrete objects of the 3-qutrit construction: the generalized Paulis,
//! the 4-qutrit AME state |Φ⟩, the code basis |s₁⟩,|s₂⟩,|s₃⟩, the reflection
//! generators R₁,R₂,R₃, the coset representatives Q₁,Q₂,Q₃ and the five
//! generators of the local symmetry group of |Φ⟩.
//!
//! Everything lives in Q(ζ₁₂) unless a conductor is passed explicitly.

use crate::cyclo::{Cyclo, DEFAULT_CONDUCTOR};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::{LocalOperator, PureState};

const N: u32 = DEFAULT_CONDUCTOR;

/// X|i⟩ = |i+1 mod d⟩.
pub fn pauli_x(d: usize, conductor: u32) -> Matrix {
    let mut m = Matrix::zeros(d, d, conductor);
    for i in 0..d {
        m.set((i + 1) % d, i, Cyclo::one(conductor));
    }
    m
}

/// Z|i⟩ = ξ^i|i⟩ with ξ = e^{2πi/d}; requires d | conductor.
pub fn pauli_z(d: usize, conductor: u32) -> Matrix {
    assert!(
        (conductor as usize).is_multiple_of(d),
        "Z for d = {d} needs d | conductor ({conductor})"
    );
    let step = (conductor as usize / d) as i64;
    let diag: Vec<Cyclo> = (0..d)
        .map(|i| Cyclo::root_of_unity(step * i as i64, conductor))
        .collect();
    Matrix::diagonal(&diag)
}

/// ω^k = e^{2πik/3}.
pub fn omega(k: i64) -> Cyclo {
    Cyclo::root_of_unity(4 * k, N)
}

/// e^{πi/6}.
pub fn zeta12() -> Cyclo {
    Cyclo::root_of_unity(1, N)
}

pub fn inv_sqrt3() -> Cyclo {
    Cyclo::inv_sqrt3(N).expect("12 | 12")
}

fn int(k: i64) -> Cyclo {
    Cyclo::from_int(k, N)
}

/// diag(ω^a, ω^b, ω^c).
pub fn omega_diag(a: i64, b: i64, c: i64) -> Matrix {
    Matrix::diagonal(&[omega(a), omega(b), omega(c)])
}

/// [[ω,1,1],[1,ω,1],[1,1,ω]], the factor shared by Q₂ and the fourth local generator.
pub fn omega_circulant() -> Matrix {
    let (w, one) = (omega(1), int(1));
    Matrix::from_rows(vec![
        vec![w.clone(), one.clone(), one.clone()],
        vec![one.clone(), w.clone(), one.clone()],
        vec![one.clone(), one, w],
    ])
    .expect("3x3")
}

const PHI_KETS: [[usize; 4]; 9] = [
    [0, 0, 0, 0],
    [0, 1, 1, 1],
    [0, 2, 2, 2],
    [1, 0, 1, 2],
    [1, 1, 2, 0],
    [1, 2, 0, 1],
    [2, 0, 2, 1],
    [2, 1, 0, 2],
    [2, 2, 1, 0],
];

/// |Φ⟩ = (1/√3) Σ over the nine orthogonal-Latin-square kets. Scaled so that
/// each ⟨i|₀|Φ⟩ is a unit vector, hence ⟨Φ|Φ⟩ = 3.
pub fn phi() -> PureState {
    let c = inv_sqrt3();
    let terms: Vec<(Cyclo, Vec<usize>)> = PHI_KETS.iter().map(|k| (c.clone(), k.to_vec())).collect();
    PureState::from_kets(vec![3; 4], &terms, N).expect("valid kets")
}

/// |Φ⟩/√3, the unit-norm AME state.
pub fn phi_normalized() -> PureState {
    phi().scale(&inv_sqrt3())
}

/// |s₁⟩, |s₂⟩, |s₃⟩: orthonormal basis of the ((3,3,2))₃ code.
pub fn code_basis() -> Vec<PureState> {
    let c = inv_sqrt3();
    let kets: [[[usize; 3]; 3]; 3] = [
        [[0, 0, 0], [1, 1, 1], [2, 2, 2]],
        [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
        [[0, 2, 1], [1, 0, 2], [2, 1, 0]],
    ];
    kets.iter()
        .map(|group| {
            let terms: Vec<(Cyclo, Vec<usize>)> =
                group.iter().map(|k| (c.clone(), k.to_vec())).collect();
            PureState::from_kets(vec![3; 3], &terms, N).expect("valid kets")
        })
        .collect()
}

/// The vectors e₁ = |2⟩, e₂ = (i/√3)(|0⟩+|1⟩+|2⟩), e₃ = |1⟩ of the vector graph
/// whose order-3 reflections generate the Weyl group.
pub fn reflection_vectors() -> [Vec<Cyclo>; 3] {
    let i_over = Cyclo::root_of_unity(3, N) * inv_sqrt3();
    [
        vec![int(0), int(0), int(1)],
        vec![i_over.clone(), i_over.clone(), i_over],
        vec![int(0), int(1), int(0)],
    ]
}

/// R₁, R₂, R₃ as fixed matrices (not derived from the reflection formula).
pub fn tabulated_weyl_generators() -> [Matrix; 3] {
    let w = omega(1);
    let one = int(1);
    let r2 = Matrix::from_rows(vec![
        vec![one.clone(), w.clone(), w.clone()],
        vec![w.clone(), one.clone(), w.clone()],
        vec![w.clone(), w.clone(), one.clone()],
    ])
    .expect("3x3")
    .scale(&(inv_sqrt3() * zeta12()));
    [omega_diag(0, 0, 1), r2, omega_diag(0, 1, 0)]
}

/// The coset representatives Q₁, Q₂, Q₃ with μ(Qᵢ) = Rᵢ.
pub fn coset_representatives() -> [LocalOperator; 3] {
    let q1 = LocalOperator::new(
        omega(1),
        vec![omega_diag(0, 0, 2), omega_diag(0, 2, 0), omega_diag(2, 0, 0)],
    );
    // 1/√27 = (1/√3)/3
    let q2 = LocalOperator::new(
        inv_sqrt3() * Cyclo::from_ratio(1, 3, N) * zeta12(),
        vec![omega_circulant(); 3],
    );
    let q3 = LocalOperator::new(
        omega(1),
        vec![omega_diag(2, 0, 0), omega_diag(0, 2, 0), omega_diag(0, 0, 2)],
    );
    [q1, q2, q3].map(|q| q.expect("3x3 factors"))
}

/// The five generators of the local symmetry group of |Φ⟩, in the reference order.
pub fn local_symmetry_generators() -> [LocalOperator; 5] {
    let id = Matrix::identity(3, N);
    let x = pauli_x(3, N);
    let z = pauli_z(3, N);
    let g1 = LocalOperator::new(int(1), vec![id.clone(), x.clone(), x.clone(), x]);
    let g2 = LocalOperator::new(int(1), vec![id, z.clone(), z.clone(), z]);
    let g3 = LocalOperator::new(
        omega(1),
        vec![
            omega_diag(0, 0, 2),
            omega_diag(0, 0, 2),
            omega_diag(0, 2, 0),
            omega_diag(2, 0, 0),
        ],
    );
    let g4 = LocalOperator::new(
        omega(2) * Cyclo::from_ratio(1, 9, N),
        vec![omega_circulant(); 4],
    );
    let g5 = LocalOperator::new(
        omega(1),
        vec![
            omega_diag(0, 2, 0),
            omega_diag(2, 0, 0),
            omega_diag(0, 2, 0),
            omega_diag(0, 0, 2),
        ],
    );
    [g1, g2, g3, g4, g5].map(|g| g.expect("3x3 factors"))
}

/// X^{⊗n} and Z^{⊗n} for local dimension d in Q(ζ_conductor).
pub fn stabilizer_generators(d: usize, n: usize, conductor: u32) -> Result<[LocalOperator; 2]> {
    if !(conductor as usize).is_multiple_of(d) {
        return Err(Error::ConductorNotDivisible {
            conductor,
            required: d as u32,
        });
    }
    Ok([
        LocalOperator::uniform(&pauli_x(d, conductor), n)?,
        LocalOperator::uniform(&pauli_z(d, conductor), n)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_satisfy_weyl_relation() {
        let x = pauli_x(3, N);
        let z = pauli_z(3, N);
        // ZX = ξ XZ
        let zx = &z * &x;
        let xz = (&x * &z).scale(&omega(1));
        assert_eq!(zx, xz);
        assert!((&(&x * &x) * &x).is_identity());
        assert!((&(&z * &z) * &z).is_identity());
    }

    #[test]
    fn generators_have_expected_shape() {
        let g = local_symmetry_generators();
        let id = Matrix::identity(3, N);
        assert_eq!(g[0].factors()[0], id);
        assert_eq!(g[0].factors()[1], pauli_x(3, N));
        assert!(g[0].scalar().is_one());
        for q in coset_representatives() {
            assert_eq!(q.sites(), 3);
        }
    }
}
