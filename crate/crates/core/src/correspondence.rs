//! The maps between codes and perfect tensors.
//!
//! `purify_code` sends a ((n−1, D, d))_D code with basis |φᵢ⟩ to
//! (1/√D) Σᵢ |i⟩|φᵢ⟩, prepending the new site as site 0. `reduce_state` goes back
//! by contracting ⟨i| against site 0 and rescaling by √D. With the basis order
//! preserved, each map is the literal inverse of the other on representatives.

use num_rational::BigRational;
use serde::Serialize;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg;
use crate::qecc::{self, CodeSubspace};
use crate::tensor::{self, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// code → state
    Alpha,
    /// state → code
    Beta,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    /// The map applied first.
    pub direction: Direction,
    pub input: String,
    pub output: String,
    /// The state is ⌊n/2⌋-uniform.
    pub ame_verified: bool,
    /// The code is a pure code of distance ⌊n/2⌋.
    pub kl_verified: bool,
    /// Largest r with the state r-uniform.
    pub state_uniformity: usize,
    /// Brute-force distance of the code.
    pub code_distance: usize,
    pub roundtrip_exact: bool,
}

fn sqrt_int(d: usize, conductor: u32) -> Result<Cyclo> {
    Cyclo::sqrt_rational(&BigRational::from_integer((d as i64).into()), conductor)
}

/// (1/√D) Σᵢ |i⟩ ⊗ |φᵢ⟩ for a code with K = D.
pub fn purify_code(code: &CodeSubspace) -> Result<PureState> {
    let d = code.local_dim();
    if code.dimension() != d {
        return Err(Error::InvalidArgument(format!(
            "purification needs K = D, got K = {} and D = {d}",
            code.dimension()
        )));
    }
    let conductor = code.conductor();
    let inv = sqrt_int(d, conductor)?.inv()?;
    let mut dims = vec![d];
    dims.extend_from_slice(code.basis()[0].dims());
    let amps: Vec<Cyclo> = code
        .basis()
        .iter()
        .flat_map(|phi| phi.amps().iter().map(|a| a * &inv).collect::<Vec<_>>())
        .collect();
    PureState::new(dims, amps)
}

/// The code spanned by √D·⟨i|₀|v⟩, i = 0..D, re-orthonormalized only if needed.
pub fn reduce_state(v: &PureState) -> Result<CodeSubspace> {
    if !v.norm_sqr().is_one() {
        return Err(Error::InvalidArgument("state must be normalized".into()));
    }
    if v.sites() < 2 {
        return Err(Error::DimensionMismatch("need at least two sites".into()));
    }
    let d = v.dims()[0];
    let rank = v.matricize(0)?.rank();
    if rank < d {
        return Err(Error::RankDeficient { rank, expected: d });
    }
    let s = sqrt_int(d, v.conductor())?;
    let basis = (0..d)
        .map(|i| v.contract_site(0, i).map(|u| u.scale(&s)))
        .collect::<Result<Vec<_>>>()?;
    match CodeSubspace::new(basis.clone(), None) {
        Ok(code) => Ok(code),
        Err(Error::InvalidCode(_)) => {
            let vectors: Vec<Vec<Cyclo>> = basis.iter().map(|u| u.amps().to_vec()).collect();
            let dims = basis[0].dims().to_vec();
            let ortho = linalg::orthonormalize(&vectors)?
                .into_iter()
                .map(|a| PureState::new(dims.clone(), a))
                .collect::<Result<Vec<_>>>()?;
            CodeSubspace::new(ortho, None)
        }
        Err(e) => Err(e),
    }
}

fn describe_code(code: &CodeSubspace) -> String {
    format!(
        "code on {} sites, K = {}, D = {}",
        code.sites(),
        code.dimension(),
        code.local_dim()
    )
}

fn describe_state(v: &PureState) -> String {
    format!("state on dims {:?}", v.dims())
}

fn checks(state: &PureState, code: &CodeSubspace) -> Result<(bool, bool, usize, usize)> {
    let half = state.sites() / 2;
    let ame = half == 0 || qecc::r_uniform_check(state, half)?.uniform;
    let kl = half == 0 || qecc::kl_check(code, half)?.is_pure;
    Ok((ame, kl, qecc::uniformity(state)?, qecc::distance(code)?))
}

/// β∘α on a code: recovers the same span exactly.
pub fn roundtrip_code(code: &CodeSubspace) -> Result<CorrespondenceReport> {
    let state = purify_code(code)?;
    let back = reduce_state(&state)?;
    let (ame, kl, uni, dist) = checks(&state, &back)?;
    Ok(CorrespondenceReport {
        direction: Direction::Alpha,
        input: describe_code(code),
        output: describe_state(&state),
        ame_verified: ame,
        kl_verified: kl,
        state_uniformity: uni,
        code_distance: dist,
        roundtrip_exact: back.same_span(code)?,
    })
}

/// α∘β on a state, normalizing it first when its norm is not 1.
pub fn roundtrip_state(v: &PureState) -> Result<CorrespondenceReport> {
    let v = if v.norm_sqr().is_one() {
        v.clone()
    } else {
        v.normalized()?
    };
    let code = reduce_state(&v)?;
    let back = purify_code(&code)?;
    let (ame, kl, uni, dist) = checks(&v, &code)?;
    Ok(CorrespondenceReport {
        direction: Direction::Beta,
        input: describe_state(&v),
        output: describe_code(&code),
        ame_verified: ame,
        kl_verified: kl,
        state_uniformity: uni,
        code_distance: dist,
        roundtrip_exact: back == v,
    })
}

/// Σ |sᵢ⟩⟨sᵢ| scaled: D·Tr₀(|v⟩⟨v|) for comparison with the code projector.
pub fn scaled_reduction(v: &PureState) -> Result<crate::tensor::DensityOperator> {
    let keep: Vec<usize> = (1..v.sites()).collect();
    let d = Cyclo::from_int(v.dims()[0] as i64, v.conductor());
    Ok(v.partial_trace(&keep)?.scale(&d))
}

/// Whether two states agree up to a global scalar, with that scalar.
pub fn proportional(a: &PureState, b: &PureState) -> Result<Option<Cyclo>> {
    let ab = tensor::inner(a, b)?;
    let aa = a.norm_sqr();
    if aa.is_zero() {
        return Ok(None);
    }
    let c = ab.try_div(&aa)?;
    Ok((a.scale(&c) == *b).then_some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::linalg::Matrix;

    fn c332() -> CodeSubspace {
        CodeSubspace::new(constants::code_basis(), Some(2)).unwrap()
    }

    #[test]
    fn purify_c332_gives_normalized_phi() {
        let state = purify_code(&c332()).unwrap();
        assert!(state.norm_sqr().is_one());
        assert_eq!(state, constants::phi_normalized());
        assert!(qecc::r_uniform_check(&state, 2).unwrap().uniform);
    }

    #[test]
    fn purify_single_site_gives_bell() {
        let n = 24;
        let basis = vec![
            PureState::basis(vec![2], &[0], n).unwrap(),
            PureState::basis(vec![2], &[1], n).unwrap(),
        ];
        let code = CodeSubspace::new(basis, None).unwrap();
        let bell = purify_code(&code).unwrap();
        let h = Cyclo::sqrt_rational(&BigRational::new(1.into(), 2.into()), n).unwrap();
        let expected =
            PureState::from_kets(vec![2, 2], &[(h.clone(), vec![0, 0]), (h, vec![1, 1])], n).unwrap();
        assert_eq!(bell, expected);
        let back = reduce_state(&bell).unwrap();
        assert!(back.same_span(&code).unwrap());
    }

    #[test]
    fn reduce_phi_recovers_code() {
        let code = reduce_state(&constants::phi_normalized()).unwrap();
        assert!(code.same_span(&c332()).unwrap());
        assert_eq!(code.basis(), constants::code_basis().as_slice());
        let r = qecc::kl_check(&code, 2).unwrap();
        assert!(r.is_code && r.is_pure);
        // D·Tr₀ is the code projector
        let proj = scaled_reduction(&constants::phi_normalized()).unwrap();
        let basis = constants::code_basis();
        let mut expected = Matrix::zeros(27, 27, 12);
        for s in &basis {
            let col = Matrix::from_columns(&[s.amps().to_vec()]).unwrap();
            expected = expected.try_add(&(&col * &col.adjoint())).unwrap();
        }
        assert_eq!(proj.matrix(), &expected);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(reduce_state(&constants::phi()).is_err());
        let prod = PureState::basis(vec![3, 3], &[0, 0], 12).unwrap();
        assert!(matches!(
            reduce_state(&prod),
            Err(Error::RankDeficient { rank: 1, expected: 3 })
        ));
        let two = CodeSubspace::new(constants::code_basis()[..2].to_vec(), None).unwrap();
        assert!(purify_code(&two).is_err());
    }

    #[test]
    fn roundtrips() {
        let r = roundtrip_code(&c332()).unwrap();
        assert!(r.roundtrip_exact && r.ame_verified && r.kl_verified);
        assert_eq!((r.state_uniformity, r.code_distance), (2, 2));
        let r = roundtrip_state(&constants::phi()).unwrap();
        assert!(r.roundtrip_exact && r.ame_verified && r.kl_verified);
    }

    #[test]
    fn two_qubit_repetition_code_roundtrip_reports_distance_one() {
        let n = 24;
        let basis = vec![
            PureState::basis(vec![2, 2], &[0, 0], n).unwrap(),
            PureState::basis(vec![2, 2], &[1, 1], n).unwrap(),
        ];
        let code = CodeSubspace::new(basis, None).unwrap();
        let r = roundtrip_code(&code).unwrap();
        assert!(r.roundtrip_exact);
        // GHZ is 1-uniform, but its reduction is only a distance-1 code
        assert_eq!(r.state_uniformity, 1);
        assert_eq!(r.code_distance, 1);
    }

    #[test]
    fn proportionality() {
        let phi = constants::phi();
        let c = proportional(&constants::phi_normalized(), &phi).unwrap().unwrap();
        assert_eq!(c * constants::inv_sqrt3(), Cyclo::one(12));
    }
}
