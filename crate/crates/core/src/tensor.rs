//! Exact dense multi-qudit tensors: pure states, factored local operators and
//! density operators.

use std::collections::BTreeSet;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// A pure state with amplitudes stored row-major, site 0 slowest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PureState {
    dims: Vec<usize>,
    conductor: u32,
    amps: Vec<Cyclo>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Mixed-radix digits of `index`, most significant (site 0) first.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

pub fn index_of(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

impl PureState {
    pub fn new(dims: Vec<usize>, amps: Vec<Cyclo>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("invalid dims {dims:?}")));
        }
        let len: usize = dims.iter().product();
        if amps.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {len} amplitudes, got {}",
                amps.len()
            )));
        }
        let conductor = amps[0].conductor();
        if let Some(bad) = amps.iter().find(|a| a.conductor() != conductor) {
            return Err(Error::ConductorMismatch(conductor, bad.conductor()));
        }
        Ok(PureState {
            dims,
            conductor,
            amps,
        })
    }

    pub fn zero(dims: Vec<usize>, conductor: u32) -> Self {
        let len = dims.iter().product();
        PureState {
            dims,
            conductor,
            amps: vec![Cyclo::zero(conductor); len],
        }
    }

    /// The computational basis state |k₀ k₁ …⟩.
    pub fn basis(dims: Vec<usize>, ket: &[usize], conductor: u32) -> Result<Self> {
        Self::from_kets(dims, &[(Cyclo::one(conductor), ket.to_vec())], conductor)
    }

    /// Σ coef·|ket⟩.
    pub fn from_kets(dims: Vec<usize>, terms: &[(Cyclo, Vec<usize>)], conductor: u32) -> Result<Self> {
        let mut s = Self::zero(dims, conductor);
        for (coef, ket) in terms {
            if ket.len() != s.dims.len() {
                return Err(Error::DimensionMismatch(format!("ket {ket:?} for dims {:?}", s.dims)));
            }
            for (&k, &d) in ket.iter().zip(&s.dims) {
                if k >= d {
                    return Err(Error::IndexOutOfRange { index: k, bound: d });
                }
            }
            let i = index_of(ket, &s.dims);
            s.amps[i] = s.amps[i].try_add(coef)?;
        }
        Ok(s)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn sites(&self) -> usize {
        self.dims.len()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn amps(&self) -> &[Cyclo] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Cyclo> {
        self.amps
    }

    pub fn amp(&self, ket: &[usize]) -> &Cyclo {
        &self.amps[index_of(ket, &self.dims)]
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(Cyclo::is_zero)
    }

    /// ⟨v|v⟩, a nonnegative real element of the field.
    pub fn norm_sqr(&self) -> Cyclo {
        inner(self, self).expect("same dims")
    }

    pub fn scale(&self, s: &Cyclo) -> PureState {
        PureState {
            amps: self.amps.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    pub fn try_add(&self, other: &PureState) -> Result<PureState> {
        self.check_dims(other)?;
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(PureState {
            amps,
            ..self.clone()
        })
    }

    /// The state divided by its norm; the squared norm must be a rational with a
    /// square root in the field.
    pub fn normalized(&self) -> Result<PureState> {
        let nn = self.norm_sqr();
        if nn.is_zero() {
            return Err(Error::ZeroVector);
        }
        let q = nn.to_rational().ok_or_else(|| Error::NoSquareRoot {
            value: nn.to_string(),
            conductor: self.conductor,
        })?;
        let inv = Cyclo::sqrt_rational(&q, self.conductor)?.inv()?;
        Ok(self.scale(&inv))
    }

    fn check_dims(&self, other: &PureState) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// Applies a d×d matrix to one site.
    pub fn apply_at(&self, site: usize, m: &Matrix) -> Result<PureState> {
        let d = *self.dims.get(site).ok_or(Error::IndexOutOfRange {
            index: site,
            bound: self.dims.len(),
        })?;
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} factor on site {site} of dimension {d}",
                m.rows(),
                m.cols()
            )));
        }
        let inner_len = strides(&self.dims)[site];
        let outer = self.amps.len() / (d * inner_len);
        let zero = Cyclo::zero(self.conductor);
        let mut out = vec![zero; self.amps.len()];
        for o in 0..outer {
            for t in 0..inner_len {
                let base = o * d * inner_len + t;
                for j in 0..d {
                    let a = &self.amps[base + j * inner_len];
                    if a.is_zero() {
                        continue;
                    }
                    for i in 0..d {
                        let mij = m.get(i, j);
                        if mij.is_zero() {
                            continue;
                        }
                        let idx = base + i * inner_len;
                        out[idx] = &out[idx] + &(mij * a);
                    }
                }
            }
        }
        Ok(PureState {
            amps: out,
            ..self.clone()
        })
    }

    /// ⟨index|_site applied to the state: an (n−1)-site state.
    pub fn contract_site(&self, site: usize, index: usize) -> Result<PureState> {
        let n = self.dims.len();
        if site >= n {
            return Err(Error::IndexOutOfRange { index: site, bound: n });
        }
        if index >= self.dims[site] {
            return Err(Error::IndexOutOfRange {
                index,
                bound: self.dims[site],
            });
        }
        if n < 2 {
            return Err(Error::DimensionMismatch("contracting the only site".into()));
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != site)
            .map(|(_, &d)| d)
            .collect();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| digits(*i, &self.dims)[site] == index)
            .map(|(_, a)| a.clone())
            .collect();
        Ok(PureState {
            dims,
            conductor: self.conductor,
            amps,
        })
    }

    /// The (∏_{k≠site} d_k) × d_site matrix whose column j is `contract_site(site, j)`.
    pub fn matricize(&self, site: usize) -> Result<Matrix> {
        let cols = (0..*self.dims.get(site).ok_or(Error::IndexOutOfRange {
            index: site,
            bound: self.dims.len(),
        })?)
            .map(|j| self.contract_site(site, j).map(PureState::into_amps))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&cols)
    }

    /// Reduced density operator on `keep`, tracing out the other sites.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = validate_keep(keep, self.dims.len())?;
        let traced: Vec<usize> = (0..self.dims.len()).filter(|k| !keep.contains(k)).collect();
        let kdims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let tdims: Vec<usize> = traced.iter().map(|&k| self.dims[k]).collect();
        let (kl, tl): (usize, usize) = (kdims.iter().product(), tdims.iter().product());
        // Ψ[a][t] = amplitude with kept digits a and traced digits t
        let mut psi = Matrix::zeros(kl, tl.max(1), self.conductor);
        for (i, amp) in self.amps.iter().enumerate() {
            if amp.is_zero() {
                continue;
            }
            let dg = digits(i, &self.dims);
            let a = index_of(&keep.iter().map(|&k| dg[k]).collect::<Vec<_>>(), &kdims);
            let t = index_of(&traced.iter().map(|&k| dg[k]).collect::<Vec<_>>(), &tdims);
            psi.set(a, t, amp.clone());
        }
        Ok(DensityOperator {
            dims: kdims,
            matrix: &psi * &psi.adjoint(),
        })
    }

    pub fn density(&self) -> DensityOperator {
        let keep: Vec<usize> = (0..self.dims.len()).collect();
        self.partial_trace(&keep).expect("full keep set")
    }
}

fn validate_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let set: BTreeSet<usize> = keep.iter().copied().collect();
    if let Some(&bad) = set.iter().find(|&&k| k >= n) {
        return Err(Error::IndexOutOfRange { index: bad, bound: n });
    }
    Ok(set.into_iter().collect())
}

/// ⟨a|b⟩, conjugate-linear in `a`.
pub fn inner(a: &PureState, b: &PureState) -> Result<Cyclo> {
    a.check_dims(b)?;
    linalg::inner(&a.amps, &b.amps)
}

/// A tensor product operator scalar·(F₀ ⊗ F₁ ⊗ …) in canonical form: every
/// factor's first nonzero entry (row-major) equals 1, so equal operators have
/// identical representations. The zero operator has scalar 0 and identity factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalOperator {
    scalar: Cyclo,
    factors: Vec<Matrix>,
}

impl LocalOperator {
    pub fn new(scalar: Cyclo, factors: Vec<Matrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::DimensionMismatch("operator with no factors".into()));
        }
        for f in &factors {
            if !f.is_square() {
                return Err(Error::DimensionMismatch("non-square factor".into()));
            }
            if f.conductor() != scalar.conductor() {
                return Err(Error::ConductorMismatch(scalar.conductor(), f.conductor()));
            }
        }
        Ok(Self::canonical(scalar, factors))
    }

    fn canonical(mut scalar: Cyclo, mut factors: Vec<Matrix>) -> Self {
        for f in factors.iter_mut() {
            match f.leading_entry().cloned() {
                None => {
                    scalar = scalar.zero_like();
                    break;
                }
                Some(lead) if lead.is_one() => {}
                Some(lead) => {
                    let inv = lead.inv().expect("nonzero");
                    *f = f.scale(&inv);
                    scalar = scalar * lead;
                }
            }
        }
        if scalar.is_zero() {
            for f in factors.iter_mut() {
                *f = Matrix::identity(f.rows(), f.conductor());
            }
        }
        LocalOperator { scalar, factors }
    }

    pub fn identity(dims: &[usize], conductor: u32) -> Self {
        LocalOperator {
            scalar: Cyclo::one(conductor),
            factors: dims.iter().map(|&d| Matrix::identity(d, conductor)).collect(),
        }
    }

    /// The same matrix on every one of `n` sites.
    pub fn uniform(m: &Matrix, n: usize) -> Result<Self> {
        Self::new(Cyclo::one(m.conductor()), vec![m.clone(); n])
    }

    pub fn scalar(&self) -> &Cyclo {
        &self.scalar
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    pub fn sites(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Matrix::rows).collect()
    }

    pub fn conductor(&self) -> u32 {
        self.scalar.conductor()
    }

    pub fn is_identity(&self) -> bool {
        self.scalar.is_one() && self.factors.iter().all(Matrix::is_identity)
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Number of factors that are not the identity matrix.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|f| !f.is_identity()).count()
    }

    /// Operator product self·other, factor by factor, re-canonicalized.
    pub fn compose(&self, other: &LocalOperator) -> Result<LocalOperator> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!(
                "compose {:?} with {:?}",
                self.dims(),
                other.dims()
            )));
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.try_mul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::canonical(self.scalar.try_mul(&other.scalar)?, factors))
    }

    /// Entrywise conjugate of every factor and the scalar.
    pub fn conj(&self) -> LocalOperator {
        Self::canonical(self.scalar.conj(), self.factors.iter().map(Matrix::conj).collect())
    }

    pub fn adjoint(&self) -> LocalOperator {
        Self::canonical(
            self.scalar.conj(),
            self.factors.iter().map(Matrix::adjoint).collect(),
        )
    }

    /// Applies the operator to a state site by site.
    pub fn apply(&self, v: &PureState) -> Result<PureState> {
        if self.dims() != v.dims {
            return Err(Error::DimensionMismatch(format!(
                "operator on {:?} applied to state on {:?}",
                self.dims(),
                v.dims
            )));
        }
        let mut out = v.clone();
        for (site, f) in self.factors.iter().enumerate() {
            if !f.is_identity() {
                out = out.apply_at(site, f)?;
            }
        }
        Ok(if self.scalar.is_one() {
            out
        } else {
            out.scale(&self.scalar)
        })
    }

    /// The full ∏dᵢ × ∏dᵢ matrix. Only for small operators.
    pub fn to_dense(&self) -> Matrix {
        let dims = self.dims();
        let len: usize = dims.iter().product();
        let cols: Vec<Vec<Cyclo>> = (0..len)
            .map(|j| {
                let e = PureState::basis(dims.clone(), &digits(j, &dims), self.conductor())
                    .expect("valid basis ket");
                self.apply(&e).expect("matching dims").into_amps()
            })
            .collect();
        Matrix::from_columns(&cols).expect("nonempty")
    }

    /// Whether the operator lies in SU(d₁)⊗…⊗SU(d_n): each factor is a positive
    /// multiple of a unitary, and the scalar can be distributed so that every
    /// factor has determinant 1, i.e. scalar^d · ∏ det(Fᵢ) = 1 with all dᵢ = d.
    pub fn is_special_unitary_product(&self) -> Result<bool> {
        let dims = self.dims();
        let d = dims[0];
        if dims.iter().any(|&x| x != d) {
            return Err(Error::DimensionMismatch("mixed local dimensions".into()));
        }
        for f in &self.factors {
            let g = &f.adjoint() * f;
            let c = g.get(0, 0).clone();
            if c.to_rational().is_none() || g != Matrix::identity(d, f.conductor()).scale(&c) {
                return Ok(false);
            }
        }
        let mut acc = self.scalar.pow(d as u32);
        for f in &self.factors {
            acc = acc * f.det()?;
        }
        Ok(acc.is_one())
    }
}

/// An exact Hermitian operator on the sites `dims`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: Matrix,
}

impl DensityOperator {
    pub fn new(dims: Vec<usize>, matrix: Matrix) -> Result<Self> {
        let len: usize = dims.iter().product();
        if matrix.rows() != len || matrix.cols() != len {
            return Err(Error::DimensionMismatch("density matrix size".into()));
        }
        Ok(DensityOperator { dims, matrix })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn trace(&self) -> Cyclo {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian()
    }

    pub fn scale(&self, s: &Cyclo) -> DensityOperator {
        DensityOperator {
            dims: self.dims.clone(),
            matrix: self.matrix.scale(s),
        }
    }

    /// Whether the operator equals c·I for some c, and that c.
    pub fn identity_multiple(&self) -> Option<Cyclo> {
        let c = self.matrix.get(0, 0).clone();
        let n = self.matrix.rows();
        (self.matrix == Matrix::identity(n, self.matrix.conductor()).scale(&c)).then_some(c)
    }

    /// Traces out every site not in `keep` (indices relative to this operator's sites).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = validate_keep(keep, self.dims.len())?;
        let traced: Vec<usize> = (0..self.dims.len()).filter(|k| !keep.contains(k)).collect();
        let kdims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let kl: usize = kdims.iter().product();
        let mut out = Matrix::zeros(kl, kl, self.matrix.conductor());
        let len = self.matrix.rows();
        for i in 0..len {
            let di = digits(i, &self.dims);
            for j in 0..len {
                let x = self.matrix.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let dj = digits(j, &self.dims);
                if traced.iter().any(|&t| di[t] != dj[t]) {
                    continue;
                }
                let a = index_of(&keep.iter().map(|&k| di[k]).collect::<Vec<_>>(), &kdims);
                let b = index_of(&keep.iter().map(|&k| dj[k]).collect::<Vec<_>>(), &kdims);
                let v = out.get(a, b) + x;
                out.set(a, b, v);
            }
        }
        Ok(DensityOperator {
            dims: kdims,
            matrix: out,
        })
    }
}
