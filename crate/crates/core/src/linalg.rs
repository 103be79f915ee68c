//! Dense exact matrices over Q(ζ_N) and the small amount of linear algebra the
//! workbench needs: products, adjoints, determinants, row reduction, kernels and
//! exact Gram–Schmidt.

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    data: Vec<Cyclo>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, conductor: u32) -> Self {
        let z = Cyclo::zero(conductor);
        Matrix {
            rows,
            cols,
            conductor,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(n: usize, conductor: u32) -> Self {
        let mut m = Self::zeros(n, n, conductor);
        let one = Cyclo::one(conductor);
        for i in 0..n {
            m.data[i * n + i] = one.clone();
        }
        m
    }

    pub fn diagonal(entries: &[Cyclo]) -> Self {
        let n = entries.len();
        let conductor = entries[0].conductor();
        let mut m = Self::zeros(n, n, conductor);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclo>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let conductor = rows[0][0].conductor();
        let data: Vec<Cyclo> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|x| x.conductor() != conductor) {
            return Err(Error::ConductorMismatch(conductor, bad.conductor()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            conductor,
            data,
        })
    }

    /// Square matrix from a row-major list of d² entries.
    pub fn from_flat_square(entries: Vec<Cyclo>) -> Result<Self> {
        let d = (entries.len() as f64).sqrt().round() as usize;
        if d == 0 || d * d != entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Self::from_rows(entries.chunks(d).map(<[Cyclo]>::to_vec).collect())
    }

    pub fn from_columns(cols: &[Vec<Cyclo>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if c == 0 || r == 0 || cols.iter().any(|v| v.len() != r) {
            return Err(Error::DimensionMismatch("bad column list".into()));
        }
        let conductor = cols[0][0].conductor();
        let mut m = Self::zeros(r, c, conductor);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i * c + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclo) {
        self.data[i * self.cols + j] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Cyclo] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Cyclo> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Cyclo>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[Cyclo] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch(self.conductor, other.conductor));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.conductor);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Cyclo]) -> Result<Vec<Cyclo>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Cyclo::zero(self.conductor), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn map(&self, f: impl Fn(&Cyclo) -> Cyclo) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclo) -> Matrix {
        self.map(|x| x * s)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Matrix {
        self.map(Cyclo::conj)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zeros(self.cols, self.rows, self.conductor);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.try_add(&other.scale(&Cyclo::from_int(-1, self.conductor)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclo::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && (&self.adjoint() * self).is_identity()
    }

    pub fn trace(&self) -> Cyclo {
        (0..self.rows.min(self.cols)).fold(Cyclo::zero(self.conductor), |acc, i| acc + self.get(i, i))
    }

    /// First nonzero entry in row-major order.
    pub fn leading_entry(&self) -> Option<&Cyclo> {
        self.data.iter().find(|x| !x.is_zero())
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> Result<Cyclo> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Cyclo::one(self.conductor);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Cyclo::zero(self.conductor));
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a.get(c, c).clone();
            det = det * &pivot;
            let inv = pivot.inv()?;
            for r in c + 1..n {
                let f = a.get(r, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a.get(r, k) - &(&f * a.get(c, k));
                    a.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a.get(r, c).inv().expect("pivot is nonzero");
            for k in c..a.cols {
                let v = a.get(r, k) * &inv;
                a.set(r, k, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for k in c..a.cols {
                    if a.get(r, k).is_zero() {
                        continue;
                    }
                    let v = a.get(i, k) - &(&f * a.get(r, k));
                    a.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel, one vector per free column of the RREF.
    pub fn kernel(&self) -> Vec<Vec<Cyclo>> {
        let (r, pivots) = self.rref();
        let zero = Cyclo::zero(self.conductor);
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![zero.clone(); self.cols];
            v[f] = Cyclo::one(self.conductor);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f);
            }
            v
        })
        .collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, self.conductor);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Cyclo::one(self.conductor));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut out = Self::zeros(n, n, self.conductor);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    /// Panics on shape or conductor mismatch; see [`Matrix::try_mul`].
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [N={}]", self.rows, self.cols, self.conductor)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Wire form of a matrix: rows of cyclotomic numbers.
impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[Cyclo]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Cyclo>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Σ conj(aᵢ)·bᵢ.
pub fn inner(a: &[Cyclo], b: &[Cyclo]) -> Result<Cyclo> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let Some(first) = a.first() else {
        return Err(Error::DimensionMismatch("empty vectors".into()));
    };
    let mut acc = first.zero_like();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.try_add(&x.conj().try_mul(y)?)?;
        }
    }
    Ok(acc)
}

/// Exact Gram–Schmidt. Linearly dependent inputs are dropped. Each surviving
/// vector is normalized, which requires its squared norm to be a rational whose
/// square root lies in the field.
pub fn orthonormalize(vectors: &[Vec<Cyclo>]) -> Result<Vec<Vec<Cyclo>>> {
    let mut ortho: Vec<(Vec<Cyclo>, Cyclo)> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (u, uu) in &ortho {
            let c = inner(u, &w)?.try_div(uu)?;
            if c.is_zero() {
                continue;
            }
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = &*wi - &(&c * ui);
            }
        }
        let ww = inner(&w, &w)?;
        if !ww.is_zero() {
            ortho.push((w, ww));
        }
    }
    ortho
        .into_iter()
        .map(|(w, ww)| {
            let conductor = ww.conductor();
            let q = ww.to_rational().ok_or_else(|| Error::NoSquareRoot {
                value: ww.to_string(),
                conductor,
            })?;
            let inv_norm = Cyclo::sqrt_rational(&q, conductor)?.inv()?;
            Ok(w.iter().map(|x| x * &inv_norm).collect())
        })
        .collect()
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>]) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Ok(a.is_empty() == b.is_empty());
    }
    let ra = Matrix::from_columns(a)?.rank();
    let rb = Matrix::from_columns(b)?.rank();
    let both: Vec<Vec<Cyclo>> = a.iter().chain(b).cloned().collect();
    let rab = Matrix::from_columns(&both)?.rank();
    Ok(ra == rb && rab == ra)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: u32 = 12;

    fn c(k: i64) -> Cyclo {
        Cyclo::from_int(k, N)
    }

    fn w(k: i64) -> Cyclo {
        Cyclo::root_of_unity(4 * k, N)
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_rows(vec![
            vec![w(1), c(1), c(1)],
            vec![c(1), w(1), c(1)],
            vec![c(1), c(1), w(1)],
        ])
        .unwrap();
        // eigenvalues ω+2 (once) and ω-1 (twice)
        let expected = (w(1) + c(2)) * (w(1) - c(1)) * (w(1) - c(1));
        assert_eq!(m.det().unwrap(), expected);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        // M†M = 3I
        assert_eq!(&m.adjoint() * &m, Matrix::identity(3, N).scale(&c(3)));
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let m = Matrix::from_rows(vec![vec![c(1), c(2), c(3)], vec![c(2), c(4), c(6)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Cyclo::is_zero));
        }
    }

    #[test]
    fn gram_schmidt_and_spans() {
        let a = vec![vec![c(1), c(1), c(0)], vec![c(1), c(0), c(1)]];
        // norms here are not rational after orthogonalization: 1/2 and 3/2 -> need √2, √6
        assert!(orthonormalize(&a).is_err());
        let on = orthonormalize(&[vec![c(1), c(0), c(1)], vec![c(0), c(1), c(0)]]);
        assert!(on.is_err(), "√2 is not in Q(ζ12)");
        let on = orthonormalize(&[
            vec![c(1), c(1), c(1)],
            vec![c(1), w(1), w(2)],
            vec![c(2), c(2), c(2)],
        ])
        .unwrap();
        assert_eq!(on.len(), 2);
        for (i, u) in on.iter().enumerate() {
            for (j, v) in on.iter().enumerate() {
                let g = inner(u, v).unwrap();
                assert_eq!(g.is_one(), i == j);
                assert_eq!(g.is_zero(), i != j);
            }
        }
        let span = vec![vec![c(1), c(1), c(1)], vec![c(1), w(1), w(2)]];
        assert!(same_span(&on, &span).unwrap());
        assert!(!same_span(&on, &[vec![c(1), c(0), c(0)]]).unwrap());
    }
}
