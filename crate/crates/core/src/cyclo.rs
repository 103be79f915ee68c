//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are stored in the power basis {1, ζ, …, ζ^{φ(N)-1}} as an integer
//! numerator vector over one shared positive denominator, always reduced modulo
//! the N-th cyclotomic polynomial. The representation is canonical, so derived
//! equality and hashing coincide with field equality.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default conductor for all D = 3 work: contains ω, i, e^{πi/6} and √3.
pub const DEFAULT_CONDUCTOR: u32 = 12;

/// Smallest conductor that holds every scalar needed for local dimension `d`:
/// 12 for d = 3, lcm(4d, 12) otherwise.
pub fn conductor_for_dimension(d: u32) -> u32 {
    if d == 3 {
        DEFAULT_CONDUCTOR
    } else {
        (4 * d).lcm(&12)
    }
}

/// Precomputed tables for one conductor.
#[derive(Debug)]
pub struct Field {
    conductor: u32,
    degree: usize,
    /// `powers[m]` is ζ^m (0 ≤ m < N) written in the power basis.
    powers: Vec<Vec<i64>>,
    /// Exponents k in [1, N) coprime to N; σ_k : ζ ↦ ζ^k are the Galois automorphisms.
    units: Vec<u32>,
}

impl Field {
    fn new(conductor: u32) -> Self {
        let n = conductor as usize;
        let phi = cyclotomic_polynomial(conductor);
        let degree = phi.len() - 1;
        let mut powers: Vec<Vec<i64>> = Vec::with_capacity(n);
        for m in 0..n {
            if m < degree {
                let mut v = vec![0; degree];
                v[m] = 1;
                powers.push(v);
            } else {
                // x · ζ^{m-1}, then fold x^degree = -Σ phi_i x^i back in.
                let prev = &powers[m - 1];
                let top = prev[degree - 1];
                let mut v = vec![0; degree];
                v[1..].copy_from_slice(&prev[..degree - 1]);
                for i in 0..degree {
                    v[i] -= top * phi[i];
                }
                powers.push(v);
            }
        }
        let units = (1..conductor.max(2))
            .filter(|k| k.gcd(&conductor) == 1)
            .collect::<Vec<_>>();
        let units = if conductor == 1 { vec![1] } else { units };
        Field {
            conductor,
            degree,
            powers,
            units,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Euler totient of the conductor.
    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Integer coefficients (lowest degree first) of the N-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "conductor must be positive");
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Shared field tables for a conductor, built once per process.
pub fn field(conductor: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(conductor)
        .or_insert_with(|| Arc::new(Field::new(conductor)))
        .clone()
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor
            && self.den == other.den
            && self.num == other.num
    }
}

impl Eq for Cyclo {}

impl Hash for Cyclo {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Cyclo {
    fn from_parts(field: Arc<Field>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut c = Cyclo { field, num, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for x in self.num.iter_mut() {
                *x /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(conductor: u32) -> Self {
        let field = field(conductor);
        let num = vec![BigInt::zero(); field.degree];
        Cyclo {
            field,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_int(1, conductor)
    }

    /// Zero of the same field, without touching the global field cache.
    pub fn zero_like(&self) -> Self {
        Cyclo {
            field: self.field.clone(),
            num: vec![BigInt::zero(); self.field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one_like(&self) -> Self {
        let mut c = self.zero_like();
        c.num[0] = BigInt::one();
        c
    }

    /// A rational in the same field as `self`.
    pub fn rational_like(&self, q: &BigRational) -> Self {
        let mut c = self.zero_like();
        c.num[0] = q.numer().clone();
        c.den = q.denom().clone();
        c.normalize();
        c
    }

    pub fn from_int(v: i64, conductor: u32) -> Self {
        let mut c = Self::zero(conductor);
        c.num[0] = BigInt::from(v);
        c
    }

    pub fn from_rational(q: &BigRational, conductor: u32) -> Self {
        let mut c = Self::zero(conductor);
        c.num[0] = q.numer().clone();
        c.den = q.denom().clone();
        c.normalize();
        c
    }

    pub fn from_ratio(p: i64, q: i64, conductor: u32) -> Self {
        Self::from_rational(&BigRational::new(p.into(), q.into()), conductor)
    }

    /// Builds an element from its power-basis coefficients.
    pub fn from_coeffs(conductor: u32, coeffs: &[BigRational]) -> Result<Self> {
        let field = field(conductor);
        if coeffs.len() != field.degree {
            return Err(Error::CoefficientLength {
                conductor,
                expected: field.degree,
                found: coeffs.len(),
            });
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = coeffs
            .iter()
            .map(|q| q.numer() * (&den / q.denom()))
            .collect();
        Ok(Self::from_parts(field, num, den))
    }

    /// ζ_N^k, with k reduced mod N.
    pub fn root_of_unity(k: i64, conductor: u32) -> Self {
        let field = field(conductor);
        let m = k.rem_euclid(conductor as i64) as usize;
        let num = field.powers[m].iter().map(|&x| BigInt::from(x)).collect();
        Cyclo {
            field,
            num,
            den: BigInt::one(),
        }
    }

    /// 1/√3 = (ζ₁₂ + ζ₁₂⁻¹)/3 inside Q(ζ_N); requires 12 | N.
    pub fn inv_sqrt3(conductor: u32) -> Result<Self> {
        if !conductor.is_multiple_of(12) {
            return Err(Error::ConductorNotDivisible {
                conductor,
                required: 12,
            });
        }
        let step = (conductor / 12) as i64;
        let sqrt3 = Self::root_of_unity(step, conductor)
            + Self::root_of_unity(11 * step, conductor);
        Ok(sqrt3 * Self::from_ratio(1, 3, conductor))
    }

    /// The positive square root of a nonnegative rational, when it lies in Q(ζ_N).
    ///
    /// √p for a prime p is a quadratic Gauss sum (times -i when p ≡ 3 mod 4),
    /// and √2 = ζ₈ + ζ₈⁻¹.
    pub fn sqrt_rational(q: &BigRational, conductor: u32) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NoSquareRoot {
                value: q.to_string(),
                conductor,
            });
        }
        if q.is_zero() {
            return Ok(Self::zero(conductor));
        }
        // √(p/r) = √(p r) / r
        let pr = q.numer() * q.denom();
        let (square, free) = split_square(&pr);
        let mut root = Self::from_rational(
            &BigRational::new(square, q.denom().clone()),
            conductor,
        );
        let free = free.to_u64().ok_or_else(|| Error::NoSquareRoot {
            value: q.to_string(),
            conductor,
        })?;
        let no_root = || Error::NoSquareRoot {
            value: q.to_string(),
            conductor,
        };
        for p in prime_factors(free) {
            let s = sqrt_prime(p, conductor).ok_or_else(no_root)?;
            root = root * s;
        }
        if root.to_complex().re < 0.0 {
            root = -root;
        }
        Ok(root)
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Power-basis coefficients as reduced rationals (length φ(N)).
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.conductor == other.field.conductor {
            Ok(())
        } else {
            Err(Error::ConductorMismatch(
                self.field.conductor,
                other.field.conductor,
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let den = self.den.lcm(&other.den);
            let fa = &den / &self.den;
            let fb = &den / &other.den;
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &fa, b * &fb);
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, den)
        };
        Self::from_parts(self.field.clone(), num, den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.zero_like();
        }
        let f = &self.field;
        let deg = f.degree;
        let mut conv = vec![BigInt::zero(); 2 * deg - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let n = f.conductor as usize;
        let mut num: Vec<BigInt> = conv.drain(..deg).collect();
        for (off, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dst, &r) in num.iter_mut().zip(&f.powers[(deg + off) % n]) {
                if r != 0 {
                    *dst += &c * r;
                }
            }
        }
        Self::from_parts(f.clone(), num, &self.den * &other.den)
    }

    /// The Galois automorphism ζ ↦ ζ^k (k coprime to N).
    pub fn galois(&self, k: u32) -> Self {
        let f = &self.field;
        let n = f.conductor as usize;
        let mut num = vec![BigInt::zero(); f.degree];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (dst, &r) in num.iter_mut().zip(&f.powers[(j * k as usize) % n]) {
                if r != 0 {
                    *dst += c * r;
                }
            }
        }
        Self::from_parts(f.clone(), num, self.den.clone())
    }

    /// Complex conjugation, σ_{N-1}.
    pub fn conj(&self) -> Self {
        let n = self.field.conductor;
        if n <= 2 {
            return self.clone();
        }
        self.galois(n - 1)
    }

    /// Multiplicative inverse via the field norm: a⁻¹ = (∏_{k≠1} σ_k a) / N(a).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // When |a|² is rational, a⁻¹ = conj(a)/|a|².
        let conj = self.conj();
        if let Some(m) = self.mul_unchecked(&conj).to_rational() {
            let inv_m = self.rational_like(&m.recip());
            return Ok(conj.mul_unchecked(&inv_m));
        }
        let mut others = self.one_like();
        for &k in self.field.units.iter().filter(|&&k| k != 1) {
            others = others.mul_unchecked(&self.galois(k));
        }
        let norm = self
            .mul_unchecked(&others)
            .to_rational()
            .expect("field norm is rational");
        let inv_norm = self.rational_like(&norm.recip());
        Ok(others.mul_unchecked(&inv_norm))
    }

    /// |a|² = a·conj(a), a real element of the field.
    pub fn norm_sqr(&self) -> Self {
        self.mul_unchecked(&self.conj())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluation at ζ = e^{2πi/N}.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.conductor as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let theta = std::f64::consts::TAU * j as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, theta)
            })
            .sum()
    }

    /// Same value in a field whose conductor is a multiple of this one.
    pub fn embed(&self, conductor: u32) -> Result<Self> {
        let from = self.field.conductor;
        if !conductor.is_multiple_of(from) {
            return Err(Error::ConductorNotDivisible {
                conductor,
                required: from,
            });
        }
        let step = (conductor / from) as i64;
        let mut acc = Self::zero(conductor);
        for (j, c) in self.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc
                    + Self::root_of_unity(step * j as i64, conductor)
                        * Self::from_rational(c, conductor);
            }
        }
        Ok(acc)
    }
}

fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    // n = square² · free with free squarefree; trial division is enough for desk-scale inputs.
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    free *= rest;
    (square, free)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn sqrt_prime(p: u64, conductor: u32) -> Option<Cyclo> {
    let n = conductor as u64;
    if p == 2 {
        if !n.is_multiple_of(8) {
            return None;
        }
        let s = (n / 8) as i64;
        return Some(
            Cyclo::root_of_unity(s, conductor) + Cyclo::root_of_unity(7 * s, conductor),
        );
    }
    if !n.is_multiple_of(p) || (p % 4 == 3 && !n.is_multiple_of(4)) {
        return None;
    }
    let step = (n / p) as i64;
    let mut gauss = Cyclo::zero(conductor);
    for a in 1..p {
        let term = Cyclo::root_of_unity(step * a as i64, conductor);
        gauss = if legendre(a, p) == 1 {
            gauss + term
        } else {
            gauss - term
        };
    }
    if p % 4 == 1 {
        Some(gauss)
    } else {
        // gauss² = -p, so (-i·gauss)² = p
        let minus_i = Cyclo::root_of_unity(3 * (n / 4) as i64, conductor);
        Some(gauss * minus_i)
    }
}

fn legendre(a: u64, p: u64) -> i32 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            /// Panics on conductor mismatch; use the `try_*` methods for checked arithmetic.
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                self.check(rhs).expect("cyclotomic conductor mismatch");
                $body(self, rhs)
            }
        }
        impl $trait<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                (&self).$method(rhs)
            }
        }
        impl $trait<Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Cyclo, b: &Cyclo| a.add_unchecked(b, false));
binop!(Sub, sub, |a: &Cyclo, b: &Cyclo| a.add_unchecked(b, true));
binop!(Mul, mul, |a: &Cyclo, b: &Cyclo| a.mul_unchecked(b));

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(mut self) -> Cyclo {
        for x in self.num.iter_mut() {
            *x = -std::mem::take(x);
        }
        self
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -self.clone()
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [N={}]", self.field.conductor)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("({c})z"),
                _ => format!("({c})z^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Wire form: `{"conductor": N, "coeffs": ["p/q", …]}`.
#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            conductor: self.conductor(),
            coeffs: self
                .coeffs()
                .iter()
                .map(|q| format!("{}/{}", q.numer(), q.denom()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.conductor == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Cyclo::from_coeffs(repr.conductor, &coeffs).map_err(serde::de::Error::custom)
    }
}

/// Parses "p/q" or "p".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: u32 = 12;

    fn z(k: i64) -> Cyclo {
        Cyclo::root_of_unity(k, N)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(24).len(), 9);
    }

    #[test]
    fn roots_of_unity() {
        assert!(z(12).is_one());
        let w = z(4);
        assert!((&w * &w + &w + Cyclo::one(N)).is_zero());
        let i = z(3);
        assert_eq!(&i * &i, Cyclo::from_int(-1, N));
        assert_eq!(z(-1), z(11));
    }

    #[test]
    fn inv_sqrt3_values() {
        let r = Cyclo::inv_sqrt3(N).unwrap();
        assert_eq!(&r * &r, Cyclo::from_ratio(1, 3, N));
        assert!((r.clone() * (z(1) + z(11))).is_one());
        assert!((r.to_complex().re - 3f64.powf(-0.5)).abs() < 1e-12);
        assert!(r.to_complex().im.abs() < 1e-12);
        assert!(matches!(
            Cyclo::inv_sqrt3(8),
            Err(Error::ConductorNotDivisible { .. })
        ));
        assert_eq!(Cyclo::inv_sqrt3(24).unwrap(), r.embed(24).unwrap());
    }

    #[test]
    fn conjugation_and_modulus() {
        assert_eq!(z(1).conj(), z(11));
        let w = z(4);
        assert!((Cyclo::one(N) + &w + &w * &w).is_zero());
        // e^{πi/6}/√3 has modulus² 1/3
        let x = z(1) * Cyclo::inv_sqrt3(N).unwrap();
        assert_eq!(&x * &x.conj(), Cyclo::from_ratio(1, 3, N));
    }

    #[test]
    fn division_and_errors() {
        let a = z(1) + Cyclo::from_int(2, N);
        let b = z(5) - Cyclo::from_ratio(1, 7, N);
        let q = a.try_div(&b).unwrap();
        assert_eq!(q * &b, a);
        assert!(matches!(a.try_div(&Cyclo::zero(N)), Err(Error::DivisionByZero)));
        assert!(matches!(
            a.try_add(&Cyclo::one(24)),
            Err(Error::ConductorMismatch(12, 24))
        ));
    }

    #[test]
    fn square_roots() {
        for (q, n) in [(3, 12), (2, 24), (3, 24), (6, 24), (12, 12), (5, 20), (7, 28)] {
            let r = Cyclo::sqrt_rational(&BigRational::from_integer(q.into()), n).unwrap();
            assert_eq!(&r * &r, Cyclo::from_int(q, n), "sqrt {q} in N={n}");
            assert!(r.to_complex().re > 0.0);
        }
        let half = Cyclo::sqrt_rational(&BigRational::new(1.into(), 2.into()), 24).unwrap();
        assert!((half.to_complex().re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(Cyclo::sqrt_rational(&BigRational::from_integer(2.into()), 12).is_err());
        assert!(Cyclo::sqrt_rational(&BigRational::from_integer(5.into()), 12).is_err());
    }

    #[test]
    fn serde_wire_form() {
        let x = Cyclo::from_ratio(1, 3, N) + z(4);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"conductor":12,"coeffs":["-2/3","0/1","1/1","0/1"]}"#);
        let back: Cyclo = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let bad = r#"{"conductor":12,"coeffs":["1/1"]}"#;
        assert!(serde_json::from_str::<Cyclo>(bad).is_err());
    }
}
