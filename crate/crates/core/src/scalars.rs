//! Exact coefficients: Gaussian rationals extended by the formal constant
//! `τ`, which stands for `2πi`.
//!
//! `τ` is treated as transcendental. Scalar arithmetic never uses
//! `e^τ = 1`; that rule lives in the exponentiation and integrality code.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `a` or `a/b`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(BigRational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// An element `re + i·im` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = if self.im.is_negative() {
            format!("-{}", fmt_rational(&-self.im.clone()))
        } else {
            format!("+{}", fmt_rational(&self.im))
        };
        write!(f, "({}{}i)", fmt_rational(&self.re), im)
    }
}

/// A polynomial in `τ` with Gaussian-rational coefficients.
///
/// Stored densely by τ-degree with trailing zeros trimmed, so the zero
/// scalar is the empty vector and equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauScalar {
    coeffs: Vec<GaussianRational>,
}

impl TauScalar {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_gaussian(GaussianRational::one())
    }

    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    /// The formal constant `τ = 2πi`.
    pub fn tau() -> Self {
        Self::tau_pow(1)
    }

    pub fn tau_pow(d: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); d + 1];
        coeffs[d] = GaussianRational::one();
        Self { coeffs }
    }

    /// `2π = τ/i = -iτ`.
    pub fn two_pi() -> Self {
        Self::from_coeffs(vec![GaussianRational::zero(), -&GaussianRational::i()])
    }

    pub fn from_gaussian(g: GaussianRational) -> Self {
        Self::from_coeffs(vec![g])
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_gaussian(GaussianRational::real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `τ^d` (zero beyond the stored degree).
    pub fn coeff(&self, d: usize) -> GaussianRational {
        self.coeffs.get(d).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == GaussianRational::one()
    }

    /// τ-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The constant as a Gaussian rational, if it has no τ-dependence.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self.coeffs.len() {
            0 => Some(GaussianRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Conjugation: `i ↦ -i`, `τ ↦ -τ`.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 0 { c.conj() } else { -&c.conj() })
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn scale_gaussian(&self, g: &GaussianRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * g).collect())
    }

    /// Exact quotient by `τ`, if there is no τ⁰ part.
    pub fn div_tau(&self) -> Option<Self> {
        match self.coeffs.first() {
            None => Some(Self::zero()),
            Some(c) if c.is_zero() => Some(Self { coeffs: self.coeffs[1..].to_vec() }),
            Some(_) => None,
        }
    }

    /// Inverse when the scalar is a nonzero Gaussian rational.
    pub fn inv(&self) -> Option<Self> {
        self.as_gaussian()?.inv().map(Self::from_gaussian)
    }

    /// Substitutes `τ = 2πi` in double precision.
    ///
    /// `precision` is the number of decimal digits requested and must lie in
    /// `1..=15`; the result is accurate to that many significant digits for
    /// scalars of moderate size.
    pub fn evaluate_numeric(&self, precision: u32) -> Result<Complex64> {
        if !(1..=15).contains(&precision) {
            return Err(Error::Precondition(format!(
                "precision {precision} outside 1..=15 digits"
            )));
        }
        let tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        // Horner in τ.
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * tau + c.to_complex();
        }
        Ok(acc)
    }
}

impl From<i64> for TauScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for TauScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<GaussianRational> for TauScalar {
    fn from(g: GaussianRational) -> Self {
        Self::from_gaussian(g)
    }
}

impl Add for &TauScalar {
    type Output = TauScalar;
    fn add(self, o: &TauScalar) -> TauScalar {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|d| match (self.coeffs.get(d), o.coeffs.get(d)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        TauScalar::from_coeffs(coeffs)
    }
}

impl Add for TauScalar {
    type Output = TauScalar;
    fn add(self, o: TauScalar) -> TauScalar {
        &self + &o
    }
}

impl AddAssign<&TauScalar> for TauScalar {
    fn add_assign(&mut self, o: &TauScalar) {
        if o.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(o.coeffs.len(), GaussianRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            a.re += &b.re;
            a.im += &b.im;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl Sub for &TauScalar {
    type Output = TauScalar;
    fn sub(self, o: &TauScalar) -> TauScalar {
        self + &(-o)
    }
}

impl Sub for TauScalar {
    type Output = TauScalar;
    fn sub(self, o: TauScalar) -> TauScalar {
        &self - &o
    }
}

impl Mul for &TauScalar {
    type Output = TauScalar;
    fn mul(self, o: &TauScalar) -> TauScalar {
        if self.is_zero() || o.is_zero() {
            return TauScalar::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let p = a * b;
                let slot = &mut coeffs[i + j];
                slot.re += p.re;
                slot.im += p.im;
            }
        }
        TauScalar::from_coeffs(coeffs)
    }
}

impl Mul for TauScalar {
    type Output = TauScalar;
    fn mul(self, o: TauScalar) -> TauScalar {
        &self * &o
    }
}

impl Neg for &TauScalar {
    type Output = TauScalar;
    fn neg(self) -> TauScalar {
        TauScalar { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for TauScalar {
    type Output = TauScalar;
    fn neg(self) -> TauScalar {
        -&self
    }
}

impl fmt::Display for TauScalar {
    /// Canonical form: `(a+bi)τ^d` parts in increasing degree joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| format!("{c}τ^{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
