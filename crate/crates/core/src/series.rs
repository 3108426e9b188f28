//! λ-truncated formal power series over an exact coefficient ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::TauScalar;

/// Minimal ring interface for series coefficients.
///
/// Elements carry whatever shape they need (torus dimension, matrix size),
/// so constants are produced from an existing element.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse, when it exists in the ring.
    fn inverse(&self) -> Option<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Ring for TauScalar {
    fn zero_like(&self) -> Self {
        TauScalar::zero()
    }
    fn one_like(&self) -> Self {
        TauScalar::one()
    }
    fn is_zero(&self) -> bool {
        TauScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

/// `Σ_{r ≤ order} λ^r c_r`; coefficients past `order` do not exist.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> FormalSeries<T> {
    /// Builds a series of the given order, padding missing coefficients
    /// with zero and dropping those beyond the order.
    pub fn new(order: usize, mut coeffs: Vec<T>, zero: &T) -> Self {
        coeffs.truncate(order + 1);
        let z = zero.zero_like();
        coeffs.resize(order + 1, z);
        Self { coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let z = c.zero_like();
        Self::new(order, vec![c], &z)
    }

    pub fn zero(order: usize, like: &T) -> Self {
        Self::new(order, vec![], like)
    }

    pub fn one(order: usize, like: &T) -> Self {
        Self::constant(like.one_like(), order)
    }

    /// `λ^shift · c`.
    pub fn monomial(c: T, shift: usize, order: usize) -> Self {
        let z = c.zero_like();
        let mut coeffs = vec![z.clone(); order + 1];
        if shift <= order {
            coeffs[shift] = c;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> &T {
        &self.coeffs[r]
    }

    pub fn coeff_mut(&mut self, r: usize) -> &mut T {
        &mut self.coeffs[r]
    }

    pub fn zero_elem(&self) -> T {
        self.coeffs[0].zero_like()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn lowest_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let z = self.zero_elem();
        Self::new(order, self.coeffs.clone(), &z)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> FormalSeries<U> {
        FormalSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Multiplies by `λ^k`, dropping what falls past the order.
    pub fn shift(&self, k: usize) -> Self {
        let z = self.zero_elem();
        let mut coeffs = vec![z.clone(); k.min(self.coeffs.len())];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.order(), coeffs, &z)
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        Self { coeffs: (0..=order).map(|r| self.coeffs[r].add(&o.coeffs[r])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        Self { coeffs: (0..=order).map(|r| self.coeffs[r].sub(&o.coeffs[r])).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Ring::neg).collect() }
    }

    /// Multiplies every coefficient on the left by `c`.
    pub fn scale(&self, c: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| c.mul(x)).collect() }
    }

    /// Truncated Cauchy product; the result has the smaller of the two orders.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let coeffs = (0..=order)
            .map(|r| {
                let mut acc = self.zero_elem();
                for s in 0..=r {
                    let (a, b) = (&self.coeffs[s], &o.coeffs[r - s]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect();
        Self { coeffs }
    }

    /// Inverse for the Cauchy product; needs an invertible leading coefficient.
    pub fn invert(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::NotInvertible)?;
        let order = self.order();
        let mut out: Vec<T> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for r in 1..=order {
            let mut acc = self.zero_elem();
            for s in 1..=r {
                acc = acc.add(&self.coeffs[s].mul(&out[r - s]));
            }
            out.push(inv0.mul(&acc).neg());
        }
        Ok(Self { coeffs: out })
    }
}

impl<T: Ring + fmt::Display> fmt::Display for FormalSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| format!("λ^{r}·[{c}]"))
            .collect();
        if parts.is_empty() {
            write!(f, "0 + O(λ^{})", self.order() + 1)
        } else {
            write!(f, "{} + O(λ^{})", parts.join(" + "), self.order() + 1)
        }
    }
}
