//! Exact phase-space symbols on charts of `T*Tⁿ`.
//!
//! A symbol is a finite sum of terms `c · e^{τ k·q} q^β p^α` with
//! `c ∈ ℚ(i)[τ]`. The position `q` has period 1, so `e_k = e^{τ k·q}` is
//! periodic for integer `k`. Polynomial `q`-dependence only makes sense on
//! a chart; symbols without it are global.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{rat_int, GaussianRational, Rational, TauScalar};
use crate::series::Ring;

/// Largest supported torus dimension.
pub const MAX_DIM: usize = 2;

pub type Freq = [i64; MAX_DIM];
pub type MultiIndex = [u32; MAX_DIM];

/// Exponent data of one term. Ordering is lexicographic in `(k, β, α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub freq: Freq,
    pub qpow: MultiIndex,
    pub ppow: MultiIndex,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { freq: [0; MAX_DIM], qpow: [0; MAX_DIM], ppow: [0; MAX_DIM] };

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_DIM {
            m.freq[i] += o.freq[i];
            m.qpow[i] += o.qpow[i];
            m.ppow[i] += o.ppow[i];
        }
        m
    }
}

/// Falling factorial `a (a-1) ... (a-c+1)`.
pub(crate) fn falling(a: u32, c: u32) -> i64 {
    (0..c).map(|j| (a - j) as i64).product()
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    dim: usize,
    terms: BTreeMap<Monomial, TauScalar>,
}

impl Symbol {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported torus dimension {dim}");
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: TauScalar) -> Self {
        Self::term(dim, Monomial::ONE, c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, TauScalar::one())
    }

    pub fn term(dim: usize, m: Monomial, c: TauScalar) -> Self {
        let mut s = Self::zero(dim);
        for i in dim..MAX_DIM {
            assert!(
                m.freq[i] == 0 && m.qpow[i] == 0 && m.ppow[i] == 0,
                "monomial uses axis {i} beyond dimension {dim}"
            );
        }
        if !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    /// `e_k = e^{τ k·q}`.
    pub fn exp_freq(dim: usize, k: &[i64]) -> Self {
        let mut m = Monomial::ONE;
        m.freq[..k.len()].copy_from_slice(k);
        Self::term(dim, m, TauScalar::one())
    }

    /// Coordinate function `qⁱ` (chart only).
    pub fn q(dim: usize, axis: usize) -> Self {
        let mut m = Monomial::ONE;
        m.qpow[axis] = 1;
        Self::term(dim, m, TauScalar::one())
    }

    /// Momentum `p_i`.
    pub fn p(dim: usize, axis: usize) -> Self {
        let mut m = Monomial::ONE;
        m.ppow[axis] = 1;
        Self::term(dim, m, TauScalar::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &TauScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No `q`-polynomial factors, so the symbol is a function on the torus.
    pub fn is_global(&self) -> bool {
        self.terms.keys().all(|m| m.qpow.iter().all(|&b| b == 0))
    }

    /// No `p`-dependence, i.e. the symbol is a (lifted) function on `Q`.
    pub fn is_vertical(&self) -> bool {
        self.terms.keys().all(|m| m.ppow.iter().all(|&a| a == 0))
    }

    /// The symbol as a scalar, when it is constant.
    pub fn as_constant(&self) -> Option<TauScalar> {
        match self.terms.len() {
            0 => Some(TauScalar::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Coefficient of a given monomial.
    pub fn coeff(&self, m: &Monomial) -> TauScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn max_p_degree(&self) -> MultiIndex {
        let mut d = [0; MAX_DIM];
        for m in self.terms.keys() {
            for i in 0..MAX_DIM {
                d[i] = d[i].max(m.ppow[i]);
            }
        }
        d
    }

    fn insert_add(&mut self, m: Monomial, c: &TauScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_dim(&self, o: &Symbol) -> Result<()> {
        if self.dim == o.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.dim, o.dim))
        }
    }

    pub fn try_add(&self, o: &Symbol) -> Result<Symbol> {
        self.check_dim(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, c);
        }
        Ok(out)
    }

    /// Pointwise product; `e_k · e_l = e_{k+l}`.
    pub fn try_mul(&self, o: &Symbol) -> Result<Symbol> {
        self.check_dim(o)?;
        let mut out = Symbol::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.insert_add(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Symbol) -> Symbol {
        self.try_add(o).expect("symbol dimension mismatch")
    }

    pub fn sub(&self, o: &Symbol) -> Symbol {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Symbol) -> Symbol {
        self.try_mul(o).expect("symbol dimension mismatch")
    }

    pub fn neg(&self) -> Symbol {
        Symbol { dim: self.dim, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &TauScalar) -> Symbol {
        if c.is_zero() {
            return Symbol::zero(self.dim);
        }
        let mut out = Symbol::zero(self.dim);
        for (m, x) in &self.terms {
            out.insert_add(*m, &(c * x));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Symbol {
        if r.is_zero() {
            return Symbol::zero(self.dim);
        }
        Symbol { dim: self.dim, terms: self.terms.iter().map(|(m, c)| (*m, c.scale(r))).collect() }
    }

    /// `∂/∂qⁱ`: the exponential contributes `τ kᵢ`, the power `βᵢ q^{β-eᵢ}`.
    pub fn partial_q(&self, axis: usize) -> Symbol {
        let mut out = Symbol::zero(self.dim);
        for (m, c) in &self.terms {
            let k = m.freq[axis];
            if k != 0 {
                out.insert_add(*m, &(&TauScalar::tau() * &c.scale(&rat_int(k))));
            }
            let b = m.qpow[axis];
            if b > 0 {
                let mut m2 = *m;
                m2.qpow[axis] -= 1;
                out.insert_add(m2, &c.scale(&rat_int(b as i64)));
            }
        }
        out
    }

    /// `∂/∂p_i`.
    pub fn partial_p(&self, axis: usize) -> Symbol {
        self.partial_p_multi(&{
            let mut c = [0; MAX_DIM];
            c[axis] = 1;
            c
        })
    }

    /// `∂_q^c` for a multi-index `c`.
    pub fn partial_q_multi(&self, c: &MultiIndex) -> Symbol {
        let mut out = self.clone();
        for (axis, &n) in c.iter().enumerate() {
            for _ in 0..n {
                out = out.partial_q(axis);
            }
        }
        out
    }

    /// `∂_p^c` for a multi-index `c`, computed in one pass.
    pub fn partial_p_multi(&self, c: &MultiIndex) -> Symbol {
        let mut out = Symbol::zero(self.dim);
        for (m, x) in &self.terms {
            if (0..MAX_DIM).any(|i| m.ppow[i] < c[i]) {
                continue;
            }
            let mut m2 = *m;
            let mut factor = 1i64;
            for i in 0..MAX_DIM {
                factor *= falling(m.ppow[i], c[i]);
                m2.ppow[i] -= c[i];
            }
            out.insert_add(m2, &x.scale(&rat_int(factor)));
        }
        out
    }

    /// Complex conjugation: `k ↦ -k`, coefficients conjugated, `q`, `p` real.
    pub fn conj(&self) -> Symbol {
        let mut out = Symbol::zero(self.dim);
        for (m, c) in &self.terms {
            let mut m2 = *m;
            for k in m2.freq.iter_mut() {
                *k = -*k;
            }
            out.insert_add(m2, &c.conj());
        }
        out
    }

    /// Chart change `q ↦ q + s` for an integral deck offset `s`.
    ///
    /// Trigonometric factors are unchanged because `e^{τ k·s} = 1`.
    pub fn substitute_offset(&self, s: &[i64]) -> Symbol {
        let mut out = Symbol::zero(self.dim);
        for (m, c) in &self.terms {
            // Expand Π (qᵢ + sᵢ)^{βᵢ} binomially.
            let mut partial: Vec<(MultiIndex, BigInt)> = vec![([0; MAX_DIM], BigInt::from(1))];
            for axis in 0..self.dim {
                let b = m.qpow[axis];
                let shift = BigInt::from(s.get(axis).copied().unwrap_or(0));
                let mut next = Vec::new();
                for (pows, w) in &partial {
                    for j in 0..=b {
                        let coeff = binomial(b, j) * num_traits::pow(shift.clone(), (b - j) as usize);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut p2 = *pows;
                        p2[axis] = j;
                        next.push((p2, w * coeff));
                    }
                }
                partial = next;
            }
            for (pows, w) in partial {
                let mut m2 = *m;
                m2.qpow = pows;
                out.insert_add(m2, &c.scale(&Rational::from_integer(w)));
            }
        }
        out
    }

    /// As [`Symbol::substitute_offset`], rejecting non-integral offsets.
    pub fn substitute_offset_rational(&self, s: &[Rational]) -> Result<Symbol> {
        let ints = s
            .iter()
            .map(|r| {
                if r.is_integer() {
                    i64::try_from(r.to_integer()).map_err(|_| Error::Precondition("offset too large".into()))
                } else {
                    Err(Error::Precondition(format!("non-integer offset {r}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.substitute_offset(&ints))
    }

    /// Keeps the terms with `p`-degree zero, i.e. sets `p = 0`.
    pub fn restrict_zero_section(&self) -> Symbol {
        Symbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.ppow.iter().all(|&a| a == 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// The `k = 0`, `β = 0`, `α = 0` coefficient.
    pub fn constant_term(&self) -> TauScalar {
        self.coeff(&Monomial::ONE)
    }

    /// Inverse in the pointwise algebra, available for `c · e_k` with `c`
    /// a nonzero Gaussian rational.
    pub fn pointwise_inverse(&self) -> Option<Symbol> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if m.qpow.iter().chain(m.ppow.iter()).any(|&x| x != 0) {
            return None;
        }
        let inv = c.inv()?;
        let mut m2 = *m;
        for k in m2.freq.iter_mut() {
            *k = -*k;
        }
        Some(Symbol::term(self.dim, m2, inv))
    }
}

impl Ring for Symbol {
    fn zero_like(&self) -> Self {
        Symbol::zero(self.dim)
    }
    fn one_like(&self) -> Self {
        Symbol::one(self.dim)
    }
    fn is_zero(&self) -> bool {
        Symbol::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Symbol::add(self, o)
    }
    fn neg(&self) -> Self {
        Symbol::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Symbol::mul(self, o)
    }
    fn inverse(&self) -> Option<Self> {
        self.pointwise_inverse()
    }
}

fn fmt_index<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Symbol {
    /// Canonical form `c·e[k]q[β]p[α]`, terms sorted by `(k, β, α)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let d = self.dim;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                format!(
                    "{{{c}}}·e[{}]q[{}]p[{}]",
                    fmt_index(&m.freq[..d]),
                    fmt_index(&m.qpow[..d]),
                    fmt_index(&m.ppow[..d])
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A function on `Q` (or a chart of `Q`): a symbol without `p`-dependence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaveFunction(Symbol);

impl WaveFunction {
    pub fn new(s: Symbol) -> Result<Self> {
        if s.is_vertical() {
            Ok(Self(s))
        } else {
            Err(Error::Precondition("wave function depends on p".into()))
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self(Symbol::zero(dim))
    }

    pub fn one(dim: usize) -> Self {
        Self(Symbol::one(dim))
    }

    pub fn exp_freq(dim: usize, k: &[i64]) -> Self {
        Self(Symbol::exp_freq(dim, k))
    }

    pub fn symbol(&self) -> &Symbol {
        &self.0
    }

    pub fn into_symbol(self) -> Symbol {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn partial_q_multi(&self, c: &MultiIndex) -> Self {
        Self(self.0.partial_q_multi(c))
    }

    pub fn substitute_offset(&self, s: &[i64]) -> Self {
        Self(self.0.substitute_offset(s))
    }
}

impl Ring for WaveFunction {
    fn zero_like(&self) -> Self {
        Self(self.0.zero_like())
    }
    fn one_like(&self) -> Self {
        Self(self.0.one_like())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }
    fn neg(&self) -> Self {
        Self(self.0.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        Self(self.0.mul(&o.0))
    }
    fn inverse(&self) -> Option<Self> {
        self.0.pointwise_inverse().map(Self)
    }
}

impl fmt::Display for WaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `π*u`: a function on `Q` viewed on phase space.
pub fn vertical_lift(u: &WaveFunction) -> Symbol {
    u.0.clone()
}

/// `ι*f`: restriction to the zero section `p = 0`.
pub fn zero_section_restrict(f: &Symbol) -> WaveFunction {
    WaveFunction(f.restrict_zero_section())
}

/// Integral over `Tⁿ` against the normalized Lebesgue measure: the
/// zeroth Fourier coefficient.
pub fn torus_integral(u: &WaveFunction) -> Result<TauScalar> {
    if !u.0.is_global() {
        return Err(Error::NotGlobal);
    }
    Ok(u.0.constant_term())
}

/// A `k × k` matrix of symbols, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixSymbol {
    size: usize,
    dim: usize,
    entries: Vec<Symbol>,
}

impl MatrixSymbol {
    pub fn zero(size: usize, dim: usize) -> Self {
        assert!(size >= 1, "matrix size must be at least 1");
        Self { size, dim, entries: vec![Symbol::zero(dim); size * size] }
    }

    pub fn identity(size: usize, dim: usize) -> Self {
        let mut m = Self::zero(size, dim);
        for i in 0..size {
            m.entries[i * size + i] = Symbol::one(dim);
        }
        m
    }

    pub fn from_entries(size: usize, entries: Vec<Symbol>) -> Self {
        assert!(size >= 1 && entries.len() == size * size, "bad matrix shape");
        let dim = entries[0].dim();
        Self { size, dim, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Symbol {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Symbol) {
        self.entries[i * self.size + j] = s;
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    /// Entrywise map.
    pub fn map(&self, f: impl Fn(&Symbol) -> Symbol) -> Self {
        Self { size: self.size, dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.size, self.dim);
        for i in 0..self.size {
            for j in 0..self.size {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    /// Matrix product with a custom entry multiplication.
    pub fn mul_with(&self, o: &Self, mul: impl Fn(&Symbol, &Symbol) -> Symbol) -> Self {
        let n = self.size;
        let mut out = Self::zero(n, self.dim);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Symbol::zero(self.dim);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&mul(a, b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Inverse of a matrix of Gaussian-rational constants (Gauss–Jordan).
    fn constant_inverse(&self) -> Option<Self> {
        let n = self.size;
        let mut a: Vec<Vec<GaussianRational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).as_constant()?.as_gaussian()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let mut inv: Vec<Vec<GaussianRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect())
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let pinv = a[col][col].inv()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &pinv;
                inv[col][j] = &inv[col][j] * &pinv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                        inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                    }
                }
            }
        }
        let entries = inv
            .into_iter()
            .flatten()
            .map(|g| Symbol::constant(self.dim, TauScalar::from_gaussian(g)))
            .collect();
        Some(Self { size: n, dim: self.dim, entries })
    }
}

impl Ring for MatrixSymbol {
    fn zero_like(&self) -> Self {
        Self::zero(self.size, self.dim)
    }
    fn one_like(&self) -> Self {
        Self::identity(self.size, self.dim)
    }
    fn is_zero(&self) -> bool {
        self.entries.iter().all(Symbol::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        Self {
            size: self.size,
            dim: self.dim,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }
    fn neg(&self) -> Self {
        self.map(Symbol::neg)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_with(o, Symbol::mul)
    }
    fn inverse(&self) -> Option<Self> {
        self.constant_inverse()
    }
}

impl fmt::Display for MatrixSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join("; "))
            .collect();
        write!(f, "[{}]", rows.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: i64) -> Symbol {
        Symbol::exp_freq(1, &[k])
    }

    #[test]
    fn product_examples() {
        assert_eq!(e(1).mul(&e(-1)), Symbol::one(1));
        let qp = Symbol::p(1, 0).mul(&Symbol::q(1, 0));
        assert_eq!(qp.num_terms(), 1);
        let one_plus = Symbol::one(1).add(&e(1));
        let expected = Symbol::one(1).add(&e(1).scale(&TauScalar::from(2))).add(&e(2));
        assert_eq!(one_plus.mul(&one_plus), expected);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(e(1).partial_q(0), e(1).scale(&TauScalar::tau()));
        let p2 = Symbol::p(1, 0).mul(&Symbol::p(1, 0));
        assert_eq!(p2.partial_p(0), Symbol::p(1, 0).scale(&TauScalar::from(2)));
        let qe = Symbol::q(1, 0).mul(&e(1));
        assert_eq!(qe.partial_q(0), e(1).add(&qe.scale(&TauScalar::tau())));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(e(1).conj(), e(-1));
        let ip = Symbol::p(1, 0).scale(&TauScalar::i());
        assert_eq!(ip.conj(), ip.neg());
        let f = e(2).scale(&TauScalar::tau()).add(&Symbol::q(1, 0));
        assert_eq!(f.conj().conj(), f);
    }

    #[test]
    fn offset_substitution_examples() {
        let q = Symbol::q(1, 0);
        assert_eq!(q.substitute_offset(&[1]), q.add(&Symbol::one(1)));
        assert_eq!(e(1).substitute_offset(&[1]), e(1));
        let q2 = q.mul(&q);
        let expected = q2.sub(&q.scale(&TauScalar::from(2))).add(&Symbol::one(1));
        assert_eq!(q2.substitute_offset(&[-1]), expected);
        assert!(q.substitute_offset_rational(&[crate::scalars::rat(1, 2)]).is_err());
    }

    #[test]
    fn lift_and_restrict() {
        let u = WaveFunction::exp_freq(1, &[1]);
        assert_eq!(vertical_lift(&u), e(1));
        assert!(zero_section_restrict(&Symbol::p(1, 0)).is_zero());
        let f = e(1).add(&Symbol::p(1, 0).mul(&e(2)));
        assert_eq!(zero_section_restrict(&f), u);
        assert_eq!(zero_section_restrict(&Symbol::one(1)), WaveFunction::one(1));
    }

    #[test]
    fn integral_examples() {
        assert!(torus_integral(&WaveFunction::exp_freq(1, &[1])).unwrap().is_zero());
        assert_eq!(torus_integral(&WaveFunction::one(1)).unwrap(), TauScalar::one());
        let u = WaveFunction::new(
            Symbol::constant(1, 3.into()).add(&e(1).scale(&2.into())).add(&e(-1).scale(&2.into())),
        )
        .unwrap();
        assert_eq!(torus_integral(&u).unwrap(), TauScalar::from(3));
        let chart = WaveFunction::new(Symbol::q(1, 0)).unwrap();
        assert_eq!(torus_integral(&chart), Err(Error::NotGlobal));
    }

    #[test]
    fn canonical_text() {
        let f = Symbol::p(2, 1).mul(&Symbol::exp_freq(2, &[1, -1])).scale(&TauScalar::tau());
        assert_eq!(f.to_string(), "{(0+0i)τ^0 + (1+0i)τ^1}·e[1,-1]q[0,0]p[0,1]".replace("(0+0i)τ^0 + ", ""));
        assert_eq!(Symbol::zero(1).to_string(), "0");
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert_eq!(Symbol::one(1).try_mul(&Symbol::one(2)), Err(Error::DimensionMismatch(1, 2)));
    }
}
