//! λ-graded operator series acting on symbol series.
//!
//! An operator is a finite sum `Σ c · λ^k · G₁∘…∘G_m` of words in a small
//! set of generators. Words are kept symbolic and applied lazily.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{rat, GaussianRational, Rational, TauScalar};
use crate::starprod::{delta_kappa, laplacian, StarProductSpec, SymTensorField, SymbolSeries};
use crate::symbols::Symbol;

#[derive(Clone, Debug)]
pub enum Generator {
    PartialQ(usize),
    PartialP(usize),
    Laplacian,
    MulBy(Symbol),
    FiberInsert(SymTensorField),
    /// `δ_κ[A]`, raising the λ-order by at least one.
    Delta(Rational, SymTensorField),
    /// `ad_⋆(H) = [H, ·]_⋆`, raising the λ-order by at least one.
    Ad(SymbolSeries, Arc<StarProductSpec>),
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        use Generator::*;
        match (self, other) {
            (PartialQ(a), PartialQ(b)) | (PartialP(a), PartialP(b)) => a == b,
            (Laplacian, Laplacian) => true,
            (MulBy(a), MulBy(b)) => a == b,
            (FiberInsert(a), FiberInsert(b)) => a == b,
            (Delta(k, a), Delta(l, b)) => k == l && a == b,
            (Ad(h, s), Ad(g, t)) => h == g && Arc::ptr_eq(s, t),
            _ => false,
        }
    }
}

impl Generator {
    /// Guaranteed increase of the λ-order.
    pub fn min_raise(&self) -> usize {
        match self {
            Generator::Delta(..) | Generator::Ad(..) => 1,
            _ => 0,
        }
    }

    pub fn apply(&self, f: &SymbolSeries) -> Result<SymbolSeries> {
        Ok(match self {
            Generator::PartialQ(i) => f.map(|c| c.partial_q(*i)),
            Generator::PartialP(i) => f.map(|c| c.partial_p(*i)),
            Generator::Laplacian => f.map(laplacian),
            Generator::MulBy(s) => f.map(|c| s.mul(c)),
            Generator::FiberInsert(t) => f.map(|c| t.fiber_insert(c)),
            Generator::Delta(k, a) => delta_kappa(a, f, k),
            Generator::Ad(h, spec) => spec.commutator(&h.truncate(f.order()), f)?,
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::PartialQ(i) => write!(f, "∂q{i}"),
            Generator::PartialP(i) => write!(f, "∂p{i}"),
            Generator::Laplacian => write!(f, "Δ"),
            Generator::MulBy(s) => write!(f, "[{s}]"),
            Generator::FiberInsert(_) => write!(f, "F(T)"),
            Generator::Delta(k, _) => write!(f, "δ[{k}]"),
            Generator::Ad(_, _) => write!(f, "ad(H)"),
        }
    }
}

/// One summand `c · λ^shift · word[0]∘word[1]∘…`; the empty word is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct OpTerm {
    pub coeff: TauScalar,
    pub shift: usize,
    pub word: Vec<Generator>,
}

impl OpTerm {
    pub fn grade(&self) -> usize {
        self.shift + self.word.iter().map(Generator::min_raise).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSeries {
    order: usize,
    terms: Vec<OpTerm>,
}

impl OperatorSeries {
    pub fn zero(order: usize) -> Self {
        Self { order, terms: Vec::new() }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_terms(order, vec![OpTerm { coeff: TauScalar::one(), shift: 0, word: Vec::new() }])
    }

    /// `c · λ^shift · G`.
    pub fn generator(order: usize, g: Generator, coeff: TauScalar, shift: usize) -> Self {
        Self::from_terms(order, vec![OpTerm { coeff, shift, word: vec![g] }])
    }

    pub fn from_terms(order: usize, terms: Vec<OpTerm>) -> Self {
        let mut out = Self { order, terms: Vec::new() };
        for t in terms {
            out.push(t);
        }
        out
    }

    fn push(&mut self, t: OpTerm) {
        if t.coeff.is_zero() || t.grade() > self.order {
            return;
        }
        if let Some(i) = self.terms.iter().position(|u| u.shift == t.shift && u.word == t.word) {
            self.terms[i].coeff += &t.coeff;
            if self.terms[i].coeff.is_zero() {
                self.terms.remove(i);
            }
        } else {
            self.terms.push(t);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Self::from_terms(self.order.min(o.order), self.terms.clone());
        for t in &o.terms {
            out.push(t.clone());
        }
        out
    }

    pub fn scale(&self, c: &TauScalar) -> Self {
        Self::from_terms(
            self.order,
            self.terms.iter().map(|t| OpTerm { coeff: &t.coeff * c, ..t.clone() }).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-TauScalar::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.order.min(o.order));
        for a in &self.terms {
            for b in &o.terms {
                let mut word = a.word.clone();
                word.extend(b.word.iter().cloned());
                out.push(OpTerm { coeff: &a.coeff * &b.coeff, shift: a.shift + b.shift, word });
            }
        }
        out
    }

    /// Lowest grade present.
    pub fn min_grade(&self) -> Option<usize> {
        self.terms.iter().map(OpTerm::grade).min()
    }

    pub fn apply(&self, f: &SymbolSeries) -> Result<SymbolSeries> {
        let order = f.order().min(self.order);
        let f = f.truncate(order);
        let mut acc = f.map(|c| Symbol::zero(c.dim()));
        for t in &self.terms {
            if t.grade() > order {
                continue;
            }
            let mut g = f.clone();
            for gen in t.word.iter().rev() {
                g = gen.apply(&g)?;
                if g.is_zero() {
                    break;
                }
            }
            acc = acc.add(&g.shift(t.shift).map(|c| c.scale(&t.coeff)));
        }
        Ok(acc)
    }

    fn power_series(&self, coeff: impl Fn(usize) -> Rational) -> Self {
        let mut acc = Self::identity(self.order).scale(&TauScalar::from_rational(coeff(0)));
        let mut power = Self::identity(self.order);
        for k in 1..=self.order {
            power = power.compose(self);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&TauScalar::from_rational(coeff(k))));
        }
        acc
    }
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, j| acc * rat(j as i64, 1))
}

/// `exp(D)` for an operator series without a grade-0 part.
pub fn op_exp(d: &OperatorSeries) -> Result<OperatorSeries> {
    if d.min_grade() == Some(0) {
        return Err(Error::Precondition("op_exp needs a vanishing grade-0 part".into()));
    }
    Ok(d.power_series(|k| Rational::one() / factorial(k)))
}

/// `log(T)` for an operator series with grade-0 part equal to the identity.
pub fn op_log(t: &OperatorSeries) -> Result<OperatorSeries> {
    let rest = t.sub(&OperatorSeries::identity(t.order()));
    if rest.min_grade() == Some(0) {
        return Err(Error::Precondition("op_log needs grade-0 part equal to the identity".into()));
    }
    let out = rest.power_series(|k| {
        if k == 0 {
            Rational::zero()
        } else {
            let s = if k % 2 == 1 { 1 } else { -1 };
            rat(s, k as i64)
        }
    });
    Ok(out)
}

/// `S = exp(±i δ_κ[A])` as an operator series.
pub fn fiber_translation_op(a: &SymTensorField, kappa: &Rational, order: usize, sign: i64) -> Result<OperatorSeries> {
    let c = TauScalar::from_gaussian(GaussianRational::new(Rational::zero(), rat(sign, 1)));
    op_exp(&OperatorSeries::generator(order, Generator::Delta(kappa.clone(), a.clone()), c, 0))
}

/// `D(a ⋆ b) − D(a) ⋆ b − a ⋆ D(b)`.
pub fn derivation_residual(
    d: &OperatorSeries,
    a: &SymbolSeries,
    b: &SymbolSeries,
    spec: &StarProductSpec,
) -> Result<SymbolSeries> {
    let lhs = d.apply(&spec.star(a, b)?)?;
    Ok(lhs.sub(&spec.star(&d.apply(a)?, b)?).sub(&spec.star(a, &d.apply(b)?)?))
}

/// `T(a ⋆ b) − T(a) ⋆ T(b)`.
pub fn automorphism_residual(
    t: &OperatorSeries,
    a: &SymbolSeries,
    b: &SymbolSeries,
    spec: &StarProductSpec,
) -> Result<SymbolSeries> {
    Ok(t.apply(&spec.star(a, b)?)?.sub(&spec.star(&t.apply(a)?, &t.apply(b)?)?))
}
