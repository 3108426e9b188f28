//! Star exponentials, star logarithms and BCH composition.
//!
//! For `H = H₀ + V` with classical head `H₀ = τ(n·q + z)` the exponential
//! is built in the interaction picture: `Exp(tH) = e_{tn} ⋆ g(t)` where
//! `g(t) = 1 + ∫₀ᵗ V(s) ⋆ g(s) ds` and `V(s) = e^{−s·ad H₀} V`. Because
//! `V` starts at λ¹ and `ad H₀` raises the λ-order, `V(s)` and `g(t)` are
//! polynomials in `t` at every truncation order.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::{rat, rat_int, Rational, TauScalar};
use crate::starprod::{StarProductSpec, SymbolSeries};
use crate::symbols::{Freq, Symbol, MAX_DIM};

/// A classical head `τ(n·q + z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExponentiableHead {
    pub freq: Freq,
    pub winding: i64,
}

impl ExponentiableHead {
    /// Recognizes `τ(n·q + z)` with integral `n`, `z`.
    pub fn of(h0: &Symbol) -> Result<Self> {
        let mut head = Self::default();
        let bad = || Error::NotExponentiable(h0.to_string());
        for (m, c) in h0.terms() {
            let g = c.div_tau().and_then(|x| x.as_gaussian()).ok_or_else(bad)?;
            if !g.im.is_zero() || !g.re.is_integer() || m.freq != [0; MAX_DIM] || m.ppow != [0; MAX_DIM] {
                return Err(bad());
            }
            let v = g.re.to_integer().to_i64().ok_or_else(bad)?;
            match m.qpow.iter().sum::<u32>() {
                0 => head.winding = v,
                1 => head.freq[m.qpow.iter().position(|&x| x == 1).ok_or_else(bad)?] = v,
                _ => return Err(bad()),
            }
        }
        Ok(head)
    }

    pub fn symbol(&self, dim: usize) -> Symbol {
        let mut s = Symbol::constant(dim, TauScalar::from_int(self.winding).mul_tau());
        for axis in 0..dim {
            s = s.add(&Symbol::q(dim, axis).scale(&TauScalar::from_int(self.freq[axis]).mul_tau()));
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.freq == [0; MAX_DIM] && self.winding == 0
    }

    /// `t·n` and `t·z` as integers, if they are.
    pub fn scaled(&self, t: &Rational) -> Option<Self> {
        let as_int = |v: i64| {
            let x = t * rat_int(v);
            x.is_integer().then(|| x.to_integer().to_i64()).flatten()
        };
        let mut freq = [0; MAX_DIM];
        for (f, &n) in freq.iter_mut().zip(&self.freq) {
            *f = as_int(n)?;
        }
        Some(Self { freq, winding: as_int(self.winding)? })
    }
}

trait MulTau {
    fn mul_tau(&self) -> TauScalar;
}

impl MulTau for TauScalar {
    fn mul_tau(&self) -> TauScalar {
        self * &TauScalar::tau()
    }
}

/// Polynomials in `t` with series coefficients.
type TPoly = Vec<SymbolSeries>;

fn tpoly_mul(a: &TPoly, b: &TPoly, spec: &StarProductSpec) -> Result<TPoly> {
    let zero = spec.ctx().zero();
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&spec.star(x, y)?);
        }
    }
    Ok(out)
}

fn tpoly_eval(p: &TPoly, t: &Rational) -> SymbolSeries {
    let mut acc = p[0].clone();
    let mut power = Rational::one();
    for c in &p[1..] {
        power *= t;
        acc = acc.add(&c.map(|s| s.scale_rational(&power)));
    }
    acc
}

/// `e^{−s·ad H₀} V` as a polynomial in `s`.
fn interaction_picture(h0: &SymbolSeries, v: &SymbolSeries, spec: &StarProductSpec) -> Result<TPoly> {
    let mut out = vec![v.clone()];
    let mut term = v.clone();
    for k in 1..=spec.ctx().order {
        term = spec.commutator(h0, &term)?;
        if term.is_zero() {
            break;
        }
        let w = rat(if k % 2 == 0 { 1 } else { -1 }, 1) / factorial(k);
        out.push(term.map(|s| s.scale_rational(&w)));
    }
    Ok(out)
}

fn factorial(k: usize) -> Rational {
    rat_int((1..=k as i64).product())
}

/// `Exp(tH)`: the solution of `d/dt f = H ⋆ f` with `f(0) = 1`.
pub fn star_exp(h: &SymbolSeries, spec: &StarProductSpec, t: &Rational) -> Result<SymbolSeries> {
    let ctx = spec.ctx();
    ctx.check(h)?;
    let h = h.truncate(ctx.order);
    let head = ExponentiableHead::of(h.coeff(0))?;
    let scaled = head
        .scaled(t)
        .ok_or_else(|| Error::NotExponentiable(format!("t·H₀ leaves the Fourier lattice for t = {t}")))?;
    let h0 = ctx.lift(h.coeff(0).clone());
    let v = h.sub(&h0);
    let g = if v.is_zero() {
        ctx.one()
    } else {
        let vs = interaction_picture(&h0, &v, spec)?;
        // Picard iteration; each pass fixes one more λ-order.
        let mut g: TPoly = vec![ctx.one()];
        for _ in 0..ctx.order {
            let integrand = tpoly_mul(&vs, &g, spec)?;
            let mut next = vec![ctx.one()];
            for (k, c) in integrand.into_iter().enumerate() {
                next.push(c.map(|s| s.scale_rational(&rat(1, k as i64 + 1))));
            }
            g = next;
        }
        tpoly_eval(&g, t)
    };
    let e = ctx.lift(Symbol::exp_freq(ctx.dim, &scaled.freq[..ctx.dim]));
    spec.star(&e, &g)
}

fn unit_trig_monomial(f0: &Symbol) -> Option<Freq> {
    let mut it = f0.terms();
    let (m, c) = it.next()?;
    if it.next().is_some() || !c.is_one() || m.qpow != [0; MAX_DIM] || m.ppow != [0; MAX_DIM] {
        return None;
    }
    Some(m.freq)
}

/// `Ln(f)` with classical head `τ(n·q + branch)` where `f₀ = e_n`.
pub fn star_log(f: &SymbolSeries, spec: &StarProductSpec, branch: i64) -> Result<SymbolSeries> {
    let ctx = spec.ctx();
    ctx.check(f)?;
    let f = f.truncate(ctx.order);
    let freq = unit_trig_monomial(f.coeff(0))
        .ok_or_else(|| Error::NotExponentiable(format!("Ln needs f₀ = e_n, got {}", f.coeff(0))))?;
    let head = ExponentiableHead { freq, winding: branch };
    let inv_head = Symbol::exp_freq(ctx.dim, &freq[..ctx.dim].iter().map(|k| -k).collect::<Vec<_>>());
    let mut h = ctx.lift(head.symbol(ctx.dim));
    for r in 1..=ctx.order {
        let e = star_exp(&h, spec, &Rational::one())?;
        let correction = inv_head.mul(&f.coeff(r).sub(e.coeff(r)));
        let c = h.coeff_mut(r);
        *c = c.add(&correction);
    }
    Ok(h)
}

/// `a ∘_⋆ b = Ln(Exp(a) ⋆ Exp(b))` on the branch `z_a + z_b`.
pub fn bch_compose(a: &SymbolSeries, b: &SymbolSeries, spec: &StarProductSpec) -> Result<SymbolSeries> {
    let ha = ExponentiableHead::of(a.coeff(0))?;
    let hb = ExponentiableHead::of(b.coeff(0))?;
    let one = Rational::one();
    let prod = spec.star(&star_exp(a, spec, &one)?, &star_exp(b, spec, &one)?)?;
    star_log(&prod, spec, ha.winding + hb.winding)
}

type Word = Vec<u8>;

/// Coefficients of `log(e^X e^Y)` in the free algebra on `{X=0, Y=1}`,
/// for words up to length `max_len`.
pub fn free_bch_coefficients(max_len: usize) -> BTreeMap<Word, Rational> {
    // W = e^X e^Y − 1
    let mut w: BTreeMap<Word, Rational> = BTreeMap::new();
    for i in 0..=max_len {
        for j in 0..=(max_len - i) {
            if i + j == 0 {
                continue;
            }
            let mut word = vec![0u8; i];
            word.resize(i + j, 1u8);
            w.insert(word, Rational::one() / (factorial(i) * factorial(j)));
        }
    }
    let mut out: BTreeMap<Word, Rational> = BTreeMap::new();
    let mut power = w.clone();
    for k in 1..=max_len {
        let sign = if k % 2 == 1 { rat(1, 1) } else { rat(-1, 1) };
        for (word, c) in &power {
            *out.entry(word.clone()).or_insert_with(Rational::zero) += &sign * c / rat_int(k as i64);
        }
        let mut next: BTreeMap<Word, Rational> = BTreeMap::new();
        for (u, cu) in &power {
            for (v, cv) in &w {
                if u.len() + v.len() > max_len {
                    continue;
                }
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                *next.entry(uv).or_insert_with(Rational::zero) += cu * cv;
            }
        }
        power = next;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The truncated commutator series for `a ∘_⋆ b`, via the Dynkin–Specht–Wever
/// projection `Z_d = (1/d) Σ c_w [w₁,[w₂,…,w_d]]`.
pub fn bch_series(a: &SymbolSeries, b: &SymbolSeries, spec: &StarProductSpec) -> Result<SymbolSeries> {
    let ctx = spec.ctx();
    let coeffs = free_bch_coefficients(ctx.order + 1);
    let gens = [a.truncate(ctx.order), b.truncate(ctx.order)];
    let mut memo: HashMap<Word, SymbolSeries> = HashMap::new();
    let mut acc = ctx.zero();
    for (word, c) in &coeffs {
        let nested = nested_commutator(word, &gens, spec, &mut memo)?;
        let w = c / rat_int(word.len() as i64);
        acc = acc.add(&nested.map(|s| s.scale_rational(&w)));
    }
    Ok(acc)
}

fn nested_commutator(
    word: &[u8],
    gens: &[SymbolSeries; 2],
    spec: &StarProductSpec,
    memo: &mut HashMap<Word, SymbolSeries>,
) -> Result<SymbolSeries> {
    if let Some(v) = memo.get(word) {
        return Ok(v.clone());
    }
    let v = if word.len() == 1 {
        gens[word[0] as usize].clone()
    } else {
        let inner = nested_commutator(&word[1..], gens, spec, memo)?;
        if inner.is_zero() {
            inner
        } else {
            spec.commutator(&gens[word[0] as usize], &inner)?
        }
    };
    memo.insert(word.to_vec(), v.clone());
    Ok(v)
}

/// `e^{ad H} f = Σ ad_H^k f / k!`; finite since `ad_H` raises the λ-order.
pub fn exp_ad(h: &SymbolSeries, f: &SymbolSeries, spec: &StarProductSpec) -> Result<SymbolSeries> {
    let mut acc = f.clone();
    let mut term = f.clone();
    for k in 1..=spec.ctx().order {
        term = spec.commutator(h, &term)?.map(|s| s.scale_rational(&rat(1, k as i64)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Residual of `d/dt Exp(tH) = H ⋆ Exp(tH)` at `t = 0` is trivial; this
/// checks the finite-difference-free form `Exp(H) ⋆ H − H ⋆ Exp(H) = 0`.
pub fn exp_commutes_with_generator(h: &SymbolSeries, spec: &StarProductSpec) -> Result<bool> {
    let e = star_exp(h, spec, &Rational::one())?;
    Ok(spec.commutator(&e, h)?.is_zero())
}
