//! Star products on `T*Tⁿ` with the flat connection and flat density.
//!
//! Conventions: `{f,g} = Σ ∂_q f ∂_p g − ∂_p f ∂_q g` and
//!
//! ```text
//! f ⋆_S g = Σ_c (−iλ)^{|c|}/c! · ∂_p^c f · ∂_q^c g
//! ```
//!
//! so that `C₁(f,g) − C₁(g,f) = i{f,g}` and `π*u ⋆_S f = (π*u) f`.
//! `⋆_κ` is obtained by conjugating with `N_κ = exp(−iκλΔ)`, and the
//! magnetic products by conjugating `⋆_κ` with the fiber translations
//! `S_α = exp(i δ_κ[A_α])`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cech::LineBundleData;
use crate::error::{Error, Result};
use crate::scalars::{rat, rat_int, GaussianRational, Rational, TauScalar};
use crate::series::FormalSeries;
use crate::symbols::{MultiIndex, Symbol, MAX_DIM};

pub type SymbolSeries = FormalSeries<Symbol>;

/// Truncation order and torus dimension shared by one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncationContext {
    pub order: usize,
    pub dim: usize,
}

impl TruncationContext {
    pub fn new(order: usize, dim: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self { order, dim })
    }

    pub fn zero(&self) -> SymbolSeries {
        FormalSeries::zero(self.order, &Symbol::zero(self.dim))
    }

    pub fn one(&self) -> SymbolSeries {
        FormalSeries::one(self.order, &Symbol::zero(self.dim))
    }

    /// A λ-independent symbol as a series.
    pub fn lift(&self, s: Symbol) -> SymbolSeries {
        FormalSeries::constant(s, self.order)
    }

    /// Checks that a series lives in this context.
    pub fn check(&self, f: &SymbolSeries) -> Result<()> {
        let d = f.coeff(0).dim();
        if d != self.dim {
            return Err(Error::DimensionMismatch(self.dim, d));
        }
        if f.order() < self.order {
            return Err(Error::Precondition(format!(
                "series of order {} in a context of order {}",
                f.order(),
                self.order
            )));
        }
        Ok(())
    }
}

/// `(-i)^j` as a Gaussian rational.
fn minus_i_pow(j: usize) -> GaussianRational {
    i_pow(j, true)
}

fn i_pow(j: usize, negate: bool) -> GaussianRational {
    let r = match j % 4 {
        0 => GaussianRational::one(),
        1 => GaussianRational::i(),
        2 => GaussianRational::real(-Rational::one()),
        _ => -&GaussianRational::i(),
    };
    if negate && j % 2 == 1 {
        -&r
    } else {
        r
    }
}

fn factorial(n: u32) -> Rational {
    rat_int((1..=n as i64).product())
}

/// All multi-indices `c ≤ bound` (componentwise) with `|c| ≤ budget`.
pub(crate) fn multi_indices(dim: usize, bound: &MultiIndex, budget: usize) -> Vec<MultiIndex> {
    let mut out = vec![[0; MAX_DIM]];
    for axis in 0..dim {
        let mut next = Vec::new();
        for c in &out {
            let used: usize = c.iter().map(|&x| x as usize).sum();
            for v in 0..=bound[axis] {
                if used + v as usize > budget {
                    break;
                }
                let mut c2 = *c;
                c2[axis] = v;
                next.push(c2);
            }
        }
        out = next;
    }
    out
}

fn check_pair(f: &SymbolSeries, g: &SymbolSeries) -> Result<(usize, usize)> {
    let (df, dg) = (f.coeff(0).dim(), g.coeff(0).dim());
    if df != dg {
        return Err(Error::DimensionMismatch(df, dg));
    }
    Ok((df, f.order().min(g.order())))
}

/// The standard-ordered product `⋆_S`.
pub fn star_standard(f: &SymbolSeries, g: &SymbolSeries) -> Result<SymbolSeries> {
    let (dim, order) = check_pair(f, g)?;
    let mut out: Vec<Symbol> = vec![Symbol::zero(dim); order + 1];
    let mut dq_cache: HashMap<(usize, MultiIndex), Symbol> = HashMap::new();
    for a in 0..=order {
        let fa = f.coeff(a);
        if fa.is_zero() {
            continue;
        }
        let bound = fa.max_p_degree();
        for b in 0..=(order - a) {
            let gb = g.coeff(b);
            if gb.is_zero() {
                continue;
            }
            for c in multi_indices(dim, &bound, order - a - b) {
                let j: usize = c.iter().map(|&x| x as usize).sum();
                let dpf = fa.partial_p_multi(&c);
                if dpf.is_zero() {
                    continue;
                }
                let dqg = dq_cache.entry((b, c)).or_insert_with(|| gb.partial_q_multi(&c));
                if dqg.is_zero() {
                    continue;
                }
                let denom: Rational = c.iter().map(|&x| factorial(x)).product();
                let w = minus_i_pow(j).scale(&(Rational::one() / denom));
                let term = dpf.mul(dqg).scale(&TauScalar::from_gaussian(w));
                out[a + b + j] = out[a + b + j].add(&term);
            }
        }
    }
    Ok(FormalSeries::new(order, out, &Symbol::zero(dim)))
}

/// Flat Laplacian `Δ = Σ_k ∂²/∂p_k∂q^k`.
pub fn laplacian(f: &Symbol) -> Symbol {
    let mut acc = Symbol::zero(f.dim());
    for k in 0..f.dim() {
        acc = acc.add(&f.partial_p(k).partial_q(k));
    }
    acc
}

/// `exp(c·λΔ) f` for a Gaussian-rational `c`.
fn exp_laplacian(f: &SymbolSeries, c: &GaussianRational) -> SymbolSeries {
    let order = f.order();
    let dim = f.coeff(0).dim();
    if c.is_zero() {
        return f.clone();
    }
    let mut out = vec![Symbol::zero(dim); order + 1];
    for (s, fs) in f.coeffs().iter().enumerate() {
        let mut power = fs.clone();
        let mut weight = GaussianRational::one();
        for j in 0..=(order - s) {
            if power.is_zero() {
                break;
            }
            if j > 0 {
                weight = (&weight * c).scale(&rat(1, j as i64));
            }
            out[s + j] = out[s + j].add(&power.scale(&TauScalar::from_gaussian(weight.clone())));
            power = laplacian(&power);
        }
    }
    FormalSeries::new(order, out, &Symbol::zero(dim))
}

fn n_kappa_coeff(kappa: &Rational, sign: i64) -> GaussianRational {
    // −iκ for N_κ, +iκ for its inverse.
    GaussianRational::new(Rational::zero(), -kappa * rat_int(sign))
}

/// `N_κ f = exp(−iκλΔ) f`.
pub fn apply_n_kappa(f: &SymbolSeries, kappa: &Rational) -> SymbolSeries {
    exp_laplacian(f, &n_kappa_coeff(kappa, 1))
}

/// `N_κ^{-1} f = exp(+iκλΔ) f`.
pub fn apply_n_kappa_inv(f: &SymbolSeries, kappa: &Rational) -> SymbolSeries {
    exp_laplacian(f, &n_kappa_coeff(kappa, -1))
}

/// `f ⋆_κ g = N_κ^{-1}(N_κ f ⋆_S N_κ g)`; `κ = 1/2` is the Weyl product.
pub fn star_kappa(f: &SymbolSeries, g: &SymbolSeries, kappa: &Rational) -> Result<SymbolSeries> {
    if kappa.is_zero() {
        return star_standard(f, g);
    }
    let prod = star_standard(&apply_n_kappa(f, kappa), &apply_n_kappa(g, kappa))?;
    Ok(apply_n_kappa_inv(&prod, kappa))
}

/// Poisson bracket `{f,g} = Σ ∂_q f ∂_p g − ∂_p f ∂_q g`.
pub fn poisson_bracket(f: &Symbol, g: &Symbol) -> Symbol {
    let mut acc = Symbol::zero(f.dim());
    for i in 0..f.dim() {
        acc = acc.add(&f.partial_q(i).mul(&g.partial_p(i)));
        acc = acc.sub(&f.partial_p(i).mul(&g.partial_q(i)));
    }
    acc
}

/// A symmetric covariant tensor field with chart coefficients.
///
/// Stored as a polynomial in commuting fiber variables `ξ`: the
/// coefficient of `ξ^c` is the sum of the tensor components over all
/// orderings of the index multiset `c`. The symmetric product is then the
/// polynomial product, `D = Σ ξᵢ ∂/∂qⁱ`, and `F` substitutes `ξᵢ ↦ ∂/∂p_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymTensorField {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Symbol>,
}

impl SymTensorField {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, coeffs: BTreeMap::new() }
    }

    /// Degree-0 field: a function `u`.
    pub fn function(u: Symbol) -> Self {
        let mut t = Self::zero(u.dim(), 0);
        t.insert([0; MAX_DIM], u);
        t
    }

    /// One-form `Σ aᵢ dqⁱ`.
    pub fn one_form(components: &[Symbol]) -> Self {
        let dim = components[0].dim();
        let mut t = Self::zero(dim, 1);
        for (i, a) in components.iter().enumerate() {
            let mut c = [0; MAX_DIM];
            c[i] = 1;
            t.insert(c, a.clone());
        }
        t
    }

    fn insert(&mut self, c: MultiIndex, s: Symbol) {
        if s.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(c).or_insert_with(|| Symbol::zero(s.dim()));
        *entry = entry.add(&s);
        if entry.is_zero() {
            self.coeffs.remove(&c);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &Symbol)> {
        self.coeffs.iter()
    }

    /// The symmetric component `T_{i₁…i_s}` for an ordered index list.
    pub fn component(&self, indices: &[usize]) -> Symbol {
        let mut c = [0u32; MAX_DIM];
        for &i in indices {
            c[i] += 1;
        }
        let Some(sum) = self.coeffs.get(&c) else {
            return Symbol::zero(self.dim);
        };
        let arrangements = factorial(indices.len() as u32) / c.iter().map(|&x| factorial(x)).product::<Rational>();
        sum.scale_rational(&(Rational::one() / arrangements))
    }

    pub fn scale(&self, c: &TauScalar) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            out.insert(*k, v.scale(c));
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding tensors of different degree");
        let mut out = self.clone();
        for (k, v) in &o.coeffs {
            out.insert(*k, v.clone());
        }
        out
    }

    /// Chart change of every coefficient by an integral offset.
    pub fn substitute_offset(&self, s: &[i64]) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            out.insert(*k, v.substitute_offset(s));
        }
        out
    }

    /// Flat symmetrized derivative, degree `s → s+1`.
    pub fn sym_derivative(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + 1);
        for (c, v) in &self.coeffs {
            for i in 0..self.dim {
                let mut c2 = *c;
                c2[i] += 1;
                out.insert(c2, v.partial_q(i));
            }
        }
        out
    }

    /// `F(T) f = Σ_c T_c ∂_p^c f`.
    pub fn fiber_insert(&self, f: &Symbol) -> Symbol {
        let mut acc = Symbol::zero(f.dim());
        for (c, t) in &self.coeffs {
            let d = f.partial_p_multi(c);
            if !d.is_zero() {
                acc = acc.add(&t.mul(&d));
            }
        }
        acc
    }
}

/// `F(T)` applied coefficientwise to a series.
pub fn fiber_insert_series(t: &SymTensorField, f: &SymbolSeries) -> SymbolSeries {
    f.map(|c| t.fiber_insert(c))
}

/// Weight of `λ^{s+1} F(D^s A)` in `δ_κ[A]`:
/// `[(iκ)^{s+1} − (−i(1−κ))^{s+1}] / (s+1)!`.
pub fn delta_weight(kappa: &Rational, s: usize) -> GaussianRational {
    let n = s + 1;
    let a = GaussianRational::new(Rational::zero(), kappa.clone());
    let b = GaussianRational::new(Rational::zero(), kappa - Rational::one());
    let pow = |x: &GaussianRational| (0..n).fold(GaussianRational::one(), |acc, _| &acc * x);
    (&pow(&a) - &pow(&b)).scale(&(Rational::one() / factorial(n as u32)))
}

/// The derivation `δ_κ[A]` for a λ-independent one-form `A`; raises the
/// λ-order by at least one.
pub fn delta_kappa(a: &SymTensorField, f: &SymbolSeries, kappa: &Rational) -> SymbolSeries {
    let order = f.order();
    let dim = f.coeff(0).dim();
    let mut out = vec![Symbol::zero(dim); order + 1];
    let mut ds = a.clone();
    for s in 0..order {
        if ds.is_zero() {
            break;
        }
        let w = TauScalar::from_gaussian(delta_weight(kappa, s));
        if !w.is_zero() {
            for r in (s + 1)..=order {
                let fr = f.coeff(r - s - 1);
                if fr.is_zero() {
                    continue;
                }
                out[r] = out[r].add(&ds.fiber_insert(fr).scale(&w));
            }
        }
        ds = ds.sym_derivative();
    }
    FormalSeries::new(order, out, &Symbol::zero(dim))
}

/// `exp(±i δ_κ[A]) f`; `sign = 1` gives `S_α`, `sign = −1` its inverse.
pub fn fiber_translation(a: &SymTensorField, f: &SymbolSeries, kappa: &Rational, sign: i64) -> SymbolSeries {
    let factor = TauScalar::from_gaussian(GaussianRational::new(Rational::zero(), rat_int(sign)));
    let mut acc = f.clone();
    let mut term = f.clone();
    for k in 1..=f.order() {
        term = delta_kappa(a, &term, kappa).map(|c| c.scale(&factor).scale_rational(&rat(1, k as i64)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// `S^{-1}(S f ⋆_κ S g)` for the fiber translation by the potential `A`.
pub fn star_with_potential(
    f: &SymbolSeries,
    g: &SymbolSeries,
    a: &SymTensorField,
    kappa: &Rational,
) -> Result<SymbolSeries> {
    let sf = fiber_translation(a, f, kappa, 1);
    let sg = fiber_translation(a, g, kappa, 1);
    let prod = star_kappa(&sf, &sg, kappa)?;
    Ok(fiber_translation(a, &prod, kappa, -1))
}

/// Which product a [`StarProductSpec`] describes.
#[derive(Clone, Debug)]
pub struct StarProductSpec {
    kappa: Rational,
    magnetic: Option<Arc<LineBundleData>>,
    ctx: TruncationContext,
}

impl StarProductSpec {
    pub fn kappa_ordered(ctx: TruncationContext, kappa: Rational) -> Self {
        Self { kappa, magnetic: None, ctx }
    }

    pub fn standard(ctx: TruncationContext) -> Self {
        Self::kappa_ordered(ctx, Rational::zero())
    }

    pub fn weyl(ctx: TruncationContext) -> Self {
        Self::kappa_ordered(ctx, rat(1, 2))
    }

    /// `⋆'_κ = ⋆_κ^{−λB}` built from a line bundle's connection potentials.
    pub fn magnetic(ctx: TruncationContext, kappa: Rational, bundle: Arc<LineBundleData>) -> Result<Self> {
        if bundle.dim() != ctx.dim {
            return Err(Error::DimensionMismatch(ctx.dim, bundle.dim()));
        }
        bundle.check_potentials()?;
        Ok(Self { kappa, magnetic: Some(bundle), ctx })
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn is_weyl(&self) -> bool {
        self.kappa == rat(1, 2)
    }

    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    pub fn bundle(&self) -> Option<&Arc<LineBundleData>> {
        self.magnetic.as_ref()
    }

    /// The same ordering without the magnetic twist.
    pub fn unmagnetized(&self) -> Self {
        Self { kappa: self.kappa.clone(), magnetic: None, ctx: self.ctx }
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self { ctx: TruncationContext { order, ..self.ctx }, ..self.clone() }
    }

    pub fn star(&self, f: &SymbolSeries, g: &SymbolSeries) -> Result<SymbolSeries> {
        self.ctx.check(f)?;
        self.ctx.check(g)?;
        let f = f.truncate(self.ctx.order);
        let g = g.truncate(self.ctx.order);
        match &self.magnetic {
            None => star_kappa(&f, &g, &self.kappa),
            Some(_) => star_magnetic(&f, &g, 0, self),
        }
    }

    /// Product computed in the chart of `patch`; only the magnetic product
    /// depends on the chart through its potential.
    pub fn star_on(&self, f: &SymbolSeries, g: &SymbolSeries, patch: usize) -> Result<SymbolSeries> {
        match &self.magnetic {
            None => self.star(f, g),
            Some(_) => {
                self.ctx.check(f)?;
                self.ctx.check(g)?;
                star_magnetic(&f.truncate(self.ctx.order), &g.truncate(self.ctx.order), patch, self)
            }
        }
    }

    pub fn commutator(&self, f: &SymbolSeries, g: &SymbolSeries) -> Result<SymbolSeries> {
        Ok(self.star(f, g)?.sub(&self.star(g, f)?))
    }

    pub fn describe(&self) -> String {
        let k = crate::scalars::fmt_rational(&self.kappa);
        match &self.magnetic {
            None => format!("star_kappa[{k}]"),
            Some(b) => format!("star_magnetic[{k}, m={}]", crate::scalars::fmt_rational(b.charge())),
        }
    }
}

/// `f ⋆'_κ g = S_α^{-1}(S_α f ⋆_κ S_α g)` on patch `α`.
pub fn star_magnetic(f: &SymbolSeries, g: &SymbolSeries, patch: usize, spec: &StarProductSpec) -> Result<SymbolSeries> {
    let bundle = spec
        .bundle()
        .ok_or_else(|| Error::Precondition("magnetic product needs line-bundle data".into()))?;
    check_pair(f, g)?;
    let a = bundle.potential(patch)?;
    star_with_potential(f, g, a, spec.kappa())
}
