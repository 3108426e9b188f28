//! Good covers of `Tⁿ`, monopole line bundles, Čech cochains and the
//! relative class of a magnetic star product.
//!
//! Each circle factor is covered by three arcs; arc `a` carries the chart
//! coordinate lifted to `(a/3 − ε, (a+1)/3 + ε)`. Patches of `T²` are
//! products of arcs, indexed `3·a_x + a_y`. Chart coordinates satisfy
//! `q_α = q_β + s_{αβ}` on `O_α ∩ O_β`, so a function written in the `β`
//! chart becomes `g(q − s_{αβ})` in the `α` chart.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explog::{bch_compose, star_log};
use crate::scalars::{fmt_rational, rat_int, GaussianRational, Rational, TauScalar};
use crate::series::FormalSeries;
use crate::starprod::{
    fiber_translation, StarProductSpec, SymTensorField, SymbolSeries, TruncationContext,
};
use crate::report::CheckReport;
use crate::symbols::{Symbol, MAX_DIM};

pub const ARCS_PER_AXIS: usize = 3;

/// Offset between two arcs of one circle factor.
fn arc_offset(a: usize, b: usize) -> i64 {
    match (a, b) {
        (2, 0) => 1,
        (0, 2) => -1,
        _ => 0,
    }
}

/// Combinatorial good cover of the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodCover {
    dim: usize,
    arcs: Vec<[usize; MAX_DIM]>,
    triples: Vec<[usize; 3]>,
    quadruples: Vec<[usize; 4]>,
}

/// Builds the product cover with three arcs per axis.
pub fn build_torus_cover(dim: usize) -> Result<GoodCover> {
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let count = ARCS_PER_AXIS.pow(dim as u32);
    let arcs: Vec<[usize; MAX_DIM]> = (0..count)
        .map(|idx| {
            let mut a = [0; MAX_DIM];
            let mut rest = idx;
            for axis in (0..dim).rev() {
                a[axis] = rest % ARCS_PER_AXIS;
                rest /= ARCS_PER_AXIS;
            }
            a
        })
        .collect();
    let mut cover = GoodCover { dim, arcs, triples: Vec::new(), quadruples: Vec::new() };
    for a in 0..count {
        for b in a + 1..count {
            for c in b + 1..count {
                if cover.meets(&[a, b, c]) {
                    cover.triples.push([a, b, c]);
                    for d in c + 1..count {
                        if cover.meets(&[a, b, c, d]) {
                            cover.quadruples.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
    }
    Ok(cover)
}

impl GoodCover {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_patches(&self) -> usize {
        self.arcs.len()
    }

    /// Arc index of a patch along each axis.
    pub fn arcs(&self, patch: usize) -> [usize; MAX_DIM] {
        self.arcs[patch]
    }

    /// Patch index from per-axis arcs (taken mod 3).
    pub fn patch_at(&self, arcs: &[i64]) -> usize {
        arcs[..self.dim]
            .iter()
            .fold(0, |acc, &a| acc * ARCS_PER_AXIS + a.rem_euclid(ARCS_PER_AXIS as i64) as usize)
    }

    /// Nonempty intersection test. Three arcs of one circle have empty
    /// common intersection, any two of them meet.
    pub fn meets(&self, patches: &[usize]) -> bool {
        (0..self.dim).all(|axis| {
            let mut seen = [false; ARCS_PER_AXIS];
            for &p in patches {
                seen[self.arcs[p][axis]] = true;
            }
            seen.iter().filter(|&&x| x).count() <= 2
        })
    }

    /// Nonempty ordered pairs `α ≠ β`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_patches();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.meets(&[a, b]))
            .collect()
    }

    /// Edges `α < β` with nonempty overlap.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        self.pairs().into_iter().filter(|(a, b)| a < b).map(|(a, b)| [a, b]).collect()
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn quadruples(&self) -> &[[usize; 4]] {
        &self.quadruples
    }

    /// Deck offset `s_{αβ}`, or `None` when the overlap is empty.
    pub fn offset(&self, a: usize, b: usize) -> Option<[i64; MAX_DIM]> {
        if !self.meets(&[a, b]) {
            return None;
        }
        let mut s = [0; MAX_DIM];
        for (axis, v) in s.iter_mut().enumerate().take(self.dim) {
            *v = arc_offset(self.arcs[a][axis], self.arcs[b][axis]);
        }
        Some(s)
    }

    fn offset_or_err(&self, a: usize, b: usize) -> Result<[i64; MAX_DIM]> {
        self.offset(a, b)
            .ok_or_else(|| Error::Precondition(format!("patches {a} and {b} do not overlap")))
    }

    /// Rewrites a symbol given in the `β` chart in the `α` chart.
    pub fn to_chart(&self, f: &Symbol, alpha: usize, beta: usize) -> Result<Symbol> {
        let s = self.offset_or_err(alpha, beta)?;
        let neg: Vec<i64> = s[..self.dim].iter().map(|v| -v).collect();
        Ok(f.substitute_offset(&neg))
    }

    pub fn series_to_chart(&self, f: &SymbolSeries, alpha: usize, beta: usize) -> Result<SymbolSeries> {
        let s = self.offset_or_err(alpha, beta)?;
        let neg: Vec<i64> = s[..self.dim].iter().map(|v| -v).collect();
        Ok(f.map(|c| c.substitute_offset(&neg)))
    }

    /// The oriented 2-cycle of the 3×3 grid triangulation of `T²`, as
    /// coefficients on the sorted triples.
    pub fn fundamental_cycle(&self) -> BTreeMap<[usize; 3], i64> {
        let mut z = BTreeMap::new();
        if self.dim != 2 {
            return z;
        }
        for i in 0..3i64 {
            for j in 0..3i64 {
                let v = |di: i64, dj: i64| self.patch_at(&[i + di, j + dj]);
                for tri in [[v(0, 0), v(1, 0), v(1, 1)], [v(0, 0), v(1, 1), v(0, 1)]] {
                    let (sorted, sign) = sort_with_sign(tri);
                    *z.entry(sorted).or_insert(0) += sign;
                }
            }
        }
        z.retain(|_, v| *v != 0);
        z
    }
}

fn sort_with_sign<const K: usize>(mut v: [usize; K]) -> ([usize; K], i64) {
    let mut sign = 1;
    for i in 0..K {
        for j in 0..K - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

/// Line-bundle data on a cover: transition exponents, connection potentials
/// and the curvature coefficient of `dx∧dy`.
#[derive(Clone, Debug)]
pub struct LineBundleData {
    cover: Arc<GoodCover>,
    charge: Rational,
    /// `c_{αβ}` in the `α` chart, for all nonempty ordered pairs.
    transitions: BTreeMap<(usize, usize), Symbol>,
    potentials: Vec<SymTensorField>,
    curvature: TauScalar,
}

impl LineBundleData {
    /// Assembles bundle data without validation; see [`Self::check_potentials`].
    pub fn from_parts(
        cover: Arc<GoodCover>,
        charge: Rational,
        transitions: BTreeMap<(usize, usize), Symbol>,
        potentials: Vec<SymTensorField>,
        curvature: TauScalar,
    ) -> Self {
        Self { cover, charge, transitions, potentials, curvature }
    }

    pub fn cover(&self) -> &Arc<GoodCover> {
        &self.cover
    }

    pub fn dim(&self) -> usize {
        self.cover.dim()
    }

    pub fn charge(&self) -> &Rational {
        &self.charge
    }

    pub fn curvature(&self) -> &TauScalar {
        &self.curvature
    }

    pub fn potential(&self, patch: usize) -> Result<&SymTensorField> {
        self.potentials
            .get(patch)
            .ok_or_else(|| Error::Precondition(format!("no potential on patch {patch}")))
    }

    /// `A_β` rewritten in the `α` chart.
    pub fn potential_in_chart(&self, beta: usize, alpha: usize) -> Result<SymTensorField> {
        let s = self.cover.offset_or_err(alpha, beta)?;
        let neg: Vec<i64> = s[..self.dim()].iter().map(|v| -v).collect();
        Ok(self.potential(beta)?.substitute_offset(&neg))
    }

    pub fn transition_exponent(&self, a: usize, b: usize) -> Result<&Symbol> {
        self.transitions
            .get(&(a, b))
            .ok_or_else(|| Error::Precondition(format!("no transition on ({a}, {b})")))
    }

    /// `φ_{αβ} = e^{2πi c_{αβ}}`. Only linear exponents with integral
    /// slopes exponentiate inside the symbol algebra.
    pub fn transition(&self, a: usize, b: usize) -> Result<Symbol> {
        let c = self.transition_exponent(a, b)?;
        let dim = self.dim();
        let mut freq = [0i64; MAX_DIM];
        for (m, coeff) in c.terms() {
            let r = coeff
                .as_gaussian()
                .filter(|g| g.im.is_zero() && g.re.is_integer())
                .ok_or_else(|| Error::NotExponentiable(format!("transition exponent {c}")))?;
            let degree: u32 = m.qpow.iter().sum::<u32>() + m.ppow.iter().sum::<u32>();
            if m.freq != [0; MAX_DIM] || degree > 1 {
                return Err(Error::NotExponentiable(format!("transition exponent {c}")));
            }
            if degree == 1 {
                let axis = m.qpow.iter().position(|&x| x == 1).ok_or_else(|| {
                    Error::NotExponentiable(format!("transition exponent {c}"))
                })?;
                freq[axis] = num_traits::ToPrimitive::to_i64(&r.re.to_integer()).unwrap_or(0);
            }
        }
        Ok(Symbol::exp_freq(dim, &freq[..dim]))
    }

    /// Checks `A_α − A_β = 2π dc_{αβ}` on overlaps and `dA_α = B`.
    pub fn check_potentials(&self) -> Result<()> {
        let dim = self.dim();
        let two_pi = TauScalar::two_pi();
        for (a, b) in self.cover.pairs() {
            let c = self.transition_exponent(a, b)?;
            let diff = self.potential(a)?.add(&self.potential_in_chart(b, a)?.scale(&-TauScalar::one()));
            let dc = SymTensorField::function(c.clone()).sym_derivative().scale(&two_pi);
            if diff != dc {
                return Err(Error::NotCocycle(format!("A_{a} - A_{b} != 2π dc on ({a}, {b})")));
            }
        }
        for alpha in 0..self.cover.num_patches() {
            let comps = self.components(alpha)?;
            let curl = if dim == 2 {
                comps[1].partial_q(0).sub(&comps[0].partial_q(1))
            } else {
                Symbol::zero(1)
            };
            if curl != Symbol::constant(dim, self.curvature.clone()) {
                return Err(Error::NotCocycle(format!("dA_{alpha} != B")));
            }
        }
        Ok(())
    }

    fn components(&self, patch: usize) -> Result<Vec<Symbol>> {
        let a = self.potential(patch)?;
        Ok((0..self.dim())
            .map(|i| a.component(&[i]))
            .collect())
    }
}

/// The degree-`m` line bundle on `T²`: `A_α = 2πm x dy`, `B = 2πm dx∧dy`
/// and `c_{αβ} = m s^x_{αβ} y`.
pub fn monopole_bundle(m: &Rational, cover: Arc<GoodCover>) -> Result<LineBundleData> {
    if cover.dim() != 2 {
        return Err(Error::UnsupportedDimension(cover.dim()));
    }
    if !m.is_integer() {
        return Err(Error::BadCharge(format!("no line bundle of charge {}", fmt_rational(m))));
    }
    let mt = TauScalar::from_rational(m.clone());
    let two_pi_m = &TauScalar::two_pi() * &mt;
    let x = Symbol::q(2, 0);
    let y = Symbol::q(2, 1);
    let potentials =
        vec![SymTensorField::one_form(&[Symbol::zero(2), x.scale(&two_pi_m)]); cover.num_patches()];
    let mut transitions = BTreeMap::new();
    for (a, b) in cover.pairs() {
        let s = cover.offset(a, b).unwrap_or_default();
        transitions.insert((a, b), y.scale(&(&mt * &TauScalar::from_int(s[0]))));
    }
    Ok(LineBundleData::from_parts(cover, m.clone(), transitions, potentials, two_pi_m))
}

/// The trivial bundle on either torus.
pub fn trivial_bundle(cover: Arc<GoodCover>) -> LineBundleData {
    let dim = cover.dim();
    let transitions = cover.pairs().into_iter().map(|p| (p, Symbol::zero(dim))).collect();
    let potentials = vec![SymTensorField::zero(dim, 1); cover.num_patches()];
    LineBundleData::from_parts(cover, Rational::zero(), transitions, potentials, TauScalar::zero())
}

/// Integer 2-cochain `c_{αβ} + c_{βγ} + c_{γα}` on the sorted nonempty
/// triples, every exponent rewritten in the `α` chart.
pub fn verify_classical_cocycle(bundle: &LineBundleData) -> Result<BTreeMap<[usize; 3], i64>> {
    let cover = bundle.cover();
    let mut out = BTreeMap::new();
    for &[a, b, c] in cover.triples() {
        let sum = bundle
            .transition_exponent(a, b)?
            .add(&cover.to_chart(bundle.transition_exponent(b, c)?, a, b)?)
            .add(&cover.to_chart(bundle.transition_exponent(c, a)?, a, c)?);
        let value = sum
            .as_constant()
            .and_then(|k| k.as_gaussian())
            .filter(|g| g.im.is_zero() && g.re.is_integer())
            .ok_or_else(|| Error::BadTriple(a, b, c, format!("exponent sum {sum} is not an integer")))?;
        out.insert([a, b, c], num_traits::ToPrimitive::to_i64(&value.re.to_integer()).unwrap_or(0));
    }
    Ok(out)
}

/// Coboundary of a 1-cochain on sorted edges: `b_{βγ} − b_{αγ} + b_{αβ}`.
pub fn coboundary1(cover: &GoodCover, b: &BTreeMap<[usize; 2], Rational>) -> BTreeMap<[usize; 3], Rational> {
    let get = |k: [usize; 2]| b.get(&k).cloned().unwrap_or_else(Rational::zero);
    cover
        .triples()
        .iter()
        .map(|&[a, bb, c]| ([a, bb, c], get([bb, c]) - get([a, c]) + get([a, bb])))
        .collect()
}

/// Coboundary of a 2-cochain on sorted quadruples.
pub fn coboundary2(cover: &GoodCover, n: &BTreeMap<[usize; 3], Rational>) -> BTreeMap<[usize; 4], Rational> {
    let get = |k: [usize; 3]| n.get(&k).cloned().unwrap_or_else(Rational::zero);
    cover
        .quadruples()
        .iter()
        .map(|&[a, b, c, d]| ([a, b, c, d], get([b, c, d]) - get([a, c, d]) + get([a, b, d]) - get([a, b, c])))
        .collect()
}

/// Exact rank over ℚ by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = Rational::one() / &rows[r][col];
        for i in (r + 1)..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] * &inv;
            for j in col..cols {
                let delta = &factor * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        r += 1;
    }
    r
}

fn delta1_matrix(cover: &GoodCover) -> Vec<Vec<Rational>> {
    let edges = cover.edges();
    let index: BTreeMap<[usize; 2], usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    cover
        .triples()
        .iter()
        .map(|&[a, b, c]| {
            let mut row = vec![Rational::zero(); edges.len()];
            row[index[&[b, c]]] += rat_int(1);
            row[index[&[a, c]]] -= rat_int(1);
            row[index[&[a, b]]] += rat_int(1);
            row
        })
        .collect()
}

fn delta2_matrix(cover: &GoodCover) -> Vec<Vec<Rational>> {
    let index: BTreeMap<[usize; 3], usize> =
        cover.triples().iter().enumerate().map(|(i, t)| (*t, i)).collect();
    cover
        .quadruples()
        .iter()
        .map(|&[a, b, c, d]| {
            let mut row = vec![Rational::zero(); index.len()];
            row[index[&[b, c, d]]] += rat_int(1);
            row[index[&[a, c, d]]] -= rat_int(1);
            row[index[&[a, b, d]]] += rat_int(1);
            row[index[&[a, b, c]]] -= rat_int(1);
            row
        })
        .collect()
}

/// `dim ker δ₂ − rank δ₁` on the nerve.
pub fn h2_dimension(cover: &GoodCover) -> usize {
    let triples = cover.triples().len();
    let kernel = triples - rank(delta2_matrix(cover));
    kernel - rank(delta1_matrix(cover))
}

/// Whether a 2-cochain lies in the image of `δ₁`.
pub fn is_coboundary(cover: &GoodCover, n: &BTreeMap<[usize; 3], Rational>) -> bool {
    let base = delta1_matrix(cover);
    let r = rank(base.clone());
    let augmented: Vec<Vec<Rational>> = base
        .into_iter()
        .zip(cover.triples())
        .map(|(mut row, t)| {
            row.push(n.get(t).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    rank(augmented) == r
}

/// Coordinates of a 2-cocycle in `H²`: its pairing with the fundamental
/// cycle on `T²`, and no coordinates on the circle.
pub fn cech_class_reduce(cocycle: &BTreeMap<[usize; 3], Rational>, cover: &GoodCover) -> Result<Vec<Rational>> {
    if let Some((q, v)) = coboundary2(cover, cocycle).into_iter().find(|(_, v)| !v.is_zero()) {
        return Err(Error::NotCocycle(format!("δn = {} on {q:?}", fmt_rational(&v))));
    }
    if cover.dim() != 2 {
        return Ok(Vec::new());
    }
    let pairing = cover
        .fundamental_cycle()
        .iter()
        .map(|(t, z)| cocycle.get(t).cloned().unwrap_or_else(Rational::zero) * rat_int(*z))
        .fold(Rational::zero(), |acc, x| acc + x);
    Ok(vec![pairing])
}

/// Integer cocycle to rational cochain.
pub fn to_rational_cochain(n: &BTreeMap<[usize; 3], i64>) -> BTreeMap<[usize; 3], Rational> {
    n.iter().map(|(k, v)| (*k, rat_int(*v))).collect()
}

/// Deformed transition functions `φ̂_{αβ}`, each written in the `α` chart.
#[derive(Clone, Debug)]
pub struct DeformedTransition {
    cover: Arc<GoodCover>,
    phi: BTreeMap<(usize, usize), SymbolSeries>,
}

impl DeformedTransition {
    /// `φ̂_{αβ} = π*φ_{αβ}`.
    pub fn classical(bundle: &LineBundleData, ctx: TruncationContext) -> Result<Self> {
        let mut phi = BTreeMap::new();
        for (a, b) in bundle.cover().pairs() {
            phi.insert((a, b), ctx.lift(bundle.transition(a, b)?));
        }
        Ok(Self { cover: bundle.cover().clone(), phi })
    }

    pub fn get(&self, a: usize, b: usize) -> Result<&SymbolSeries> {
        self.phi
            .get(&(a, b))
            .ok_or_else(|| Error::Precondition(format!("no transition on ({a}, {b})")))
    }

    pub fn cover(&self) -> &Arc<GoodCover> {
        &self.cover
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &SymbolSeries)> {
        self.phi.iter()
    }

    /// Multiplies `φ̂_{αβ}` by `1 + λ`.
    pub fn perturbed(&self, a: usize, b: usize) -> Result<Self> {
        let f = self.get(a, b)?;
        let mut phi = self.phi.clone();
        phi.insert((a, b), f.add(&f.shift(1)));
        Ok(Self { cover: self.cover.clone(), phi })
    }

    /// Multiplies `φ̂_{αβ}` pointwise by a scalar series `factor`.
    pub fn perturbed_by(&self, a: usize, b: usize, factor: &SymbolSeries) -> Result<Self> {
        let f = self.get(a, b)?;
        let mut phi = self.phi.clone();
        phi.insert((a, b), f.mul(factor));
        Ok(Self { cover: self.cover.clone(), phi })
    }
}

/// `φ̂_{αβ} ⋆ φ̂_{βγ} ⋆ φ̂_{γα} = 1` on every nonempty triple (all
/// orientations) and `φ̂_{αβ} ⋆ φ̂_{βα} = 1` on every overlap.
pub fn verify_quantum_cocycle(dt: &DeformedTransition, spec: &StarProductSpec) -> Result<CheckReport> {
    let cover = &dt.cover;
    let one = spec.ctx().one();
    let mut report = CheckReport::new("quantum-cocycle");
    for (a, b) in cover.pairs() {
        let back = cover.series_to_chart(dt.get(b, a)?, a, b)?;
        let prod = spec.star_on(dt.get(a, b)?, &back, a)?;
        report.record(format!("({a},{b})"), &prod.sub(&one));
    }
    for &[a, b, c] in cover.triples() {
        for [x, y, z] in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            let f = dt.get(x, y)?;
            let g = cover.series_to_chart(dt.get(y, z)?, x, y)?;
            let h = cover.series_to_chart(dt.get(z, x)?, x, z)?;
            let prod = spec.star_on(&spec.star_on(f, &g, x)?, &h, x)?;
            report.record(format!("({x},{y},{z})"), &prod.sub(&one));
        }
    }
    Ok(report)
}

/// Output of [`relative_class`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechClassResult {
    pub triples: Vec<[usize; 3]>,
    pub cocycle: Vec<i64>,
    pub coordinates: Vec<Rational>,
    pub integral: bool,
}

#[derive(Serialize, Deserialize)]
struct CechClassRecord {
    triples: Vec<[usize; 3]>,
    cocycle: Vec<i64>,
    coordinates: Vec<String>,
    integral: bool,
}

impl CechClassResult {
    pub fn from_cocycle(n: &BTreeMap<[usize; 3], i64>, cover: &GoodCover) -> Result<Self> {
        let coordinates = cech_class_reduce(&to_rational_cochain(n), cover)?;
        let integral = coordinates.iter().all(|c| c.is_integer());
        Ok(Self { triples: n.keys().copied().collect(), cocycle: n.values().copied().collect(), coordinates, integral })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rec = CechClassRecord {
            triples: self.triples.clone(),
            cocycle: self.cocycle.clone(),
            coordinates: self.coordinates.iter().map(fmt_rational).collect(),
            integral: self.integral,
        };
        serde_json::to_value(rec).unwrap_or(serde_json::Value::Null)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rec: CechClassRecord =
            serde_json::from_value(v.clone()).map_err(|e| Error::Precondition(e.to_string()))?;
        let coordinates = rec
            .coordinates
            .iter()
            .map(|s| crate::scalars::parse_rational(s).ok_or_else(|| Error::Precondition(format!("bad rational {s}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { triples: rec.triples, cocycle: rec.cocycle, coordinates, integral: rec.integral })
    }

    /// The single `H²` coordinate on `T²`.
    pub fn class(&self) -> Option<&Rational> {
        self.coordinates.first()
    }
}

fn probe_symbols(dim: usize) -> Vec<Symbol> {
    let mut out = vec![Symbol::p(dim, 0), Symbol::p(dim, dim - 1).mul(&Symbol::exp_freq(dim, &[1, -1][..dim]))];
    out.push(Symbol::p(dim, 0).mul(&Symbol::p(dim, dim - 1)).mul(&Symbol::q(dim, 0)));
    out
}

/// Checks `π*φ_{αβ} ⋆_κ f ⋆_κ π*φ_{βα} = S_α S_β^{-1} f` in the `α` chart.
pub fn local_equivalence_check(bundle: &LineBundleData, spec: &StarProductSpec, probes: &[Symbol]) -> Result<CheckReport> {
    let cover = bundle.cover();
    let free = spec.unmagnetized();
    let ctx = spec.ctx();
    let kappa = spec.kappa();
    let mut report = CheckReport::new("local-equivalence");
    for (a, b) in cover.pairs() {
        let phi_ab = ctx.lift(bundle.transition(a, b)?);
        let phi_ba = ctx.lift(cover.to_chart(&bundle.transition(b, a)?, a, b)?);
        let a_alpha = bundle.potential(a)?;
        let a_beta = bundle.potential_in_chart(b, a)?;
        for f in probes {
            let f = ctx.lift(f.clone());
            let lhs = free.star(&free.star(&phi_ab, &f)?, &phi_ba)?;
            let rhs = fiber_translation(a_alpha, &fiber_translation(&a_beta, &f, kappa, -1), kappa, 1);
            report.record(format!("({a},{b}) f={}", f.coeff(0)), &lhs.sub(&rhs));
        }
    }
    Ok(report)
}

/// Relative class of `(⋆_κ^{−λB}, ⋆_κ)` for the bundle behind a magnetic
/// `spec`: `t_{αβ} = Ln(φ̂_{αβ})`, `t_{αβγ} = t_{αβ} ∘ t_{βγ} ∘ t_{γα}`,
/// each `t_{αβγ}` must be a constant `τ·n`.
pub fn relative_class(spec: &StarProductSpec) -> Result<CechClassResult> {
    let bundle = spec
        .bundle()
        .ok_or_else(|| Error::Precondition("relative class needs a magnetic product".into()))?
        .clone();
    let cover = bundle.cover().clone();
    let free = spec.unmagnetized();
    let ctx = spec.ctx();
    let lemma = local_equivalence_check(&bundle, spec, &probe_symbols(ctx.dim))?;
    if !lemma.passed {
        return Err(Error::NotCocycle(lemma.to_string()));
    }
    let dt = DeformedTransition::classical(&bundle, ctx)?;
    let cocycle = transition_log_cocycle(&dt, &free)?;
    let classical = verify_classical_cocycle(&bundle)?;
    if classical != cocycle {
        return Err(Error::NotCocycle("deformed cocycle differs from the classical Chern cocycle".into()));
    }
    CechClassResult::from_cocycle(&cocycle, &cover)
}

/// `t_{αβγ} = Ln φ̂_{αβ} ∘ Ln φ̂_{βγ} ∘ Ln φ̂_{γα}` on every sorted triple,
/// each of which must be a constant `τ·n_{αβγ}`.
pub fn transition_log_cocycle(dt: &DeformedTransition, spec: &StarProductSpec) -> Result<BTreeMap<[usize; 3], i64>> {
    let cover = dt.cover();
    let mut logs = BTreeMap::new();
    for (a, b) in cover.pairs() {
        logs.insert((a, b), star_log(dt.get(a, b)?, spec, 0)?);
    }
    let mut cocycle = BTreeMap::new();
    for &[a, b, c] in cover.triples() {
        let t_bc = cover.series_to_chart(&logs[&(b, c)], a, b)?;
        let t_ca = cover.series_to_chart(&logs[&(c, a)], a, c)?;
        let t = bch_compose(&bch_compose(&logs[&(a, b)], &t_bc, spec)?, &t_ca, spec)?;
        let n = tau_integer(&t).ok_or_else(|| Error::BadTriple(a, b, c, format!("t = {t} is not a constant in τℤ")))?;
        cocycle.insert([a, b, c], n);
    }
    Ok(cocycle)
}

/// `n` if the series is the λ-independent constant `τ·n`.
fn tau_integer(t: &SymbolSeries) -> Option<i64> {
    if t.coeffs()[1..].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let c = t.coeff(0).as_constant()?;
    if c.is_zero() {
        return Some(0);
    }
    let g = c.div_tau()?.as_gaussian()?;
    if !g.im.is_zero() || !g.re.is_integer() {
        return None;
    }
    num_traits::ToPrimitive::to_i64(&g.re.to_integer())
}

/// Result of [`dirac_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracReport {
    pub integral: bool,
    /// `(1/2π)·B_r` for each λ-order `r`.
    pub charges: Vec<Rational>,
}

impl DiracReport {
    pub fn charge(&self) -> &Rational {
        &self.charges[0]
    }
}

/// Integrality of `B/2π` for a constant-coefficient `dx∧dy` series.
pub fn dirac_check(b: &FormalSeries<TauScalar>) -> Result<DiracReport> {
    let mut charges = Vec::with_capacity(b.order() + 1);
    for (r, c) in b.coeffs().iter().enumerate() {
        let m = if c.is_zero() {
            Rational::zero()
        } else {
            // c / 2π = c · i / τ
            let g = c
                .scale_gaussian(&GaussianRational::i())
                .div_tau()
                .and_then(|x| x.as_gaussian())
                .filter(|g| g.im.is_zero())
                .ok_or_else(|| Error::BadCharge(format!("B at λ^{r} is {c}, not a real multiple of 2π")))?;
            g.re
        };
        charges.push(m);
    }
    let integral = charges.iter().all(|m| m.is_integer());
    Ok(DiracReport { integral, charges })
}

/// Characteristic class on `T²`: the `[ω]` coefficient of the `1/(iλ)` head
/// and the `[dx∧dy]` coordinates of the λ-series tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClass {
    pub symplectic: Rational,
    pub tail: FormalSeries<TauScalar>,
}

impl CharClass {
    pub fn new(symplectic: Rational, tail: FormalSeries<TauScalar>) -> Self {
        Self { symplectic, tail }
    }

    /// The class of `⋆_κ^{−λB}` relative to `base`, shifted by `τ·m` at λ⁰.
    pub fn difference(&self, other: &CharClass) -> FormalSeries<TauScalar> {
        self.tail.sub(&other.tail)
    }
}

/// `Φ_L([ω_λ]) = [ω_λ] + τ·c₁(L)` for `c₁(L) = m`.
pub fn picard_action(class: &CharClass, m: &Rational) -> CharClass {
    let shift = FormalSeries::constant(&TauScalar::from_rational(m.clone()) * &TauScalar::tau(), class.tail.order());
    CharClass { symplectic: class.symplectic.clone(), tail: class.tail.add(&shift) }
}

/// Morita verdict between `⋆^{−λB}` and `⋆^{−λB'}` on `T²`.
pub fn morita_equivalent(b: &FormalSeries<TauScalar>, b_prime: &FormalSeries<TauScalar>) -> Result<bool> {
    Ok(dirac_check(&b.sub(b_prime))?.integral)
}
