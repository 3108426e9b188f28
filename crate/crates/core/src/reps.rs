//! Standard, κ-ordered and Schrödinger representations on formal wave
//! functions over `Tⁿ`, the induced representation on line-bundle
//! sections and the Rieffel intertwiner.
//!
//! Line-bundle data are handled patchwise: a section on `Q` is given by
//! its local coefficient `σ_α` on one patch, and the coefficient on an
//! overlapping patch is `σ_β = φ_{βα} σ_α` in the `β` chart.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cech::LineBundleData;
use crate::error::{Error, Result};
use crate::hermitian::{conj_series, metric_eval, quantum_trivialization, transport_section};
use crate::report::CheckReport;
use crate::scalars::{rat, rat_int, GaussianRational, Rational, TauScalar};
use crate::series::FormalSeries;
use crate::starprod::{apply_n_kappa, fiber_translation, multi_indices, StarProductSpec, SymbolSeries};
use crate::symbols::{torus_integral, MultiIndex, Symbol, WaveFunction};

/// Formal wave functions: series whose coefficients carry no `p`.
pub type WaveSeries = SymbolSeries;

fn check_wave(u: &WaveSeries) -> Result<()> {
    if u.coeffs().iter().all(Symbol::is_vertical) {
        Ok(())
    } else {
        Err(Error::Precondition("wave function depends on p".into()))
    }
}

fn factorial(n: u32) -> Rational {
    rat_int((1..=n as i64).product())
}

fn minus_i_pow(j: usize) -> GaussianRational {
    let mut g = GaussianRational::one();
    let mi = GaussianRational::new(Rational::zero(), -Rational::one());
    for _ in 0..j {
        g = &g * &mi;
    }
    g
}

/// `ϱ_S(f)u = Σ_c (−iλ)^{|c|}/c! · (∂_p^c f)|_{p=0} · ∂_q^c u`.
pub fn rho_standard(f: &SymbolSeries, u: &WaveSeries) -> Result<WaveSeries> {
    check_wave(u)?;
    let dim = f.coeff(0).dim();
    if u.coeff(0).dim() != dim {
        return Err(Error::DimensionMismatch(dim, u.coeff(0).dim()));
    }
    let order = f.order().min(u.order());
    let mut out = vec![Symbol::zero(dim); order + 1];
    let mut du: HashMap<(usize, MultiIndex), Symbol> = HashMap::new();
    for a in 0..=order {
        let fa = f.coeff(a);
        if fa.is_zero() {
            continue;
        }
        let bound = fa.max_p_degree();
        for b in 0..=(order - a) {
            let ub = u.coeff(b);
            if ub.is_zero() {
                continue;
            }
            for c in multi_indices(dim, &bound, order - a - b) {
                let j: usize = c.iter().map(|&x| x as usize).sum();
                let restricted = fa.partial_p_multi(&c).restrict_zero_section();
                if restricted.is_zero() {
                    continue;
                }
                let d = du.entry((b, c)).or_insert_with(|| ub.partial_q_multi(&c));
                let denom: Rational = c.iter().map(|&x| factorial(x)).product();
                let w = TauScalar::from_gaussian(minus_i_pow(j).scale(&(Rational::one() / denom)));
                out[a + b + j] = out[a + b + j].add(&restricted.mul(d).scale(&w));
            }
        }
    }
    Ok(FormalSeries::new(order, out, &Symbol::zero(dim)))
}

/// `ϱ_κ(f) = ϱ_S(N_κ f)`; `κ = 1/2` is the Schrödinger representation.
pub fn rho_kappa(f: &SymbolSeries, u: &WaveSeries, kappa: &Rational) -> Result<WaveSeries> {
    rho_standard(&apply_n_kappa(f, kappa), u)
}

/// `ϱ_W`.
pub fn rho_weyl(f: &SymbolSeries, u: &WaveSeries) -> Result<WaveSeries> {
    rho_kappa(f, u, &rat(1, 2))
}

/// `⟨u, v⟩ = ∫ ū v μ` with normalized Lebesgue measure.
pub fn l2_inner(u: &WaveSeries, v: &WaveSeries) -> Result<FormalSeries<TauScalar>> {
    check_wave(u)?;
    check_wave(v)?;
    let order = u.order().min(v.order());
    let mut out = vec![TauScalar::zero(); order + 1];
    for a in 0..=order {
        if u.coeff(a).is_zero() {
            continue;
        }
        let ua = u.coeff(a).conj();
        for b in 0..=(order - a) {
            let prod = ua.mul(v.coeff(b));
            if prod.is_zero() {
                continue;
            }
            out[a + b] += &torus_integral(&WaveFunction::new(prod)?)?;
        }
    }
    Ok(FormalSeries::new(order, out, &TauScalar::zero()))
}

/// Residual `⟨ϱ_κ(f)u, v⟩ − ⟨u, ϱ_κ(f̄)v⟩`; vanishes for `κ = 1/2`.
pub fn adjoint_residual(f: &SymbolSeries, u: &WaveSeries, v: &WaveSeries, kappa: &Rational) -> Result<FormalSeries<TauScalar>> {
    let lhs = l2_inner(&rho_kappa(f, u, kappa)?, v)?;
    let rhs = l2_inner(u, &rho_kappa(&conj_series(f), v, kappa)?)?;
    Ok(lhs.sub(&rhs))
}

pub fn adjoint_check(f: &SymbolSeries, u: &WaveSeries, v: &WaveSeries, spec: &StarProductSpec) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("adjoint[κ={}]", crate::scalars::fmt_rational(spec.kappa())));
    report.record(format!("f={}", f.coeff(0)), &adjoint_residual(f, u, v, spec.kappa())?);
    Ok(report)
}

fn bundle_of(spec: &StarProductSpec) -> Result<&LineBundleData> {
    if !spec.is_weyl() {
        return Err(Error::Precondition("Weyl ordering (κ = 1/2) required".into()));
    }
    spec.bundle()
        .map(|b| b.as_ref())
        .ok_or_else(|| Error::Precondition("line-bundle data required".into()))
}

/// `η_W(f)σ` on patch `α`: `ϱ_W(e^{iδ_W[A_α]} f) σ_α`.
pub fn eta_weyl(f: &SymbolSeries, sigma: &WaveSeries, patch: usize, spec: &StarProductSpec) -> Result<WaveSeries> {
    let bundle = bundle_of(spec)?;
    let sf = fiber_translation(bundle.potential(patch)?, f, spec.kappa(), 1);
    rho_weyl(&sf, sigma)
}

/// `U(s ⊗ u)` on patch `α`: `ϱ_W(N^{-1} s_α) u`.
pub fn rieffel_u(s: &SymbolSeries, u: &WaveSeries, _patch: usize) -> Result<WaveSeries> {
    rho_weyl(&quantum_trivialization(s), u)
}

/// The left `⋆'_W` action `ρ(f)s` on a phase-space section: locally
/// `N(S_α(f) ⋆_W ŝ_α)`.
pub fn left_action(f: &SymbolSeries, s: &SymbolSeries, patch: usize, spec: &StarProductSpec) -> Result<SymbolSeries> {
    let bundle = bundle_of(spec)?;
    let sf = fiber_translation(bundle.potential(patch)?, f, spec.kappa(), 1);
    let prod = spec.unmagnetized().star(&sf, &quantum_trivialization(s))?;
    Ok(apply_n_kappa(&prod, spec.kappa()))
}

/// `η_W(f)σ` computed on patch `α` and on each overlapping patch agree.
pub fn eta_globality_check(f: &SymbolSeries, sigma: &WaveSeries, alpha: usize, spec: &StarProductSpec) -> Result<CheckReport> {
    let bundle = bundle_of(spec)?;
    let cover = bundle.cover();
    let here = eta_weyl(f, sigma, alpha, spec)?;
    let mut report = CheckReport::new("eta-globality");
    for beta in 0..cover.num_patches() {
        if beta == alpha || !cover.meets(&[alpha, beta]) {
            continue;
        }
        let f_beta = cover.series_to_chart(f, beta, alpha)?;
        let sigma_beta = transport_section(bundle, sigma, alpha, beta)?;
        let there = eta_weyl(&f_beta, &sigma_beta, beta, spec)?;
        report.record(format!("({alpha}->{beta})"), &there.sub(&transport_section(bundle, &here, alpha, beta)?));
    }
    Ok(report)
}

/// `U(s ⊗ u)` computed on patch `α` and on each overlapping patch agree.
pub fn rieffel_globality_check(s: &SymbolSeries, u: &WaveSeries, alpha: usize, spec: &StarProductSpec) -> Result<CheckReport> {
    let bundle = bundle_of(spec)?;
    let cover = bundle.cover();
    let here = rieffel_u(s, u, alpha)?;
    let mut report = CheckReport::new("rieffel-globality");
    for beta in 0..cover.num_patches() {
        if beta == alpha || !cover.meets(&[alpha, beta]) {
            continue;
        }
        let s_beta = transport_section(bundle, s, alpha, beta)?;
        let u_beta = cover.series_to_chart(u, beta, alpha)?;
        let there = rieffel_u(&s_beta, &u_beta, beta)?;
        report.record(format!("({alpha}->{beta})"), &there.sub(&transport_section(bundle, &here, alpha, beta)?));
    }
    Ok(report)
}

/// `U(s ∙_W f ⊗ u) = U(s ⊗ ϱ_W(f)u)`.
pub fn balancing_residual(s: &SymbolSeries, f: &SymbolSeries, u: &WaveSeries, patch: usize, spec: &StarProductSpec) -> Result<WaveSeries> {
    let sf = crate::hermitian::module_action(s, f, spec)?;
    Ok(rieffel_u(&sf, u, patch)?.sub(&rieffel_u(s, &rho_weyl(f, u)?, patch)?))
}

/// `⟨U(s⊗u), U(t⊗v)⟩ − ⟨u, ϱ_W(ĥ(s,t)) v⟩`.
pub fn isometry_residual(
    s: &SymbolSeries,
    u: &WaveSeries,
    t: &SymbolSeries,
    v: &WaveSeries,
    patch: usize,
    spec: &StarProductSpec,
) -> Result<FormalSeries<TauScalar>> {
    let lhs = l2_inner(&rieffel_u(s, u, patch)?, &rieffel_u(t, v, patch)?)?;
    let h = metric_eval(std::slice::from_ref(s), std::slice::from_ref(t), spec)?;
    let rhs = l2_inner(u, &rho_weyl(&h, v)?)?;
    Ok(lhs.sub(&rhs))
}

/// `U(ρ(f)s ⊗ u) − η_W(f) U(s ⊗ u)`.
pub fn intertwiner_residual(
    f: &SymbolSeries,
    s: &SymbolSeries,
    u: &WaveSeries,
    patch: usize,
    spec: &StarProductSpec,
) -> Result<WaveSeries> {
    let lhs = rieffel_u(&left_action(f, s, patch, spec)?, u, patch)?;
    let rhs = eta_weyl(f, &rieffel_u(s, u, patch)?, patch, spec)?;
    Ok(lhs.sub(&rhs))
}

pub fn intertwiner_check(f: &SymbolSeries, s: &SymbolSeries, u: &WaveSeries, patch: usize, spec: &StarProductSpec) -> Result<CheckReport> {
    let mut report = CheckReport::new("intertwiner");
    report.record(format!("f={}", f.coeff(0)), &intertwiner_residual(f, s, u, patch, spec)?);
    Ok(report)
}

/// Inner product `⟨s⊗u, t⊗v⟩ = ⟨u, ϱ_W(ĥ(s,t)) v⟩` of induced vectors.
pub fn induced_inner(
    a: &(SymbolSeries, WaveSeries),
    b: &(SymbolSeries, WaveSeries),
    spec: &StarProductSpec,
) -> Result<FormalSeries<TauScalar>> {
    let h = metric_eval(std::slice::from_ref(&a.0), std::slice::from_ref(&b.0), spec)?;
    l2_inner(&a.1, &rho_weyl(&h, &b.1)?)
}

/// Result of [`induction_positivity`].
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub lowest_order: Option<usize>,
    pub gram: Vec<Vec<Complex64>>,
    pub total: f64,
    pub positive: bool,
}

/// Gram matrix of induced vectors at its lowest nonvanishing λ-order,
/// evaluated with `τ = 2πi`; checks it is positive semidefinite.
pub fn induction_positivity(tensors: &[(SymbolSeries, WaveSeries)], spec: &StarProductSpec) -> Result<PositivityReport> {
    let n = tensors.len();
    let mut exact = Vec::with_capacity(n);
    for a in tensors {
        let mut row = Vec::with_capacity(n);
        for b in tensors {
            row.push(induced_inner(a, b, spec)?);
        }
        exact.push(row);
    }
    let lowest = exact.iter().flatten().filter_map(|g| g.lowest_order()).min();
    let Some(r) = lowest else {
        return Ok(PositivityReport { lowest_order: None, gram: vec![vec![Complex64::new(0.0, 0.0); n]; n], total: 0.0, positive: true });
    };
    let gram = exact
        .iter()
        .map(|row| row.iter().map(|g| g.coeff(r).evaluate_numeric(12)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = gram.iter().flatten().map(|z| z.re).sum();
    let positive = is_positive_semidefinite(&gram) && total >= -1e-9;
    Ok(PositivityReport { lowest_order: Some(r), gram, total, positive })
}

/// All principal minors of a Hermitian matrix are `≥ 0`.
pub fn is_positive_semidefinite(m: &[Vec<Complex64>]) -> bool {
    let n = m.len();
    let tol = 1e-9;
    for i in 0..n {
        for j in 0..n {
            if (m[i][j] - m[j][i].conj()).norm() > tol * (1.0 + m[i][j].norm()) {
                return false;
            }
        }
    }
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Complex64>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect();
        determinant(sub).re >= -tol
    })
}

fn determinant(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let Some(piv) = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())) else {
            return Complex64::new(0.0, 0.0);
        };
        if a[piv][col].norm() < 1e-300 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}
