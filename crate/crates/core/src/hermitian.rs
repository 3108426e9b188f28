//! Deformed Hermitian fiber metrics for the Weyl-ordered bundle
//! quantization, unitary transitions and the Hermitian square root.


use crate::cech::{DeformedTransition, LineBundleData};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::scalars::{rat, Rational, TauScalar};
use crate::series::{FormalSeries, Ring};
use crate::starprod::{apply_n_kappa_inv, fiber_translation, StarProductSpec, SymbolSeries};
use crate::symbols::{MatrixSymbol, Symbol};

pub type MatrixSeries = FormalSeries<MatrixSymbol>;

/// Complex conjugation of a series (λ is real).
pub fn conj_series(f: &SymbolSeries) -> SymbolSeries {
    f.map(Symbol::conj)
}

fn require_weyl(spec: &StarProductSpec) -> Result<()> {
    if spec.is_weyl() {
        Ok(())
    } else {
        Err(Error::Precondition("Weyl ordering (κ = 1/2) required".into()))
    }
}

/// `ŝ = N^{-1} s` with `N = N_{1/2}`.
pub fn quantum_trivialization(s: &SymbolSeries) -> SymbolSeries {
    apply_n_kappa_inv(s, &rat(1, 2))
}

/// `ĥ(s, s') = Σᵢ (N^{-1} sᵢ)* ⋆_W N^{-1} s'ᵢ` on one patch.
pub fn metric_eval(s: &[SymbolSeries], t: &[SymbolSeries], spec: &StarProductSpec) -> Result<SymbolSeries> {
    require_weyl(spec)?;
    if s.len() != t.len() || s.is_empty() {
        return Err(Error::Precondition("coefficient vectors of different rank".into()));
    }
    let free = spec.unmagnetized();
    let mut acc = free.ctx().zero();
    for (a, b) in s.iter().zip(t) {
        let prod = free.star(&conj_series(&quantum_trivialization(a)), &quantum_trivialization(b))?;
        acc = acc.add(&prod);
    }
    Ok(acc)
}

/// Right module action `s ∙_W f` on a local coefficient: `N(N^{-1}s ⋆_W f)`.
pub fn module_action(s: &SymbolSeries, f: &SymbolSeries, spec: &StarProductSpec) -> Result<SymbolSeries> {
    let prod = spec.unmagnetized().star(&quantum_trivialization(s), f)?;
    Ok(crate::starprod::apply_n_kappa(&prod, &rat(1, 2)))
}

/// Transports a line-bundle coefficient from patch `α` to an overlapping
/// patch `β`: `s_β = φ_{βα} s_α`, written in the `β` chart.
pub fn transport_section(bundle: &LineBundleData, s: &SymbolSeries, alpha: usize, beta: usize) -> Result<SymbolSeries> {
    let moved = bundle.cover().series_to_chart(s, beta, alpha)?;
    let phi = bundle.transition(beta, alpha)?;
    Ok(moved.map(|c| phi.mul(c)))
}

/// `ĥ` computed on patch `α` and on every overlapping patch agree.
pub fn metric_globality_check(
    bundle: &LineBundleData,
    s: &SymbolSeries,
    t: &SymbolSeries,
    alpha: usize,
    spec: &StarProductSpec,
) -> Result<CheckReport> {
    let cover = bundle.cover();
    let here = metric_eval(std::slice::from_ref(s), std::slice::from_ref(t), spec)?;
    let mut report = CheckReport::new("metric-globality");
    for beta in 0..cover.num_patches() {
        if beta == alpha || !cover.meets(&[alpha, beta]) {
            continue;
        }
        let sb = transport_section(bundle, s, alpha, beta)?;
        let tb = transport_section(bundle, t, alpha, beta)?;
        let there = metric_eval(&[sb], &[tb], spec)?;
        report.record(format!("({alpha}->{beta})"), &there.sub(&cover.series_to_chart(&here, beta, alpha)?));
    }
    Ok(report)
}

/// `φ*_{αβ} ⋆_W φ_{αβ} = 1` on every overlap.
pub fn unitary_cocycle_check(dt: &DeformedTransition, spec: &StarProductSpec) -> Result<CheckReport> {
    require_weyl(spec)?;
    let free = spec.unmagnetized();
    let one = free.ctx().one();
    let mut report = CheckReport::new("unitary-transitions");
    for ((a, b), phi) in dt.iter() {
        let r = free.star(&conj_series(phi), phi)?.sub(&one);
        report.record(format!("({a},{b})"), &r);
    }
    Ok(report)
}

/// Entry `(i, j)` of a matrix series as a symbol series.
pub fn entry(m: &MatrixSeries, i: usize, j: usize) -> SymbolSeries {
    m.map(|c| c.get(i, j).clone())
}

fn from_entries(size: usize, entries: &[SymbolSeries]) -> MatrixSeries {
    let order = entries[0].order();
    let coeffs = (0..=order)
        .map(|r| MatrixSymbol::from_entries(size, entries.iter().map(|e| e.coeff(r).clone()).collect()))
        .collect::<Vec<_>>();
    let zero = coeffs[0].zero_like();
    FormalSeries::new(order, coeffs, &zero)
}

/// `(A ⋆ B)_{ij} = Σ_k A_{ik} ⋆ B_{kj}`.
pub fn mat_star(a: &MatrixSeries, b: &MatrixSeries, spec: &StarProductSpec) -> Result<MatrixSeries> {
    let n = a.coeff(0).size();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = spec.ctx().zero();
            for k in 0..n {
                let (x, y) = (entry(a, i, k), entry(b, k, j));
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&spec.star(&x, &y)?);
                }
            }
            out.push(acc);
        }
    }
    Ok(from_entries(n, &out))
}

/// Conjugate transpose of a matrix series.
pub fn mat_adjoint(a: &MatrixSeries) -> MatrixSeries {
    a.map(MatrixSymbol::adjoint)
}

/// `U = id + Σ λ^r U_r` with `U* ⋆ U = H` and every `U_r` Hermitian.
pub fn hermitian_sqrt(h: &MatrixSeries, spec: &StarProductSpec) -> Result<MatrixSeries> {
    let order = spec.ctx().order.min(h.order());
    let h = h.truncate(order);
    let id = h.coeff(0).one_like();
    if h.coeff(0) != &id {
        return Err(Error::Precondition("H₀ must be the identity".into()));
    }
    for r in 0..=order {
        if h.coeff(r).adjoint() != *h.coeff(r) {
            return Err(Error::NotHermitian(r));
        }
    }
    let mut u = FormalSeries::constant(id.clone(), order);
    for r in 1..=order {
        let p = mat_star(&mat_adjoint(&u), &u, spec)?;
        let rhs = h.coeff(r).add(&p.coeff(r).neg());
        if rhs.adjoint() != rhs {
            return Err(Error::NotHermitian(r));
        }
        *u.coeff_mut(r) = rhs.map(|s| s.scale_rational(&rat(1, 2)));
    }
    Ok(u)
}

/// `⋆`-inverse of a matrix series with identity leading term.
pub fn mat_star_inverse(u: &MatrixSeries, spec: &StarProductSpec) -> Result<MatrixSeries> {
    let id = u.coeff(0).one_like();
    if u.coeff(0) != &id {
        return Err(Error::NotInvertible);
    }
    let mut v = FormalSeries::constant(id, u.order());
    for r in 1..=u.order() {
        let p = mat_star(u, &v, spec)?;
        *v.coeff_mut(r) = p.coeff(r).neg();
    }
    Ok(v)
}

/// `V = U^{-1}`: the frame change making the frame metric the identity.
pub fn orthonormalize_frame(h: &MatrixSeries, spec: &StarProductSpec) -> Result<MatrixSeries> {
    mat_star_inverse(&hermitian_sqrt(h, spec)?, spec)
}

/// The local function `θ = S^{-1}(ŝ ⋆_W t̂*)` representing `Θ_{s,t}`.
pub fn theta_endomorphism(
    s: &SymbolSeries,
    t: &SymbolSeries,
    patch: usize,
    spec: &StarProductSpec,
) -> Result<SymbolSeries> {
    require_weyl(spec)?;
    let free = spec.unmagnetized();
    let local = free.star(&quantum_trivialization(s), &conj_series(&quantum_trivialization(t)))?;
    Ok(match spec.bundle() {
        Some(b) => fiber_translation(b.potential(patch)?, &local, spec.kappa(), -1),
        None => local,
    })
}

/// `Θ_{s,t}·z = s ∙ ĥ(t, z)` and `Θ_{s,t}* = Θ_{t,s}` on patch `α`.
pub fn theta_compatibility_check(
    s: &SymbolSeries,
    t: &SymbolSeries,
    z: &SymbolSeries,
    patch: usize,
    spec: &StarProductSpec,
) -> Result<CheckReport> {
    let free = spec.unmagnetized();
    let theta = theta_endomorphism(s, t, patch, spec)?;
    let s_theta = match spec.bundle() {
        Some(b) => fiber_translation(b.potential(patch)?, &theta, spec.kappa(), 1),
        None => theta.clone(),
    };
    // Both sides compared through the trivialization ẑ = N^{-1} z.
    let lhs = free.star(&s_theta, &quantum_trivialization(z))?;
    let h = metric_eval(std::slice::from_ref(t), std::slice::from_ref(z), spec)?;
    let rhs = free.star(&quantum_trivialization(s), &h)?;
    let mut report = CheckReport::new("theta-compatibility");
    report.record("Θ(s,t)z - s∙ĥ(t,z)", &lhs.sub(&rhs));
    let theta_ts = theta_endomorphism(t, s, patch, spec)?;
    report.record("Θ(s,t)* - Θ(t,s)", &conj_series(&theta).sub(&theta_ts));
    Ok(report)
}

/// Numeric sample points for the fiber variable.
const FIBER_SAMPLES: [i64; 4] = [-1, 0, 1, 2];

/// Lowest nonvanishing λ-coefficient of `ĥ(s, s)`, integrated over the
/// torus and sampled on a fiber grid with `τ = 2πi`. Returns the sampled
/// values, or an empty vector when `ĥ(s, s) = 0`.
pub fn lowest_order_samples(g: &SymbolSeries) -> Result<Vec<f64>> {
    let Some(r) = g.lowest_order() else {
        return Ok(Vec::new());
    };
    let c = g.coeff(r);
    let dim = c.dim();
    let mut values = Vec::new();
    let grid: Vec<Vec<i64>> = if dim == 1 {
        FIBER_SAMPLES.iter().map(|&a| vec![a]).collect()
    } else {
        FIBER_SAMPLES.iter().flat_map(|&a| FIBER_SAMPLES.iter().map(move |&b| vec![a, b])).collect()
    };
    for point in grid {
        let mut acc = TauScalar::zero();
        for (m, coeff) in c.terms() {
            if m.freq != [0; crate::symbols::MAX_DIM] {
                continue;
            }
            let mut w = Rational::from_integer(1.into());
            for (axis, &x) in point.iter().enumerate() {
                w *= Rational::from_integer(num_bigint::BigInt::from(x).pow(m.ppow[axis]));
            }
            if m.qpow.iter().any(|&b| b > 0) {
                return Err(Error::NotGlobal);
            }
            acc += &coeff.scale(&w);
        }
        values.push(acc.evaluate_numeric(12)?.re);
    }
    Ok(values)
}

/// Positivity of `ĥ(s, s)` at lowest order: all samples `≥ 0`, one `> 0`.
pub fn positivity_check(s: &[SymbolSeries], spec: &StarProductSpec) -> Result<bool> {
    let g = metric_eval(s, s, spec)?;
    let values = lowest_order_samples(&g)?;
    if values.is_empty() {
        return Ok(s.iter().all(|x| x.is_zero()));
    }
    Ok(values.iter().all(|&v| v >= -1e-9) && values.iter().any(|&v| v > 1e-9))
}
