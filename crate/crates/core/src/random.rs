//! Seeded generators of small random test data.
//!
//! Frequencies are bounded by `|k| ≤ 1`, momentum degrees by 2 per axis
//! and coefficients are small Gaussian rationals, which keeps the exact
//! arithmetic fast at the orders used by the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hermitian::MatrixSeries;
use crate::scalars::{rat, GaussianRational, TauScalar};
use crate::series::FormalSeries;
use crate::starprod::{SymbolSeries, TruncationContext};
use crate::symbols::{MatrixSymbol, Monomial, Symbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> GaussianRational {
    let den = rng.gen_range(1..=3);
    GaussianRational::new(rat(rng.gen_range(-2..=2), den), rat(rng.gen_range(-2..=2), den))
}

/// A nonzero coefficient, occasionally carrying a factor `τ`.
pub fn tau_scalar<R: Rng>(rng: &mut R) -> TauScalar {
    loop {
        let g = gaussian(rng);
        if g.is_zero() {
            continue;
        }
        let c = TauScalar::from_gaussian(g);
        return if rng.gen_bool(0.2) { &c * &TauScalar::tau() } else { c };
    }
}

/// Options for [`symbol`].
#[derive(Clone, Copy, Debug)]
pub struct SymbolShape {
    pub max_terms: usize,
    pub max_p: u32,
    /// Allow `q`-polynomial factors (chart symbols).
    pub chart: bool,
    pub vertical: bool,
}

impl Default for SymbolShape {
    fn default() -> Self {
        Self { max_terms: 3, max_p: 2, chart: false, vertical: false }
    }
}

pub fn symbol<R: Rng>(rng: &mut R, dim: usize, shape: SymbolShape) -> Symbol {
    let mut s = Symbol::zero(dim);
    let terms = rng.gen_range(1..=shape.max_terms);
    for _ in 0..terms {
        let mut m = Monomial::ONE;
        for axis in 0..dim {
            m.freq[axis] = rng.gen_range(-1..=1);
            if !shape.vertical {
                m.ppow[axis] = rng.gen_range(0..=shape.max_p);
            }
            if shape.chart && rng.gen_bool(0.3) {
                m.qpow[axis] = 1;
            }
        }
        s = s.add(&Symbol::term(dim, m, tau_scalar(rng)));
    }
    s
}

/// A series whose λ-coefficients are random symbols, each present with
/// probability one half beyond λ⁰.
pub fn series<R: Rng>(rng: &mut R, ctx: TruncationContext, shape: SymbolShape) -> SymbolSeries {
    let coeffs = (0..=ctx.order)
        .map(|r| if r == 0 || rng.gen_bool(0.5) { symbol(rng, ctx.dim, shape) } else { Symbol::zero(ctx.dim) })
        .collect();
    FormalSeries::new(ctx.order, coeffs, &Symbol::zero(ctx.dim))
}

/// Global phase-space series.
pub fn global_series<R: Rng>(rng: &mut R, ctx: TruncationContext) -> SymbolSeries {
    series(rng, ctx, SymbolShape::default())
}

/// Periodic wave-function series.
pub fn wave_series<R: Rng>(rng: &mut R, ctx: TruncationContext) -> SymbolSeries {
    series(rng, ctx, SymbolShape { vertical: true, ..SymbolShape::default() })
}

/// A real symbol `f + f̄`.
pub fn real_symbol<R: Rng>(rng: &mut R, dim: usize, shape: SymbolShape) -> Symbol {
    let f = symbol(rng, dim, shape);
    f.add(&f.conj())
}

/// `H = id + Σ_{r≥1} λ^r H_r` with each `H_r` pointwise Hermitian.
pub fn hermitian_matrix_series<R: Rng>(rng: &mut R, size: usize, ctx: TruncationContext) -> MatrixSeries {
    let shape = SymbolShape { max_terms: 2, ..SymbolShape::default() };
    let mut coeffs = vec![MatrixSymbol::identity(size, ctx.dim)];
    for _ in 1..=ctx.order {
        let mut m = MatrixSymbol::zero(size, ctx.dim);
        for i in 0..size {
            m.set(i, i, real_symbol(rng, ctx.dim, shape));
            for j in i + 1..size {
                let z = symbol(rng, ctx.dim, shape);
                m.set(j, i, z.conj());
                m.set(i, j, z);
            }
        }
        coeffs.push(m);
    }
    FormalSeries::new(ctx.order, coeffs, &MatrixSymbol::zero(size, ctx.dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let ctx = TruncationContext::new(3, 2).unwrap();
        let a = global_series(&mut rng(7), ctx);
        let b = global_series(&mut rng(7), ctx);
        assert_eq!(a, b);
        assert_ne!(a, global_series(&mut rng(8), ctx));
    }

    #[test]
    fn shapes_are_respected() {
        let mut r = rng(1);
        for _ in 0..50 {
            let s = symbol(&mut r, 2, SymbolShape::default());
            assert!(s.is_global());
            assert!(s.terms().all(|(m, _)| m.freq.iter().all(|k| k.abs() <= 1) && m.ppow.iter().all(|&p| p <= 2)));
            assert!(symbol(&mut r, 1, SymbolShape { vertical: true, ..Default::default() }).is_vertical());
            let h = real_symbol(&mut r, 2, SymbolShape::default());
            assert_eq!(h.conj(), h);
        }
    }

    #[test]
    fn hermitian_matrices_are_hermitian() {
        let ctx = TruncationContext::new(2, 1).unwrap();
        let h = hermitian_matrix_series(&mut rng(3), 2, ctx);
        for c in h.coeffs() {
            assert_eq!(&c.adjoint(), c);
        }
    }
}
