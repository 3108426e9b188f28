use std::sync::Arc;

use proptest::prelude::*;
use starform::cech::{build_torus_cover, monopole_bundle};
use starform::hermitian::*;
use starform::random::{self, SymbolShape};
use starform::reps::*;
use starform::scalars::rat;
use starform::starprod::star_kappa;
use starform::{MatrixSymbol, Rational, StarProductSpec, Symbol, SymbolSeries, TruncationContext};

fn ctx(order: usize, dim: usize) -> TruncationContext {
    TruncationContext::new(order, dim).unwrap()
}

fn magnetic(order: usize, m: i64) -> StarProductSpec {
    let cover = Arc::new(build_torus_cover(2).unwrap());
    let bundle = Arc::new(monopole_bundle(&rat(m, 1), cover).unwrap());
    StarProductSpec::magnetic(ctx(order, 2), rat(1, 2), bundle).unwrap()
}

fn small(seed: u64, c: TruncationContext, count: usize) -> Vec<SymbolSeries> {
    let mut rng = random::rng(seed);
    let shape = SymbolShape { max_terms: 2, ..SymbolShape::default() };
    (0..count).map(|_| random::series(&mut rng, c, shape)).collect()
}

fn waves(seed: u64, c: TruncationContext, count: usize) -> Vec<SymbolSeries> {
    let mut rng = random::rng(seed ^ 0xabcdef);
    (0..count).map(|_| random::wave_series(&mut rng, c)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hermitian_square_root_reproduces_the_matrix(seed in any::<u64>(), size in 1usize..=2, dim in 1usize..=2) {
        let spec = StarProductSpec::weyl(ctx(3, dim));
        let h = random::hermitian_matrix_series(&mut random::rng(seed), size, spec.ctx());
        let u = hermitian_sqrt(&h, &spec).unwrap();
        prop_assert_eq!(mat_star(&mat_adjoint(&u), &u, &spec).unwrap(), h.clone());
        prop_assert_eq!(u.coeff(0), &MatrixSymbol::identity(size, dim));
        let again = hermitian_sqrt(&random::hermitian_matrix_series(&mut random::rng(seed), size, spec.ctx()), &spec).unwrap();
        prop_assert_eq!(format!("{u:?}"), format!("{again:?}"));
        let v = orthonormalize_frame(&h, &spec).unwrap();
        let vhv = mat_star(&mat_star(&mat_adjoint(&v), &h, &spec).unwrap(), &v, &spec).unwrap();
        prop_assert_eq!(vhv.coeff(0), &MatrixSymbol::identity(size, dim));
        prop_assert!(vhv.coeffs()[1..].iter().all(|m| m.entries().iter().all(Symbol::is_zero)));
    }

    #[test]
    fn fiber_metric_is_sesquilinear_and_hermitian(seed in any::<u64>()) {
        let spec = StarProductSpec::weyl(ctx(3, 2));
        let v = small(seed, spec.ctx(), 3);
        let (s, t, f) = (&v[0], &v[1], &v[2]);
        let lhs = metric_eval(std::slice::from_ref(s), &[module_action(t, f, &spec).unwrap()], &spec).unwrap();
        prop_assert_eq!(lhs, spec.star(&metric_eval(std::slice::from_ref(s), std::slice::from_ref(t), &spec).unwrap(), f).unwrap());
        let h_st = metric_eval(std::slice::from_ref(s), std::slice::from_ref(t), &spec).unwrap();
        prop_assert_eq!(conj_series(&h_st), metric_eval(std::slice::from_ref(t), std::slice::from_ref(s), &spec).unwrap());
        prop_assert!(positivity_check(std::slice::from_ref(s), &spec).unwrap());
    }

    #[test]
    fn fiber_metric_and_theta_are_global(seed in any::<u64>(), m in -1i64..=2) {
        let spec = magnetic(2, m);
        let v = small(seed, spec.ctx(), 3);
        let bundle = spec.bundle().unwrap();
        for alpha in [0, 4, 8] {
            prop_assert!(metric_globality_check(bundle, &v[0], &v[1], alpha, &spec.unmagnetized()).unwrap().passed);
            prop_assert!(theta_compatibility_check(&v[0], &v[1], &v[2], alpha, &spec).unwrap().passed);
        }
    }

    #[test]
    fn kappa_representations_are_homomorphisms(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(3, dim);
        let v = small(seed, c, 2);
        let u = &waves(seed, c, 1)[0];
        for k in [Rational::from_integer(0.into()), rat(1, 2), rat(1, 3)] {
            let lhs = rho_kappa(&star_kappa(&v[0], &v[1], &k).unwrap(), u, &k).unwrap();
            let rhs = rho_kappa(&v[0], &rho_kappa(&v[1], u, &k).unwrap(), &k).unwrap();
            prop_assert_eq!(lhs, rhs, "kappa {}", k);
        }
    }

    #[test]
    fn weyl_representation_is_a_star_representation(seed in any::<u64>(), dim in 1usize..=2) {
        let spec = StarProductSpec::weyl(ctx(3, dim));
        let f = &small(seed, spec.ctx(), 1)[0];
        let w = waves(seed, spec.ctx(), 2);
        prop_assert!(adjoint_residual(f, &w[0], &w[1], &rat(1, 2)).unwrap().is_zero());
        prop_assert!(adjoint_check(f, &w[0], &w[1], &spec).unwrap().passed);
    }

    #[test]
    fn induced_representation_is_global_and_intertwined(seed in any::<u64>()) {
        let spec = magnetic(2, 1);
        let c = spec.ctx();
        let v = small(seed, c, 3);
        let w = waves(seed, c, 2);
        let (f, g, s) = (&v[0], &v[1], &v[2]);
        let fg = spec.star_on(f, g, 0).unwrap();
        let lhs = eta_weyl(&fg, &w[0], 0, &spec).unwrap();
        prop_assert_eq!(lhs, eta_weyl(f, &eta_weyl(g, &w[0], 0, &spec).unwrap(), 0, &spec).unwrap());
        prop_assert!(eta_globality_check(f, &w[0], 4, &spec).unwrap().passed);
        prop_assert!(rieffel_globality_check(s, &w[0], 4, &spec).unwrap().passed);
        prop_assert!(balancing_residual(s, f, &w[0], 0, &spec).unwrap().is_zero());
        prop_assert!(isometry_residual(s, &w[0], g, &w[1], 0, &spec).unwrap().is_zero());
        prop_assert!(intertwiner_check(f, s, &w[0], 0, &spec).unwrap().passed);
    }

    #[test]
    fn induced_inner_product_is_positive(seed in any::<u64>()) {
        let spec = magnetic(2, 1);
        let v = small(seed, spec.ctx(), 2);
        let w = waves(seed, spec.ctx(), 2);
        let tensors = vec![(v[0].clone(), w[0].clone()), (v[1].clone(), w[1].clone())];
        let report = induction_positivity(&tensors, &spec).unwrap();
        prop_assert!(report.positive, "{:?}", report);
    }
}

#[test]
fn standard_representation_is_not_a_star_representation() {
    let c = ctx(2, 1);
    let f = c.lift(Symbol::p(1, 0).mul(&Symbol::exp_freq(1, &[1])));
    let u = c.lift(Symbol::one(1));
    let v = c.lift(Symbol::exp_freq(1, &[1]));
    assert!(!adjoint_residual(&f, &u, &v, &Rational::from_integer(0.into())).unwrap().is_zero());
    assert!(adjoint_residual(&f, &u, &v, &rat(1, 2)).unwrap().is_zero());
}

#[test]
fn weyl_representation_is_the_standard_one_after_reordering() {
    let c = ctx(3, 2);
    let v = small(7, c, 1);
    let u = &waves(7, c, 1)[0];
    let reordered = starform::starprod::apply_n_kappa(&v[0], &rat(1, 2));
    assert_eq!(rho_weyl(&v[0], u).unwrap(), rho_standard(&reordered, u).unwrap());
    assert!(rho_weyl(&v[0], &v[0]).is_err() || v[0].coeffs().iter().all(Symbol::is_vertical));
}
