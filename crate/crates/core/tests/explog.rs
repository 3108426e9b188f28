use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use starform::explog::{bch_compose, bch_series, exp_ad, exp_commutes_with_generator, star_exp, star_log};
use starform::hermitian::conj_series;
use starform::random::{self, SymbolShape};
use starform::scalars::rat;
use starform::{FormalSeries, GaussianRational, Rational, StarProductSpec, Symbol, SymbolSeries, TauScalar, TruncationContext};

fn ctx(order: usize, dim: usize) -> TruncationContext {
    TruncationContext::new(order, dim).unwrap()
}

fn specs(c: TruncationContext) -> Vec<StarProductSpec> {
    vec![StarProductSpec::standard(c), StarProductSpec::weyl(c), StarProductSpec::kappa_ordered(c, rat(1, 3))]
}

fn tau() -> TauScalar {
    TauScalar::tau()
}

/// `τ(n·q + z)` plus a random global tail starting at λ¹.
fn head_series(seed: u64, c: TruncationContext, trig: bool) -> SymbolSeries {
    let mut rng = random::rng(seed);
    let mut h = random::series(&mut rng, c, SymbolShape { max_terms: 2, ..SymbolShape::default() });
    let mut head = Symbol::constant(c.dim, tau().scale(&rat(rng.gen_range(-1..=1), 1)));
    if trig {
        for axis in 0..c.dim {
            head = head.add(&Symbol::q(c.dim, axis).scale(&tau().scale(&rat(rng.gen_range(-1..=1), 1))));
        }
    } else {
        head = Symbol::zero(c.dim);
    }
    *h.coeff_mut(0) = head;
    h
}

/// `Σ_k tᵏ H^{⋆k}/k!`, finite per λ-order when `H₀ = 0`.
fn power_series_exp(h: &SymbolSeries, spec: &StarProductSpec, t: &Rational) -> SymbolSeries {
    let c = spec.ctx();
    let th = h.map(|s| s.scale_rational(t));
    let mut term = c.one();
    let mut sum = c.one();
    for k in 1..=c.order {
        term = spec.star(&term, &th).unwrap().map(|s| s.scale_rational(&rat(1, k as i64)));
        sum = sum.add(&term);
    }
    sum
}

/// `e^{i(κ−½)λab} e^{aq + bp}` for `a = tτ`, `b = tλ` on the first axis.
fn linear_exp_oracle(kappa: &Rational, t: i64, c: TruncationContext) -> SymbolSeries {
    let phase = tau().scale_gaussian(&GaussianRational::new(Rational::zero(), kappa - rat(1, 2))).scale(&rat(t * t, 1));
    let lam = |s: Symbol, k| FormalSeries::monomial(s, k, c.order);
    let mut freq = [0i64; 2];
    freq[0] = t;
    let mut e_phase = c.one();
    let mut e_p = c.one();
    let mut pow_phase = c.one();
    let mut pow_p = c.one();
    let tp = lam(Symbol::p(c.dim, 0).scale_rational(&rat(t, 1)), 1);
    let ph = lam(Symbol::constant(c.dim, phase), 2);
    for k in 1..=c.order {
        pow_p = pow_p.mul(&tp).map(|s| s.scale_rational(&rat(1, k as i64)));
        pow_phase = pow_phase.mul(&ph).map(|s| s.scale_rational(&rat(1, k as i64)));
        e_p = e_p.add(&pow_p);
        e_phase = e_phase.add(&pow_phase);
    }
    e_phase.mul(&e_p).map(|s| s.mul(&Symbol::exp_freq(c.dim, &freq[..c.dim])))
}

#[test]
fn exponential_of_a_linear_generator_has_closed_form() {
    for dim in [1, 2] {
        let c = ctx(4, dim);
        let h = c.lift(Symbol::q(dim, 0).scale(&tau())).add(&FormalSeries::monomial(Symbol::p(dim, 0), 1, 4));
        for spec in specs(c) {
            for t in [1, 2, -1] {
                let got = star_exp(&h, &spec, &rat(t, 1)).unwrap();
                assert_eq!(got, linear_exp_oracle(spec.kappa(), t, c), "{} t={t}", spec.describe());
            }
        }
    }
}

#[test]
fn logarithm_branches_and_units() {
    let c = ctx(3, 2);
    let spec = StarProductSpec::weyl(c);
    for z in [-2, 0, 1, 5] {
        let got = star_log(&c.one(), &spec, z).unwrap();
        assert_eq!(got, c.lift(Symbol::constant(2, tau().scale(&rat(z, 1)))));
        assert_eq!(star_exp(&got, &spec, &Rational::one()).unwrap(), c.one());
    }
    assert!(star_log(&c.lift(Symbol::exp_freq(2, &[1, 0]).scale(&TauScalar::from(2))), &spec, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn exponential_of_a_small_generator_is_its_power_series(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(4, dim);
        let h = head_series(seed, c, false);
        for spec in specs(c) {
            for t in [rat(1, 1), rat(-2, 3), rat(3, 1)] {
                prop_assert_eq!(star_exp(&h, &spec, &t).unwrap(), power_series_exp(&h, &spec, &t));
            }
        }
    }

    #[test]
    fn group_law_holds(seed in any::<u64>(), dim in 1usize..=2, trig in any::<bool>()) {
        let c = ctx(3, dim);
        let h = head_series(seed, c, trig);
        let spec = StarProductSpec::weyl(c);
        let mut pairs = vec![(rat(1, 1), rat(1, 1)), (rat(1, 1), rat(-1, 1)), (rat(2, 1), rat(3, 1))];
        if !trig {
            pairs.push((rat(1, 2), rat(-1, 3)));
        }
        for (t, s) in pairs {
            let lhs = star_exp(&h, &spec, &(t.clone() + s.clone())).unwrap();
            let rhs = spec.star(&star_exp(&h, &spec, &t).unwrap(), &star_exp(&h, &spec, &s).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "t = {}, t' = {}", t, s);
        }
        prop_assert!(exp_commutes_with_generator(&h, &spec).unwrap());
    }

    #[test]
    fn log_inverts_exp(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(3, dim);
        let h = head_series(seed, c, true);
        let z = h.coeff(0).constant_term().div_tau().and_then(|s| s.as_gaussian()).map(|g| g.re).unwrap_or_default();
        let z = num_traits::ToPrimitive::to_i64(&z).unwrap();
        for spec in specs(c) {
            let e = star_exp(&h, &spec, &Rational::one()).unwrap();
            prop_assert_eq!(star_log(&e, &spec, z).unwrap(), h.clone());
        }
    }

    #[test]
    fn exp_inverts_log(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(3, dim);
        let mut rng = random::rng(seed);
        let mut f = random::global_series(&mut rng, c);
        let n: Vec<i64> = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
        *f.coeff_mut(0) = Symbol::exp_freq(dim, &n);
        let spec = StarProductSpec::kappa_ordered(c, rat(1, 3));
        let h = star_log(&f, &spec, 0).unwrap();
        prop_assert_eq!(star_exp(&h, &spec, &Rational::one()).unwrap(), f);
    }

    #[test]
    fn weyl_exponential_commutes_with_conjugation(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(3, dim);
        let h = head_series(seed, c, true);
        let spec = StarProductSpec::weyl(c);
        for t in [rat(1, 1), rat(-2, 1)] {
            let lhs = conj_series(&star_exp(&h, &spec, &t).unwrap());
            prop_assert_eq!(lhs, star_exp(&conj_series(&h), &spec, &t).unwrap());
        }
    }

    #[test]
    fn adjoint_exponential_is_conjugation_by_exp(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(3, dim);
        let h = head_series(seed, c, true);
        let f = random::global_series(&mut random::rng(seed ^ 0x5eed), c);
        for spec in specs(c) {
            let e = star_exp(&h, &spec, &Rational::one()).unwrap();
            let e_inv = star_exp(&h, &spec, &rat(-1, 1)).unwrap();
            let conj = spec.star(&spec.star(&e, &f).unwrap(), &e_inv).unwrap();
            prop_assert_eq!(exp_ad(&h, &f, &spec).unwrap(), conj);
        }
    }

    #[test]
    fn bch_routes_agree(seed in any::<u64>(), dim in 1usize..=2) {
        let c = ctx(3, dim);
        let a = head_series(seed, c, true);
        let b = head_series(seed.wrapping_add(1), c, true);
        let spec = StarProductSpec::weyl(c);
        let composed = bch_compose(&a, &b, &spec).unwrap();
        prop_assert_eq!(&composed, &bch_series(&a, &b, &spec).unwrap());
        let lhs = spec.star(&star_exp(&a, &spec, &Rational::one()).unwrap(), &star_exp(&b, &spec, &Rational::one()).unwrap()).unwrap();
        prop_assert_eq!(lhs, star_exp(&composed, &spec, &Rational::one()).unwrap());
    }
}
