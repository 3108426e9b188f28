//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails. Every comparison is exact.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::json;
use starform::cech::*;
use starform::explog::{bch_compose, bch_series, exp_ad, star_exp, star_log};
use starform::hermitian::*;
use starform::random::{self, SymbolShape};
use starform::report::{CheckReport, SCHEMA_VERSION};
use starform::reps::*;
use starform::scalars::{fmt_rational, rat};
use starform::starprod::{poisson_bracket, star_kappa};
use starform::{FormalSeries, MatrixSymbol, Rational, StarProductSpec, Symbol, SymbolSeries, TauScalar, TruncationContext};

type Outcome = Result<String, String>;

fn ctx(order: usize, dim: usize) -> TruncationContext {
    TruncationContext::new(order, dim).unwrap()
}

fn cover() -> Arc<GoodCover> {
    Arc::new(build_torus_cover(2).unwrap())
}

fn magnetic(order: usize, m: i64, kappa: Rational) -> StarProductSpec {
    let bundle = Arc::new(monopole_bundle(&rat(m, 1), cover()).unwrap());
    StarProductSpec::magnetic(ctx(order, 2), kappa, bundle).unwrap()
}

fn products(c: TruncationContext) -> Vec<StarProductSpec> {
    let mut out = vec![StarProductSpec::standard(c), StarProductSpec::weyl(c), StarProductSpec::kappa_ordered(c, rat(1, 3))];
    if c.dim == 2 {
        out.push(magnetic(c.order, 1, rat(1, 2)));
    }
    out
}

fn finish(report: CheckReport) -> Outcome {
    if report.passed {
        Ok(format!("{} cases", report.cases))
    } else {
        Err(report.to_string())
    }
}

fn head_series<R: Rng>(rng: &mut R, c: TruncationContext, trig: bool) -> SymbolSeries {
    let mut h = random::series(rng, c, SymbolShape { max_terms: 2, ..SymbolShape::default() });
    let mut head = Symbol::zero(c.dim);
    if trig {
        head = Symbol::constant(c.dim, TauScalar::tau().scale(&rat(rng.gen_range(-1..=1), 1)));
        for axis in 0..c.dim {
            head = head.add(&Symbol::q(c.dim, axis).scale(&TauScalar::tau().scale(&rat(rng.gen_range(-1..=1), 1))));
        }
    }
    *h.coeff_mut(0) = head;
    h
}

fn winding(h: &SymbolSeries) -> i64 {
    let z = h.coeff(0).constant_term().div_tau().and_then(|s| s.as_gaussian()).map(|g| g.re).unwrap_or_default();
    num_traits::ToPrimitive::to_i64(&z).unwrap()
}

fn relative_class_of(m: i64, kappa: &Rational, order: usize) -> Result<Rational, String> {
    let result = relative_class(&magnetic(order, m, kappa.clone())).map_err(|e| e.to_string())?;
    result.class().cloned().ok_or_else(|| "no class coordinate".into())
}

fn criterion_1() -> Outcome {
    let mut report = CheckReport::new("relative class");
    let mut slowest = 0.0f64;
    for m in [-2, -1, 0, 1, 3] {
        for kappa in [rat(0, 1), rat(1, 3), rat(1, 2)] {
            for order in [2, 4] {
                let start = Instant::now();
                let got = relative_class_of(m, &kappa, order);
                slowest = slowest.max(start.elapsed().as_secs_f64());
                report.record_bool(format!("m={m} kappa={kappa} N={order}: {got:?}"), got == Ok(rat(m, 1)));
            }
        }
    }
    finish(report).map(|s| format!("{s}, slowest {slowest:.2}s"))
}

fn criterion_2() -> Outcome {
    let b = |r: Rational| FormalSeries::constant(TauScalar::two_pi().scale(&r), 2);
    let mut report = CheckReport::new("dirac");
    for (p, q) in [(1, 2), (-1, 2), (3, 2), (1, 3), (2, 3), (-5, 3)] {
        let r = dirac_check(&b(rat(p, q))).map_err(|e| e.to_string())?;
        report.record_bool(format!("m={p}/{q}"), !r.integral);
    }
    for m in -3..=3 {
        let r = dirac_check(&b(rat(m, 1))).map_err(|e| e.to_string())?;
        report.record_bool(format!("m={m}"), r.integral);
        report.record_bool(format!("monopole m={m}"), monopole_bundle(&rat(m, 1), cover()).is_ok());
    }
    report.record_bool("monopole m=1/2 rejected", monopole_bundle(&rat(1, 2), cover()).is_err());
    let lam = |r: Rational| FormalSeries::monomial(TauScalar::two_pi().scale(&r), 1, 2);
    let integral = dirac_check(&b(rat(1, 1)).add(&lam(rat(1, 1)))).map_err(|e| e.to_string())?;
    let half = dirac_check(&b(rat(1, 1)).add(&lam(rat(1, 2)))).map_err(|e| e.to_string())?;
    report.record_bool("B = 2π + 2πλ", integral.integral);
    report.record_bool("B = 2π + πλ", !half.integral);
    finish(report)
}

fn criterion_3() -> Outcome {
    let mut report = CheckReport::new("associativity");
    let mut rng = random::rng(3);
    for dim in [1, 2] {
        let c = ctx(4, dim);
        for spec in products(c) {
            for i in 0..100 {
                let f = random::global_series(&mut rng, c);
                let g = random::global_series(&mut rng, c);
                let h = random::global_series(&mut rng, c);
                let lhs = spec.star(&spec.star(&f, &g).map_err(|e| e.to_string())?, &h).map_err(|e| e.to_string())?;
                let rhs = spec.star(&f, &spec.star(&g, &h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                report.record(format!("{} n={dim} #{i}", spec.describe()), &lhs.sub(&rhs));
            }
        }
    }
    finish(report)
}

fn criterion_4() -> Outcome {
    let mut report = CheckReport::new("semiclassical");
    let mut rng = random::rng(4);
    for dim in [1, 2] {
        let c = ctx(2, dim);
        let specs = products(c);
        for i in 0..50 {
            let f = random::global_series(&mut rng, c);
            let g = random::global_series(&mut rng, c);
            let (f0, g0) = (f.coeff(0), g.coeff(0));
            for spec in &specs {
                let fg = spec.star(&f, &g).map_err(|e| e.to_string())?;
                let gf = spec.star(&g, &f).map_err(|e| e.to_string())?;
                report.record_bool(format!("{} n={dim} #{i} order 0", spec.describe()), fg.coeff(0) == &f0.mul(g0));
                let cross = f.coeff(1).mul(g0).sub(&g0.mul(f.coeff(1)));
                let anti = fg.sub(&gf).coeff(1).sub(&cross);
                let bracket = poisson_bracket(f0, g0).scale(&TauScalar::i());
                report.record_bool(format!("{} n={dim} #{i} order 1", spec.describe()), anti == bracket);
            }
        }
    }
    finish(report)
}

fn criterion_5() -> Outcome {
    let mut report = CheckReport::new("exp/log");
    let mut rng = random::rng(5);
    let one = Rational::one();
    for dim in [1, 2] {
        let c = ctx(4, dim);
        for spec in [StarProductSpec::standard(c), StarProductSpec::weyl(c), StarProductSpec::kappa_ordered(c, rat(1, 3))] {
            let name = spec.describe();
            for i in 0..4 {
                for trig in [false, true] {
                    let h = head_series(&mut rng, c, trig);
                    let tag = format!("{name} n={dim} trig={trig} #{i}");
                    let exp = |t: &Rational| star_exp(&h, &spec, t).map_err(|e| e.to_string());
                    let e1 = exp(&one)?;
                    let back = star_log(&e1, &spec, winding(&h)).map_err(|e| e.to_string())?;
                    report.record(format!("{tag} Ln Exp"), &back.sub(&h));
                    let relogged = star_exp(&back, &spec, &one).map_err(|e| e.to_string())?;
                    report.record(format!("{tag} Exp Ln"), &relogged.sub(&e1));
                    for (t, s) in [(1, 1), (1, -1), (2, 3)] {
                        let (t, s) = (rat(t, 1), rat(s, 1));
                        let lhs = exp(&(t.clone() + s.clone()))?;
                        let rhs = spec.star(&exp(&t)?, &exp(&s)?).map_err(|e| e.to_string())?;
                        report.record(format!("{tag} group law t={t} t'={s}"), &lhs.sub(&rhs));
                    }
                    let f = random::global_series(&mut rng, c);
                    let conj = spec.star(&spec.star(&e1, &f).map_err(|e| e.to_string())?, &exp(&rat(-1, 1))?).map_err(|e| e.to_string())?;
                    report.record(format!("{tag} e^ad"), &exp_ad(&h, &f, &spec).map_err(|e| e.to_string())?.sub(&conj));
                    let b = head_series(&mut rng, c, trig);
                    let route1 = bch_compose(&h, &b, &spec).map_err(|e| e.to_string())?;
                    let route2 = bch_series(&h, &b, &spec).map_err(|e| e.to_string())?;
                    report.record(format!("{tag} BCH routes"), &route1.sub(&route2));
                }
            }
        }
    }
    finish(report)
}

fn criterion_6() -> Outcome {
    let mut report = CheckReport::new("quantum cocycle");
    for m in [0, 1, 2] {
        let spec = magnetic(3, m, rat(1, 2));
        let free = spec.unmagnetized();
        let c = spec.ctx();
        let dt = DeformedTransition::classical(spec.bundle().unwrap(), c).map_err(|e| e.to_string())?;
        report.absorb(verify_quantum_cocycle(&dt, &free).map_err(|e| e.to_string())?);
        report.absorb(unitary_cocycle_check(&dt, &free).map_err(|e| e.to_string())?);
        let (a, b) = (0, 4);
        let bad = dt.perturbed(a, b).map_err(|e| e.to_string())?;
        let cocycle = verify_quantum_cocycle(&bad, &free).map_err(|e| e.to_string())?;
        let unitary = unitary_cocycle_check(&bad, &free).map_err(|e| e.to_string())?;
        report.record_bool(format!("m={m} 1+λ cocycle fails at λ¹"), cocycle.first_failing_order() == Some(1));
        report.record_bool(format!("m={m} 1+λ unitarity fails at λ¹"), unitary.first_failing_order() == Some(1));
        let phase = c.one().add(&FormalSeries::monomial(Symbol::constant(2, TauScalar::i()), 1, 3));
        let bad2 = dt.perturbed_by(a, b, &phase).map_err(|e| e.to_string())?;
        let unitary2 = unitary_cocycle_check(&bad2, &free).map_err(|e| e.to_string())?;
        report.record_bool(format!("m={m} 1+iλ unitarity fails at λ²"), unitary2.first_failing_order() == Some(2));
    }
    finish(report)
}

fn sqrt_run(seed: u64) -> Result<String, String> {
    let mut out = String::new();
    let mut rng = random::rng(seed);
    for size in [1, 2] {
        for dim in [1, 2] {
            let spec = StarProductSpec::weyl(ctx(3, dim));
            for _ in 0..5 {
                let h = random::hermitian_matrix_series(&mut rng, size, spec.ctx());
                let u = hermitian_sqrt(&h, &spec).map_err(|e| e.to_string())?;
                let uu = mat_star(&mat_adjoint(&u), &u, &spec).map_err(|e| e.to_string())?;
                if uu != h {
                    return Err(format!("U*⋆U ≠ H for {h}"));
                }
                if u.coeff(0) != &MatrixSymbol::identity(size, dim) {
                    return Err("U₀ ≠ id".into());
                }
                out.push_str(&format!("{u}\n"));
            }
        }
    }
    Ok(out)
}

fn criterion_7() -> Outcome {
    let first = sqrt_run(7)?;
    let second = sqrt_run(7)?;
    if first.as_bytes() != second.as_bytes() {
        return Err("reruns differ".into());
    }
    Ok(format!("20 matrices, {} bytes identical across runs", first.len()))
}

fn criterion_8() -> Outcome {
    let mut report = CheckReport::new("representations");
    let mut rng = random::rng(8);
    for i in 0..30 {
        let dim = 1 + i % 2;
        let c = ctx(3, dim);
        let f = random::global_series(&mut rng, c);
        let g = random::global_series(&mut rng, c);
        let u = random::wave_series(&mut rng, c);
        let v = random::wave_series(&mut rng, c);
        for k in [Rational::zero(), rat(1, 2)] {
            let lhs = rho_kappa(&star_kappa(&f, &g, &k).map_err(|e| e.to_string())?, &u, &k).map_err(|e| e.to_string())?;
            let rhs = rho_kappa(&f, &rho_kappa(&g, &u, &k).map_err(|e| e.to_string())?, &k).map_err(|e| e.to_string())?;
            report.record(format!("hom kappa={k} #{i}"), &lhs.sub(&rhs));
        }
        report.record(format!("adjoint #{i}"), &adjoint_residual(&f, &u, &v, &rat(1, 2)).map_err(|e| e.to_string())?);
    }
    let c1 = ctx(3, 1);
    let f = c1.lift(Symbol::p(1, 0).mul(&Symbol::exp_freq(1, &[1])));
    let witness = adjoint_residual(&f, &c1.one(), &c1.lift(Symbol::exp_freq(1, &[1])), &Rational::zero()).map_err(|e| e.to_string())?;
    report.record_bool(format!("kappa=0 counterexample f=p·e₁: residual {witness}"), !witness.is_zero());
    let spec = magnetic(3, 1, rat(1, 2));
    let c = spec.ctx();
    let shape = SymbolShape { max_terms: 2, ..SymbolShape::default() };
    for i in 0..5 {
        let f = random::series(&mut rng, c, shape);
        let g = random::series(&mut rng, c, shape);
        let s = random::series(&mut rng, c, shape);
        let t = random::series(&mut rng, c, shape);
        let u = random::wave_series(&mut rng, c);
        let v = random::wave_series(&mut rng, c);
        let patch = rng.gen_range(0..9);
        let err = |e: starform::Error| e.to_string();
        report.absorb(eta_globality_check(&f, &u, patch, &spec).map_err(err)?);
        report.absorb(rieffel_globality_check(&s, &u, patch, &spec).map_err(err)?);
        let fg = spec.star_on(&f, &g, patch).map_err(err)?;
        let eta = eta_weyl(&fg, &u, patch, &spec).map_err(err)?;
        let eta2 = eta_weyl(&f, &eta_weyl(&g, &u, patch, &spec).map_err(err)?, patch, &spec).map_err(err)?;
        report.record(format!("eta hom #{i}"), &eta.sub(&eta2));
        report.record(format!("balancing #{i}"), &balancing_residual(&s, &f, &u, patch, &spec).map_err(err)?);
        report.record(format!("isometry #{i}"), &isometry_residual(&s, &u, &t, &v, patch, &spec).map_err(err)?);
        report.absorb(intertwiner_check(&f, &s, &u, patch, &spec).map_err(err)?);
    }
    finish(report)
}

fn criterion_9() -> Outcome {
    let mut report = CheckReport::new("picard");
    let base = CharClass::new(Rational::one(), FormalSeries::monomial(TauScalar::from(rat(1, 3)), 1, 2));
    for m in -3..=3 {
        for n in -3..=3 {
            let lhs = picard_action(&picard_action(&base, &rat(n, 1)), &rat(m, 1));
            report.record_bool(format!("Φ_{m}∘Φ_{n}"), lhs == picard_action(&base, &rat(m + n, 1)));
        }
        let shift = picard_action(&base, &rat(m, 1)).difference(&base);
        let class = relative_class_of(m, &rat(1, 2), 2)?;
        let predicted = FormalSeries::constant(TauScalar::tau().scale(&class), 2);
        report.record_bool(format!("m={m} class {} vs Φ shift", fmt_rational(&class)), shift == predicted);
    }
    finish(report)
}

fn seeded_report(seed: u64) -> Result<String, String> {
    let mut rng = random::rng(seed);
    let c = ctx(3, 2);
    let spec = StarProductSpec::weyl(c);
    let mut assoc = CheckReport::new("associativity");
    for i in 0..5 {
        let [f, g, h] = [0, 1, 2].map(|_| random::global_series(&mut rng, c));
        let lhs = spec.star(&spec.star(&f, &g).map_err(|e| e.to_string())?, &h).map_err(|e| e.to_string())?;
        let rhs = spec.star(&f, &spec.star(&g, &h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        assoc.record(format!("#{i}"), &lhs.sub(&rhs));
    }
    let class = relative_class(&magnetic(2, 1, rat(1, 3))).map_err(|e| e.to_string())?;
    let u = hermitian_sqrt(&random::hermitian_matrix_series(&mut rng, 2, c), &spec).map_err(|e| e.to_string())?;
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "associativity": assoc,
        "relative_class": class.to_json(),
        "hermitian_sqrt": u.to_string(),
    });
    serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let a = seeded_report(10)?;
    let b = seeded_report(10)?;
    if a != b {
        return Err("reports differ between runs".into());
    }
    Ok(format!("{} bytes identical", a.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("relative class equals the charge", criterion_1),
        ("Dirac integrality", criterion_2),
        ("associativity, 100 triples per product at N=4", criterion_3),
        ("semiclassical limit, 50 pairs", criterion_4),
        ("exp/log suite at N=4", criterion_5),
        ("quantum cocycle and unitarity", criterion_6),
        ("Hermitian square root at N=3", criterion_7),
        ("representations at N=3, m=1", criterion_8),
        ("Picard action", criterion_9),
        ("deterministic JSON", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [exact] ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [exact] ({secs:.1}s)\n{detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
