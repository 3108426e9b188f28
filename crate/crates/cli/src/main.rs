use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use starform::cech::{build_torus_cover, dirac_check, monopole_bundle, morita_equivalent, relative_class};
use starform::hermitian::conj_series;
use starform::random;
use starform::report::{CheckReport, SCHEMA_VERSION};
use starform::reps::*;
use starform::scalars::{fmt_rational, parse_rational, rat};
use starform::starprod::poisson_bracket;
use starform::{FormalSeries, Rational, StarProductSpec, Symbol, SymbolSeries, TauScalar, TruncationContext};

#[derive(Parser)]
#[command(name = "starform", version, about = "Exact star products, relative classes and representations on T*Tⁿ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized associativity, unit, semiclassical and Hermitian checks.
    Assoc(AssocArgs),
    /// Čech class of the magnetic product relative to the free one.
    RelativeClass(RunConfig),
    /// Dirac integrality and the Morita verdict for a monopole charge.
    Dirac(RunConfig),
    /// Schrödinger representation, induced representation and intertwiner.
    Reps(RunConfig),
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Truncation order N in λ.
    #[arg(long, env = "STARFORM_ORDER", default_value_t = 3)]
    order: usize,
    /// Configuration-space dimension n (1 or 2).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Ordering parameter κ, as "a/b".
    #[arg(long, default_value = "1/2", value_parser = rational)]
    kappa: Rational,
    /// Monopole charge m.
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    charge: Rational,
    /// Seed for the random test data.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AssocArgs {
    #[command(flatten)]
    config: RunConfig,
    /// Random triples per product.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Negate the λ¹ part of every product (negative control).
    #[arg(long, hide = true)]
    inject_sign_bug: bool,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s}"))
}

/// A usage problem (exit 2) or a library error surfaced as one.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<Report, UsageError>;

struct Report {
    command: &'static str,
    config: Value,
    checks: Vec<CheckReport>,
    extra: Value,
    notes: Vec<String>,
}

impl Report {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn to_json(&self) -> Value {
        let mut checks = self.checks.clone();
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "passed": self.passed(),
            "checks": checks,
            "result": self.extra,
            "notes": self.notes,
        })
    }

    fn render_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, if self.passed() { "pass" } else { "FAIL" });
        let mut checks: Vec<&CheckReport> = self.checks.iter().collect();
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        for c in checks {
            out.push_str(&format!("{c}\n"));
        }
        if let Value::Object(map) = &self.extra {
            for (k, v) in map {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

impl RunConfig {
    fn ctx(&self) -> Result<TruncationContext, UsageError> {
        if !(1..=2).contains(&self.dim) {
            return Err(UsageError(format!("--dim must be 1 or 2, got {}", self.dim)));
        }
        Ok(TruncationContext::new(self.order, self.dim)?)
    }

    fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "dim": self.dim,
            "kappa": fmt_rational(&self.kappa),
            "charge": fmt_rational(&self.charge),
            "seed": self.seed,
        })
    }

    fn magnetic(&self, ctx: TruncationContext) -> Result<StarProductSpec, UsageError> {
        if ctx.dim != 2 {
            return Err(UsageError("the monopole bundle lives on T², use --dim 2".into()));
        }
        let cover = Arc::new(build_torus_cover(2)?);
        let bundle = Arc::new(monopole_bundle(&self.charge, cover)?);
        Ok(StarProductSpec::magnetic(ctx, self.kappa.clone(), bundle)?)
    }
}

fn sign_bug(f: SymbolSeries) -> SymbolSeries {
    let mut f = f;
    if f.order() >= 1 {
        *f.coeff_mut(1) = f.coeff(1).neg();
    }
    f
}

fn cmd_assoc(args: &AssocArgs) -> Run {
    let cfg = &args.config;
    let ctx = cfg.ctx()?;
    let mut specs = vec![StarProductSpec::standard(ctx), StarProductSpec::weyl(ctx)];
    if cfg.kappa != Rational::from_integer(0.into()) && cfg.kappa != rat(1, 2) {
        specs.push(StarProductSpec::kappa_ordered(ctx, cfg.kappa.clone()));
    }
    if ctx.dim == 2 {
        specs.push(cfg.magnetic(ctx)?);
    }
    let star = |spec: &StarProductSpec, f: &SymbolSeries, g: &SymbolSeries| -> Result<SymbolSeries, UsageError> {
        let p = spec.star(f, g)?;
        Ok(if args.inject_sign_bug { sign_bug(p) } else { p })
    };
    let mut rng = random::rng(cfg.seed);
    let mut assoc = CheckReport::new("associativity");
    let mut unit = CheckReport::new("unit");
    let mut semi = CheckReport::new("semiclassical");
    let mut herm = CheckReport::new("hermitian");
    for spec in &specs {
        let name = spec.describe();
        for i in 0..args.count {
            let [f, g, h] = [0, 1, 2].map(|_| random::global_series(&mut rng, ctx));
            let tag = format!("{name} #{i}");
            let lhs = star(spec, &star(spec, &f, &g)?, &h)?;
            let rhs = star(spec, &f, &star(spec, &g, &h)?)?;
            assoc.record(&tag, &lhs.sub(&rhs));
            unit.record(&tag, &star(spec, &ctx.one(), &f)?.sub(&f).add(&star(spec, &f, &ctx.one())?.sub(&f)));
            let fg = star(spec, &f, &g)?;
            let gf = star(spec, &g, &f)?;
            let (f0, g0) = (f.coeff(0), g.coeff(0));
            let mut residual = FormalSeries::zero(ctx.order, &Symbol::zero(ctx.dim));
            *residual.coeff_mut(0) = fg.coeff(0).sub(&f0.mul(g0));
            if ctx.order >= 1 {
                let cross = f.coeff(1).mul(g0).sub(&g0.mul(f.coeff(1)));
                let bracket = poisson_bracket(f0, g0).scale(&TauScalar::i());
                *residual.coeff_mut(1) = fg.sub(&gf).coeff(1).sub(&cross).sub(&bracket);
            }
            semi.record(&tag, &residual);
            if spec.is_weyl() {
                let lhs = conj_series(&fg);
                let rhs = star(spec, &conj_series(&g), &conj_series(&f))?;
                herm.record(&tag, &lhs.sub(&rhs));
            }
        }
    }
    let products: Vec<String> = specs.iter().map(StarProductSpec::describe).collect();
    Ok(Report {
        command: "assoc",
        config: cfg.to_json(),
        checks: vec![assoc, unit, semi, herm],
        extra: json!({ "products": products, "count": args.count }),
        notes: Vec::new(),
    })
}

fn cmd_relative_class(cfg: &RunConfig) -> Run {
    let ctx = cfg.ctx()?;
    if ctx.order < 2 {
        return Err(UsageError("class computations need --order 2 or more".into()));
    }
    let spec = cfg.magnetic(ctx)?;
    let class = relative_class(&spec)?;
    let value = class.class().cloned();
    let mut check = CheckReport::new("class-equals-charge");
    check.record_bool(format!("m={}", fmt_rational(&cfg.charge)), value.as_ref() == Some(&cfg.charge));
    let integral = value.as_ref().map(|c| c.is_integer()).unwrap_or(false);
    Ok(Report {
        command: "relative-class",
        config: cfg.to_json(),
        checks: vec![check],
        extra: json!({
            "class": value.as_ref().map(fmt_rational),
            "integral": integral,
            "cech": class.to_json(),
        }),
        notes: Vec::new(),
    })
}

fn cmd_dirac(cfg: &RunConfig) -> Run {
    let b = FormalSeries::constant(TauScalar::two_pi().scale(&cfg.charge), cfg.order);
    let report = dirac_check(&b)?;
    let free = FormalSeries::zero(cfg.order, &TauScalar::zero());
    let morita = morita_equivalent(&b, &free)?;
    let mut check = CheckReport::new("dirac-integrality");
    check.record_bool(format!("m={}", fmt_rational(&cfg.charge)), report.integral);
    let charges: Vec<String> = report.charges.iter().map(fmt_rational).collect();
    Ok(Report {
        command: "dirac",
        config: cfg.to_json(),
        checks: vec![check],
        extra: json!({ "integral": report.integral, "morita_equivalent": morita, "charges": charges }),
        notes: Vec::new(),
    })
}

fn cmd_reps(cfg: &RunConfig) -> Run {
    let ctx = cfg.ctx()?;
    let spec = cfg.magnetic(ctx)?;
    if !spec.is_weyl() {
        return Err(UsageError("the induced representation uses Weyl ordering, pass --kappa 1/2".into()));
    }
    let mut rng = random::rng(cfg.seed);
    let mut hom = CheckReport::new("rho-homomorphism");
    let mut adjoint = CheckReport::new("rho-adjoint");
    let mut eta = CheckReport::new("eta-homomorphism");
    let mut globality = CheckReport::new("globality");
    let mut balancing = CheckReport::new("balancing");
    let mut isometry = CheckReport::new("isometry");
    let mut intertwiner = CheckReport::new("intertwiner");
    let mut notes = Vec::new();
    let w = rat(1, 2);
    for i in 0..3 {
        let [f, g, s, t] = [0, 1, 2, 3].map(|_| random::global_series(&mut rng, ctx));
        let [u, v] = [0, 1].map(|_| random::wave_series(&mut rng, ctx));
        let tag = format!("#{i}");
        let lhs = rho_weyl(&spec.unmagnetized().star(&f, &g)?, &u)?;
        hom.record(&tag, &lhs.sub(&rho_weyl(&f, &rho_weyl(&g, &u)?)?));
        adjoint.record(&tag, &adjoint_residual(&f, &u, &v, &w)?);
        let patch = i * 4;
        let fg = spec.star_on(&f, &g, patch)?;
        let e = eta_weyl(&fg, &u, patch, &spec)?.sub(&eta_weyl(&f, &eta_weyl(&g, &u, patch, &spec)?, patch, &spec)?);
        eta.record(&tag, &e);
        globality.absorb(eta_globality_check(&f, &u, patch, &spec)?);
        globality.absorb(rieffel_globality_check(&s, &u, patch, &spec)?);
        balancing.record(&tag, &balancing_residual(&s, &f, &u, patch, &spec)?);
        isometry.record(&tag, &isometry_residual(&s, &u, &t, &v, patch, &spec)?);
        intertwiner.absorb(intertwiner_check(&f, &s, &u, patch, &spec)?);
    }
    let c1 = TruncationContext::new(ctx.order, 1)?;
    let f = c1.lift(Symbol::p(1, 0).mul(&Symbol::exp_freq(1, &[1])));
    let witness = adjoint_residual(&f, &c1.one(), &c1.lift(Symbol::exp_freq(1, &[1])), &Rational::from_integer(0.into()))?;
    let expected_failure = json!({
        "check": "rho-adjoint kappa=0",
        "witness": "f = p·e₁, u = 1, v = e₁",
        "fails": !witness.is_zero(),
        "residual": witness.to_string(),
    });
    if cfg.charge == Rational::from_integer(0.into()) {
        let f = random::global_series(&mut rng, ctx);
        let u = random::wave_series(&mut rng, ctx);
        let mut reduce = CheckReport::new("eta-reduces-to-rho");
        reduce.record("m=0", &eta_weyl(&f, &u, 0, &spec)?.sub(&rho_weyl(&f, &u)?));
        notes.push("charge 0: the induced representation reduces to the Schrödinger representation".into());
        globality.absorb(reduce);
    }
    Ok(Report {
        command: "reps",
        config: cfg.to_json(),
        checks: vec![hom, adjoint, eta, globality, balancing, isometry, intertwiner],
        extra: json!({ "expected_failure": expected_failure }),
        notes,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, json_out) = match &cli.command {
        Command::Assoc(a) => (cmd_assoc(a), a.config.json),
        Command::RelativeClass(c) => (cmd_relative_class(c), c.json),
        Command::Dirac(c) => (cmd_dirac(c), c.json),
        Command::Reps(c) => (cmd_reps(c), c.json),
    };
    match run {
        Ok(report) => {
            let text = if json_out {
                serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n"
            } else {
                report.render_text()
            };
            // A closed pipe downstream is not a failure of the checks.
            let _ = std::io::stdout().write_all(text.as_bytes());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
