mod expr;
mod output;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use qgw::acceptance::{self, Level};
use qgw::dkq;
use qgw::double::{Dbl, DblJson};
use qgw::modules::{self, clebsch_gordan, irreducible, mat_to_text};
use qgw::okq::Pw;
use qgw::plancherel;
use qgw::principal::{self, Legs, SectionSpace};
use qgw::sample::Sampler;
use qgw::uq::{self, parse, Mono, Tensor};
use qgw::{Error, ExactCtx, HalfInt, Lambda, Num, NumericCtx, Pbw, RatFunc, Scalar};

use expr::parse_pw;
use output::{pretty_complex, pretty_mat, Format, Report};

#[derive(Parser)]
#[command(name = "qgw", version, about = "Exact and numeric computations for U_q(sl2), SU_q(2) and SL_q(2,C)")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Config {
    /// Scalar field: exact rational functions in v = q^(1/2), or complex floats at a fixed q.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Deformation parameter for numeric mode, as a decimal or a fraction such as 3/4.
    #[arg(long, global = true, default_value = "1/2")]
    q: String,
    #[arg(long, global = true, default_value_t = acceptance::SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    output: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Numeric,
}

impl Config {
    fn numeric(&self) -> qgw::Result<NumericCtx> {
        NumericCtx::new(parse_q(&self.q)?)
    }
}

fn parse_q(s: &str) -> qgw::Result<f64> {
    let bad = || Error::InvalidArgument(format!("--q: not a number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the PBW normal form of a U_q(sl2) expression.
    Normalize { expr: String },
    /// Matrices of E, F, K on the irreducible V(m).
    Repr {
        #[arg(long)]
        m: HalfInt,
    },
    /// Decomposition of V(m) ⊗ V(m').
    Cg {
        #[arg(long)]
        m: HalfInt,
        #[arg(long)]
        mprime: HalfInt,
    },
    /// Coassociativity, counit, antipode and star checks on seeded random elements.
    CheckHopf {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        terms: usize,
    },
    /// Defining relations on V(m) for every spin up to --m.
    CheckRelations {
        #[arg(long, default_value = "4")]
        m: HalfInt,
    },
    /// Haar state of an O(K_q) expression and its invariance residual.
    Haar {
        #[arg(long)]
        expr: String,
    },
    /// Fourier transform of an O(K_q) expression.
    Fourier {
        #[arg(long)]
        expr: String,
    },
    /// Compare <f, g> with the weighted Plancherel sum over spins.
    PeterWeyl {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_enum, default_value_t = Weight::Qdim)]
        weight: Weight,
    },
    #[command(subcommand)]
    Double(DoubleCmd),
    #[command(subcommand)]
    Principal(PrincipalCmd),
    #[command(subcommand)]
    Plancherel(PlancherelCmd),
    /// Run the acceptance criteria.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    /// Weight dim_q(m).
    Qdim,
    /// Weight 1/dim_q(m).
    InverseQdim,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum DoubleCmd {
    /// Product of two elements given as JSON (inline or @file).
    Mul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    #[command(subcommand)]
    Check(DoubleCheck),
}

#[derive(Subcommand)]
enum DoubleCheck {
    /// Compatibility of the principal series pair on a section space.
    Yd {
        #[arg(long, default_value = "0")]
        mu: HalfInt,
        #[arg(long, default_value = "-1")]
        lambda: String,
        #[arg(long, default_value = "2")]
        window: HalfInt,
    },
}

#[derive(Subcommand)]
enum PrincipalCmd {
    /// Matrix of π_{μ,λ}(a) on the section space up to --window.
    Op {
        #[arg(long)]
        mu: HalfInt,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        window: HalfInt,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Subcommand)]
enum PlancherelCmd {
    /// Quadrature of the trace integral for a special element, compared with its counit.
    Verify {
        #[arg(long, default_value = "0.5")]
        q: String,
        #[arg(long)]
        m: HalfInt,
        #[arg(long)]
        mprime: HalfInt,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long = "N", default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value = "4")]
        window: HalfInt,
        #[arg(long, default_value_t = acceptance::PLANCHEREL_TOL)]
        tol: f64,
        /// Same as --output json.
        #[arg(long)]
        json: bool,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Normalize { .. } => "normalize",
            Cmd::Repr { .. } => "repr",
            Cmd::Cg { .. } => "cg",
            Cmd::CheckHopf { .. } => "check-hopf",
            Cmd::CheckRelations { .. } => "check-relations",
            Cmd::Haar { .. } => "haar",
            Cmd::Fourier { .. } => "fourier",
            Cmd::PeterWeyl { .. } => "peter-weyl",
            Cmd::Double(DoubleCmd::Mul { .. }) => "double mul",
            Cmd::Double(DoubleCmd::Check(_)) => "double check yd",
            Cmd::Principal(_) => "principal op",
            Cmd::Plancherel(_) => "plancherel verify",
            Cmd::Selftest { .. } => "selftest",
        }
    }
}

/// Runs `$body` with `$ctx` and the scalar type `$F` chosen by `--mode`.
macro_rules! with_scalar {
    ($cfg:expr, |$ctx:ident, $F:ident| $body:expr) => {
        match $cfg.mode {
            Mode::Exact => {
                type $F = RatFunc;
                let $ctx = &ExactCtx;
                $body
            }
            Mode::Numeric => {
                type $F = Num;
                let $ctx = &$cfg.numeric()?;
                $body
            }
        }
    };
}

/// Residual tolerance: exact mode demands structural equality.
fn tolerance(mode: Mode) -> f64 {
    match mode {
        Mode::Exact => 0.0,
        Mode::Numeric => 1e-10,
    }
}

fn parse_lambda(s: &str, mode: Mode) -> qgw::Result<Lambda> {
    if let Ok(h) = HalfInt::from_str(s) {
        return Ok(Lambda::Half(h));
    }
    if mode == Mode::Exact {
        return Err(Error::InvalidArgument(format!("--lambda {s:?}: exact mode needs a half-integer")));
    }
    Complex64::from_str(s).map(Lambda::Complex).map_err(|_| Error::InvalidArgument(format!("--lambda: not a complex number: {s:?}")))
}

fn read_json<T: serde::de::DeserializeOwned>(flag: &str, arg: &str) -> qgw::Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{flag}: {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{flag}: {e}")))
}

fn text<F: Scalar>(x: &F) -> Value {
    Value::String(x.to_text())
}

fn normalize<F: Scalar>(ctx: &F::Ctx, input: &str) -> qgw::Result<Report> {
    let x: Pbw<F> = parse(ctx, input)?;
    let nf = x.to_string();
    Ok(Report::ok(json!({ "input": input, "normal_form": nf }), nf))
}

fn repr<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> qgw::Result<Report> {
    let v = irreducible::<F>(ctx, m)?;
    let pretty = format!("V({m}), weights {:?}\nE =\n{}\nF =\n{}\nK =\n{}", v.weights, pretty_mat(&v.e), pretty_mat(&v.f), pretty_mat(&v.k));
    let mut rows = vec![vec!["generator".into(), "row".into(), "col".into(), "value".into()]];
    for (g, a) in [("E", &v.e), ("F", &v.f), ("K", &v.k)] {
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                rows.push(vec![g.into(), i.to_string(), j.to_string(), a[(i, j)].to_text()]);
            }
        }
    }
    Ok(Report::ok(serde_json::to_value(v.to_json()).unwrap(), pretty).with_csv(rows))
}

fn cg<F: Scalar>(ctx: &F::Ctx, m: HalfInt, mp: HalfInt, tol: f64) -> qgw::Result<Report> {
    let d = clebsch_gordan::<F>(ctx, m, mp)?;
    let module = modules::tensor(&irreducible::<F>(ctx, m)?, &irreducible::<F>(ctx, mp)?);
    let completeness = d.completeness_residual();
    let intertwining = d.intertwining_residual(ctx, &module)?;
    let summands: Vec<Value> =
        d.summands.iter().map(|s| json!({ "spin": s.spin.to_string(), "iota": mat_to_text(&s.iota), "proj": mat_to_text(&s.proj) })).collect();
    let spins: Vec<String> = d.spins().iter().map(|s| s.to_string()).collect();
    let value = json!({ "m": m.to_string(), "mprime": mp.to_string(), "spins": spins, "completeness_residual": completeness, "intertwining_residual": intertwining, "summands": summands });
    let mut pretty = format!("V({m}) ⊗ V({mp}) = {}\n", spins.iter().map(|s| format!("V({s})")).collect::<Vec<_>>().join(" ⊕ "));
    pretty += &format!("completeness residual {completeness}, intertwining residual {intertwining}");
    let ok = completeness <= tol && intertwining <= tol;
    Ok(Report::check(ok, value, pretty, "decomposition residual above tolerance"))
}

fn check_hopf<F: Scalar>(ctx: &F::Ctx, seed: u64, count: usize, degree: u32, terms: usize, tol: f64) -> qgw::Result<Report> {
    let delta = |m: Mono| uq::coproduct(ctx, &Pbw::term(m, F::one()));
    let eps_leg = |t: &Tensor<F>, i: usize| t.map_leg(i, |m| Tensor::one(0).scale(&uq::counit(&Pbw::term(m, F::one())))).into_pbw();
    let mut s = Sampler::new(seed);
    let mut failure = None;
    for n in 0..count {
        let x: Pbw<F> = s.pbw(degree, terms);
        let dx = uq::coproduct(ctx, &x);
        let unit = Pbw::scalar(uq::counit(&x));
        let ss = |a: &Pbw<F>| uq::antipode(ctx, &uq::star(ctx, a));
        let checks: [(&str, bool); 6] = [
            ("coassociativity", dx.map_leg(0, delta).approx_eq(&dx.map_leg(1, delta), tol)),
            ("left counit", eps_leg(&dx, 0).approx_eq(&x, tol)),
            ("right counit", eps_leg(&dx, 1).approx_eq(&x, tol)),
            ("m(S ⊗ id)Δ = ε", dx.map_leg_pbw(0, |a| uq::antipode(ctx, a)).multiply_legs(ctx).approx_eq(&unit, tol)),
            ("m(id ⊗ S)Δ = ε", dx.map_leg_pbw(1, |a| uq::antipode(ctx, a)).multiply_legs(ctx).approx_eq(&unit, tol)),
            ("(S ∘ *)^2 = id", ss(&ss(&x)).approx_eq(&x, tol)),
        ];
        if let Some((name, _)) = checks.iter().find(|c| !c.1) {
            failure = Some(json!({ "sample": n, "check": name, "element": x.to_string() }));
            break;
        }
    }
    let ok = failure.is_none();
    let pretty = match &failure {
        None => format!("{count} elements (seed {seed}, degree <= {degree}): all Hopf axioms hold"),
        Some(f) => format!("counterexample: {f}"),
    };
    let value = json!({ "seed": seed, "count": count, "degree": degree, "ok": ok, "counterexample": failure });
    Ok(Report::check(ok, value, pretty, "Hopf axiom failed"))
}

fn check_relations<F: Scalar>(ctx: &F::Ctx, max: HalfInt, tol: f64) -> qgw::Result<Report> {
    let mut rows = Vec::new();
    let mut first_bad = None;
    for m in HalfInt::spins_up_to(max) {
        let r = irreducible::<F>(ctx, m)?.check_relations(ctx, None);
        if first_bad.is_none() && r.max_residual() > tol {
            let (name, res) = r.checks.iter().find(|c| c.1 > tol).unwrap();
            first_bad = Some(json!({ "m": m.to_string(), "relation": name, "residual": res }));
        }
        rows.push(json!({ "m": m.to_string(), "max_residual": r.max_residual() }));
    }
    let ok = first_bad.is_none();
    let pretty = rows.iter().map(|r| format!("V({}): max residual {}", r["m"].as_str().unwrap(), r["max_residual"])).collect::<Vec<_>>().join("\n");
    Ok(Report::check(ok, json!({ "spins": rows, "counterexample": first_bad }), pretty, "relation residual above tolerance"))
}

fn haar<F: Scalar>(ctx: &F::Ctx, input: &str, tol: f64) -> qgw::Result<Report> {
    let a: Pw<F> = parse_pw(ctx, input)?;
    let h = dkq::haar(&a);
    let residual = dkq::haar_invariance_residual(&a);
    let value = json!({ "input": input, "haar": text(&h), "invariance_residual": residual });
    Ok(Report::check(residual <= tol, value, format!("φ = {}\ninvariance residual {residual}", h.to_pretty()), "invariance residual above tolerance"))
}

fn fourier<F: Scalar>(ctx: &F::Ctx, input: &str, tol: f64) -> qgw::Result<Report> {
    let a: Pw<F> = parse_pw(ctx, input)?;
    let x = dkq::fourier(ctx, &a);
    let back = dkq::fourier_inv(ctx, &x)?;
    let round_trip = back.approx_eq(&a, tol);
    let mut pretty = String::new();
    for (m, mat) in x.components() {
        pretty += &format!("spin {m}:\n{}\n", pretty_mat(mat));
    }
    pretty += &format!("inverse transform recovers the input: {round_trip}");
    let mut value = serde_json::to_value(x.to_json()).unwrap();
    value["round_trip"] = json!(round_trip);
    Ok(Report::check(round_trip, value, pretty, "inverse transform does not recover the input"))
}

fn peter_weyl<F: Scalar>(ctx: &F::Ctx, f: &str, g: &str, weight: Weight, tol: f64) -> qgw::Result<Report> {
    let (a, b): (Pw<F>, Pw<F>) = (parse_pw(ctx, f)?, parse_pw(ctx, g)?);
    let lhs = dkq::inner(ctx, &a, &b);
    let rhs = match weight {
        Weight::Qdim => dkq::peter_weyl_sum(ctx, &a, &b, |m| dkq::qdim(ctx, m)),
        Weight::InverseQdim => dkq::peter_weyl_sum(ctx, &a, &b, |m| dkq::qdim::<F>(ctx, m).inv().unwrap()),
    };
    let ok = lhs.approx_eq(&rhs, tol) && (tol > 0.0 || lhs == rhs);
    let w = match weight {
        Weight::Qdim => "qdim",
        Weight::InverseQdim => "inverse-qdim",
    };
    let value = json!({ "f": f, "g": g, "weight": w, "inner": text(&lhs), "sum": text(&rhs), "holds": ok });
    let pretty = format!("<f, g> = {}\nsum   = {}\nequal: {ok}", lhs.to_pretty(), rhs.to_pretty());
    Ok(Report::check(ok, value, pretty, "inner product and weighted sum differ"))
}

fn double_mul<F: Scalar>(ctx: &F::Ctx, a: &str, b: &str) -> qgw::Result<Report> {
    let x = Dbl::<F>::from_json(&read_json::<DblJson>("--a", a)?)?;
    let y = Dbl::<F>::from_json(&read_json::<DblJson>("--b", b)?)?;
    let p = x.mul(ctx, &y).to_json();
    let value = serde_json::to_value(&p).unwrap();
    Ok(Report::ok(value.clone(), serde_json::to_string_pretty(&value).unwrap()))
}

fn yd<F: Scalar>(ctx: &F::Ctx, mu: HalfInt, lambda: Lambda, window: HalfInt, tol: f64) -> qgw::Result<Report> {
    let space = SectionSpace::new(mu, window)?;
    let r = principal::yd_report::<F>(ctx, &space, lambda, Legs::SELECTED, &acceptance::yd_elements(ctx), &acceptance::generators(ctx), tol)?;
    let pretty = format!("ok {}, {} checks, residual {}{}", r.ok, r.checked, r.residual, r.counterexample.as_ref().map(|c| format!("\ncounterexample: {c}")).unwrap_or_default());
    let ok = r.ok;
    Ok(Report::check(ok, serde_json::to_value(r).unwrap(), pretty, "compatibility fails"))
}

fn principal_op<F: Scalar>(ctx: &F::Ctx, mu: HalfInt, lambda: Lambda, window: HalfInt, input: &str) -> qgw::Result<Report> {
    let space = SectionSpace::new(mu, window)?;
    let a: Pw<F> = parse_pw(ctx, input)?;
    let op = principal::pi_pw(ctx, &space, lambda, &a, Legs::SELECTED)?;
    let j = op.to_json(&space);
    let pretty = format!("spins {:?}, growth {}, exact columns {:?}\n{}", j.spins, j.growth, j.interior, pretty_mat(&op.mat));
    let csv = j.matrix.clone();
    Ok(Report::ok(serde_json::to_value(j).unwrap(), pretty).with_csv(csv))
}

fn threads() -> usize {
    std::env::var("QGW_THREADS").ok().and_then(|s| s.parse().ok()).filter(|&n| n > 0).unwrap_or(0)
}

fn selftest(level: Level) -> qgw::Result<Report> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()).build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let ids: Vec<u32> = acceptance::ids().collect();
    let outcomes = pool.install(|| ids.par_iter().map(|&id| acceptance::run(id, level)).collect::<qgw::Result<Vec<_>>>())?;
    let ok = outcomes.iter().all(|o| o.pass || o.known_failure);
    let pretty = outcomes.iter().map(|o| o.line()).collect::<Vec<_>>().join("\n");
    let rows: Vec<Value> =
        outcomes.iter().map(|o| json!({ "id": o.id, "name": o.name, "pass": o.pass, "known_failure": o.known_failure, "detail": o.detail })).collect();
    let mut csv = vec![vec!["id".into(), "name".into(), "pass".into(), "known_failure".into()]];
    csv.extend(outcomes.iter().map(|o| vec![o.id.to_string(), o.name.clone(), o.pass.to_string(), o.known_failure.to_string()]));
    let value = json!({ "level": level, "seed": acceptance::SEED, "criteria": rows, "ok": ok });
    Ok(Report::check(ok, value, pretty, "acceptance criterion failed").with_csv(csv))
}

fn run(cli: Cli) -> qgw::Result<(Report, Format)> {
    let cfg = cli.cfg;
    let name = cli.cmd.name();
    let tol = tolerance(cfg.mode);
    let mut format = cfg.output;
    let report = match cli.cmd {
        Cmd::Normalize { expr } => with_scalar!(cfg, |ctx, F| normalize::<F>(ctx, &expr))?,
        Cmd::Repr { m } => with_scalar!(cfg, |ctx, F| repr::<F>(ctx, m))?,
        Cmd::Cg { m, mprime } => with_scalar!(cfg, |ctx, F| cg::<F>(ctx, m, mprime, tol))?,
        Cmd::CheckHopf { count, degree, terms } => with_scalar!(cfg, |ctx, F| check_hopf::<F>(ctx, cfg.seed, count, degree, terms, tol))?,
        Cmd::CheckRelations { m } => with_scalar!(cfg, |ctx, F| check_relations::<F>(ctx, m, tol))?,
        Cmd::Haar { expr } => with_scalar!(cfg, |ctx, F| haar::<F>(ctx, &expr, tol))?,
        Cmd::Fourier { expr } => with_scalar!(cfg, |ctx, F| fourier::<F>(ctx, &expr, tol))?,
        Cmd::PeterWeyl { f, g, weight } => with_scalar!(cfg, |ctx, F| peter_weyl::<F>(ctx, &f, &g, weight, tol))?,
        Cmd::Double(DoubleCmd::Mul { a, b }) => with_scalar!(cfg, |ctx, F| double_mul::<F>(ctx, &a, &b))?,
        Cmd::Double(DoubleCmd::Check(DoubleCheck::Yd { mu, lambda, window })) => {
            let lambda = parse_lambda(&lambda, cfg.mode)?;
            with_scalar!(cfg, |ctx, F| yd::<F>(ctx, mu, lambda, window, tol))?
        }
        Cmd::Principal(PrincipalCmd::Op { mu, lambda, window, expr }) => {
            let lambda = parse_lambda(&lambda, cfg.mode)?;
            with_scalar!(cfg, |ctx, F| principal_op::<F>(ctx, mu, lambda, window, &expr))?
        }
        Cmd::Plancherel(PlancherelCmd::Verify { q, m, mprime, i, j, k, l, nodes, window, tol, json }) => {
            if json {
                format = Format::Json;
            }
            let ctx = NumericCtx::new(parse_q(&q)?)?;
            let u = plancherel::special::<Num>(m, i, j, mprime, k, l)?;
            let r = plancherel::verify(&ctx, &u, nodes, window)?;
            let ok = r.abs_error < tol;
            let pretty = format!(
                "q = {}, N = {}, window {}\nintegral   {}\ncounit     {}\nabs error  {:.3e}\nnormalized {} (dual Haar weight {})",
                r.q,
                r.nodes,
                r.window,
                pretty_complex(r.integral),
                pretty_complex(r.epsilon),
                r.abs_error,
                pretty_complex(r.normalized_integral),
                pretty_complex(r.dual_haar)
            );
            Report::check(ok, serde_json::to_value(r).unwrap(), pretty, "integral differs from the counit")
        }
        Cmd::Selftest { level } => selftest(match level {
            LevelArg::Quick => Level::Quick,
            LevelArg::Full => Level::Full,
        })?,
    };
    Ok((report.named(name), format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((report, format)) => report.emit(format),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
