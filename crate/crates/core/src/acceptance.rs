//! The acceptance criteria as runnable checks, shared by the test suite and
//! `qgw selftest`.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dkq::{self, Dk};
use crate::double::Dbl;
use crate::error::Result;
use crate::linalg::Mat;
use crate::modules::{irreducible, verma};
use crate::okq::{self, Coef, Pw};
use crate::plancherel;
use crate::principal::{self, Legs, SectionSpace};
use crate::sample::Sampler;
use crate::scalar::{qnum, ExactCtx, HalfInt, Lambda, Num, NumericCtx, RatFunc, Scalar};
use crate::uq::{self, Mono, Pbw, Tensor};

const C: ExactCtx = ExactCtx;

/// Smallest eigenvalue required of the spin-1/2 Haar Gram matrix.
pub const GRAM_MIN_EIGENVALUE: f64 = 1e-6;
/// Adjointness residual below which `π_{μ,λ}` counts as unitary.
pub const UNITARY_TOL: f64 = 1e-8;
/// Adjointness residual above which `π_{μ,λ}` counts as non-unitary.
pub const NON_UNITARY_MIN: f64 = 1e-2;
pub const PLANCHEREL_TOL: f64 = 1e-8;
pub const QUADRATURE_PLATEAU_TOL: f64 = 1e-12;
pub const PLANCHEREL_MAX_SECONDS: f64 = 300.0;
pub const PERIODICITY_TOL: f64 = 1e-10;
pub const SEED: u64 = 20240601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Reduced sample sizes.
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    /// A criterion whose printed statement does not hold; `detail` says why.
    pub known_failure: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = match (self.pass, self.known_failure) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        format!("criterion {:>2} {status:<12} {} [{:.1}s]: {}", self.id, self.name, self.seconds, self.detail)
    }
}

/// Criteria whose printed statement fails for a documented reason.
pub const KNOWN_FAILURES: &[u32] = &[7];

pub fn ids() -> std::ops::RangeInclusive<u32> {
    1..=11
}

pub fn run(id: u32, level: Level) -> Result<Outcome> {
    let start = Instant::now();
    let (name, pass, detail) = match id {
        1 => relations(),
        2 => commutator_oracle(),
        3 => hopf_axioms(level),
        4 => woronowicz(),
        5 => bgg(),
        6 => haar(),
        7 => peter_weyl(),
        8 => double_suite(level)?,
        9 => unitarity()?,
        10 => plancherel_identity(level)?,
        11 => periodicity()?,
        _ => return Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    };
    Ok(Outcome { id, name: name.into(), pass, known_failure: KNOWN_FAILURES.contains(&id), detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all(level: Level) -> Result<Vec<Outcome>> {
    ids().map(|id| run(id, level)).collect()
}

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn coef_basis(max_twice: i64) -> Vec<Coef> {
    let mut out = Vec::new();
    for t in 0..=max_twice {
        let d = h(t).dim();
        out.extend((0..d * d).map(|c| Coef::new(h(t), c / d, c % d)));
    }
    out
}

fn relations() -> (&'static str, bool, String) {
    let worst = (0..=8).map(|t| irreducible::<RatFunc>(&C, h(t)).unwrap().check_relations(&C, None).max_residual()).fold(0.0, f64::max);
    ("relations on V(m), m <= 4", worst == 0.0, format!("max residual {worst} (exact)"))
}

fn commutator_oracle() -> (&'static str, bool, String) {
    let mut failures = 0;
    for k in 0..=5u32 {
        let lhs = Pbw::<RatFunc>::e().commutator(&C, &Pbw::f().pow(&C, k + 1));
        for t in 0..=6 {
            let v = irreducible::<RatFunc>(&C, h(t)).unwrap();
            let hk = Mat::diag(v.weights.iter().map(|w| qnum(&C, HalfInt::from_int(w.twice() + k as i64))).collect());
            let rhs = hk.mul(&v.act(&Pbw::f().pow(&C, k))).scale(&qnum(&C, HalfInt::from_int(k as i64 + 1)));
            failures += (v.act(&lhs) != rhs) as usize;
        }
    }
    ("[E, F^(k+1)] = [k+1][H+k]F^k, k <= 5, m <= 3", failures == 0, format!("{failures} of 42 (k, m) pairs differ (exact)"))
}

fn hopf_axioms(level: Level) -> (&'static str, bool, String) {
    let n = if level == Level::Full { 100 } else { 20 };
    let delta = |m: Mono| uq::coproduct(&C, &Pbw::term(m, RatFunc::one()));
    let eps_leg = |t: &Tensor<RatFunc>, i: usize| t.map_leg(i, |m| Tensor::one(0).scale(&uq::counit(&Pbw::term(m, RatFunc::one())))).into_pbw();
    let mut s = Sampler::new(SEED);
    let mut bad_u = 0;
    for _ in 0..n {
        let x: Pbw<RatFunc> = s.pbw(4, 3);
        let dx = uq::coproduct(&C, &x);
        let unit = Pbw::scalar(uq::counit(&x));
        let s_star = |a: &Pbw<RatFunc>| uq::antipode(&C, &uq::star(&C, a));
        let ok = dx.map_leg(0, delta) == dx.map_leg(1, delta)
            && eps_leg(&dx, 0) == x
            && eps_leg(&dx, 1) == x
            && dx.map_leg_pbw(0, |a| uq::antipode(&C, a)).multiply_legs(&C) == unit
            && dx.map_leg_pbw(1, |a| uq::antipode(&C, a)).multiply_legs(&C) == unit
            && s_star(&s_star(&x)) == x;
        bad_u += (!ok) as usize;
    }
    let mut bad_o = 0;
    let basis = coef_basis(3);
    for c in &basis {
        let a = Pw::<RatFunc>::coef(*c);
        let da = okq::coproduct(&a);
        let unit = Pw::unit().scale(&okq::counit(&a));
        let st = |x: &Pw<RatFunc>| okq::star(&C, x);
        let ok = da.coproduct_leg(0) == da.coproduct_leg(1)
            && da.counit_leg(0).into_pw() == a
            && da.counit_leg(1).into_pw() == a
            && da.map_leg_pw(0, |x| okq::antipode(&C, x)).multiply_legs(&C) == unit
            && da.map_leg_pw(1, |x| okq::antipode(&C, x)).multiply_legs(&C) == unit
            && okq::coproduct(&st(&a)) == da.map_leg_pw(0, st).map_leg_pw(1, st)
            && st(&okq::antipode(&C, &st(&okq::antipode(&C, &a)))) == a;
        bad_o += (!ok) as usize;
    }
    let detail = format!("U_q: {bad_u} of {n} seeded elements (degree <= 4) fail; O(K_q): {bad_o} of {} coefficients (spin <= 3/2) fail (exact)", basis.len());
    ("Hopf axioms for U_q(sl2) and O(K_q)", bad_u == 0 && bad_o == 0, detail)
}

fn woronowicz() -> (&'static str, bool, String) {
    let rels = okq::woronowicz_relations::<RatFunc>(&C);
    let failed: Vec<&str> = rels.iter().filter(|(_, r)| !r.is_zero()).map(|(n, _)| *n).collect();
    ("Woronowicz relations", failed.is_empty(), format!("{} relations, failing: {failed:?}", rels.len()))
}

fn bgg() -> (&'static str, bool, String) {
    let mut failures = Vec::new();
    for t in 1..=4i64 {
        let m = h(t);
        let s = t as usize + 1;
        let depth = s + 3;
        let big = verma::<RatFunc>(&C, m, depth).unwrap();
        let sub = verma::<RatFunc>(&C, -m - h(2), depth - s).unwrap();
        let irr = irreducible::<RatFunc>(&C, m).unwrap();
        let counts = big.distinct_weights().into_iter().all(|w| {
            big.weight_indices(w).len() as i64 - sub.weight_indices(w).len() as i64 == irr.weight_indices(w).len() as i64
        });
        let idx: Vec<usize> = (0..s).collect();
        let quotient = big.e.submatrix(&idx, &idx) == irr.e && big.f.submatrix(&idx, &idx) == irr.f && big.k.submatrix(&idx, &idx) == irr.k;
        let singular = big.e.col(s).iter().all(|x| x.is_zero());
        if !(counts && quotient && singular) {
            failures.push(m.to_string());
        }
    }
    ("BGG exactness, m in {1/2, 1, 3/2, 2}, depth 2m+4", failures.is_empty(), format!("failing m: {failures:?} (exact)"))
}

fn haar() -> (&'static str, bool, String) {
    let basis = coef_basis(3);
    let worst_inv = basis.iter().map(|c| dkq::haar_invariance_residual(&Pw::<RatFunc>::coef(*c))).fold(0.0, f64::max);
    let mut eigs = Vec::new();
    for q in [0.5, 0.75, 2.0] {
        let ctx = NumericCtx::new(q).unwrap();
        let g = dkq::gram::<Num>(&ctx, HalfInt::HALF);
        let herm = g.max_diff(&g.adjoint());
        eigs.push((q, g.hermitian_eigenvalues()[0], herm));
    }
    let pos = eigs.iter().all(|&(_, e, herm)| e > GRAM_MIN_EIGENVALUE && herm < 1e-12);
    let detail = format!("invariance residual {worst_inv} on {} coefficients; min eigenvalues {:?}", basis.len(), eigs.iter().map(|&(q, e, _)| (q, e)).collect::<Vec<_>>());
    ("Haar invariance and positivity", worst_inv == 0.0 && pos, detail)
}

fn peter_weyl() -> (&'static str, bool, String) {
    let basis: Vec<Pw<RatFunc>> = coef_basis(3).into_iter().map(Pw::coef).collect();
    let (mut printed_bad, mut corrected_bad, mut pairs) = (0, 0, 0);
    let mut ratio_ok = true;
    for f in &basis {
        for g in &basis {
            let lhs = dkq::inner(&C, f, g);
            let printed = dkq::peter_weyl_sum(&C, f, g, |m| dkq::qdim::<RatFunc>(&C, m).inv().unwrap());
            let corrected = dkq::peter_weyl_sum(&C, f, g, |m| dkq::qdim(&C, m));
            pairs += 1;
            printed_bad += (lhs != printed) as usize;
            corrected_bad += (lhs != corrected) as usize;
            if !lhs.is_zero() {
                let m = f.max_spin().unwrap();
                let d: RatFunc = dkq::qdim(&C, m);
                ratio_ok &= lhs == printed * d.clone() * d;
            }
        }
    }
    let rank_ok = (0..=3).all(|t| dkq::fourier_matrix::<RatFunc>(&C, h(t)).rank() == h(t).dim() * h(t).dim());
    let detail = format!(
        "printed weight 1/dim_q: {printed_bad} of {pairs} pairs differ (ratio dim_q^2 on every spin: {ratio_ok}); weight dim_q: {corrected_bad} differ; Fourier full rank on spins <= 3/2: {rank_ok}"
    );
    ("Peter-Weyl isometry as printed", printed_bad == 0 && rank_ok, detail)
}

/// The `D(K_q)` elements used for the compatibility check.
pub fn yd_elements<F: Scalar>(ctx: &F::Ctx) -> Vec<Dk<F>> {
    vec![
        Dk::embed(ctx, &Pbw::e(), h(4)),
        Dk::embed(ctx, &Pbw::f(), h(4)),
        Dk::embed(ctx, &Pbw::k(), h(4)),
        Dk::unit_matrix(h(2), 0, 1),
        Dk::unit_matrix(h(1), 1, 0),
        Dk::identity_at(h(0)),
    ]
}

/// The named spin-1/2 generators `alpha, beta, gamma, delta`.
pub fn generators<F: Scalar>(ctx: &F::Ctx) -> Vec<Pw<F>> {
    vec![okq::alpha(ctx), okq::beta(ctx), okq::gamma(ctx), okq::delta(ctx)]
}

fn double_suite(level: Level) -> Result<(&'static str, bool, String)> {
    let n = if level == Level::Full { 50 } else { 10 };
    let mut s = Sampler::new(SEED);
    let mut bad = 0;
    for _ in 0..n {
        let a: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 1);
        let b: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 1);
        let c: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 1);
        bad += (a.mul(&C, &b).mul(&C, &c) != a.mul(&C, &b.mul(&C, &c))) as usize;
    }
    let space = SectionSpace::new(h(0), h(4))?;
    let yd = principal::yd_report::<RatFunc>(&C, &space, Lambda::Half(h(-2)), Legs::SELECTED, &yd_elements(&C), &generators(&C), 0.0)?;
    let detail = format!("associativity: {bad} of {n} triples fail; compatibility at (0,-1), window 2: ok = {}, {} checks, residual {}", yd.ok, yd.checked, yd.residual);
    Ok(("double product and compatibility", bad == 0 && yd.ok, detail))
}

fn unitarity() -> Result<(&'static str, bool, String)> {
    let ctx = NumericCtx::new(0.5)?;
    let space = SectionSpace::new(h(0), h(6))?;
    let hinv = 1.0 / ctx.hbar();
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [0.1, 0.37] {
        let r = principal::unitarity_check::<Num>(&ctx, &space, Lambda::Complex(Complex64::new(0.0, t * hinv)))?;
        pass &= r.residual < UNITARY_TOL;
        parts.push(format!("lambda = {t}i/hbar: {:.2e}", r.residual));
    }
    let r = principal::unitarity_check::<Num>(&ctx, &space, Lambda::Complex(Complex64::new(0.5, 0.0)))?;
    pass &= r.residual > NON_UNITARY_MIN;
    parts.push(format!("lambda = 0.5: {:.2e}", r.residual));
    Ok(("principal series unitarity dichotomy", pass, format!("q = 1/2, window 3, residuals {}", parts.join(", "))))
}

fn plancherel_identity(level: Level) -> Result<(&'static str, bool, String)> {
    let start = Instant::now();
    let qs: &[f64] = if level == Level::Full { &[0.5, 0.8] } else { &[0.5] };
    let mut worst: f64 = 0.0;
    let mut plateau: f64 = 0.0;
    let mut count = 0;
    for &q in qs {
        let ctx = NumericCtx::new(q)?;
        for c in 0..16 {
            let u = plancherel::special::<Num>(HalfInt::HALF, c / 8, (c / 4) % 2, HalfInt::HALF, (c / 2) % 2, c % 2)?;
            let r = plancherel::verify(&ctx, &u, 64, h(8))?;
            let r2 = plancherel::verify(&ctx, &u, 128, h(8))?;
            worst = worst.max(r.abs_error);
            plateau = plateau.max((r.integral - r2.integral).norm());
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst < PLANCHEREL_TOL && plateau < QUADRATURE_PLATEAU_TOL && secs < PLANCHEREL_MAX_SECONDS;
    let detail = format!("{count} specials, q in {qs:?}: max |integral - eps| {worst:.2e}, N 64 -> 128 change {plateau:.2e}");
    Ok(("Plancherel trace identity, spin-1/2 specials", pass, detail))
}

fn periodicity() -> Result<(&'static str, bool, String)> {
    let ctx = NumericCtx::new(0.5)?;
    let period = Complex64::new(0.0, 1.0 / ctx.hbar());
    let mut worst: f64 = 0.0;
    for (mu, w) in [(0, 4), (1, 5), (-2, 6)] {
        let space = SectionSpace::new(h(mu), h(w))?;
        for lam in [Complex64::new(0.2, 0.4), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 2.5), Complex64::new(1.3, -0.7)] {
            for a in generators::<Num>(&ctx) {
                let p = principal::pi_pw(&ctx, &space, Lambda::Complex(lam), &a, Legs::SELECTED)?;
                let p2 = principal::pi_pw(&ctx, &space, Lambda::Complex(lam + period), &a, Legs::SELECTED)?;
                worst = worst.max(p.mat.max_diff(&p2.mat));
            }
        }
    }
    Ok(("lambda-periodicity", worst < PERIODICITY_TOL, format!("max difference {worst:.2e} over 3 spaces, 4 points, 4 generators")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_is_an_error() {
        assert!(run(12, Level::Quick).is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 4, 5] {
            assert!(run(id, Level::Quick).unwrap().pass);
        }
    }
}
