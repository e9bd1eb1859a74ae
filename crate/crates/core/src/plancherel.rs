//! Haar integrals on the dual of `D(K_q)` and on `G_q`, the Plancherel measure,
//! and the trace integral `∫ Tr(π_{μ,λ}(u) π_{μ,λ}(q^{-H})) dm_q`.
//!
//! The integral is compared with the counit `ε(u)` and, after dividing by the mass
//! of the measure on the spin-0 unit, with the Haar weight `Φ̂(u)` of `D(G_q)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dkq::{self, Dk, Multiplier};
use crate::double::{self, Dbl, Dk2};
use crate::error::{Error, Result};
use crate::okq::{Coef, Pw};
use crate::principal::{self, Legs, SectionSpace};
use crate::scalar::{qnum_complex, HalfInt, Lambda, Num, NumericCtx, Scalar};

/// `ψ̂(x) = Σ_m dim_q V(m) Tr(x_m π_m(q^{-H}))`.
pub fn haar_psi_hat<F: Scalar>(ctx: &F::Ctx, x: &Dk<F>) -> F {
    let mut out = F::zero();
    for (&m, xm) in x.components() {
        let k = Multiplier::<F>::QPowH(-1).at(ctx, m).unwrap();
        out = out + dkq::qdim::<F>(ctx, m) * xm.mul(&k).trace();
    }
    out
}

/// `Φ(a ⊗ x) = φ(a) ψ̂(x)`.
pub fn haar_phi_g<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>, x: &Dk<F>) -> F {
    dkq::haar(a) * haar_psi_hat(ctx, x)
}

/// `Φ̂(Σ x_c ⋈ c) = Σ ψ̂(x_c) φ(c)`, the Haar weight on `D(G_q)`.
pub fn haar_dual_g<F: Scalar>(ctx: &F::Ctx, u: &Dbl<F>) -> F {
    let mut out = F::zero();
    for (c, x) in u.terms() {
        let p = dkq::haar(&Pw::<F>::coef(*c));
        if !p.is_zero() {
            out = out + haar_psi_hat(ctx, x) * p;
        }
    }
    out
}

/// `(ψ̂ ⊗ id) t` for `leg = 0`, `(id ⊗ ψ̂) t` for `leg = 1`.
pub fn psi_hat_leg<F: Scalar>(ctx: &F::Ctx, t: &Dk2<F>, leg: usize) -> Dk<F> {
    let mut out = Dk::zero();
    for (&(s1, s2), a) in t.blocks() {
        let d2 = s2.dim();
        let (s, keep) = if leg == 0 { (s1, s2) } else { (s2, s1) };
        let w = dkq::qdim::<F>(ctx, s);
        let k = Multiplier::<F>::QPowH(-1).at(ctx, s).unwrap();
        let mut r = crate::linalg::Mat::<F>::zeros(keep.dim(), keep.dim());
        for p in 0..s.dim() {
            let kp = k[(p, p)].clone() * w.clone();
            for i in 0..keep.dim() {
                for j in 0..keep.dim() {
                    let v = if leg == 0 { &a[(p * d2 + i, p * d2 + j)] } else { &a[(i * d2 + p, j * d2 + p)] };
                    r[(i, j)] = r[(i, j)].clone() + v.clone() * kp.clone();
                }
            }
        }
        out.add_component(keep, &r);
    }
    out
}

/// Length `2π / |ln q| = |ℏ^{-1}|` of the circle `t_q`.
pub fn circle_length(ctx: &NumericCtx) -> f64 {
    2.0 * PI / ctx.ln_q().abs()
}

/// `½ |[μ + iθ]_q|²`.
pub fn density(ctx: &NumericCtx, mu: HalfInt, theta: f64) -> f64 {
    0.5 * qnum_complex(ctx, Complex64::new(mu.to_f64(), theta)).0.norm_sqr()
}

/// Total mass of the printed measure against the spin-0 unit element,
/// `∫ ½|[iθ]_q|² dθ = 2π / (|ln q| (q - q^{-1})²)`.
pub fn spin_zero_mass(ctx: &NumericCtx) -> f64 {
    let d = ctx.q - 1.0 / ctx.q;
    circle_length(ctx) / (d * d)
}

/// `|v_i⟩⟨v^j| ⋈ ⟨v^k|·|v_l⟩` with `v_i, v^j` in `V(m)` and `v^k, v_l` in `V(m')`.
pub fn special<F: Scalar>(m: HalfInt, i: usize, j: usize, mp: HalfInt, k: usize, l: usize) -> Result<Dbl<F>> {
    if i >= m.dim() || j >= m.dim() || k >= mp.dim() || l >= mp.dim() {
        return Err(Error::InvalidArgument(format!("index out of range for spins ({m}, {mp})")));
    }
    Ok(Dbl::pure(&Dk::unit_matrix(m, i, j), &Pw::coef(Coef::new(mp, k, l))))
}

/// True for a single term `x ⋈ c` with `x` a matrix unit and `c` a matrix coefficient.
pub fn is_special<F: Scalar>(u: &Dbl<F>) -> bool {
    let terms: Vec<_> = u.terms().collect();
    if terms.len() != 1 {
        return false;
    }
    let x = terms[0].1;
    let comps: Vec<_> = x.components().collect();
    comps.len() == 1 && {
        let a = comps[0].1;
        let nz: Vec<_> = a.entries().iter().filter(|v| !v.is_zero()).collect();
        nz.len() == 1 && nz[0].approx_eq(&F::one(), 0.0)
    }
}

/// `Tr(π_{μ,λ}(u) π(q^{-H})) = Σ_ν q^{(λ+1)2ν} t_ν`: the pairs `(2ν, t_ν)`.
///
/// The `D(K_q)` factor of `u` has finite rank, so only the diagonal blocks of
/// its spins enter and the result is exact once `window` covers them.
pub fn trace_data<F: Scalar>(ctx: &F::Ctx, u: &Dbl<F>, mu: HalfInt, window: HalfInt, duflo_moore: bool) -> Result<Vec<(i64, F)>> {
    if let Some(top) = u.max_dk_spin() {
        if top > window {
            return Err(Error::WindowTooSmall(format!("u has D(K_q) spin {top}, window is {window}")));
        }
    }
    if window < mu.abs() {
        return Ok(Vec::new());
    }
    let space = SectionSpace::new(mu, window)?;
    let k = principal::pi_dk(ctx, &space, &Multiplier::QPowH(-1))?.mat;
    let mut acc: std::collections::BTreeMap<i64, F> = std::collections::BTreeMap::new();
    for (c, x) in u.terms() {
        let px = principal::pi_dk(ctx, &space, &Multiplier::Dk(x.clone()))?.mat;
        if px.is_zero() {
            continue;
        }
        let left = if duflo_moore { k.clone() } else { crate::linalg::Mat::identity(space.dim()) };
        let pa = principal::pi_pw_components(ctx, &space, &Pw::coef(*c), Legs::SELECTED);
        for (twice_nu, a) in pa.parts {
            let t = px.mul(&a).mul(&left).trace();
            let e = acc.entry(twice_nu).or_insert_with(F::zero);
            *e = e.clone() + t;
        }
    }
    Ok(acc.into_iter().filter(|(_, t)| !t.is_zero()).collect())
}

fn evaluate(ctx: &NumericCtx, data: &[(i64, Num)], lambda: Complex64) -> Complex64 {
    data.iter().map(|(n, t)| ((lambda + 1.0) * (*n as f64) * ctx.ln_q()).exp() * t.0).sum()
}

/// `Tr(π_{μ,λ}(u) π_{μ,λ}(q^{-H}))`.
pub fn integrand(ctx: &NumericCtx, u: &Dbl<Num>, mu: HalfInt, lambda: Lambda, window: HalfInt) -> Result<Num> {
    let data = trace_data(ctx, u, mu, window, true)?;
    Ok(Num(evaluate(ctx, &data, lambda.as_complex())))
}

/// Largest `|ν|`-frequency of the integrand times the density, in units of `|ln q|` on `θ`.
pub fn frequency_bound(u: &Dbl<Num>) -> usize {
    let pw = u.max_pw_spin().unwrap_or(HalfInt::ZERO);
    2 + pw.twice() as usize
}

pub fn default_nodes(u: &Dbl<Num>) -> usize {
    4 * frequency_bound(u) + 8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuTerm {
    pub mu: String,
    pub integral: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `Tr π_{0,-1}(u)`.
    pub trace_0_minus1: Complex64,
    /// `Tr π_{1,0}(u)`.
    pub trace_1_0: Complex64,
    pub trace_difference: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    pub q: f64,
    pub nodes: usize,
    pub window: String,
    pub special: bool,
    pub epsilon: Complex64,
    pub integral: Complex64,
    pub abs_error: f64,
    pub per_mu: Vec<MuTerm>,
    /// Mass of the measure on the spin-0 unit element; `1` for a probability-normalized measure.
    pub spin_zero_mass: f64,
    pub normalized_integral: Complex64,
    /// `Φ̂(u)`.
    pub dual_haar: Complex64,
    /// `|normalized_integral - Φ̂(u)|`.
    pub dual_haar_abs_error: f64,
    pub diagnostics: Diagnostics,
}

/// Trapezoidal quadrature of `Σ_μ ∫_{t_q} ½|[μ+iθ]_q|² Tr(π_{μ,iθ}(u) π(q^{-H})) dθ`
/// with `nodes` equispaced points, compared with `ε(u)` and `Φ̂(u)`.
pub fn verify(ctx: &NumericCtx, u: &Dbl<Num>, nodes: usize, window: HalfInt) -> Result<PlancherelReport> {
    if nodes == 0 {
        return Err(Error::InvalidArgument("at least one quadrature node is required".into()));
    }
    let top = u.max_dk_spin().unwrap_or(HalfInt::ZERO);
    let len = circle_length(ctx);
    let step = len / nodes as f64;
    let mut per_mu = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    for twice_mu in -top.twice()..=top.twice() {
        let mu = HalfInt::from_twice(twice_mu);
        let data = trace_data(ctx, u, mu, window, true)?;
        if data.is_empty() {
            continue;
        }
        // fixed summation order over the nodes
        let mut s = Complex64::new(0.0, 0.0);
        for n in 0..nodes {
            let theta = step * n as f64;
            s += evaluate(ctx, &data, Complex64::new(0.0, theta)) * density(ctx, mu, theta);
        }
        s *= step;
        total += s;
        per_mu.push(MuTerm { mu: mu.to_string(), integral: s });
    }
    let epsilon = double::counit(u).0;
    let plain = |mu: i64, lam: f64| -> Result<Complex64> {
        let mu = HalfInt::from_int(mu);
        let data = trace_data(ctx, u, mu, window.max(mu), false)?;
        Ok(evaluate(ctx, &data, Complex64::new(lam, 0.0)))
    };
    let (t0, t1) = (plain(0, -1.0)?, plain(1, 0.0)?);
    let mass = spin_zero_mass(ctx);
    let dual_haar = haar_dual_g(ctx, u).0;
    Ok(PlancherelReport {
        q: ctx.q,
        nodes,
        window: window.to_string(),
        special: is_special(u),
        epsilon,
        integral: total,
        abs_error: (total - epsilon).norm(),
        per_mu,
        spin_zero_mass: mass,
        normalized_integral: total / mass,
        dual_haar,
        dual_haar_abs_error: (total / mass - dual_haar).norm(),
        diagnostics: Diagnostics { trace_0_minus1: t0, trace_1_0: t1, trace_difference: t0 - t1 },
    })
}
