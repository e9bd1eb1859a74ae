//! The Drinfeld double `D(G_q) = D(K_q) ⋈ O(K_q)`.
//!
//! Elements are kept in the normal order `Σ_c x_c ⋈ c`, one `D(K_q)` factor
//! per matrix coefficient `c`. Products are normal-ordered through the
//! exchange relation `a y = (y_(1), a_(1)) y_(2) a_(2) (S(y_(3)), a_(3))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dkq::{self, Dk, DkJson};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::memo;
use crate::modules::{clebsch_gordan, irreducible_cached};
use crate::okq::{self, Coef, Pw, PwJson};
use crate::scalar::{HalfInt, Scalar};
use crate::uq::{self, Pbw};

#[derive(Clone, PartialEq, Debug)]
pub struct Dbl<F> {
    terms: BTreeMap<Coef, Dk<F>>,
}

impl<F: Scalar> Default for Dbl<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> Dbl<F> {
    pub fn zero() -> Self {
        Dbl { terms: BTreeMap::new() }
    }

    /// `x ⋈ a`.
    pub fn pure(x: &Dk<F>, a: &Pw<F>) -> Self {
        let mut out = Self::zero();
        for (c, s) in a.terms() {
            out.add_term(c, &x.scale(&s));
        }
        out
    }

    /// `x ⋈ 1`.
    pub fn from_dk(x: &Dk<F>) -> Self {
        Self::pure(x, &Pw::unit())
    }

    /// `(Σ_{s ≤ window} 1_s) ⋈ 1`, a unit for elements supported in the window.
    pub fn unit(window: HalfInt) -> Self {
        let id = Dk::from_components(HalfInt::spins_up_to(window).map(|s| (s, Mat::identity(s.dim()))));
        Self::from_dk(&id)
    }

    /// Adds `x ⋈ c`.
    pub fn add_term(&mut self, c: Coef, x: &Dk<F>) {
        let sum = match self.terms.remove(&c) {
            Some(old) => old.add(x),
            None => x.clone(),
        };
        if !sum.is_zero() {
            self.terms.insert(c, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Coef, &Dk<F>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, x) in &other.terms {
            out.add_term(*c, x);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero();
        for (c, x) in &self.terms {
            out.add_term(*c, &x.scale(s));
        }
        out
    }

    /// Largest D(K_q) spin present.
    pub fn max_dk_spin(&self) -> Option<HalfInt> {
        self.terms.values().filter_map(|x| x.max_spin()).max()
    }

    /// Largest O(K_q) spin present.
    pub fn max_pw_spin(&self) -> Option<HalfInt> {
        self.terms.keys().map(|c| c.m).max()
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|x| x.max_diff(&Dk::zero())).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Keeps D(K_q) spins up to `window`.
    pub fn truncate(&self, window: HalfInt) -> Self {
        let mut out = Self::zero();
        for (c, x) in &self.terms {
            let kept = Dk::from_components(x.components().filter(|(s, _)| **s <= window).map(|(s, a)| (*s, a.clone())));
            out.add_term(*c, &kept);
        }
        out
    }

    pub fn mul(&self, ctx: &F::Ctx, other: &Self) -> Self {
        multiply(ctx, self, other)
    }
}

/// `(x ⋈ a)(y ⋈ b) = x (a y) b`, with `a y` normal-ordered by [`exchange`].
pub fn multiply<F: Scalar>(ctx: &F::Ctx, s: &Dbl<F>, t: &Dbl<F>) -> Dbl<F> {
    let mut acc: BTreeMap<(Coef, Coef), Dk<F>> = BTreeMap::new();
    for (c, x) in &s.terms {
        let spins = x.spins();
        for (c2, y) in &t.terms {
            for (kl, z) in exchange_coef(ctx, *c, y, Some(&spins)) {
                let w = x.mul(&z);
                if w.is_zero() {
                    continue;
                }
                acc.entry((kl, *c2)).or_default().add_assign_scaled(&w, &F::one());
            }
        }
    }
    let mut out = Dbl::zero();
    for ((a, b), w) in acc {
        for (c, s) in coef_product::<F>(ctx, a, b).iter() {
            out.add_term(*c, &w.scale(s));
        }
    }
    out
}

/// `(1 ⋈ a)(y ⋈ 1)` in normal order.
pub fn exchange<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>, y: &Dk<F>) -> Dbl<F> {
    exchange_with(ctx, a, y, None)
}

/// [`exchange`] with the `D(K_q)` factors cut to spins `≤ max`.
pub fn exchange_upto<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>, y: &Dk<F>, max: HalfInt) -> Dbl<F> {
    let spins: Vec<HalfInt> = HalfInt::spins_up_to(max).collect();
    exchange_with(ctx, a, y, Some(&spins))
}

fn exchange_with<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>, y: &Dk<F>, keep: Option<&[HalfInt]>) -> Dbl<F> {
    let mut out = Dbl::zero();
    for (c, s) in a.terms() {
        for (kl, z) in exchange_coef(ctx, c, y, keep) {
            out.add_term(kl, &z.scale(&s));
        }
    }
    out
}

/// The factors `z_kl` of `(1 ⋈ c_ij)(y ⋈ 1) = Σ_kl z_kl ⋈ c_kl`, optionally
/// restricted to the given spins.
fn exchange_coef<F: Scalar>(ctx: &F::Ctx, c: Coef, y: &Dk<F>, keep: Option<&[HalfInt]>) -> BTreeMap<Coef, Dk<F>> {
    let mut out: BTreeMap<Coef, Dk<F>> = BTreeMap::new();
    for (&t, yt) in y.components() {
        for p in 0..t.dim() {
            for q in 0..t.dim() {
                let w = &yt[(p, q)];
                if w.is_zero() {
                    continue;
                }
                for (kl, z) in exchange_unit::<F>(ctx, c, t, p, q).iter() {
                    let e = out.entry(*kl).or_default();
                    match keep {
                        Some(spins) => {
                            for s in spins {
                                if let Some(a) = z.get(*s) {
                                    e.add_assign_scaled(&Dk::component(*s, a.clone()), w);
                                }
                            }
                        }
                        None => e.add_assign_scaled(z, w),
                    }
                }
            }
        }
    }
    out.retain(|_, z| !z.is_zero());
    out
}

/// Exchange of `c = c^m_ij` past the matrix unit `e^t_pq`.
///
/// `(z_kl, w) = (e_pq, S^-1(c_lj) w c_ik)`: the three-fold coproduct of `e_pq`
/// on `V(m) ⊗ V(s) ⊗ V(m)` is a sum of rank-one maps, one per intermediate
/// spin `u` of `V(m) ⊗ V(s)`, and `z_kl` is its slice at `(i, k)` on the first
/// leg contracted with `S^-1(c_lj)` on the third.
fn exchange_unit<F: Scalar>(ctx: &F::Ctx, c: Coef, t: HalfInt, p: usize, q: usize) -> Arc<Vec<(Coef, Dk<F>)>> {
    let key = vec![c.m.twice(), c.i as i64, c.j as i64, t.twice(), p as i64, q as i64];
    let r: Result<_> = memo::cached("double.exchange", F::ctx_key(ctx), key, || {
        let m = c.m;
        let dm = m.dim();
        let binv: Vec<Mat<F>> = (0..dm)
            .map(|l| {
                let b = okq::antipode_inv(ctx, &Pw::coef(Coef::new(m, l, c.j)));
                b.get(m).cloned().unwrap_or_else(|| Mat::zeros(dm, dm))
            })
            .collect();
        let mut z: BTreeMap<(usize, usize), Dk<F>> = BTreeMap::new();
        let mut lo = t.twice() - 2 * m.twice();
        if lo < 0 {
            lo = t.twice() % 2;
        }
        for s2 in (lo..=t.twice() + 2 * m.twice()).step_by(2) {
            let s = HalfInt::from_twice(s2);
            let ds = s.dim();
            let cg1 = clebsch_gordan::<F>(ctx, m, s)?;
            let mut blocks: Vec<Vec<Mat<F>>> = vec![vec![Mat::zeros(ds, ds); dm]; dm];
            for su in &cg1.summands {
                let du = su.spin.dim();
                let cg2 = clebsch_gordan::<F>(ctx, su.spin, m)?;
                let Some(st) = cg2.summand(t) else { continue };
                let v = st.iota.col(p);
                let lmat = su.iota.mul(&Mat::from_fn(du, dm, |a, r| v[a * dm + r].clone()));
                let w = st.proj.row(q);
                let rmat = su.proj.transpose().mul(&Mat::from_fn(du, dm, |a, r| w[a * dm + r].clone()));
                let rows = |k: usize| (k * ds..(k + 1) * ds).collect::<Vec<_>>();
                let all: Vec<usize> = (0..dm).collect();
                let li = lmat.submatrix(&rows(c.i), &all);
                for (k, row) in blocks.iter_mut().enumerate() {
                    let rk = rmat.submatrix(&rows(k), &all).transpose();
                    for (l, blk) in row.iter_mut().enumerate() {
                        *blk = blk.add(&li.mul(&binv[l]).mul(&rk));
                    }
                }
            }
            for (k, row) in blocks.into_iter().enumerate() {
                for (l, blk) in row.into_iter().enumerate() {
                    if !blk.is_zero() {
                        z.entry((k, l)).or_default().add_component(s, &blk);
                    }
                }
            }
        }
        Ok(z.into_iter().filter(|(_, d)| !d.is_zero()).map(|((k, l), d)| (Coef::new(m, k, l), d)).collect())
    });
    r.expect("exchange of irreducible matrix coefficients")
}

/// Product of two matrix coefficients, memoized.
fn coef_product<F: Scalar>(ctx: &F::Ctx, a: Coef, b: Coef) -> Arc<Vec<(Coef, F)>> {
    let key = vec![a.m.twice(), a.i as i64, a.j as i64, b.m.twice(), b.i as i64, b.j as i64];
    let r: Result<_, Error> =
        memo::cached("double.coef_product", F::ctx_key(ctx), key, || Ok(Pw::coef(a).mul(ctx, &Pw::<F>::coef(b)).terms()));
    r.expect("coefficient product")
}

/// `ε(x ⋈ a) = ε(x) ε(a)`.
pub fn counit<F: Scalar>(s: &Dbl<F>) -> F {
    s.terms.iter().fold(F::zero(), |acc, (c, x)| if c.i == c.j { acc + dkq::counit(x) } else { acc })
}

/// `S(x ⋈ a) = S(a) S(x)`, normal-ordered.
pub fn antipode<F: Scalar>(ctx: &F::Ctx, s: &Dbl<F>) -> Dbl<F> {
    let mut out = Dbl::zero();
    for (c, x) in &s.terms {
        out = out.add(&exchange(ctx, &okq::antipode(ctx, &Pw::coef(*c)), &dkq::antipode(ctx, x)));
    }
    out
}

/// `(x ⋈ a)^* = a^* x^*`, normal-ordered.
pub fn star<F: Scalar>(ctx: &F::Ctx, s: &Dbl<F>) -> Dbl<F> {
    let mut out = Dbl::zero();
    for (c, x) in &s.terms {
        out = out.add(&exchange(ctx, &okq::star(ctx, &Pw::coef(*c)), &dkq::star(ctx, x)));
    }
    out
}

/// `S^2` applied factorwise, `S^2(x) ⋈ S^2(a)`.
pub fn antipode_squared_factorwise<F: Scalar>(ctx: &F::Ctx, s: &Dbl<F>) -> Dbl<F> {
    let mut out = Dbl::zero();
    for (c, x) in &s.terms {
        let a = okq::antipode(ctx, &okq::antipode(ctx, &Pw::coef(*c)));
        out = out.add(&Dbl::pure(&dkq::antipode(ctx, &dkq::antipode(ctx, x)), &a));
    }
    out
}

/// An element of `D(K_q) ⊗ D(K_q)`: one operator on `V(s1) ⊗ V(s2)` per spin pair.
#[derive(Clone, PartialEq, Debug)]
pub struct Dk2<F> {
    blocks: BTreeMap<(HalfInt, HalfInt), Mat<F>>,
}

impl<F: Scalar> Default for Dk2<F> {
    fn default() -> Self {
        Dk2 { blocks: BTreeMap::new() }
    }
}

impl<F: Scalar> Dk2<F> {
    pub fn add_block(&mut self, s1: HalfInt, s2: HalfInt, a: &Mat<F>) {
        let sum = match self.blocks.remove(&(s1, s2)) {
            Some(old) => old.add(a),
            None => a.clone(),
        };
        if !sum.is_zero() {
            self.blocks.insert((s1, s2), sum);
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(HalfInt, HalfInt), &Mat<F>)> {
        self.blocks.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(s1, s2), a) in &other.blocks {
            out.add_block(s1, s2, a);
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::default();
        for (&(s1, s2), a) in &self.blocks {
            out.add_block(s1, s2, &a.scale(c));
        }
        out
    }

    /// `(x1 ⊗ x2)(y1 ⊗ y2) = x1 y1 ⊗ x2 y2`, blockwise.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (k, a) in &self.blocks {
            if let Some(b) = other.blocks.get(k) {
                out.add_block(k.0, k.1, &a.mul(b));
            }
        }
        out
    }

    /// Applies a linear map given on matrix units to one leg.
    fn map_leg(&self, leg: usize, f: impl Fn(HalfInt, usize, usize) -> Vec<(Coef, Dk<F>)>) -> BTreeMap<Coef, Dk2<F>> {
        let mut out: BTreeMap<Coef, Dk2<F>> = BTreeMap::new();
        for (&(s1, s2), a) in &self.blocks {
            let (d1, d2) = (s1.dim(), s2.dim());
            let (s, d) = if leg == 0 { (s1, d1) } else { (s2, d2) };
            for p in 0..d {
                for q in 0..d {
                    let sub = if leg == 0 {
                        Mat::from_fn(d2, d2, |r, c| a[(p * d2 + r, q * d2 + c)].clone())
                    } else {
                        Mat::from_fn(d1, d1, |r, c| a[(r * d2 + p, c * d2 + q)].clone())
                    };
                    if sub.is_zero() {
                        continue;
                    }
                    for (kl, z) in f(s, p, q) {
                        let e = out.entry(kl).or_default();
                        for (&s3, zm) in z.components() {
                            if leg == 0 {
                                e.add_block(s3, s2, &zm.kron(&sub));
                            } else {
                                e.add_block(s1, s3, &sub.kron(zm));
                            }
                        }
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn truncate(&self, window: HalfInt) -> Self {
        Dk2 { blocks: self.blocks.iter().filter(|((a, b), _)| *a <= window && *b <= window).map(|(k, v)| (*k, v.clone())).collect() }
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let neg = other.scale(&-F::one());
        self.add(&neg).blocks.values().map(|a| a.max_diff(&Mat::zeros(a.rows(), a.cols()))).fold(0.0, f64::max)
    }
}

/// `Δx` restricted to `V(s1) ⊗ V(s2)` with `s1, s2 ≤ window`.
pub fn dk_coproduct<F: Scalar>(ctx: &F::Ctx, x: &Dk<F>, window: HalfInt) -> Dk2<F> {
    let mut out = Dk2::default();
    for s1 in HalfInt::spins_up_to(window) {
        for s2 in HalfInt::spins_up_to(window) {
            let cg = clebsch_gordan::<F>(ctx, s1, s2).expect("Clebsch-Gordan decomposition of irreducibles");
            for sm in &cg.summands {
                if let Some(xt) = x.get(sm.spin) {
                    out.add_block(s1, s2, &sm.iota.mul(xt).mul(&sm.proj));
                }
            }
        }
    }
    out
}

/// An element of `D(G_q) ⊗ D(G_q)`, normal-ordered leg by leg.
#[derive(Clone, PartialEq, Debug)]
pub struct DblTensor<F> {
    terms: BTreeMap<(Coef, Coef), Dk2<F>>,
}

impl<F: Scalar> Default for DblTensor<F> {
    fn default() -> Self {
        DblTensor { terms: BTreeMap::new() }
    }
}

impl<F: Scalar> DblTensor<F> {
    pub fn add_term(&mut self, a: (Coef, Coef), x: &Dk2<F>) {
        let sum = match self.terms.remove(&a) {
            Some(old) => old.add(x),
            None => x.clone(),
        };
        if !sum.is_zero() {
            self.terms.insert(a, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Coef, Coef), &Dk2<F>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, window: HalfInt) -> Self {
        let mut out = Self::default();
        for (k, v) in &self.terms {
            out.add_term(*k, &v.truncate(window));
        }
        out
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        let zero = Dk2::default();
        for k in keys {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            worst = worst.max(a.max_diff(b));
        }
        worst
    }

    /// Leg-wise product in `D(G_q) ⊗ D(G_q)`.
    pub fn mul(&self, ctx: &F::Ctx, other: &Self) -> Self {
        let mut acc: BTreeMap<(Coef, Coef, Coef, Coef), Dk2<F>> = BTreeMap::new();
        for (&(a1, a2), x) in &self.terms {
            for (&(b1, b2), y) in &other.terms {
                let leg1 = y.map_leg(0, |s, p, q| exchange_unit::<F>(ctx, a1, s, p, q).as_ref().clone());
                for (k1, w1) in leg1 {
                    let leg2 = w1.map_leg(1, |s, p, q| exchange_unit::<F>(ctx, a2, s, p, q).as_ref().clone());
                    for (k2, w2) in leg2 {
                        let w = x.mul(&w2);
                        if w.is_zero() {
                            continue;
                        }
                        let e = acc.entry((k1, b1, k2, b2)).or_default();
                        *e = e.add(&w);
                    }
                }
            }
        }
        let mut out = Self::default();
        for ((k1, b1, k2, b2), w) in acc {
            let (p1, p2) = (coef_product::<F>(ctx, k1, b1), coef_product::<F>(ctx, k2, b2));
            for (c1, s1) in p1.iter() {
                for (c2, s2) in p2.iter() {
                    out.add_term((*c1, *c2), &w.scale(&(s1.clone() * s2.clone())));
                }
            }
        }
        out
    }

    /// `Σ f(s_(1)) g(s_(2))`, splitting the D(K_q) legs into matrix units.
    pub fn map_and_multiply(&self, ctx: &F::Ctx, f: impl Fn(&Dbl<F>) -> Dbl<F>, g: impl Fn(&Dbl<F>) -> Dbl<F>) -> Dbl<F> {
        let mut out = Dbl::zero();
        for (&(a1, a2), x) in &self.terms {
            for (&(s1, s2), m) in x.blocks() {
                let d2 = s2.dim();
                for p in 0..s1.dim() {
                    for q in 0..s1.dim() {
                        let sub = Mat::from_fn(d2, d2, |r, c| m[(p * d2 + r, q * d2 + c)].clone());
                        if sub.is_zero() {
                            continue;
                        }
                        let left = f(&Dbl::pure(&Dk::unit_matrix(s1, p, q), &Pw::coef(a1)));
                        let right = g(&Dbl::pure(&Dk::component(s2, sub), &Pw::coef(a2)));
                        out = out.add(&left.mul(ctx, &right));
                    }
                }
            }
        }
        out
    }

    /// `(ε ⊗ id)` or `(id ⊗ ε)`.
    pub fn counit_leg(&self, leg: usize) -> Dbl<F> {
        let mut out = Dbl::zero();
        for (&(a1, a2), x) in &self.terms {
            let (gone, kept) = if leg == 0 { (a1, a2) } else { (a2, a1) };
            if gone.i != gone.j {
                continue;
            }
            let mut d = Dk::zero();
            for (&(s1, s2), m) in x.blocks() {
                if leg == 0 && s1 == HalfInt::ZERO {
                    d.add_component(s2, m);
                } else if leg == 1 && s2 == HalfInt::ZERO {
                    d.add_component(s1, m);
                }
            }
            out.add_term(kept, &d);
        }
        out
    }
}

/// `Δ(x ⋈ a) = (x_(1) ⋈ a_(1)) ⊗ (x_(2) ⋈ a_(2))`, with the D(K_q) legs
/// restricted to spins `≤ window`.
pub fn coproduct<F: Scalar>(ctx: &F::Ctx, s: &Dbl<F>, window: HalfInt) -> Result<DblTensor<F>> {
    if let Some(top) = s.max_dk_spin() {
        if top > window + window {
            return Err(Error::WindowTooSmall(format!("spin {top} cannot split within window {window}")));
        }
    }
    let mut out = DblTensor::default();
    for (c, x) in &s.terms {
        let dx = dk_coproduct(ctx, x, window);
        for k in 0..c.m.dim() {
            out.add_term((Coef::new(c.m, c.i, k), Coef::new(c.m, k, c.j)), &dx);
        }
    }
    Ok(out)
}

/// Outcome of a Yetter-Drinfeld compatibility check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YdReport {
    pub ok: bool,
    pub residual: f64,
    pub checked: usize,
    pub counterexample: Option<String>,
}

/// Checks `π(a)π(x) = Σ_kl π(z_kl)π(c_kl)` where `(1 ⋈ a)(x ⋈ 1) = Σ z_kl ⋈ c_kl`,
/// on the columns `cols` of the representation matrices.
pub fn yd_check<F: Scalar>(
    ctx: &F::Ctx,
    pi_dk: impl Fn(&Dk<F>) -> Mat<F>,
    pi_pw: impl Fn(&Pw<F>) -> Mat<F>,
    xs: &[Dk<F>],
    fs: &[Pw<F>],
    cols: &[usize],
    tol: f64,
) -> Result<YdReport> {
    let mut report = YdReport { ok: true, residual: 0.0, checked: 0, counterexample: None };
    for x in xs {
        let px = pi_dk(x);
        for a in fs {
            let pa = pi_pw(a);
            if pa.cols() != px.rows() {
                return Err(Error::DimensionMismatch(format!("π(a) is {}x{}, π(x) is {}x{}", pa.rows(), pa.cols(), px.rows(), px.cols())));
            }
            let lhs = pa.mul(&px);
            let mut rhs = Mat::zeros(lhs.rows(), lhs.cols());
            for (c, z) in exchange(ctx, a, x).terms() {
                rhs = rhs.add(&pi_dk(z).mul(&pi_pw(&Pw::coef(*c))));
            }
            let all: Vec<usize> = (0..lhs.rows()).collect();
            let r = lhs.submatrix(&all, cols).max_diff(&rhs.submatrix(&all, cols));
            report.checked += 1;
            if r > report.residual {
                report.residual = r;
            }
            if r > tol && report.ok {
                report.ok = false;
                report.counterexample = Some(format!("x = {x:?}, a = {a:?}, residual {r:e}"));
            }
        }
    }
    Ok(report)
}

/// `ι(X) = (id ⊗ S)ΔX`, the compact part of the embedding into `U ⊗ U^op`.
pub fn iota_compact<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>) -> uq::Tensor<F> {
    uq::coproduct(ctx, x).map_leg_pbw(1, |y| uq::antipode(ctx, y))
}

/// `ι(X)` acting on `V(m1) ⊗ V(m2)^*`, the second leg by transposes so that
/// `U^op` acts by a homomorphism.
pub fn iota_action<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>, m1: HalfInt, m2: HalfInt) -> Mat<F> {
    let (v1, v2) = (irreducible_cached::<F>(ctx, m1).expect("spin"), irreducible_cached::<F>(ctx, m2).expect("spin"));
    let mut out = Mat::zeros(m1.dim() * m2.dim(), m1.dim() * m2.dim());
    for (monos, c) in iota_compact(ctx, x).terms() {
        let a = v1.act(&Pbw::term(monos[0], F::one()));
        let b = v2.act(&Pbw::term(monos[1], F::one())).transpose();
        out = out.add(&a.kron(&b).scale(c));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DblTermJson {
    pub dk: DkJson,
    pub pw: PwJson,
    pub coeff: String,
}

/// JSON form: a list of `{dk, pw, coeff}` terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DblJson {
    pub terms: Vec<DblTermJson>,
}

impl<F: Scalar> Dbl<F> {
    pub fn to_json(&self) -> DblJson {
        DblJson {
            terms: self
                .terms
                .iter()
                .map(|(c, x)| DblTermJson { dk: x.to_json(), pw: Pw::<F>::coef(*c).to_json(), coeff: F::one().to_text() })
                .collect(),
        }
    }

    pub fn from_json(j: &DblJson) -> Result<Self> {
        let mut out = Self::zero();
        for t in &j.terms {
            let x = Dk::<F>::from_json(&t.dk)?;
            let a = Pw::<F>::from_json(&t.pw)?;
            out = out.add(&Dbl::pure(&x.scale(&F::parse_text(&t.coeff)?), &a));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, RatFunc};

    const C: ExactCtx = ExactCtx;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn trivial_factors_commute_past() {
        let x = Dk::<RatFunc>::unit_matrix(h(1), 0, 1);
        let y = Dk::<RatFunc>::unit_matrix(h(1), 1, 1);
        let a = okq::alpha::<RatFunc>(&C);
        let b = okq::beta::<RatFunc>(&C);
        assert_eq!(Dbl::from_dk(&x).mul(&C, &Dbl::from_dk(&y)), Dbl::from_dk(&x.mul(&y)));
        // the unit is a multiplier; the window identity acts as one below the window minus 2m
        let idw = |w: i64| Dk::<RatFunc>::from_components(HalfInt::spins_up_to(h(w)).map(|s| (s, Mat::identity(s.dim()))));
        let prod = Dbl::pure(&idw(4), &a).mul(&C, &Dbl::pure(&idw(4), &b));
        assert_eq!(prod.truncate(h(2)), Dbl::pure(&idw(2), &a.mul(&C, &b)));
    }

    #[test]
    fn counit_examples() {
        let u = Dbl::<RatFunc>::pure(&Dk::identity_at(HalfInt::ZERO), &Pw::unit());
        assert!(counit(&u).is_one());
        let a = Dbl::<RatFunc>::pure(&Dk::identity_at(HalfInt::ZERO), &okq::beta(&C));
        assert!(counit(&a).is_zero());
    }

    #[test]
    fn antipode_of_unit() {
        let w = h(2);
        assert_eq!(antipode(&C, &Dbl::<RatFunc>::unit(w)), Dbl::unit(w));
    }
}
