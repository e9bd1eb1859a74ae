//! The convolution algebra `D(K_q) = ⊕_m End(V(m))`, Haar functionals,
//! regular actions and the Fourier transform.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::modules::{invariant_adjoint, irreducible_cached, mat_from_text, mat_to_text};
use crate::okq::{self, Coef, Pw};
use crate::scalar::{qnum, HalfInt, Scalar};
use crate::uq::{self, Pbw};

/// A finitely supported family of operators `x_m` on `V(m)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Dk<F> {
    comps: BTreeMap<HalfInt, Mat<F>>,
}

impl<F: Scalar> Default for Dk<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> Dk<F> {
    pub fn zero() -> Self {
        Dk { comps: BTreeMap::new() }
    }

    /// The identity of `End(V(m))`, a central idempotent.
    pub fn identity_at(m: HalfInt) -> Self {
        Self::component(m, Mat::identity(m.dim()))
    }

    /// The matrix unit `|v_i><v^j|` at spin `m`.
    pub fn unit_matrix(m: HalfInt, i: usize, j: usize) -> Self {
        let mut a = Mat::zeros(m.dim(), m.dim());
        a[(i, j)] = F::one();
        Self::component(m, a)
    }

    pub fn component(m: HalfInt, a: Mat<F>) -> Self {
        let mut out = Self::zero();
        out.add_component(m, &a);
        out
    }

    pub fn from_components(it: impl IntoIterator<Item = (HalfInt, Mat<F>)>) -> Self {
        let mut out = Self::zero();
        for (m, a) in it {
            out.add_component(m, &a);
        }
        out
    }

    /// The image of `x` in spins `0..=max`.
    pub fn embed(ctx: &F::Ctx, x: &Pbw<F>, max: HalfInt) -> Self {
        Self::from_components(HalfInt::spins_up_to(max).map(|m| (m, irreducible_cached::<F>(ctx, m).expect("spin").act(x))))
    }

    pub fn add_component(&mut self, m: HalfInt, a: &Mat<F>) {
        assert!(!m.is_negative() && a.rows() == m.dim() && a.cols() == m.dim(), "bad component shape");
        let sum = match self.comps.remove(&m) {
            Some(old) => old.add(a),
            None => a.clone(),
        };
        if !sum.is_zero() {
            self.comps.insert(m, sum);
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&HalfInt, &Mat<F>)> {
        self.comps.iter()
    }

    pub fn get(&self, m: HalfInt) -> Option<&Mat<F>> {
        self.comps.get(&m)
    }

    pub fn spins(&self) -> Vec<HalfInt> {
        self.comps.keys().copied().collect()
    }

    pub fn max_spin(&self) -> Option<HalfInt> {
        self.comps.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, a) in &other.comps {
            out.add_component(m, a);
        }
        out
    }

    /// `self += c · other` in place.
    pub fn add_assign_scaled(&mut self, other: &Self, c: &F) {
        for (&m, a) in &other.comps {
            let e = self.comps.entry(m).or_insert_with(|| Mat::zeros(m.dim(), m.dim()));
            e.add_assign_scaled(a, c);
            if e.is_zero() {
                self.comps.remove(&m);
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map_components(|_, a| a.scale(c))
    }

    pub fn map_components(&self, f: impl Fn(HalfInt, &Mat<F>) -> Mat<F>) -> Self {
        Self::from_components(self.comps.iter().map(|(&m, a)| (m, f(m, a))))
    }

    /// Blockwise product.
    pub fn mul(&self, other: &Self) -> Self {
        Self::from_components(self.comps.iter().filter_map(|(m, a)| other.comps.get(m).map(|b| (*m, a.mul(b)))))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).comps.values().map(|a| a.max_diff(&Mat::zeros(a.rows(), a.cols()))).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_diff(other) <= tol || self.sub(other).is_zero()
    }
}

/// Counit: the spin-0 scalar.
pub fn counit<F: Scalar>(x: &Dk<F>) -> F {
    x.get(HalfInt::ZERO).map_or_else(F::zero, |a| a[(0, 0)].clone())
}

/// A spin-indexed operator family, evaluated lazily per spin.
#[derive(Clone)]
pub enum Multiplier<F> {
    Identity,
    /// `q^(n H) = K^n`.
    QPowH(i64),
    Pbw(Pbw<F>),
    Dk(Dk<F>),
}

impl<F: Scalar> Multiplier<F> {
    /// The operator on `V(m)`; `None` stands for zero.
    pub fn at(&self, ctx: &F::Ctx, m: HalfInt) -> Option<Mat<F>> {
        match self {
            Multiplier::Identity => Some(Mat::identity(m.dim())),
            Multiplier::QPowH(n) => {
                let d = (0..m.dim()).map(|i| F::k_eigen(ctx, m - HalfInt::from_int(i as i64)));
                Some(Mat::diag(d.map(|x| if *n >= 0 { x.pow(*n as u32) } else { x.inv().unwrap().pow(n.unsigned_abs() as u32) }).collect()))
            }
            Multiplier::Pbw(x) => Some(irreducible_cached::<F>(ctx, m).expect("spin").act(x)),
            Multiplier::Dk(x) => x.get(m).cloned(),
        }
    }

    /// Restriction to spins `0..=max`.
    pub fn truncate(&self, ctx: &F::Ctx, max: HalfInt) -> Dk<F> {
        Dk::from_components(HalfInt::spins_up_to(max).filter_map(|m| self.at(ctx, m).map(|a| (m, a))))
    }
}

impl<F: Scalar> std::fmt::Debug for Multiplier<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Multiplier::Identity => write!(f, "Identity"),
            Multiplier::QPowH(n) => write!(f, "QPowH({n})"),
            Multiplier::Pbw(x) => write!(f, "Pbw({x})"),
            Multiplier::Dk(x) => write!(f, "Dk({x:?})"),
        }
    }
}

impl<F: Scalar> From<Dk<F>> for Multiplier<F> {
    fn from(x: Dk<F>) -> Self {
        Multiplier::Dk(x)
    }
}

/// `(x, ⟨η|·|ξ⟩_m) = (η, x_m ξ)`, i.e. `Σ_m Tr(A_m^T x_m)`.
pub fn pair<F: Scalar>(ctx: &F::Ctx, x: &Multiplier<F>, a: &Pw<F>) -> F {
    let mut out = F::zero();
    for (&m, am) in a.components() {
        if let Some(xm) = x.at(ctx, m) {
            out = out + am.frobenius(&xm);
        }
    }
    out
}

/// The element `y` with `(y, c) = f(c)` on every matrix coefficient `c` in the
/// support of `x`, for spin-preserving `f`.
fn dual_map<F: Scalar>(x: &Dk<F>, f: impl Fn(Coef, &Mat<F>) -> F) -> Dk<F> {
    x.map_components(|m, xm| Mat::from_fn(m.dim(), m.dim(), |i, j| f(Coef::new(m, i, j), xm)))
}

/// `(S x, a) = (x, S^-1 a)`, extending the antipode of `U_q`.
pub fn antipode<F: Scalar>(ctx: &F::Ctx, x: &Dk<F>) -> Dk<F> {
    dual_map(x, |c, xm| {
        let b = okq::antipode_inv(ctx, &Pw::coef(c));
        b.get(c.m).map_or_else(F::zero, |bm| bm.frobenius(xm))
    })
}

pub fn antipode_inv<F: Scalar>(ctx: &F::Ctx, x: &Dk<F>) -> Dk<F> {
    dual_map(x, |c, xm| {
        let b = okq::antipode(ctx, &Pw::coef(c));
        b.get(c.m).map_or_else(F::zero, |bm| bm.frobenius(xm))
    })
}

/// `(x^*, a) = conj((x, S^-1(a^*)))`, extending the star of `U_q`.
pub fn star<F: Scalar>(ctx: &F::Ctx, x: &Dk<F>) -> Dk<F> {
    dual_map(x, |c, xm| {
        let b = okq::antipode_inv(ctx, &okq::star(ctx, &Pw::coef(c)));
        b.get(c.m).map_or_else(F::zero, |bm| bm.frobenius(xm)).conj()
    })
}

/// The Haar state: the spin-0 coefficient.
pub fn haar<F: Scalar>(a: &Pw<F>) -> F {
    a.get(HalfInt::ZERO).map_or_else(F::zero, |m| m[(0, 0)].clone())
}

/// Largest residual of `(id ⊗ φ)Δa = φ(a)1` and `(φ ⊗ id)Δa = φ(a)1`.
pub fn haar_invariance_residual<F: Scalar>(a: &Pw<F>) -> f64 {
    let da = okq::coproduct(a);
    let unit = Pw::unit().scale(&haar(a));
    let mut worst: f64 = 0.0;
    for leg in [0, 1] {
        let reduced = da.map_leg(leg, |c| okq::PwTensor::scalar(haar(&Pw::coef(c))));
        worst = worst.max(reduced.into_pw().max_diff(&unit));
    }
    worst
}

/// `X ▷ f = (X, f_(2)) f_(1)`: `A_m ↦ A_m x_m^T`.
pub fn hit_left<F: Scalar>(ctx: &F::Ctx, x: &Multiplier<F>, f: &Pw<F>) -> Pw<F> {
    Pw::from_components(f.components().filter_map(|(&m, a)| x.at(ctx, m).map(|xm| (m, a.mul(&xm.transpose())))))
}

/// `f ◁ X = (X, f_(1)) f_(2)`: `A_m ↦ x_m^T A_m`.
pub fn hit_right<F: Scalar>(ctx: &F::Ctx, f: &Pw<F>, x: &Multiplier<F>) -> Pw<F> {
    Pw::from_components(f.components().filter_map(|(&m, a)| x.at(ctx, m).map(|xm| (m, xm.transpose().mul(a)))))
}

/// `λ(X) f = f ◁ S(X)`.
pub fn regular_lambda<F: Scalar>(ctx: &F::Ctx, x: &Multiplier<F>, f: &Pw<F>) -> Pw<F> {
    hit_right(ctx, f, &antipode_multiplier(ctx, x, &f.spins()))
}

/// `ρ(X) f = X ▷ f`.
pub fn regular_rho<F: Scalar>(ctx: &F::Ctx, x: &Multiplier<F>, f: &Pw<F>) -> Pw<F> {
    hit_left(ctx, x, f)
}

/// `S(x)`, restricted to `spins` when `x` is finitely supported.
pub fn antipode_multiplier<F: Scalar>(ctx: &F::Ctx, x: &Multiplier<F>, spins: &[HalfInt]) -> Multiplier<F> {
    match x {
        Multiplier::Identity => Multiplier::Identity,
        Multiplier::QPowH(n) => Multiplier::QPowH(-n),
        Multiplier::Pbw(p) => Multiplier::Pbw(uq::antipode(ctx, p)),
        Multiplier::Dk(d) => {
            let keep = Dk::from_components(spins.iter().copied().filter_map(|m| d.get(m).map(|a| (m, a.clone()))));
            Multiplier::Dk(antipode(ctx, &keep))
        }
    }
}

/// `⟨f, g⟩ = φ(f^* g)`.
pub fn inner<F: Scalar>(ctx: &F::Ctx, f: &Pw<F>, g: &Pw<F>) -> F {
    haar(&okq::star(ctx, f).mul(ctx, g))
}

/// `f̂_m[k,l] = φ(⟨v^k|·|v_l⟩_m f)`.
pub fn fourier<F: Scalar>(ctx: &F::Ctx, f: &Pw<F>) -> Dk<F> {
    let mut out = Dk::zero();
    for (&m, _) in f.components() {
        let restricted = Pw::component(m, f.get(m).unwrap().clone());
        let a = Mat::from_fn(m.dim(), m.dim(), |k, l| haar(&Pw::coef(Coef::new(m, k, l)).mul(ctx, &restricted)));
        out.add_component(m, &a);
    }
    out
}

/// The inverse of [`fourier`], spin by spin.
pub fn fourier_inv<F: Scalar>(ctx: &F::Ctx, x: &Dk<F>) -> Result<Pw<F>> {
    let mut out = Pw::zero();
    for (&m, xm) in x.components() {
        let t = fourier_matrix::<F>(ctx, m);
        let n = m.dim() * m.dim();
        let rhs = Mat::from_fn(n, 1, |r, _| xm[(r / m.dim(), r % m.dim())].clone());
        let sol = t.solve(&rhs)?;
        out = out.add(&Pw::component(m, Mat::from_fn(m.dim(), m.dim(), |i, j| sol[(i * m.dim() + j, 0)].clone())));
    }
    Ok(out)
}

/// Matrix of the Fourier transform on spin `m`, in row-major coefficient order.
pub fn fourier_matrix<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Mat<F> {
    let d = m.dim();
    let n = d * d;
    let mut t = Mat::zeros(n, n);
    for c in 0..n {
        let img = fourier::<F>(ctx, &Pw::coef(Coef::new(m, c / d, c % d)));
        if let Some(a) = img.get(m) {
            for r in 0..n {
                t[(r, c)] = a[(r / d, r % d)].clone();
            }
        }
    }
    t
}

/// `a * b = φ(S^-1(b_(1)) a) b_(2)`.
pub fn convolve<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>, b: &Pw<F>) -> Pw<F> {
    let db = okq::coproduct(b);
    let mut out = Pw::zero();
    for (legs, c) in db.terms() {
        let w = haar(&okq::antipode_inv(ctx, &Pw::coef(legs[0])).mul(ctx, a));
        if !w.is_zero() {
            out = out.add(&Pw::term(legs[1], c.clone() * w));
        }
    }
    out
}

/// `dim_q V(m) = Tr π_m(q^H) = [2m+1]_q`.
pub fn qdim<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> F {
    qnum(ctx, HalfInt::from_int(m.dim() as i64))
}

/// `(1/dim_q) Tr(T1^* T2 π_m(q^H))`, the adjoint taken for the invariant
/// inner product on `V(m)`.
pub fn twisted_hs<F: Scalar>(ctx: &F::Ctx, t1: &Mat<F>, t2: &Mat<F>, m: HalfInt) -> F {
    let k = Multiplier::<F>::QPowH(1).at(ctx, m).unwrap();
    let tr = invariant_adjoint(ctx, m, t1).mul(t2).mul(&k).trace();
    tr.div(&qdim(ctx, m)).expect("q-dimension is nonzero")
}

/// `Σ_m c_m Tr(f̂_m^* ĝ_m π_m(q^H))` with the per-spin weight `c_m` given.
pub fn peter_weyl_sum<F: Scalar>(ctx: &F::Ctx, f: &Pw<F>, g: &Pw<F>, weight: impl Fn(HalfInt) -> F) -> F {
    let (fh, gh) = (fourier(ctx, f), fourier(ctx, g));
    let k = |m: HalfInt| Multiplier::<F>::QPowH(1).at(ctx, m).unwrap();
    let mut out = F::zero();
    for (&m, a) in fh.components() {
        if let Some(b) = gh.get(m) {
            out = out + invariant_adjoint(ctx, m, a).mul(b).mul(&k(m)).trace() * weight(m);
        }
    }
    out
}

/// Gram matrix `φ(c_a^* c_b)` over the matrix coefficients of spin `m`.
pub fn gram<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Mat<F> {
    let d = m.dim();
    let basis: Vec<Pw<F>> = (0..d * d).map(|c| Pw::coef(Coef::new(m, c / d, c % d))).collect();
    Mat::from_fn(d * d, d * d, |a, b| inner(ctx, &basis[a], &basis[b]))
}

/// JSON form: `{"dk": {"2m": [[scalar, ...], ...]}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DkJson {
    pub dk: BTreeMap<String, Vec<Vec<String>>>,
}

impl<F: Scalar> Dk<F> {
    pub fn to_json(&self) -> DkJson {
        DkJson { dk: self.comps.iter().map(|(m, a)| (m.twice().to_string(), mat_to_text(a))).collect() }
    }

    pub fn from_json(j: &DkJson) -> Result<Self> {
        let mut out = Self::zero();
        for (k, rows) in &j.dk {
            let twice: i64 = k.parse().map_err(|_| Error::InvalidArgument(format!("bad spin key {k:?}")))?;
            if twice < 0 {
                return Err(Error::InvalidArgument(format!("negative spin key {k:?}")));
            }
            let m = HalfInt::from_twice(twice);
            let a = mat_from_text::<F>(rows)?;
            if a.rows() != m.dim() || a.cols() != m.dim() {
                return Err(Error::DimensionMismatch(format!("component {k} must be {0}x{0}", m.dim())));
            }
            out.add_component(m, &a);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, RatFunc};

    const C: ExactCtx = ExactCtx;

    #[test]
    fn pairing_examples() {
        let id0 = Multiplier::Dk(Dk::<RatFunc>::identity_at(HalfInt::ZERO));
        assert!(pair(&C, &id0, &Pw::unit()).is_one());
        let k = Multiplier::Pbw(Pbw::<RatFunc>::k());
        assert_eq!(pair(&C, &k, &okq::alpha(&C)), RatFunc::v_pow(2));
        let x = Dk::<RatFunc>::embed(&C, &Pbw::e().mul(&C, &Pbw::f()).add(&Pbw::k()), HalfInt::ONE);
        assert_eq!(pair(&C, &Multiplier::Dk(x.clone()), &Pw::unit()), counit(&x));
    }

    #[test]
    fn haar_examples() {
        assert!(haar(&Pw::<RatFunc>::unit()).is_one());
        assert!(haar(&okq::alpha::<RatFunc>(&C)).is_zero());
        assert_eq!(haar_invariance_residual(&okq::gamma::<RatFunc>(&C)), 0.0);
    }

    #[test]
    fn qdim_and_twisted_hs() {
        assert!(qdim::<RatFunc>(&C, HalfInt::ZERO).is_one());
        assert_eq!(qdim::<RatFunc>(&C, HalfInt::HALF), RatFunc::v_pow(2) + RatFunc::v_pow(-2));
        let id = Mat::identity(2);
        assert!(twisted_hs::<RatFunc>(&C, &id, &id, HalfInt::HALF).is_one());
    }

    #[test]
    fn hit_examples() {
        let a = okq::alpha::<RatFunc>(&C);
        assert_eq!(hit_left(&C, &Multiplier::Pbw(Pbw::k()), &a), a.scale(&RatFunc::v_pow(2)));
        assert_eq!(hit_left(&C, &Multiplier::Identity, &a), a);
    }

    #[test]
    fn fourier_of_unit() {
        assert_eq!(fourier(&C, &Pw::<RatFunc>::unit()), Dk::identity_at(HalfInt::ZERO));
    }
}
