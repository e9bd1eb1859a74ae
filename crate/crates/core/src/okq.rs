//! The function algebra `O(K_q)` in Peter-Weyl coordinates.
//!
//! An element is a family of matrices `A_m`, one per spin, standing for
//! `Σ_ij A_m[i,j] ⟨v^i|·|v_j⟩_m`. Its value on `X` is `Σ_m Tr(A_m^T π_m(X))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::memo;
use crate::modules::{clebsch_gordan, dual, intertwiners, irreducible_cached, mat_from_text, mat_to_text};
use crate::scalar::{ExactCtx, HalfInt, Mode, RatFunc, Scalar};
use crate::uq::{self, Pbw};

/// The matrix coefficient `⟨v^i|·|v_j⟩` of `V(m)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Coef {
    pub m: HalfInt,
    pub i: usize,
    pub j: usize,
}

impl Coef {
    pub fn new(m: HalfInt, i: usize, j: usize) -> Self {
        assert!(i < m.dim() && j < m.dim(), "index out of range for spin {m}");
        Coef { m, i, j }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Pw<F> {
    comps: BTreeMap<HalfInt, Mat<F>>,
}

impl<F: Scalar> Default for Pw<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> Pw<F> {
    pub fn zero() -> Self {
        Pw { comps: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        Self::coef(Coef::new(HalfInt::ZERO, 0, 0))
    }

    pub fn coef(c: Coef) -> Self {
        Self::term(c, F::one())
    }

    pub fn term(c: Coef, x: F) -> Self {
        let mut m = Mat::zeros(c.m.dim(), c.m.dim());
        m[(c.i, c.j)] = x;
        Self::component(c.m, m)
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

    /// Adds `a` to the spin-`m` component.
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

    /// Nonzero coefficients in basis order.
    pub fn terms(&self) -> Vec<(Coef, F)> {
        let mut out = Vec::new();
        for (&m, a) in &self.comps {
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    if !a[(i, j)].is_zero() {
                        out.push((Coef { m, i, j }, a[(i, j)].clone()));
                    }
                }
            }
        }
        out
    }

    pub fn coeff(&self, c: Coef) -> F {
        self.comps.get(&c.m).map_or_else(F::zero, |a| a[(c.i, c.j)].clone())
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

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_components(self.comps.iter().map(|(&m, a)| (m, a.scale(c))))
    }

    pub fn map_components(&self, f: impl Fn(HalfInt, &Mat<F>) -> Mat<F>) -> Self {
        Self::from_components(self.comps.iter().map(|(&m, a)| (m, f(m, a))))
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).comps.values().map(|a| a.max_diff(&Mat::zeros(a.rows(), a.cols()))).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).comps.values().all(|a| a.approx_eq(&Mat::zeros(a.rows(), a.cols()), tol))
    }

    pub fn mul(&self, ctx: &F::Ctx, other: &Self) -> Self {
        multiply(ctx, self, other)
    }
}

/// Product dual to the coproduct: `(X, ab) = (X_(1), b)(X_(2), a)`.
///
/// A spin-`m` component of `a` and a spin-`m'` component of `b` combine to
/// the matrix coefficient `B ⊗ A` on `V(m') ⊗ V(m)`, which the Clebsch-Gordan
/// maps split into irreducible components.
pub fn multiply<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>, b: &Pw<F>) -> Pw<F> {
    let mut out = Pw::zero();
    for (&m, am) in &a.comps {
        for (&m2, bm) in &b.comps {
            if m == HalfInt::ZERO {
                out.add_component(m2, &bm.scale(&am[(0, 0)]));
                continue;
            }
            if m2 == HalfInt::ZERO {
                out.add_component(m, &am.scale(&bm[(0, 0)]));
                continue;
            }
            let cg = clebsch_gordan::<F>(ctx, m2, m).expect("Clebsch-Gordan decomposition of irreducibles");
            let c = bm.kron(am);
            for s in &cg.summands {
                let d = s.iota.transpose().mul(&c).mul(&s.proj.transpose());
                out.add_component(s.spin, &d);
            }
        }
    }
    out
}

pub fn counit<F: Scalar>(a: &Pw<F>) -> F {
    a.comps.values().fold(F::zero(), |acc, m| acc + m.trace())
}

/// `(X, a) = Σ_m Tr(A_m^T π_m(X))`.
pub fn pair<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>, a: &Pw<F>) -> F {
    let mut out = F::zero();
    for (&m, am) in &a.comps {
        let v = irreducible_cached::<F>(ctx, m).expect("spin is a half-integer");
        out = out + am.frobenius(&v.act(x));
    }
    out
}

/// `(X ⊗ Y ⊗ ..., a ⊗ b ⊗ ...) = (X, a)(Y, b)...`.
pub fn pair_tensor<F: Scalar>(ctx: &F::Ctx, x: &uq::Tensor<F>, t: &PwTensor<F>) -> F {
    assert_eq!(x.arity(), t.arity());
    let mut out = F::zero();
    for (ms, c) in x.terms() {
        for (cs, d) in &t.terms {
            let mut p = c.clone() * d.clone();
            for (mono, coef) in ms.iter().zip(cs) {
                if p.is_zero() {
                    break;
                }
                let v = irreducible_cached::<F>(ctx, coef.m).expect("spin is a half-integer");
                p = p * v.act(&Pbw::term(*mono, F::one()))[(coef.i, coef.j)].clone();
            }
            out = out + p;
        }
    }
    out
}

/// `J` with `π(S X)^T J = J π(X)` on `V(m)`, and its inverse.
fn antipode_data<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Arc<(Mat<F>, Mat<F>)> {
    let r: Result<_> = memo::cached("okq.antipode", F::ctx_key(ctx), vec![m.twice()], || {
        if F::MODE == Mode::Numeric {
            let e = antipode_data::<RatFunc>(&ExactCtx, m);
            return Ok((e.0.lift(ctx)?, e.1.lift(ctx)?));
        }
        let v = irreducible_cached::<F>(ctx, m)?;
        let d = dual(&v);
        let j = single_intertwiner([&d.k, &d.e, &d.f], [&v.k, &v.e, &v.f])?;
        let ji = j.inverse()?;
        Ok((j, ji))
    });
    r.expect("antipode intertwiner")
}

/// `L` with `conj(π((S^-1 X)^*)) L = L π(X)` on `V(m)`, and its inverse.
fn star_data<F: Scalar>(ctx: &F::Ctx, m: HalfInt) -> Arc<(Mat<F>, Mat<F>)> {
    let r: Result<_> = memo::cached("okq.star", F::ctx_key(ctx), vec![m.twice()], || {
        if F::MODE == Mode::Numeric {
            let e = star_data::<RatFunc>(&ExactCtx, m);
            return Ok((e.0.lift(ctx)?, e.1.lift(ctx)?));
        }
        let v = irreducible_cached::<F>(ctx, m)?;
        let rho = |x: Pbw<F>| v.act(&uq::star(ctx, &uq::antipode_inv(ctx, &x))).conj();
        let (rk, re, rf) = (rho(Pbw::k()), rho(Pbw::e()), rho(Pbw::f()));
        let l = single_intertwiner([&rk, &re, &rf], [&v.k, &v.e, &v.f])?;
        let li = l.inverse()?;
        Ok((l, li))
    });
    r.expect("star intertwiner")
}

fn single_intertwiner<F: Scalar>(rho: [&Mat<F>; 3], pi: [&Mat<F>; 3]) -> Result<Mat<F>> {
    let mut ts = intertwiners(&rho, &pi);
    if ts.len() != 1 {
        return Err(Error::Internal(format!("expected a unique intertwiner, found {}", ts.len())));
    }
    Ok(ts.pop().unwrap())
}

/// `(X, S a) = (S^-1 X, a)`.
///
/// For a skew pairing this is the form compatible with the antipode axiom;
/// `(S X, a) = (X, S a)` defines the inverse map.
pub fn antipode<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>) -> Pw<F> {
    a.map_components(|m, am| {
        let d = antipode_data::<F>(ctx, m);
        d.0.mul(&am.transpose()).mul(&d.1)
    })
}

/// `(X, S^-1 a) = (S X, a)`.
pub fn antipode_inv<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>) -> Pw<F> {
    a.map_components(|m, am| {
        let d = antipode_data::<F>(ctx, m);
        d.1.mul(am).mul(&d.0).transpose()
    })
}

/// `(X, a^*) = conj((S^-1(X)^*, a))`.
pub fn star<F: Scalar>(ctx: &F::Ctx, a: &Pw<F>) -> Pw<F> {
    a.map_components(|m, am| {
        let d = star_data::<F>(ctx, m);
        d.1.mul(&am.adjoint()).mul(&d.0).transpose()
    })
}

/// `Δ⟨i|j⟩ = Σ_k ⟨i|k⟩ ⊗ ⟨k|j⟩`.
pub fn coproduct<F: Scalar>(a: &Pw<F>) -> PwTensor<F> {
    PwTensor::pure(&[a]).coproduct_leg(0)
}

/// Spin-1/2 matrix coefficients in the basis `v_1/2, q^(1/2) v_-1/2`, which is
/// orthonormal for the invariant inner product (`|v_-1/2|^2 = q |v_1/2|^2`).
pub fn alpha<F: Scalar>(_ctx: &F::Ctx) -> Pw<F> {
    Pw::coef(Coef::new(HalfInt::HALF, 0, 0))
}

pub fn beta<F: Scalar>(ctx: &F::Ctx) -> Pw<F> {
    Pw::term(Coef::new(HalfInt::HALF, 0, 1), F::v_pow(ctx, -1))
}

pub fn gamma<F: Scalar>(ctx: &F::Ctx) -> Pw<F> {
    Pw::term(Coef::new(HalfInt::HALF, 1, 0), F::v_pow(ctx, 1))
}

pub fn delta<F: Scalar>(_ctx: &F::Ctx) -> Pw<F> {
    Pw::coef(Coef::new(HalfInt::HALF, 1, 1))
}

/// A named generator, as accepted on the command line.
pub fn named<F: Scalar>(ctx: &F::Ctx, name: &str) -> Option<Pw<F>> {
    match name {
        "1" | "unit" => Some(Pw::unit()),
        "alpha" => Some(alpha(ctx)),
        "beta" => Some(beta(ctx)),
        "gamma" => Some(gamma(ctx)),
        "delta" => Some(delta(ctx)),
        _ => None,
    }
}

/// The Woronowicz relations as `(name, lhs - rhs)`.
pub fn woronowicz_relations<F: Scalar>(ctx: &F::Ctx) -> Vec<(&'static str, Pw<F>)> {
    let (a, b, c, d) = (alpha::<F>(ctx), beta::<F>(ctx), gamma::<F>(ctx), delta::<F>(ctx));
    let q = F::q(ctx);
    let qi = F::v_pow(ctx, -2);
    let m = |x: &Pw<F>, y: &Pw<F>| x.mul(ctx, y);
    let one = Pw::unit();
    vec![
        ("alpha*beta = q*beta*alpha", m(&a, &b).sub(&m(&b, &a).scale(&q))),
        ("alpha*gamma = q*gamma*alpha", m(&a, &c).sub(&m(&c, &a).scale(&q))),
        ("beta*delta = q*delta*beta", m(&b, &d).sub(&m(&d, &b).scale(&q))),
        ("gamma*delta = q*delta*gamma", m(&c, &d).sub(&m(&d, &c).scale(&q))),
        ("beta*gamma = gamma*beta", m(&b, &c).sub(&m(&c, &b))),
        ("alpha*delta - q*beta*gamma = 1", m(&a, &d).sub(&m(&b, &c).scale(&q)).sub(&one)),
        ("delta*alpha - q^-1*beta*gamma = 1", m(&d, &a).sub(&m(&b, &c).scale(&qi)).sub(&one)),
        ("beta = -q*gamma^*", b.add(&star(ctx, &c).scale(&q))),
        ("delta = alpha^*", d.sub(&star(ctx, &a))),
    ]
}

/// An element of a tensor power of `O(K_q)`, keyed by one coefficient per leg.
#[derive(Clone, PartialEq, Debug)]
pub struct PwTensor<F> {
    arity: usize,
    terms: BTreeMap<Vec<Coef>, F>,
}

impl<F: Scalar> PwTensor<F> {
    pub fn zero(arity: usize) -> Self {
        PwTensor { arity, terms: BTreeMap::new() }
    }

    pub fn scalar(c: F) -> Self {
        let mut t = Self::zero(0);
        t.add_term(Vec::new(), c);
        t
    }

    pub fn pure(legs: &[&Pw<F>]) -> Self {
        let mut out = Self::scalar(F::one());
        for leg in legs {
            let mut next = Self::zero(out.arity + 1);
            for (k, c) in &out.terms {
                for (coef, c2) in leg.terms() {
                    let mut kk = k.clone();
                    kk.push(coef);
                    next.add_term(kk, c.clone() * c2);
                }
            }
            out = next;
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Coef>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: Vec<Coef>, c: F) {
        debug_assert_eq!(k.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(k, s);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).terms.values().all(|c| c.approx_eq(&F::zero(), tol))
    }

    /// Replaces leg `i` by the tensor `f(coef)`.
    pub fn map_leg(&self, i: usize, f: impl Fn(Coef) -> PwTensor<F>) -> Self {
        let mut cache: BTreeMap<Coef, PwTensor<F>> = BTreeMap::new();
        let mut out: Option<Self> = None;
        for (k, c) in &self.terms {
            let img = cache.entry(k[i]).or_insert_with(|| f(k[i]));
            let res = out.get_or_insert_with(|| Self::zero(self.arity - 1 + img.arity));
            for (ks, c2) in &img.terms {
                let mut kk = k[..i].to_vec();
                kk.extend_from_slice(ks);
                kk.extend_from_slice(&k[i + 1..]);
                res.add_term(kk, c.clone() * c2.clone());
            }
        }
        out.unwrap_or_else(|| Self::zero(self.arity))
    }

    /// Applies a linear map on `O(K_q)` to leg `i`.
    pub fn map_leg_pw(&self, i: usize, f: impl Fn(&Pw<F>) -> Pw<F>) -> Self {
        self.map_leg(i, |c| PwTensor::pure(&[&f(&Pw::coef(c))]))
    }

    pub fn coproduct_leg(&self, i: usize) -> Self {
        self.map_leg(i, |c| {
            let mut t = PwTensor::zero(2);
            for k in 0..c.m.dim() {
                t.add_term(vec![Coef { m: c.m, i: c.i, j: k }, Coef { m: c.m, i: k, j: c.j }], F::one());
            }
            t
        })
    }

    pub fn counit_leg(&self, i: usize) -> Self {
        self.map_leg(i, |c| PwTensor::scalar(if c.i == c.j { F::one() } else { F::zero() }))
    }

    /// Legwise product.
    pub fn mul(&self, ctx: &F::Ctx, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.arity);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let legs: Vec<Pw<F>> = k1.iter().zip(k2).map(|(a, b)| Pw::coef(*a).mul(ctx, &Pw::coef(*b))).collect();
                let refs: Vec<&Pw<F>> = legs.iter().collect();
                let t = PwTensor::pure(&refs);
                let c = c1.clone() * c2.clone();
                for (k, x) in t.terms {
                    out.add_term(k, x * c.clone());
                }
            }
        }
        out
    }

    /// The product of the legs, in leg order.
    pub fn multiply_legs(&self, ctx: &F::Ctx) -> Pw<F> {
        let mut out = Pw::zero();
        for (k, c) in &self.terms {
            let mut acc = Pw::unit().scale(c);
            for coef in k {
                acc = acc.mul(ctx, &Pw::coef(*coef));
            }
            out = out.add(&acc);
        }
        out
    }

    /// The coefficient of an arity-0 tensor.
    pub fn as_scalar(&self) -> F {
        assert_eq!(self.arity, 0);
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(F::zero)
    }

    pub fn into_pw(&self) -> Pw<F> {
        assert_eq!(self.arity, 1);
        let mut out = Pw::zero();
        for (k, c) in &self.terms {
            out = out.add(&Pw::term(k[0], c.clone()));
        }
        out
    }
}

/// JSON form: `{"components": {"2m": [[scalar, ...], ...]}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PwJson {
    pub components: BTreeMap<String, Vec<Vec<String>>>,
}

impl<F: Scalar> Pw<F> {
    pub fn to_json(&self) -> PwJson {
        PwJson { components: self.comps.iter().map(|(m, a)| (m.twice().to_string(), mat_to_text(a))).collect() }
    }

    pub fn from_json(j: &PwJson) -> Result<Self> {
        let mut out = Self::zero();
        for (k, rows) in &j.components {
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
