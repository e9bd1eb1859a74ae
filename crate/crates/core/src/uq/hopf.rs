//! Coproduct, counit, antipode and star on `U_q(sl2)`.

use std::collections::BTreeMap;

use super::{mono_mul, Mono, Pbw};
use crate::memo;
use crate::scalar::Scalar;

/// An element of a tensor power of `U_q(sl2)`, keyed by one monomial per leg.
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor<F> {
    arity: usize,
    terms: BTreeMap<Vec<Mono>, F>,
}

impl<F: Scalar> Tensor<F> {
    pub fn zero(arity: usize) -> Self {
        Tensor { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        let mut t = Self::zero(arity);
        t.add_term(vec![Mono::ONE; arity], F::one());
        t
    }

    /// `x_1 ⊗ ... ⊗ x_n`.
    pub fn pure(legs: &[&Pbw<F>]) -> Self {
        let mut out = Self::one(0);
        for leg in legs {
            out = out.append(leg);
        }
        out
    }

    fn append(&self, leg: &Pbw<F>) -> Self {
        let mut out = Self::zero(self.arity + 1);
        for (ms, c) in &self.terms {
            for (m, c2) in leg.terms() {
                let mut k = ms.clone();
                k.push(*m);
                out.add_term(k, c.clone() * c2.clone());
            }
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Mono>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: Vec<Mono>, c: F) {
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

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.arity);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).terms.values().all(|c| c.approx_eq(&F::zero(), tol))
    }

    /// Legwise product.
    pub fn mul(&self, ctx: &F::Ctx, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.arity);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut partial: Vec<(Vec<Mono>, F)> = vec![(Vec::new(), c1.clone() * c2.clone())];
                for (a, b) in k1.iter().zip(k2) {
                    let prod = mono_mul::<F>(ctx, *a, *b);
                    let mut next = Vec::with_capacity(partial.len() * prod.len());
                    for (ks, c) in &partial {
                        for (m, cm) in &prod {
                            let mut kk = ks.clone();
                            kk.push(*m);
                            next.push((kk, c.clone() * cm.clone()));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(k, c);
                }
            }
        }
        out
    }

    /// Applies a linear map `Pbw -> Tensor(r)` to leg `i`, producing arity `arity - 1 + r`.
    pub fn map_leg(&self, i: usize, f: impl Fn(Mono) -> Tensor<F>) -> Self {
        let mut cache: BTreeMap<Mono, Tensor<F>> = BTreeMap::new();
        let mut out: Option<Self> = None;
        for (k, c) in &self.terms {
            let img = cache.entry(k[i]).or_insert_with(|| f(k[i]));
            let res = out.get_or_insert_with(|| Self::zero(self.arity - 1 + img.arity));
            for (ks, c2) in &img.terms {
                let mut kk: Vec<Mono> = k[..i].to_vec();
                kk.extend_from_slice(ks);
                kk.extend_from_slice(&k[i + 1..]);
                res.add_term(kk, c.clone() * c2.clone());
            }
        }
        out.unwrap_or_else(|| Self::zero(self.arity))
    }

    /// Applies `f` to every leg of every term, multiplying the results in leg
    /// order, i.e. the image of the linear map `x1 ⊗ ... ⊗ xn -> f(x1) ... f(xn)`.
    pub fn multiply_legs(&self, ctx: &F::Ctx) -> Pbw<F> {
        let mut out = Pbw::zero();
        for (k, c) in &self.terms {
            let mut acc = Pbw::scalar(c.clone());
            for m in k {
                acc = acc.mul(ctx, &Pbw::term(*m, F::one()));
            }
            out = out.add(&acc);
        }
        out
    }

    /// Maps leg `i` through a linear map on `U_q`.
    pub fn map_leg_pbw(&self, i: usize, f: impl Fn(&Pbw<F>) -> Pbw<F>) -> Self {
        self.map_leg(i, |m| {
            let img = f(&Pbw::term(m, F::one()));
            Tensor::pure(&[&img])
        })
    }

    /// Single-leg element as a `Pbw`, for arity 1.
    pub fn into_pbw(&self) -> Pbw<F> {
        assert_eq!(self.arity, 1);
        Pbw::from_terms(self.terms.iter().map(|(k, c)| (k[0], c.clone())))
    }
}

fn coproduct_mono<F: Scalar>(ctx: &F::Ctx, m: Mono) -> Tensor<F> {
    let key = vec![m.f as i64, m.k as i64, m.e as i64];
    let r: Result<_, ()> = memo::cached("uq.coproduct", F::ctx_key(ctx), key, || {
        let de = Tensor::pure(&[&Pbw::e(), &Pbw::k()]).add(&Tensor::pure(&[&Pbw::one(), &Pbw::e()]));
        let df = Tensor::pure(&[&Pbw::f(), &Pbw::one()]).add(&Tensor::pure(&[&Pbw::k_inv(), &Pbw::f()]));
        let kk = Pbw::mono(0, m.k, 0);
        let mut out = Tensor::pure(&[&kk, &kk]);
        for _ in 0..m.f {
            out = df.mul(ctx, &out);
        }
        // out = Δ(F)^f Δ(K)^k; now multiply by Δ(E)^e on the right
        for _ in 0..m.e {
            out = out.mul(ctx, &de);
        }
        Ok(out)
    });
    (*r.unwrap()).clone()
}

/// `Δ(E) = E⊗K + 1⊗E`, `Δ(F) = F⊗1 + K^-1⊗F`, `Δ(K) = K⊗K`.
pub fn coproduct<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>) -> Tensor<F> {
    Tensor::pure(&[x]).map_leg(0, |m| coproduct_mono(ctx, m))
}

pub fn counit<F: Scalar>(x: &Pbw<F>) -> F {
    x.terms().filter(|(m, _)| m.f == 0 && m.e == 0).fold(F::zero(), |acc, (_, c)| acc + c.clone())
}

/// Extends the images of `F`, `K`, `K^-1`, `E` to an anti-homomorphism.
fn anti_extend<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>, gens: [&Pbw<F>; 4], conj: bool) -> Pbw<F> {
    let [sf, sk, skinv, se] = gens;
    let mut out = Pbw::zero();
    for (m, c) in x.terms() {
        // (F^a K^b E^c)' = E'^c K'^b F'^a
        let kp = if m.k >= 0 { sk.pow(ctx, m.k as u32) } else { skinv.pow(ctx, m.k.unsigned_abs()) };
        let img = se.pow(ctx, m.e).mul(ctx, &kp).mul(ctx, &sf.pow(ctx, m.f));
        let c = if conj { c.conj() } else { c.clone() };
        out = out.add(&img.scale(&c));
    }
    out
}

/// `S(E) = -E K^-1`, `S(F) = -K F`, `S(K) = K^-1`.
pub fn antipode<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>) -> Pbw<F> {
    let m1 = -F::one();
    let sf = Pbw::mono(0, 1, 0).mul(ctx, &Pbw::f()).scale(&m1);
    let se = Pbw::e().mul(ctx, &Pbw::k_inv()).scale(&m1);
    anti_extend(ctx, x, [&sf, &Pbw::k_inv(), &Pbw::k(), &se], false)
}

/// `S^-1(E) = -K^-1 E`, `S^-1(F) = -F K`, `S^-1(K) = K^-1`.
pub fn antipode_inv<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>) -> Pbw<F> {
    let m1 = -F::one();
    let sf = Pbw::mono(1, 1, 0).scale(&m1);
    let se = Pbw::k_inv().mul(ctx, &Pbw::e()).scale(&m1);
    anti_extend(ctx, x, [&sf, &Pbw::k_inv(), &Pbw::k(), &se], false)
}

/// Conjugate-linear anti-involution with `E* = K F`, `F* = E K^-1`, `K* = K`.
pub fn star<F: Scalar>(ctx: &F::Ctx, x: &Pbw<F>) -> Pbw<F> {
    let ef = Pbw::e().mul(ctx, &Pbw::k_inv());
    let fe = Pbw::k().mul(ctx, &Pbw::f());
    anti_extend(ctx, x, [&ef, &Pbw::k(), &Pbw::k_inv(), &fe], true)
}
