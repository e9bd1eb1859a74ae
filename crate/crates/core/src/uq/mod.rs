//! `U_q(sl2)` in the PBW basis `F^a K^b E^c`, with `K E K^-1 = q^2 E`,
//! `K F K^-1 = q^-2 F` and `[E, F] = (K - K^-1) / (q - q^-1)`.

mod hopf;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

pub use hopf::{antipode, antipode_inv, coproduct, counit, star, Tensor};
pub use parse::parse;

/// The monomial `F^f K^k E^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono {
    pub f: u32,
    pub k: i32,
    pub e: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { f: 0, k: 0, e: 0 };

    pub const fn new(f: u32, k: i32, e: u32) -> Self {
        Mono { f, k, e }
    }

    pub fn degree(self) -> u32 {
        self.f + self.e + self.k.unsigned_abs()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let p = |g: &str, n: i64| if n == 1 { g.to_string() } else { format!("{g}^{n}") };
        if self.f > 0 {
            parts.push(p("F", self.f as i64));
        }
        if self.k != 0 {
            parts.push(p("K", self.k as i64));
        }
        if self.e > 0 {
            parts.push(p("E", self.e as i64));
        }
        if parts.is_empty() {
            out.write_str("1")
        } else {
            out.write_str(&parts.join("*"))
        }
    }
}

/// A PBW-normal element of `U_q(sl2)`; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Pbw<F> {
    terms: BTreeMap<Mono, F>,
}

impl<F: Scalar> Default for Pbw<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> Pbw<F> {
    pub fn zero() -> Self {
        Pbw { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(F::one())
    }

    pub fn scalar(c: F) -> Self {
        Self::term(Mono::ONE, c)
    }

    pub fn term(m: Mono, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Pbw { terms }
    }

    pub fn mono(f: u32, k: i32, e: u32) -> Self {
        Self::term(Mono::new(f, k, e), F::one())
    }

    pub fn e() -> Self {
        Self::mono(0, 0, 1)
    }

    pub fn f() -> Self {
        Self::mono(1, 0, 0)
    }

    pub fn k() -> Self {
        Self::mono(0, 1, 0)
    }

    pub fn k_inv() -> Self {
        Self::mono(0, -1, 0)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, F)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> F {
        self.terms.get(&m).cloned().unwrap_or_else(F::zero)
    }

    /// The coefficient if `self` is a multiple of the unit.
    pub fn as_scalar(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let d = self.sub(other);
        d.terms.values().all(|c| c.approx_eq(&F::zero(), tol))
    }

    pub fn mul(&self, ctx: &F::Ctx, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let cc = c1.clone() * c2.clone();
                for (m, c) in mono_mul::<F>(ctx, *m1, *m2) {
                    out.add_term(m, c * cc.clone());
                }
            }
        }
        out
    }

    pub fn pow(&self, ctx: &F::Ctx, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(ctx, self))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, ctx: &F::Ctx, other: &Self) -> Self {
        self.mul(ctx, other).sub(&other.mul(ctx, self))
    }
}

/// `E * F^d K^k E^e` in normal form.
fn lmul_e<F: Scalar>(ctx: &F::Ctx, m: Mono) -> Vec<(Mono, F)> {
    // E F^d = F^d E + F^(d-1) (sum_j q^-2j K - sum_j q^2j K^-1) / (q - q^-1)
    let mut out = vec![(Mono::new(m.f, m.k, m.e + 1), F::v_pow(ctx, -4 * m.k as i64))];
    if m.f > 0 {
        let c = (F::v_pow(ctx, 2) - F::v_pow(ctx, -2)).inv().expect("q != 1");
        let d = m.f as i64;
        let plus = (0..d).fold(F::zero(), |acc, j| acc + F::v_pow(ctx, -4 * j));
        let minus = (0..d).fold(F::zero(), |acc, j| acc + F::v_pow(ctx, 4 * j));
        out.push((Mono::new(m.f - 1, m.k + 1, m.e), plus * c.clone()));
        out.push((Mono::new(m.f - 1, m.k - 1, m.e), -(minus * c)));
    }
    out
}

/// Normal form of the product of two monomials.
pub fn mono_mul<F: Scalar>(ctx: &F::Ctx, a: Mono, b: Mono) -> Vec<(Mono, F)> {
    if a.e == 0 || b.f == 0 {
        // F^a K^k E^e * F^0 K^k' E^e' or F^a K^k E^0 * F^d K^k' E^e'
        let c = F::v_pow(ctx, -4 * (a.e as i64 * b.k as i64 + a.k as i64 * b.f as i64));
        return vec![(Mono::new(a.f + b.f, a.k + b.k, a.e + b.e), c)];
    }
    // peel the E's of `a` one at a time off the left of `b`
    let mut cur: BTreeMap<Mono, F> = BTreeMap::new();
    cur.insert(b, F::one());
    for _ in 0..a.e {
        let mut next: BTreeMap<Mono, F> = BTreeMap::new();
        for (m, c) in &cur {
            for (m2, c2) in lmul_e::<F>(ctx, *m) {
                let v = c.clone() * c2;
                let e = next.entry(m2).or_insert_with(F::zero);
                *e = e.clone() + v;
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    // K^k F^d = q^(-2 k d) F^d K^k
    cur.into_iter()
        .map(|(m, c)| {
            let t = F::v_pow(ctx, -4 * a.k as i64 * m.f as i64);
            (Mono::new(a.f + m.f, a.k + m.k, m.e), c * t)
        })
        .collect()
}

impl<F: Scalar> fmt::Debug for Pbw<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::print(self))
    }
}

impl<F: Scalar> fmt::Display for Pbw<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, RatFunc};

    type P = Pbw<RatFunc>;
    const C: ExactCtx = ExactCtx;

    #[test]
    fn ef_relation() {
        let ef = P::e().mul(&C, &P::f());
        let c = (RatFunc::v_pow(2) - RatFunc::v_pow(-2)).inv().unwrap();
        let expect = P::mono(1, 0, 1).add(&P::k().sub(&P::k_inv()).scale(&c));
        assert_eq!(ef, expect);
    }

    #[test]
    fn k_kinv_is_unit() {
        assert_eq!(P::k().mul(&C, &P::k_inv()), P::one());
    }

    #[test]
    fn k_e_relation() {
        let lhs = P::k().mul(&C, &P::e()).mul(&C, &P::k_inv());
        assert_eq!(lhs, P::e().scale(&RatFunc::v_pow(4)));
        let lhs = P::k().mul(&C, &P::f()).mul(&C, &P::k_inv());
        assert_eq!(lhs, P::f().scale(&RatFunc::v_pow(-4)));
    }
}
