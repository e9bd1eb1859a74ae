//! The field Q(v) of rational functions in a formal square root `v` of `q`.
//!
//! Elements are stored as `v^shift * num(v) / den(v)` where `num` and `den`
//! are polynomials with rational coefficients, both with nonzero constant
//! term, `den` monic, and `gcd(num, den) = 1`. This form is canonical, so
//! structural equality is field equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(&mut out);
    out
}

fn poly_shifted(p: &[BigRational], k: usize) -> Poly {
    let mut out = vec![BigRational::zero(); k];
    out.extend_from_slice(p);
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_scale(p: &[BigRational], c: &BigRational) -> Poly {
    p.iter().map(|x| x * c).collect()
}

fn is_one(p: &[BigRational]) -> bool {
    p.len() == 1 && p[0].is_one()
}

/// Polynomial division with remainder; `b` must be nonzero.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b.last().expect("nonzero divisor").recip();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead_inv;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_monic(p: &[BigRational]) -> Poly {
    let lead = p.last().expect("nonzero").recip();
    poly_scale(p, &lead)
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        poly_monic(&x)
    }
}

fn low_zeros(p: &[BigRational]) -> usize {
    p.iter().take_while(|c| c.is_zero()).count()
}

/// An element of Q(v).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { shift: 0, num: Vec::new(), den: vec![BigRational::one()] }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { shift: 0, num: vec![c], den: vec![BigRational::one()] }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `c * v^k`.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { shift: k, num: vec![c], den: vec![BigRational::one()] }
    }

    /// `v^k`.
    pub fn v_pow(k: i64) -> Self {
        Self::monomial(BigRational::one(), k)
    }

    /// Laurent polynomial `sum_k coeffs[k] * v^(low + k)`.
    pub fn laurent(low: i64, coeffs: Vec<BigRational>) -> Self {
        Self::normalized(low, coeffs, vec![BigRational::one()])
    }

    fn normalized(mut shift: i64, mut num: Poly, mut den: Poly) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Self::zero();
        }
        let zn = low_zeros(&num);
        if zn > 0 {
            num.drain(..zn);
            shift += zn as i64;
        }
        let zd = low_zeros(&den);
        if zd > 0 {
            den.drain(..zd);
            shift -= zd as i64;
        }
        if den.len() > 1 {
            let g = poly_gcd(&num, &den);
            if g.len() > 1 {
                num = poly_divrem(&num, &g).0;
                den = poly_divrem(&den, &g).0;
            }
        }
        let lead = den.last().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = poly_scale(&num, &inv);
            den = poly_scale(&den, &inv);
        }
        RatFunc { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && is_one(&self.num) && is_one(&self.den)
    }

    /// True when the denominator is 1, i.e. the element is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        is_one(&self.den)
    }

    /// Returns the rational constant if the element has no `v` dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        (self.shift == 0 && self.num.len() == 1 && is_one(&self.den)).then(|| self.num[0].clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, mut e: i64) -> Result<Self> {
        let mut base = if e < 0 {
            e = -e;
            self.inv()?
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Evaluates at `v = v0`.
    pub fn eval(&self, v0: Complex64) -> Result<Complex64> {
        let horner = |p: &[BigRational]| {
            p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * v0 + c.to_f64().unwrap_or(f64::NAN))
        };
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let d = horner(&self.den);
        if d.norm() == 0.0 {
            return Err(Error::PoleAtEvaluation);
        }
        Ok(v0.powi(self.shift as i32) * horner(&self.num) / d)
    }

    /// Evaluates at `v = sqrt(q)` for a positive real `q`.
    pub fn eval_at_q(&self, q: f64) -> Result<Complex64> {
        self.eval(Complex64::new(q.sqrt(), 0.0))
    }

    /// Integer-coefficient Laurent fraction, e.g. `(v^2+v^-2)/(1)`.
    pub fn to_text(&self) -> String {
        let (n_int, n_shift, d_int) = self.integer_form();
        format!("({})/({})", fmt_laurent(&n_int, n_shift, "v", 1, false), fmt_laurent(&d_int, 0, "v", 1, false))
    }

    /// Returns `(N, shift, D)` with integer coefficient vectors such that the
    /// value is `v^shift * N(v) / D(v)`.
    fn integer_form(&self) -> (Vec<BigInt>, i64, Vec<BigInt>) {
        if self.is_zero() {
            return (Vec::new(), 0, vec![BigInt::one()]);
        }
        let lcm_den = |p: &[BigRational]| p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ln = lcm_den(&self.num);
        let ld = lcm_den(&self.den);
        let n: Vec<BigInt> = self.num.iter().map(|c| (c * BigRational::from_integer(ln.clone())).to_integer()).collect();
        let d: Vec<BigInt> = self.den.iter().map(|c| (c * BigRational::from_integer(ld.clone())).to_integer()).collect();
        let content = |p: &[BigInt]| p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let gn = content(&n);
        let gd = content(&d);
        let n: Vec<BigInt> = n.iter().map(|c| c / &gn).collect();
        let d: Vec<BigInt> = d.iter().map(|c| c / &gd).collect();
        // value = (n/d) * (gn * ld) / (ln * gd)
        let r = BigRational::new(&gn * &ld, &ln * &gd);
        let n: Vec<BigInt> = n.iter().map(|c| c * r.numer()).collect();
        let d: Vec<BigInt> = d.iter().map(|c| c * r.denom()).collect();
        (n, self.shift, d)
    }

    /// Pretty form in `q` when every exponent is even, otherwise in `v`;
    /// the denominator is balanced around exponent zero when possible.
    pub fn to_pretty(&self) -> String {
        let (n, shift, d) = self.integer_form();
        let dd = d.len() as i64 - 1;
        let (nshift, dshift) = if dd % 2 == 0 { (shift - dd / 2, -dd / 2) } else { (shift, 0) };
        let even = |p: &[BigInt], s: i64| p.iter().enumerate().all(|(i, c)| c.is_zero() || (s + i as i64) % 2 == 0);
        let (var, step) = if even(&n, nshift) && even(&d, dshift) { ("q", 2) } else { ("v", 1) };
        let ns = fmt_laurent(&n, nshift, var, step, true);
        if d.len() == 1 && d[0].is_one() {
            ns
        } else {
            format!("({})/({})", ns, fmt_laurent(&d, dshift, var, step, true))
        }
    }

    /// Parses the integer-coefficient Laurent fraction produced by [`to_text`](Self::to_text).
    pub fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::Syntax { pos: 0, msg: format!("{msg}: {s:?}") };
        let (n, d) = match s.split_once(")/(") {
            Some((n, d)) => {
                let n = n.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let d = d.strip_suffix(')').ok_or_else(|| bad("expected ')'"))?;
                (n, d)
            }
            None => (s, "1"),
        };
        let num = parse_laurent(n).ok_or_else(|| bad("bad numerator"))?;
        let den = parse_laurent(d).ok_or_else(|| bad("bad denominator"))?;
        Ok(&num * &den.inv()?)
    }
}

fn fmt_laurent(p: &[BigInt], shift: i64, var: &str, step: i64, spaced: bool) -> String {
    if p.iter().all(Zero::is_zero) {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = (shift + i as i64) / step;
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            let op = if neg { '-' } else { '+' };
            if spaced {
                out.push(' ');
                out.push(op);
                out.push(' ');
            } else {
                out.push(op);
            }
        }
        let body = match e {
            0 => a.to_string(),
            _ => {
                let pw = if e == 1 { var.to_string() } else { format!("{var}^{e}") };
                if a.is_one() {
                    pw
                } else {
                    format!("{a}*{pw}")
                }
            }
        };
        out.push_str(&body);
    }
    out
}

/// Parses sums of terms `[+-] [int] [*] [v[^int]]`.
fn parse_laurent(s: &str) -> Option<RatFunc> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "0" {
        return Some(RatFunc::zero());
    }
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut acc = RatFunc::zero();
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: BigInt = if i > start { s[start..i].parse().ok()? } else { BigInt::one() };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mut exp = 0i64;
        if i < bytes.len() && (bytes[i] == b'v' || bytes[i] == b'q') {
            let mult = if bytes[i] == b'q' { 2 } else { 1 };
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let st = i;
                if i < bytes.len() && bytes[i] == b'-' {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[st..i].parse().ok()?;
            }
            exp *= mult;
        } else if i == start {
            return None;
        }
        let c = BigRational::from_integer(coeff * sign);
        acc = &acc + &RatFunc::monomial(c, exp);
    }
    Some(acc)
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pretty())
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let (a, b) = ((self.shift - s) as usize, (rhs.shift - s) as usize);
        if is_one(&self.den) && is_one(&rhs.den) {
            let num = poly_add(&poly_shifted(&self.num, a), &poly_shifted(&rhs.num, b));
            return RatFunc::normalized(s, num, vec![BigRational::one()]);
        }
        if self.den == rhs.den {
            let num = poly_add(&poly_shifted(&self.num, a), &poly_shifted(&rhs.num, b));
            return RatFunc::normalized(s, num, self.den.clone());
        }
        let num = poly_add(
            &poly_shifted(&poly_mul(&self.num, &rhs.den), a),
            &poly_shifted(&poly_mul(&rhs.num, &self.den), b),
        );
        RatFunc::normalized(s, num, poly_mul(&self.den, &rhs.den))
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let shift = self.shift + rhs.shift;
        if is_one(&self.den) && is_one(&rhs.den) {
            return RatFunc { shift, num: poly_mul(&self.num, &rhs.num), den: vec![BigRational::one()] };
        }
        RatFunc::normalized(shift, poly_mul(&self.num, &rhs.num), poly_mul(&self.den, &rhs.den))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { shift: self.shift, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: i64) -> RatFunc {
        RatFunc::v_pow(k)
    }

    #[test]
    fn canonical_reduction() {
        // (v^4 - 1) / (v^2 - 1) = v^2 + 1
        let a = &v(4) - &RatFunc::one();
        let b = &v(2) - &RatFunc::one();
        let c = &a * &b.inv().unwrap();
        assert_eq!(c, &v(2) + &RatFunc::one());
        assert!(c.is_laurent());
    }

    #[test]
    fn inverse_of_q_minus_qinv() {
        let d = &v(2) - &v(-2);
        let inv = d.inv().unwrap();
        assert!((&inv * &d).is_one());
        assert_eq!(RatFunc::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_round_trip() {
        let x = &(&v(2) + &v(-2)) * &(&v(3) - &RatFunc::from_i64(2)).inv().unwrap();
        let t = x.to_text();
        assert_eq!(RatFunc::parse_text(&t).unwrap(), x);
        assert_eq!((&v(2) + &v(-2)).to_text(), "(v^2+v^-2)/(1)");
        let h = RatFunc::monomial(BigRational::new(1.into(), 3.into()), 1);
        assert_eq!(RatFunc::parse_text(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn pretty_prints_in_q() {
        let d = (&v(2) - &v(-2)).inv().unwrap();
        assert_eq!(d.to_pretty(), "(1)/(q - q^-1)");
        assert_eq!((&v(2) + &v(-2)).to_pretty(), "q + q^-1");
    }

    #[test]
    fn eval_rejects_poles() {
        let d = (&v(1) - &RatFunc::one()).inv().unwrap();
        assert_eq!(d.eval(Complex64::new(1.0, 0.0)), Err(Error::PoleAtEvaluation));
        let x = d.eval(Complex64::new(2.0, 0.0)).unwrap();
        assert!((x.re - 1.0).abs() < 1e-15);
    }
}
