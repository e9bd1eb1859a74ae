use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Lambda, Mode, Scalar};
use crate::error::{Error, Result};

/// Ambient deformation parameter for numeric scalars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCtx {
    pub q: f64,
}

impl NumericCtx {
    /// `q` must be positive and different from 1.
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) || (q - 1.0).abs() < 1e-12 {
            return Err(Error::InvalidArgument(format!("q must be positive and != 1, got {q}")));
        }
        Ok(NumericCtx { q })
    }

    pub fn ln_q(&self) -> f64 {
        self.q.ln()
    }

    /// `hbar = ln(q) / 2 pi`.
    pub fn hbar(&self) -> f64 {
        self.q.ln() / (2.0 * std::f64::consts::PI)
    }
}

/// A complex number at the ambient numeric `q`.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Num(pub Complex64);

impl Num {
    pub fn re(self) -> f64 {
        self.0.re
    }
    pub fn real(x: f64) -> Self {
        Num(Complex64::new(x, 0.0))
    }
}

impl fmt::Debug for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Num {
    type Output = Num;
    fn add(self, rhs: Num) -> Num {
        Num(self.0 + rhs.0)
    }
}
impl Sub for Num {
    type Output = Num;
    fn sub(self, rhs: Num) -> Num {
        Num(self.0 - rhs.0)
    }
}
impl Mul for Num {
    type Output = Num;
    fn mul(self, rhs: Num) -> Num {
        Num(self.0 * rhs.0)
    }
}
impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        Num(-self.0)
    }
}

impl Scalar for Num {
    type Ctx = NumericCtx;
    const MODE: Mode = Mode::Numeric;

    fn zero() -> Self {
        Num(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Num(Complex64::new(1.0, 0.0))
    }
    fn from_i64(n: i64) -> Self {
        Num::real(n as f64)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Num::real(n as f64 / d as f64)
    }
    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Num(self.0.inv()))
    }
    fn conj(&self) -> Self {
        Num(self.0.conj())
    }
    fn v_pow(ctx: &NumericCtx, k: i64) -> Self {
        Num::real(ctx.q.sqrt().powi(k as i32))
    }
    fn q_pow_lambda(ctx: &NumericCtx, lambda: Lambda, twice_nu: i64) -> Result<Self> {
        let l = lambda.as_complex();
        Ok(Num(((l + 1.0) * (twice_nu as f64) * ctx.q.ln()).exp()))
    }
    fn magnitude(&self) -> f64 {
        self.0.norm()
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.0 - other.0).norm() <= tol
    }
    fn ctx_key(ctx: &NumericCtx) -> u64 {
        ctx.q.to_bits()
    }
    fn to_text(&self) -> String {
        format!("[{:e}, {:e}]", self.0.re, self.0.im)
    }
    fn parse_text(s: &str) -> Result<Self> {
        let bad = || Error::Syntax { pos: 0, msg: format!("expected [re, im], got {s:?}") };
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        Ok(Num(Complex64::new(re, im)))
    }
    fn to_pretty(&self) -> String {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            format!("{re}")
        } else if re == 0.0 {
            format!("{im}*i")
        } else {
            let sign = if im < 0.0 { "-" } else { "+" };
            format!("({re} {sign} {}*i)", im.abs())
        }
    }
    fn is_constant(&self) -> bool {
        true
    }
    fn is_laurent(&self) -> bool {
        false
    }
    fn from_exact(ctx: &NumericCtx, x: &super::RatFunc) -> Result<Self> {
        super::to_numeric(x, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_q_one() {
        assert!(NumericCtx::new(1.0).is_err());
        assert!(NumericCtx::new(-0.5).is_err());
        assert!(NumericCtx::new(0.5).is_ok());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let x = Num(Complex64::new(0.1, -1.0 / 3.0));
        assert_eq!(Num::parse_text(&x.to_text()).unwrap(), x);
    }
}
