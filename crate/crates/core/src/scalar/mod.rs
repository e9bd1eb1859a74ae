//! Scalar fields: exact `Q(v)` with `v^2 = q`, and complex numbers at a fixed real `q`.

mod halfint;
mod numeric;
mod ratfunc;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use halfint::HalfInt;
pub use numeric::{Num, NumericCtx};
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};

/// Default absolute tolerance for numeric equality checks.
pub const NUMERIC_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Numeric,
}

/// Context for exact arithmetic; `q` stays formal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactCtx;

/// The `lambda` parameter of a principal series representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lambda {
    /// A half-integer, usable in both modes.
    Half(HalfInt),
    /// Any complex number; numeric mode only.
    Complex(Complex64),
}

impl Lambda {
    pub fn as_complex(self) -> Complex64 {
        match self {
            Lambda::Half(h) => Complex64::new(h.to_f64(), 0.0),
            Lambda::Complex(z) => z,
        }
    }
}

/// A coefficient field for every algebra in the crate.
///
/// Values are immutable. Arithmetic between values built from different
/// contexts is a logic error.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + Debug + Send + Sync + 'static;

    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;
    /// Complex conjugation; the identity on `Q(v)` since `v` is real.
    fn conj(&self) -> Self;
    /// `v^k = q^(k/2)`.
    fn v_pow(ctx: &Self::Ctx, k: i64) -> Self;
    /// `q^((lambda + 1) * 2 nu)` with `2 nu = twice_nu`.
    fn q_pow_lambda(ctx: &Self::Ctx, lambda: Lambda, twice_nu: i64) -> Result<Self>;
    /// Size used for pivot selection; any nonzero exact value is `1`.
    fn magnitude(&self) -> f64;
    /// Equality up to `tol` in numeric mode, structural in exact mode.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    /// Key identifying the context for memo tables.
    fn ctx_key(ctx: &Self::Ctx) -> u64;
    /// Textual scalar form used in JSON output.
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;
    /// Human-readable form that the expression parser accepts.
    fn to_pretty(&self) -> String;
    /// True for elements of the prime field (numeric values always qualify).
    fn is_constant(&self) -> bool;
    /// True for Laurent polynomials in `v`; always false in numeric mode.
    fn is_laurent(&self) -> bool;
    /// The value of an exact element in this field.
    fn from_exact(ctx: &Self::Ctx, x: &RatFunc) -> Result<Self>;

    fn q(ctx: &Self::Ctx) -> Self {
        Self::v_pow(ctx, 2)
    }

    /// Eigenvalue `q^(2 nu)` of `K` on a weight-`nu` vector.
    fn k_eigen(ctx: &Self::Ctx, nu: HalfInt) -> Self {
        Self::v_pow(ctx, 2 * nu.twice())
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }
}

impl Scalar for RatFunc {
    type Ctx = ExactCtx;
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::from_i64(n)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        RatFunc::from_rational(num_rational::BigRational::new(n.into(), d.into()))
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        RatFunc::inv(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn v_pow(_: &ExactCtx, k: i64) -> Self {
        RatFunc::v_pow(k)
    }
    fn q_pow_lambda(_: &ExactCtx, lambda: Lambda, twice_nu: i64) -> Result<Self> {
        match lambda {
            // q^((l+1) 2nu) = v^((2l + 2) * 2nu)
            Lambda::Half(l) => Ok(RatFunc::v_pow((l.twice() + 2) * twice_nu)),
            Lambda::Complex(_) => Err(Error::NumericOnly("complex lambda")),
        }
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn ctx_key(_: &ExactCtx) -> u64 {
        0
    }
    fn to_text(&self) -> String {
        RatFunc::to_text(self)
    }
    fn parse_text(s: &str) -> Result<Self> {
        RatFunc::parse_text(s)
    }
    fn to_pretty(&self) -> String {
        RatFunc::to_pretty(self)
    }
    fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }
    fn is_laurent(&self) -> bool {
        RatFunc::is_laurent(self)
    }
    fn from_exact(_: &ExactCtx, x: &RatFunc) -> Result<Self> {
        Ok(x.clone())
    }
}

/// `[a]_q = (q^a - q^-a) / (q - q^-1)` for a half-integer `a`.
pub fn qnum<F: Scalar>(ctx: &F::Ctx, a: HalfInt) -> F {
    // q^a = v^(2a) = v^twice
    let t = a.twice();
    if t.rem_euclid(2) == 0 && F::MODE == Mode::Exact {
        // integer a: q^(a-1) + q^(a-3) + ... + q^(-a+1)
        let n = t / 2;
        let sign = if n < 0 { -F::one() } else { F::one() };
        let n = n.abs();
        let sum = (0..n).fold(F::zero(), |acc, j| acc + F::v_pow(ctx, 2 * (n - 1 - 2 * j)));
        return sign * sum;
    }
    let num = F::v_pow(ctx, t) - F::v_pow(ctx, -t);
    let den = F::v_pow(ctx, 2) - F::v_pow(ctx, -2);
    num.div(&den).expect("q - 1/q is invertible")
}

/// `[z]_q` for complex `z`, with `q^z = exp(z ln q)`.
pub fn qnum_complex(ctx: &NumericCtx, z: Complex64) -> Num {
    let l = ctx.q.ln();
    let qz = (z * l).exp();
    let qmz = (-z * l).exp();
    Num((qz - qmz) / (ctx.q - 1.0 / ctx.q))
}

/// Evaluates an exact scalar at a numeric `q`.
pub fn to_numeric(x: &RatFunc, ctx: &NumericCtx) -> Result<Num> {
    x.eval_at_q(ctx.q).map(Num)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn qnum_two_is_q_plus_qinv() {
        let x: RatFunc = qnum(&ExactCtx, HalfInt::from_int(2));
        assert_eq!(x, RatFunc::v_pow(2) + RatFunc::v_pow(-2));
        let z: RatFunc = qnum(&ExactCtx, HalfInt::ZERO);
        assert!(z.is_zero());
    }

    #[test]
    fn qnum_difference_of_squares() {
        for a in -8..=8i64 {
            for b in -8..=8i64 {
                let f = |n: i64| -> RatFunc { qnum(&ExactCtx, HalfInt::from_int(n)) };
                let lhs = f(a - b) * f(a + b);
                let rhs = f(a) * f(a) - f(b) * f(b);
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn qnum_is_odd_including_half_integers() {
        for t in -9..=9 {
            let p: RatFunc = qnum(&ExactCtx, h(t));
            let m: RatFunc = qnum(&ExactCtx, h(-t));
            assert_eq!(p, -m);
        }
    }

    #[test]
    fn eval_of_qnum3_at_two() {
        let x: RatFunc = qnum(&ExactCtx, HalfInt::from_int(3));
        let z = x.eval_at_q(2.0).unwrap();
        assert!((z.re - 21.0 / 4.0).abs() < 1e-14 && z.im == 0.0);
    }

    #[test]
    fn exact_and_numeric_qnum_agree() {
        for q in [0.5, 0.75, 2.0] {
            let ctx = NumericCtx::new(q).unwrap();
            for t in -10..=10 {
                let e: RatFunc = qnum(&ExactCtx, h(t));
                let n: Num = qnum(&ctx, h(t));
                let ev = e.eval_at_q(q).unwrap();
                let scale = ev.norm().max(1.0);
                assert!((ev - n.0).norm() / scale < 1e-12, "q={q} 2a={t}");
            }
        }
    }

    #[test]
    fn qnum_complex_values() {
        let ctx = NumericCtx::new(0.5).unwrap();
        assert!((qnum_complex(&ctx, Complex64::new(1.0, 0.0)).0 - 1.0).norm() < 1e-14);
        let z = Complex64::new(0.0, std::f64::consts::PI / ctx.q.ln());
        assert!(qnum_complex(&ctx, z).0.norm() < 1e-14);
        // direct evaluation of the defining formula at 1 + 0.3i
        let w = Complex64::new(1.0, 0.3);
        let q = Complex64::new(0.5, 0.0);
        let direct = (q.powc(w) - q.powc(-w)) / (q - 1.0 / q);
        let ours = qnum_complex(&ctx, w).0;
        assert!((direct.norm_sqr() - ours.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn inverse_of_deformation_denominator_exists() {
        let d = RatFunc::v_pow(2) - RatFunc::v_pow(-2);
        assert!(Scalar::inv(&d).is_ok());
    }
}
