//! Expression parser and canonical printer for `U_q(sl2)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' int)?
//! atom   := 'E' | 'F' | 'K' | number | 'q' | 'v' | 'i' | '[' int ']_q' | '(' expr ')'
//! ```
//!
//! Division and negative powers are allowed for scalars and for `K`.
//! `i` is accepted in numeric mode only.

use super::{Mono, Pbw};
use crate::error::{Error, Result};
use crate::scalar::{qnum, HalfInt, Mode, Scalar};

pub fn parse<F: Scalar>(ctx: &F::Ctx, text: &str) -> Result<Pbw<F>> {
    let mut p = Parser::<F> { s: text.as_bytes(), pos: 0, ctx };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

struct Parser<'a, F: Scalar> {
    s: &'a [u8],
    pos: usize,
    ctx: &'a F::Ctx,
}

impl<'a, F: Scalar> Parser<'a, F> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Syntax { pos: start, msg: "expected integer".into() })
    }

    fn expr(&mut self) -> Result<Pbw<F>> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Pbw<F>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc.mul(self.ctx, &rhs);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                let inv = invert(&rhs).ok_or(Error::Syntax { pos: at, msg: "can only divide by a scalar or K power".into() })??;
                acc = acc.mul(self.ctx, &inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Pbw<F>> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Pbw<F>> {
        let at = self.pos;
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let n = self.int()?;
        if n >= 0 {
            return Ok(base.pow(self.ctx, n as u32));
        }
        let inv = invert(&base).ok_or(Error::Syntax { pos: at, msg: "negative power of a non-invertible element".into() })??;
        Ok(inv.pow(self.ctx, n.unsigned_abs() as u32))
    }

    fn atom(&mut self) -> Result<Pbw<F>> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        match c {
            b'E' => {
                self.pos += 1;
                Ok(Pbw::e())
            }
            b'F' => {
                self.pos += 1;
                Ok(Pbw::f())
            }
            b'K' => {
                self.pos += 1;
                Ok(Pbw::k())
            }
            b'H' => Err(self.err("H is not an element of the algebra; use K = q^H")),
            b'q' => {
                self.pos += 1;
                Ok(Pbw::scalar(F::v_pow(self.ctx, 2)))
            }
            b'v' => {
                self.pos += 1;
                Ok(Pbw::scalar(F::v_pow(self.ctx, 1)))
            }
            b'i' => {
                if F::MODE == Mode::Exact {
                    return Err(self.err("imaginary unit requires numeric mode"));
                }
                self.pos += 1;
                F::parse_text("[0, 1]").map(Pbw::scalar)
            }
            b'(' => {
                self.pos += 1;
                let x = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(x)
            }
            b'[' => {
                self.pos += 1;
                let n = self.int()?;
                if !(self.eat(b']') && self.eat(b'_') && self.eat(b'q')) {
                    return Err(self.err("expected ']_q'"));
                }
                Ok(Pbw::scalar(qnum::<F>(self.ctx, HalfInt::from_int(n))))
            }
            b'0'..=b'9' | b'.' => self.number().map(Pbw::scalar),
            _ => Err(self.err(&format!("unexpected character {:?}", c as char))),
        }
    }

    fn number(&mut self) -> Result<F> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        // scientific notation for numeric output such as 1e-3
        if self.pos < self.s.len() && (self.s[self.pos] == b'e') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
                self.pos += 1;
            }
            let ds = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if ds == self.pos {
                self.pos = save;
            }
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let bad = || Error::Syntax { pos: start, msg: format!("bad number {t:?}") };
        if let Ok(n) = t.parse::<i64>() {
            return Ok(F::from_i64(n));
        }
        match F::MODE {
            Mode::Numeric => {
                let x: f64 = t.parse().map_err(|_| bad())?;
                F::parse_text(&format!("[{x:e}, 0]"))
            }
            Mode::Exact => {
                let (ip, fp) = t.split_once('.').ok_or_else(bad)?;
                if fp.is_empty() || fp.len() > 17 || t.contains('e') {
                    return Err(bad());
                }
                let den = 10i64.pow(fp.len() as u32);
                let ip: i64 = if ip.is_empty() { 0 } else { ip.parse().map_err(|_| bad())? };
                let fp: i64 = fp.parse().map_err(|_| bad())?;
                Ok(F::from_ratio(ip * den + fp, den))
            }
        }
    }
}

/// Inverse of a scalar multiple of a `K` power; `None` otherwise.
fn invert<F: Scalar>(x: &Pbw<F>) -> Option<Result<Pbw<F>>> {
    if x.len() != 1 {
        return if x.is_zero() { Some(Err(Error::DivisionByZero)) } else { None };
    }
    let (m, c) = x.terms().next().unwrap();
    if m.f != 0 || m.e != 0 {
        return None;
    }
    Some(c.inv().map(|ci| Pbw::term(Mono::new(0, -m.k, 0), ci)))
}

fn wrap(s: String) -> String {
    let t = s.trim_start_matches('-');
    if t.contains(' ') || t.contains('/') || t.contains('(') {
        format!("({s})")
    } else {
        s
    }
}

fn term_string<F: Scalar>(m: &Mono, c: &F) -> String {
    let ms = m.to_string();
    let p = c.to_pretty();
    if ms == "1" {
        return if p.starts_with('-') && !p[1..].contains(' ') && !p.contains('/') { p } else { wrap(p) };
    }
    if c == &F::one() {
        ms
    } else if c == &-F::one() {
        format!("-{ms}")
    } else {
        format!("{}*{ms}", wrap(p))
    }
}

fn join_terms(terms: Vec<String>) -> String {
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

/// Canonical text: monomials `F^a*K^b*E^c` sorted lexicographically.
/// A common non-constant factor is pulled out in exact mode, so that
/// `(K - K^-1)/(q - q^-1)` prints as such.
pub(super) fn print<F: Scalar>(x: &Pbw<F>) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(String, Mono, F)> = x.terms().map(|(m, c)| (m.to_string(), *m, c.clone())).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    if F::MODE == Mode::Exact && terms.len() > 1 {
        let c0 = terms[0].2.clone();
        let ratios: Option<Vec<F>> = terms
            .iter()
            .map(|(_, _, c)| c.div(&c0).ok().filter(|r| r.is_constant()))
            .collect();
        if let (Some(ratios), false) = (ratios, c0.is_constant()) {
            let body = join_terms(terms.iter().zip(&ratios).map(|((_, m, _), r)| term_string(m, r)).collect());
            let inv = c0.inv().expect("nonzero");
            return if inv.is_laurent() {
                format!("({body})/({})", inv.to_pretty())
            } else {
                format!("{}*({body})", wrap(c0.to_pretty()))
            };
        }
    }
    join_terms(terms.iter().map(|(_, m, c)| term_string(m, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, Num, NumericCtx, RatFunc};

    fn p(s: &str) -> Pbw<RatFunc> {
        parse(&ExactCtx, s).unwrap()
    }

    #[test]
    fn commutator_prints_canonically() {
        let x = p("E*F - F*E");
        assert_eq!(x.to_string(), "(K - K^-1)/(q - q^-1)");
        assert_eq!(p(&x.to_string()), x);
    }

    #[test]
    fn unit_and_qnum() {
        assert_eq!(p("K*K^-1"), Pbw::one());
        let two = RatFunc::v_pow(2) + RatFunc::v_pow(-2);
        assert_eq!(p("[2]_q * F"), Pbw::f().scale(&two));
    }

    #[test]
    fn rejects_h_and_reports_position() {
        match parse::<RatFunc>(&ExactCtx, "E + H") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse::<RatFunc>(&ExactCtx, "E*(F").is_err());
        assert!(parse::<RatFunc>(&ExactCtx, "1/E").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in ["F^2*K*E - 3/2*E", "q*F + (1 + q^2)*K^-2", "(q - q^-1)^-1*E^2*F", "-1", "0.25*K"] {
            let x = p(s);
            assert_eq!(p(&x.to_string()), x, "{s} -> {x}");
        }
    }

    #[test]
    fn numeric_round_trip() {
        let ctx = NumericCtx::new(0.5).unwrap();
        let x: Pbw<Num> = parse(&ctx, "(0.5 + 2*i)*E*F - q*K^-1").unwrap();
        let y: Pbw<Num> = parse(&ctx, &x.to_string()).unwrap();
        assert!(x.approx_eq(&y, 1e-15));
    }
}
