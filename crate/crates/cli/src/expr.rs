//! Expressions for elements of `O(K_q)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' int)?
//! atom   := 'alpha' | 'beta' | 'gamma' | 'delta' | 'c(' spin ',' int ',' int ')' | int | '(' expr ')'
//! ```

use qgw::okq::{self, Coef, Pw};
use qgw::{Error, HalfInt, Result, Scalar};

pub fn parse_pw<F: Scalar>(ctx: &F::Ctx, text: &str) -> Result<Pw<F>> {
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

impl<F: Scalar> Parser<'_, F> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        let hit = self.peek() == Some(c);
        self.pos += hit as usize;
        hit
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn token(&mut self, pred: impl Fn(u8) -> bool) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|&c| pred(c)) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let t = self.token(|c| c.is_ascii_digit());
        let n: i64 = t.parse().map_err(|_| self.err("expected an integer"))?;
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Result<Pw<F>> {
        let mut x = self.term()?;
        loop {
            if self.eat(b'+') {
                x = x.add(&self.term()?);
            } else if self.eat(b'-') {
                x = x.sub(&self.term()?);
            } else {
                return Ok(x);
            }
        }
    }

    fn term(&mut self) -> Result<Pw<F>> {
        let mut x = self.unary()?;
        while self.eat(b'*') {
            x = x.mul(self.ctx, &self.unary()?);
        }
        Ok(x)
    }

    fn unary(&mut self) -> Result<Pw<F>> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Pw<F>> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let n = self.int()?;
        if n < 0 {
            return Err(self.err("negative powers are not defined here"));
        }
        Ok((0..n).fold(Pw::unit(), |acc, _| acc.mul(self.ctx, &base)))
    }

    fn atom(&mut self) -> Result<Pw<F>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b')')?;
                Ok(x)
            }
            Some(c) if c.is_ascii_digit() => Ok(Pw::unit().scale(&F::from_i64(self.int()?))),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.token(|c| c.is_ascii_alphanumeric() || c == b'_');
                if name == "c" {
                    return self.coefficient();
                }
                okq::named(self.ctx, &name).ok_or_else(|| Error::Syntax { pos: start, msg: format!("unknown name {name:?}") })
            }
            _ => Err(self.err("expected a generator, coefficient, integer or '('")),
        }
    }

    fn coefficient(&mut self) -> Result<Pw<F>> {
        self.expect(b'(')?;
        let spin = self.token(|c| c != b',' && c != b')');
        let m: HalfInt = spin.trim().parse()?;
        if m.is_negative() {
            return Err(self.err("spin must be non-negative"));
        }
        self.expect(b',')?;
        let i = self.int()?;
        self.expect(b',')?;
        let j = self.int()?;
        self.expect(b')')?;
        let d = m.dim() as i64;
        if !(0..d).contains(&i) || !(0..d).contains(&j) {
            return Err(self.err(&format!("indices must lie in 0..{d} for spin {m}")));
        }
        Ok(Pw::coef(Coef::new(m, i as usize, j as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qgw::{ExactCtx, RatFunc};

    const C: ExactCtx = ExactCtx;

    #[test]
    fn named_generators_and_coefficients() {
        let a = parse_pw::<RatFunc>(&C, "alpha").unwrap();
        assert_eq!(a, okq::alpha(&C));
        let c = parse_pw::<RatFunc>(&C, "c(1/2, 0, 0)").unwrap();
        assert_eq!(c, Pw::coef(Coef::new(HalfInt::HALF, 0, 0)));
    }

    #[test]
    fn determinant_is_one() {
        let x = parse_pw::<RatFunc>(&C, "alpha*delta - beta*gamma*0 - alpha*delta + 1").unwrap();
        assert_eq!(x, Pw::unit());
        let p = parse_pw::<RatFunc>(&C, "(alpha + 2)^2").unwrap();
        let a = okq::alpha::<RatFunc>(&C);
        let two = Pw::unit().scale(&RatFunc::from_i64(2));
        assert_eq!(p, a.add(&two).mul(&C, &a.add(&two)));
    }

    #[test]
    fn errors_have_positions() {
        assert!(matches!(parse_pw::<RatFunc>(&C, "alpha + zeta"), Err(Error::Syntax { pos: 8, .. })));
        assert!(parse_pw::<RatFunc>(&C, "c(1/2, 2, 0)").is_err());
        assert!(parse_pw::<RatFunc>(&C, "alpha^-1").is_err());
    }
}
