//! Seeded random elements for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dkq::Dk;
use crate::double::Dbl;
use crate::linalg::Mat;
use crate::okq::{Coef, Pw};
use crate::scalar::{HalfInt, Scalar};
use crate::uq::{Mono, Pbw};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A nonzero integer in `-3..=3`.
    pub fn small_int(&mut self) -> i64 {
        loop {
            let n = self.rng.gen_range(-3..=3);
            if n != 0 {
                return n;
            }
        }
    }

    pub fn spin(&mut self, max: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.rng.gen_range(0..=max.twice()))
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn unit_interval(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn mono(&mut self, max_deg: u32) -> Mono {
        loop {
            let f = self.rng.gen_range(0..=max_deg);
            let e = self.rng.gen_range(0..=max_deg);
            let k: i32 = self.rng.gen_range(-2..=2);
            if f + e + k.unsigned_abs() <= max_deg {
                return Mono::new(f, k, e);
            }
        }
    }

    /// Sum of `terms` monomials of degree `≤ max_deg` with small integer coefficients.
    pub fn pbw<F: Scalar>(&mut self, max_deg: u32, terms: usize) -> Pbw<F> {
        let mut out = Pbw::zero();
        for _ in 0..terms {
            let m = self.mono(max_deg);
            out.add_term(m, F::from_i64(self.small_int()));
        }
        out
    }

    pub fn coef(&mut self, max: HalfInt) -> Coef {
        let m = self.spin(max);
        Coef::new(m, self.index(m.dim()), self.index(m.dim()))
    }

    pub fn pw<F: Scalar>(&mut self, max: HalfInt, terms: usize) -> Pw<F> {
        let mut out = Pw::zero();
        for _ in 0..terms {
            let c = self.coef(max);
            out = out.add(&Pw::term(c, F::from_i64(self.small_int())));
        }
        out
    }

    pub fn dk<F: Scalar>(&mut self, max: HalfInt, terms: usize) -> Dk<F> {
        let mut out = Dk::zero();
        for _ in 0..terms {
            let c = self.coef(max);
            let mut a = Mat::zeros(c.m.dim(), c.m.dim());
            a[(c.i, c.j)] = F::from_i64(self.small_int());
            out.add_component(c.m, &a);
        }
        out
    }

    /// Sum of `terms` products `x ⋈ a` of a matrix unit and a matrix coefficient.
    pub fn dbl<F: Scalar>(&mut self, max_dk: HalfInt, max_pw: HalfInt, terms: usize) -> Dbl<F> {
        let mut out = Dbl::zero();
        for _ in 0..terms {
            let x = self.dk(max_dk, 1);
            let c = self.coef(max_pw);
            out.add_term(c, &x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RatFunc;

    #[test]
    fn seeded_samples_repeat() {
        let a: Pw<RatFunc> = Sampler::new(9).pw(HalfInt::ONE, 3);
        let b: Pw<RatFunc> = Sampler::new(9).pw(HalfInt::ONE, 3);
        assert_eq!(a, b);
    }
}
