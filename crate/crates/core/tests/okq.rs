use qgw::okq::{self, Coef, Pw, PwTensor};
use qgw::uq::{self, Mono, Pbw, Tensor};
use qgw::{ExactCtx, HalfInt, Mat, Num, NumericCtx, RatFunc, Scalar};

const C: ExactCtx = ExactCtx;

fn basis(max_twice: i64) -> Vec<Coef> {
    let mut out = Vec::new();
    for t in 0..=max_twice {
        let m = HalfInt::from_twice(t);
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                out.push(Coef::new(m, i, j));
            }
        }
    }
    out
}

fn monomials(max_deg: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for f in 0..=max_deg {
        for e in 0..=max_deg - f {
            for k in -1i32..=1 {
                if f + e + k.unsigned_abs() <= max_deg {
                    out.push(Mono::new(f, k, e));
                }
            }
        }
    }
    out
}

fn gens() -> Vec<Pw<RatFunc>> {
    vec![okq::alpha(&C), okq::beta(&C), okq::gamma(&C), okq::delta(&C), Pw::unit()]
}

#[test]
fn product_is_dual_to_coproduct() {
    // (ΔX, b ⊗ a) = (X, ab)
    let gs = gens();
    for mono in monomials(3) {
        let x = Pbw::term(mono, RatFunc::one());
        let dx = uq::coproduct(&C, &x);
        for a in &gs {
            for b in &gs {
                let lhs = okq::pair_tensor(&C, &dx, &PwTensor::pure(&[b, a]));
                assert_eq!(lhs, okq::pair(&C, &x, &a.mul(&C, b)), "{mono}");
            }
        }
    }
}

#[test]
fn coproduct_is_dual_to_product() {
    // (X ⊗ Y, Δa) = (XY, a)
    let ms = monomials(2);
    for c in basis(2) {
        let a = Pw::<RatFunc>::coef(c);
        let da = okq::coproduct(&a);
        for x in &ms {
            for y in &ms {
                let (px, py) = (Pbw::term(*x, RatFunc::one()), Pbw::term(*y, RatFunc::one()));
                let t = Tensor::pure(&[&px, &py]);
                assert_eq!(okq::pair_tensor(&C, &t, &da), okq::pair(&C, &px.mul(&C, &py), &a));
            }
        }
    }
}

#[test]
fn pairing_examples() {
    let d = okq::delta::<RatFunc>(&C);
    assert_eq!(okq::pair(&C, &Pbw::one(), &d), okq::counit(&d));
    let ef = Pbw::e().mul(&C, &Pbw::f());
    let t = Tensor::pure(&[&Pbw::e(), &Pbw::f()]);
    assert_eq!(okq::pair_tensor(&C, &t, &okq::coproduct(&d)), okq::pair(&C, &ef, &d));
}

#[test]
fn hopf_axioms_up_to_three_halves() {
    for c in basis(3) {
        let a = Pw::<RatFunc>::coef(c);
        let da = okq::coproduct(&a);
        assert_eq!(da.coproduct_leg(0), da.coproduct_leg(1), "coassociativity {c:?}");
        assert_eq!(da.counit_leg(0).into_pw(), a);
        assert_eq!(da.counit_leg(1).into_pw(), a);
        let unit = Pw::unit().scale(&okq::counit(&a));
        assert_eq!(da.map_leg_pw(0, |x| okq::antipode(&C, x)).multiply_legs(&C), unit, "S⊗id {c:?}");
        assert_eq!(da.map_leg_pw(1, |x| okq::antipode(&C, x)).multiply_legs(&C), unit, "id⊗S {c:?}");
    }
}

#[test]
fn coproduct_and_counit_are_algebra_maps() {
    let b = basis(2);
    for x in &b {
        for y in &b {
            let (a, c) = (Pw::<RatFunc>::coef(*x), Pw::coef(*y));
            let ac = a.mul(&C, &c);
            assert_eq!(okq::coproduct(&ac), okq::coproduct(&a).mul(&C, &okq::coproduct(&c)));
            assert_eq!(okq::counit(&ac), okq::counit(&a) * okq::counit(&c));
        }
    }
}

#[test]
fn star_is_antimultiplicative_involution() {
    let b = basis(2);
    for x in &b {
        let a = Pw::<RatFunc>::coef(*x);
        assert_eq!(okq::star(&C, &okq::star(&C, &a)), a);
        for y in &b {
            let c = Pw::coef(*y);
            let lhs = okq::star(&C, &a.mul(&C, &c));
            let rhs = okq::star(&C, &c).mul(&C, &okq::star(&C, &a));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn star_satisfies_defining_pairing() {
    // (X, a*) = conj((S^-1(X)^*, a)), numeric with complex coefficients
    let ctx = NumericCtx::new(0.5).unwrap();
    let z = Num(num_complex::Complex64::new(0.3, -1.2));
    for c in basis(2) {
        let a = Pw::<Num>::coef(c).scale(&z);
        let sa = okq::star(&ctx, &a);
        for mono in monomials(2) {
            let x = Pbw::term(mono, Num::one());
            let lhs = okq::pair(&ctx, &x, &sa);
            let rhs = okq::pair(&ctx, &uq::star(&ctx, &uq::antipode_inv(&ctx, &x)), &a).conj();
            assert!(lhs.approx_eq(&rhs, 1e-12), "{c:?} {mono}");
        }
    }
}

#[test]
fn spin_half_generates_up_to_three_halves() {
    // every spin-m block is spanned by 2m-fold products of spin-1/2 generators
    let g: Vec<Pw<RatFunc>> = gens()[..4].to_vec();
    let mut words: Vec<Pw<RatFunc>> = vec![Pw::unit()];
    for twice in 1..=3i64 {
        words = words.iter().flat_map(|w| g.iter().map(move |x| w.mul(&C, x))).collect();
        let m = HalfInt::from_twice(twice);
        let rows: Vec<Vec<RatFunc>> = words
            .iter()
            .map(|w| {
                let a = w.get(m).cloned().unwrap_or_else(|| Mat::zeros(m.dim(), m.dim()));
                a.entries().to_vec()
            })
            .collect();
        assert_eq!(Mat::from_rows(rows).rank(), m.dim() * m.dim(), "spin {m}");
    }
}

#[test]
fn json_round_trip() {
    let a = okq::beta::<RatFunc>(&C).add(&okq::alpha(&C).mul(&C, &okq::gamma(&C)));
    let j = serde_json::to_string(&a.to_json()).unwrap();
    let back = Pw::<RatFunc>::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn antipode_satisfies_skew_pairing() {
    for c in basis(2) {
        let a = Pw::<RatFunc>::coef(c);
        for mono in monomials(2) {
            let x = Pbw::term(mono, RatFunc::one());
            assert_eq!(okq::pair(&C, &x, &okq::antipode(&C, &a)), okq::pair(&C, &uq::antipode_inv(&C, &x), &a));
            assert_eq!(okq::pair(&C, &x, &okq::antipode_inv(&C, &a)), okq::pair(&C, &uq::antipode(&C, &x), &a));
        }
    }
}

#[test]
fn star_is_compatible_with_coproduct_and_antipode() {
    for c in basis(2) {
        let a = Pw::<RatFunc>::coef(c);
        let lhs = okq::coproduct(&okq::star(&C, &a));
        let rhs = okq::coproduct(&a).map_leg_pw(0, |x| okq::star(&C, x)).map_leg_pw(1, |x| okq::star(&C, x));
        assert_eq!(lhs, rhs, "{c:?}");
        // S * S * = id
        let b = okq::star(&C, &okq::antipode(&C, &okq::star(&C, &okq::antipode(&C, &a))));
        assert_eq!(b, a);
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;
    use qgw::sample::Sampler;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn product_is_associative_and_star_reverses_it(seed in any::<u64>()) {
            let mut s = Sampler::new(seed);
            let (a, b, c): (Pw<RatFunc>, Pw<RatFunc>, Pw<RatFunc>) = (s.pw(HalfInt::ONE, 2), s.pw(HalfInt::ONE, 2), s.pw(HalfInt::HALF, 2));
            prop_assert_eq!(a.mul(&C, &b).mul(&C, &c), a.mul(&C, &b.mul(&C, &c)));
            prop_assert_eq!(okq::star(&C, &a.mul(&C, &b)), okq::star(&C, &b).mul(&C, &okq::star(&C, &a)));
            prop_assert_eq!(okq::antipode(&C, &a.mul(&C, &b)), okq::antipode(&C, &b).mul(&C, &okq::antipode(&C, &a)));
        }

        #[test]
        fn pairing_is_skew_dual(seed in any::<u64>()) {
            // (ΔX, b ⊗ a) = (X, ab)
            let mut s = Sampler::new(seed);
            let x: Pbw<RatFunc> = s.pbw(3, 2);
            let (a, b): (Pw<RatFunc>, Pw<RatFunc>) = (s.pw(HalfInt::ONE, 2), s.pw(HalfInt::HALF, 2));
            let lhs = okq::pair_tensor(&C, &uq::coproduct(&C, &x), &PwTensor::pure(&[&b, &a]));
            prop_assert_eq!(lhs, okq::pair(&C, &x, &a.mul(&C, &b)));
        }
    }
}
