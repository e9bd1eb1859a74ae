use std::time::Instant;

use qgw::dkq::{self, Dk};
use qgw::double::{self, Dbl};
use qgw::okq::{self, Coef, Pw};
use qgw::sample::Sampler;
use qgw::uq::{self, Pbw};
use qgw::{ExactCtx, HalfInt, Mat, RatFunc};

const C: ExactCtx = ExactCtx;

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn window_identity(w: HalfInt) -> Dk<RatFunc> {
    Dk::from_components(HalfInt::spins_up_to(w).map(|s| (s, Mat::identity(s.dim()))))
}

/// `Σ (Y_(1), a_(1)) Y_(2) (S(Y_(3)), a_(3)) ⋈ a_(2)` from the Hopf structure of `U_q`.
fn exchange_oracle(y: &Pbw<RatFunc>, c: Coef, w: HalfInt) -> Dbl<RatFunc> {
    let d2 = uq::coproduct(&C, y).map_leg(0, |m| uq::coproduct(&C, &Pbw::term(m, RatFunc::one())));
    let mut out = Dbl::zero();
    for (monos, coeff) in d2.terms() {
        let y1 = Pbw::term(monos[0], RatFunc::one());
        let y2 = Dk::embed(&C, &Pbw::term(monos[1], coeff.clone()), w);
        let sy3 = uq::antipode(&C, &Pbw::term(monos[2], RatFunc::one()));
        for k in 0..c.m.dim() {
            for l in 0..c.m.dim() {
                let p1 = okq::pair(&C, &y1, &Pw::coef(Coef::new(c.m, c.i, k)));
                let p3 = okq::pair(&C, &sy3, &Pw::coef(Coef::new(c.m, l, c.j)));
                let s = p1 * p3;
                if !s.is_zero() {
                    out.add_term(Coef::new(c.m, k, l), &y2.scale(&s));
                }
            }
        }
    }
    out
}

#[test]
fn exchange_matches_hopf_structure_of_uq() {
    let w = h(4);
    let ys = [Pbw::e(), Pbw::f(), Pbw::k(), Pbw::e().mul(&C, &Pbw::f()), Pbw::mono(2, -1, 1)];
    for y in &ys {
        let ey = Dk::embed(&C, y, w);
        for t in 0..=2 {
            let m = h(t);
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    let c = Coef::new(m, i, j);
                    let lhs = double::exchange_upto(&C, &Pw::coef(c), &ey, w - m - m);
                    let rhs = exchange_oracle(y, c, w - m - m);
                    assert_eq!(lhs, rhs, "y = {y}, c = {c:?}");
                }
            }
        }
    }
}

#[test]
fn exchange_agrees_with_product() {
    // (1 ⋈ α)(1_{1/2} ⋈ 1) through the product with a window unit on the left
    let a = okq::alpha::<RatFunc>(&C);
    let y = Dk::identity_at(HalfInt::HALF);
    let w = h(6);
    let lhs = Dbl::pure(&window_identity(w), &a).mul(&C, &Dbl::from_dk(&y)).truncate(h(4));
    let rhs = double::exchange(&C, &a, &y).truncate(h(4));
    assert_eq!(lhs, rhs);
    assert!(!rhs.is_zero());
}

#[test]
fn product_is_associative_on_seeded_triples() {
    let start = Instant::now();
    let mut s = Sampler::new(20240601);
    for n in 0..50 {
        let a: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 1);
        let b: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 1);
        let c: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 1);
        let lhs = a.mul(&C, &b).mul(&C, &c);
        let rhs = a.mul(&C, &b.mul(&C, &c));
        assert_eq!(lhs, rhs, "triple {n}");
    }
    eprintln!("associativity: {:?}", start.elapsed());
}

#[test]
fn counit_is_multiplicative() {
    let mut s = Sampler::new(11);
    for _ in 0..20 {
        let a: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 2);
        let b: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 2);
        assert_eq!(double::counit(&a.mul(&C, &b)), double::counit(&a) * double::counit(&b));
    }
}

#[test]
fn coproduct_is_an_algebra_map() {
    let w = HalfInt::HALF;
    let mut s = Sampler::new(5);
    for n in 0..6 {
        let a: Dbl<RatFunc> = s.dbl(HalfInt::HALF, HalfInt::HALF, 1);
        let b: Dbl<RatFunc> = s.dbl(HalfInt::HALF, HalfInt::HALF, 1);
        let big = w + a.max_pw_spin().unwrap() + a.max_pw_spin().unwrap();
        let lhs = double::coproduct(&C, &a.mul(&C, &b), w).unwrap();
        let da = double::coproduct(&C, &a, w).unwrap();
        let db = double::coproduct(&C, &b, big).unwrap();
        let rhs = da.mul(&C, &db).truncate(w);
        assert_eq!(lhs.max_diff(&rhs), 0.0, "sample {n}");
    }
}

#[test]
fn counit_laws_for_the_coproduct() {
    let w = HalfInt::ONE;
    let mut s = Sampler::new(8);
    for _ in 0..10 {
        let a: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 2);
        let da = double::coproduct(&C, &a, w).unwrap();
        assert_eq!(da.counit_leg(0), a.truncate(w));
        assert_eq!(da.counit_leg(1), a.truncate(w));
    }
    let u = Dbl::<RatFunc>::pure(&Dk::identity_at(HalfInt::ZERO), &Pw::unit());
    assert!(double::counit(&u).is_one());
}

#[test]
fn coproduct_rejects_oversized_support() {
    let a = Dbl::<RatFunc>::from_dk(&Dk::identity_at(h(6)));
    assert!(double::coproduct(&C, &a, HalfInt::ONE).is_err());
}

#[test]
fn antipode_identity_below_window() {
    // m(S ⊗ id)Δ(s) = ε(s) 1 on spins ≤ w, using legs up to w + 2m
    let w = HalfInt::HALF;
    let mut smp = Sampler::new(3);
    for _ in 0..4 {
        let a: Dbl<RatFunc> = smp.dbl(HalfInt::HALF, HalfInt::HALF, 1);
        let m = a.max_pw_spin().unwrap();
        let da = double::coproduct(&C, &a, w + m + m).unwrap();
        let lhs = da.map_and_multiply(&C, |x| double::antipode(&C, x), |x| x.clone()).truncate(w);
        let rhs = Dbl::from_dk(&window_identity(w)).scale(&double::counit(&a));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn antipode_and_star() {
    let mut s = Sampler::new(17);
    for _ in 0..6 {
        let a: Dbl<RatFunc> = s.dbl(HalfInt::HALF, HalfInt::HALF, 2);
        let b: Dbl<RatFunc> = s.dbl(HalfInt::HALF, HalfInt::HALF, 2);
        let ss = double::antipode(&C, &double::antipode(&C, &a));
        assert_eq!(ss, double::antipode_squared_factorwise(&C, &a));
        assert_eq!(double::star(&C, &double::star(&C, &a)), a);
        let ab = a.mul(&C, &b);
        assert_eq!(double::star(&C, &ab), double::star(&C, &b).mul(&C, &double::star(&C, &a)));
        assert_eq!(double::antipode(&C, &ab), double::antipode(&C, &b).mul(&C, &double::antipode(&C, &a)));
    }
    let w = h(2);
    assert_eq!(double::antipode(&C, &Dbl::<RatFunc>::unit(w)), Dbl::unit(w));
}

#[test]
fn compact_embedding_is_multiplicative() {
    let mut s = Sampler::new(23);
    for _ in 0..10 {
        let x: Pbw<RatFunc> = s.pbw(2, 2);
        let y: Pbw<RatFunc> = s.pbw(2, 2);
        for (m1, m2) in [(h(1), h(1)), (h(1), h(2)), (h(2), h(3))] {
            let lhs = double::iota_action(&C, &x.mul(&C, &y), m1, m2);
            let rhs = double::iota_action(&C, &x, m1, m2).mul(&double::iota_action(&C, &y, m1, m2));
            assert_eq!(lhs, rhs);
        }
    }
    // on V(m) ⊗ V(m)^* = End V(m) it is the adjoint action T ↦ X_(1) T S(X_(2))
    let v = qgw::modules::irreducible::<RatFunc>(&C, HalfInt::ONE).unwrap();
    let t = Mat::from_fn(3, 3, |i, j| RatFunc::from_i64((i * 3 + j) as i64 - 4));
    let x = Pbw::e();
    let vec_t = Mat::from_fn(9, 1, |r, _| t[(r / 3, r % 3)].clone());
    let img = double::iota_action(&C, &x, HalfInt::ONE, HalfInt::ONE).mul(&vec_t);
    let mut ad = Mat::zeros(3, 3);
    for (monos, c) in uq::coproduct(&C, &x).terms() {
        let a = v.act(&Pbw::term(monos[0], RatFunc::one()));
        let b = v.act(&uq::antipode(&C, &Pbw::term(monos[1], RatFunc::one())));
        ad = ad.add(&a.mul(&t).mul(&b).scale(c));
    }
    assert_eq!(img, Mat::from_fn(9, 1, |r, _| ad[(r / 3, r % 3)].clone()));
}

#[test]
fn yd_check_trivial_and_negative_controls() {
    let xs: Vec<Dk<RatFunc>> = (0..=2).map(|t| Dk::identity_at(h(t))).chain([Dk::embed(&C, &Pbw::e(), h(2))]).collect();
    let fs: Vec<Pw<RatFunc>> = vec![okq::alpha(&C), okq::beta(&C), okq::gamma(&C), okq::delta(&C)];
    // the trivial representation x ↦ ε(x), a ↦ ε(a)
    let triv_d = |x: &Dk<RatFunc>| Mat::from_fn(1, 1, |_, _| dkq::counit(x));
    let triv_o = |a: &Pw<RatFunc>| Mat::from_fn(1, 1, |_, _| okq::counit(a));
    let r = double::yd_check(&C, triv_d, triv_o, &xs, &fs, &[0], 0.0).unwrap();
    assert!(r.ok, "{r:?}");
    // perturbed O(K_q) action
    let bad_o = |a: &Pw<RatFunc>| Mat::from_fn(1, 1, |_, _| okq::counit(a) + a.coeff(Coef::new(HalfInt::HALF, 0, 1)));
    let r = double::yd_check(&C, triv_d, bad_o, &xs, &fs, &[0], 0.0).unwrap();
    assert!(!r.ok && r.counterexample.is_some());
}

#[test]
fn json_round_trip() {
    let mut s = Sampler::new(1);
    let a: Dbl<RatFunc> = s.dbl(HalfInt::ONE, HalfInt::ONE, 3);
    let j = serde_json::to_string(&a.to_json()).unwrap();
    assert_eq!(Dbl::<RatFunc>::from_json(&serde_json::from_str(&j).unwrap()).unwrap(), a);
}
