use num_complex::Complex64;
use proptest::prelude::*;
use qgw::modules::{clebsch_gordan, decompose, dual, highest_weight_vectors, irreducible, tensor, verma, verma_complex};
use qgw::scalar::qnum;
use qgw::{ExactCtx, HalfInt, Mat, Num, NumericCtx, RatFunc, Scalar};

const C: ExactCtx = ExactCtx;

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

#[test]
fn irreducibles_satisfy_the_relations() {
    for t in 0..=8 {
        let v = irreducible::<RatFunc>(&C, h(t)).unwrap();
        assert_eq!(v.check_relations(&C, None).max_residual(), 0.0, "m = {}", h(t));
        assert_eq!(v.dim(), t as usize + 1);
        assert_eq!(v.k.trace(), qnum::<RatFunc>(&C, h(2 * t + 2)));
    }
    let ctx = NumericCtx::new(0.5).unwrap();
    for t in 0..=8 {
        assert!(irreducible::<Num>(&ctx, h(t)).unwrap().check_relations(&ctx, None).ok(1e-9));
    }
}

#[test]
fn spin_zero_is_trivial() {
    let v = irreducible::<RatFunc>(&C, h(0)).unwrap();
    assert!(v.e.is_zero() && v.f.is_zero());
    assert_eq!(v.k, Mat::identity(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_weights_match_clebsch_gordan(a in 0i64..=4, b in 0i64..=4) {
        let t = tensor(&irreducible::<RatFunc>(&C, h(a)).unwrap(), &irreducible(&C, h(b)).unwrap());
        prop_assert!(t.check_relations(&C, None).ok(0.0));
        let mut expected: Vec<HalfInt> = Vec::new();
        for k in ((a - b).abs()..=a + b).step_by(2) {
            expected.extend((0..=k).map(|i| h(k - 2 * i)));
        }
        let mut got = t.weights.clone();
        got.sort();
        expected.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn clebsch_gordan_is_complete_and_intertwines(a in 0i64..=3, b in 0i64..=3) {
        let cg = clebsch_gordan::<RatFunc>(&C, h(a), h(b)).unwrap();
        let spins: Vec<HalfInt> = cg.spins();
        let mut expected: Vec<HalfInt> = ((a - b).abs()..=a + b).step_by(2).map(h).collect();
        expected.reverse();
        prop_assert_eq!(spins, expected);
        prop_assert_eq!(cg.completeness_residual(), 0.0);
        let t = tensor(&irreducible::<RatFunc>(&C, h(a)).unwrap(), &irreducible(&C, h(b)).unwrap());
        prop_assert_eq!(cg.intertwining_residual(&C, &t).unwrap(), 0.0);
    }

    #[test]
    fn duals_are_modules(t in 0i64..=6) {
        let d = dual(&irreducible::<RatFunc>(&C, h(t)).unwrap());
        prop_assert!(d.check_relations(&C, None).ok(0.0));
        let hw = highest_weight_vectors(&d);
        prop_assert_eq!(hw.len(), 1);
        prop_assert_eq!(hw[0].0, h(t));
    }
}

#[test]
fn clebsch_gordan_examples() {
    let cg = clebsch_gordan::<RatFunc>(&C, h(1), h(1)).unwrap();
    assert_eq!(cg.spins(), vec![h(2), h(0)]);
    // spin-0 vector: v_{1/2} ⊗ v_{-1/2} - q^{±1} v_{-1/2} ⊗ v_{1/2}
    let s = cg.summand(h(0)).unwrap();
    let v = s.iota.col(0);
    assert!(v[0].is_zero() && v[3].is_zero());
    let ratio = v[2].div(&v[1]).unwrap();
    assert!(ratio == -RatFunc::v_pow(2) || ratio == -RatFunc::v_pow(-2), "{ratio:?}");
    let cg = clebsch_gordan::<RatFunc>(&C, h(2), h(0)).unwrap();
    assert_eq!(cg.spins(), vec![h(2)]);
    assert_eq!(cg.summands[0].iota, Mat::identity(3));
    let cg = clebsch_gordan::<RatFunc>(&C, h(2), h(1)).unwrap();
    assert_eq!(cg.spins(), vec![h(3), h(1)]);
    assert_eq!(cg.summands.iter().map(|s| s.iota.cols()).sum::<usize>(), 6);
}

#[test]
fn highest_weight_vector_examples() {
    for t in 0..=4 {
        let hw = highest_weight_vectors(&irreducible::<RatFunc>(&C, h(t)).unwrap());
        assert_eq!(hw.iter().map(|x| x.0).collect::<Vec<_>>(), vec![h(t)]);
    }
    let t = tensor(&irreducible::<RatFunc>(&C, h(1)).unwrap(), &irreducible(&C, h(1)).unwrap());
    assert_eq!(highest_weight_vectors(&t).iter().map(|x| x.0).collect::<Vec<_>>(), vec![h(2), h(0)]);
    let m = verma::<RatFunc>(&C, h(1), 4).unwrap();
    assert_eq!(highest_weight_vectors(&m).iter().map(|x| x.0).collect::<Vec<_>>(), vec![h(1), h(-3)]);
}

#[test]
fn bgg_sequence_at_desk_scale() {
    for t in 1..=4i64 {
        let m = h(t);
        let depth = t as usize + 4;
        let big = verma::<RatFunc>(&C, m, depth).unwrap();
        let sub = verma::<RatFunc>(&C, -m - h(2), depth - (t as usize + 1)).unwrap();
        let irr = irreducible::<RatFunc>(&C, m).unwrap();
        for w in big.distinct_weights() {
            let d_big = big.weight_indices(w).len() as i64;
            let d_sub = sub.weight_indices(w).len() as i64;
            let d_irr = irr.weight_indices(w).len() as i64;
            assert_eq!(d_big - d_sub, d_irr, "m = {m}, weight {w}");
        }
        // the singular vector spans a submodule: E kills it
        let s = t as usize + 1;
        assert!(big.e.col(s).iter().all(|x| x.is_zero()));
        // on the first 2m+1 vectors, the quotient action is that of V(m)
        let idx: Vec<usize> = (0..s).collect();
        assert_eq!(big.e.submatrix(&idx, &idx), irr.e);
        assert_eq!(big.f.submatrix(&idx, &idx), irr.f);
        assert_eq!(big.k.submatrix(&idx, &idx), irr.k);
        assert!(big.check_relations(&C, Some(depth - 1)).ok(0.0));
        // the submodule action matches M(-m-1) under the inclusion
        let tail: Vec<usize> = (s..depth).collect();
        let inner: Vec<usize> = (0..depth - s - 1).collect();
        let bt = big.f.submatrix(&tail, &tail);
        assert_eq!(bt.submatrix(&inner, &inner), sub.f.submatrix(&inner, &inner));
        let et = big.e.submatrix(&tail, &tail);
        let ratio_ok = (0..inner.len().saturating_sub(1)).all(|i| et[(i, i + 1)] == sub.e[(i, i + 1)]);
        assert!(ratio_ok, "m = {m}");
    }
}

#[test]
fn complex_highest_weights() {
    let ctx = NumericCtx::new(0.5).unwrap();
    for m in [Complex64::new(0.3, 0.7), Complex64::new(-1.2, 0.0), Complex64::new(1.0, 0.0)] {
        let v = verma_complex(&ctx, m, 7).unwrap();
        assert!(v.check_relations(&ctx, Some(6)).ok(1e-10));
    }
    // at m = 1 the singular vector sits at depth 3
    let v = verma_complex(&ctx, Complex64::new(1.0, 0.0), 5).unwrap();
    assert!(v.e[(2, 3)].magnitude() < 1e-12);
}

#[test]
fn decomposition_of_a_triple_tensor() {
    let half = irreducible::<RatFunc>(&C, h(1)).unwrap();
    let t = tensor(&tensor(&half, &half), &half);
    let d = decompose(&t).unwrap();
    let mut spins = d.spins();
    spins.sort();
    assert_eq!(spins, vec![h(1), h(1), h(3)]);
    assert_eq!(d.completeness_residual(), 0.0);
    assert_eq!(d.intertwining_residual(&C, &t).unwrap(), 0.0);
    // numeric mode agrees
    let ctx = NumericCtx::new(0.75).unwrap();
    let hn = irreducible::<Num>(&ctx, h(1)).unwrap();
    let tn = tensor(&tensor(&hn, &hn), &hn);
    let dn = decompose(&tn).unwrap();
    assert!(dn.completeness_residual() < 1e-10);
}
