//! Property tests for the exact arithmetic layers.

use logdp::affine::AffineForm;
use logdp::cyclic::{
    chain_valuations, enumerate_deep_valuations, hj_expand, hj_reconstruct, toric_log_discrepancy,
    LatticeValuation,
};
use logdp::rat::{rat, Rat};
use logdp::CyclicQuot;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-60i64..60, 1i64..40).prop_map(|(p, q)| rat(p, q))
}

fn form() -> impl Strategy<Value = AffineForm> {
    (small_rat(), small_rat()).prop_map(|(c, s)| AffineForm::new(c, s))
}

fn quot() -> impl Strategy<Value = CyclicQuot> {
    (2u64..40)
        .prop_flat_map(|n| (Just(n), 1u64..n))
        .prop_filter("coprime", |(n, q)| num_integer::gcd(*n, *q) == 1)
        .prop_map(|(n, q)| CyclicQuot::new(n, q).unwrap())
}

proptest! {
    /// Evaluation is linear: eval(f+g) = eval(f)+eval(g), eval(c f) = c eval(f).
    #[test]
    fn eval_is_linear(f in form(), g in form(), c in small_rat(), p in small_rat()) {
        prop_assert_eq!((&f + &g).eval(&p), &f.eval(&p) + &g.eval(&p));
        prop_assert_eq!(f.scale(&c).eval(&p), &c * &f.eval(&p));
    }

    /// Construction reduces: (2a)/(2b) equals a/b.
    #[test]
    fn reduction_idempotent(a in -1000i64..1000, b in 1i64..1000) {
        prop_assert_eq!(rat(2 * a, 2 * b), rat(a, b));
    }

    /// A returned root evaluates to exactly zero.
    #[test]
    fn solve_zero_back_substitutes(f in form()) {
        if let logdp::ZeroSolution::Root(r) = f.solve_zero() {
            prop_assert_eq!(f.eval(&r), logdp::rat::zero());
        }
    }

    /// Expansion and reconstruction are inverse, and every entry is <= -2.
    #[test]
    fn hj_roundtrip(s in quot()) {
        let chain = hj_expand(s).unwrap();
        prop_assert!(chain.0.iter().all(|&c| c <= -2));
        prop_assert_eq!(hj_reconstruct(&chain).unwrap(), s);
    }

    /// The log discrepancy is additive on the valuation lattice.
    #[test]
    fn log_discrepancy_additive(s in quot(), d1 in 0i64..6, d2 in 0i64..6) {
        let d1 = AffineForm::constant_form(rat(d1, 7));
        let d2 = AffineForm::constant_form(rat(d2, 7));
        let vs = chain_valuations(s).unwrap();
        let v = &vs[0];
        let w = vs.last().unwrap();
        let sum = LatticeValuation::new(&v.x + &w.x, &v.y + &w.y);
        let a = toric_log_discrepancy(s, &d1, &d2, v).unwrap();
        let b = toric_log_discrepancy(s, &d1, &d2, w).unwrap();
        let c = toric_log_discrepancy(s, &d1, &d2, &sum).unwrap();
        prop_assert_eq!(&a + &b, c);
    }

    /// Deep-valuation enumeration is symmetric under swapping the axes
    /// (inverting q) and reports values consistent with re-evaluation.
    #[test]
    fn enumeration_swap_symmetry(s in quot(), c1 in 0i64..6, c2 in 0i64..6) {
        let d1 = AffineForm::constant_form(rat(c1, 7));
        let d2 = AffineForm::constant_form(rat(c2, 7));
        let p = logdp::rat::zero();
        let thr = rat(2, 5);
        let a = enumerate_deep_valuations(s, &d1, &d2, &p, &thr).unwrap();
        let b = enumerate_deep_valuations(s.swapped(), &d2, &d1, &p, &thr).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (v, l) in &a {
            let l2 = toric_log_discrepancy(s, &d1, &d2, v).unwrap();
            prop_assert_eq!(l.clone(), l2.eval(&p));
            let swapped = LatticeValuation::new(v.y.clone(), v.x.clone());
            prop_assert!(b.iter().any(|(w, lw)| *w == swapped && lw == l));
        }
    }
}
