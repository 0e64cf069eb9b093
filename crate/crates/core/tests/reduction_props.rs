use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

use lucas_repdigits::arith::Ball;
use lucas_repdigits::bounds::Mode;
use lucas_repdigits::lucas::SequenceParams;
use lucas_repdigits::reduction::{
    build_lambda1_family, build_lambda2_family, reduce_family, reduce_instance, ReductionInstance,
};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn pell_m() -> BigInt {
    BigInt::from(54) * num_traits::pow(BigInt::from(10), 30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn no_small_solutions_past_the_bound(
        tp in 1i64..50_000, tq in 1i64..10_000,
        mp in -30_000i64..30_000, mq in 1i64..10_000,
        ap in 1i64..100, bp in 1i64..200, m in 1i64..500,
    ) {
        let tau = rat(tp, tq);
        let mu = rat(mp, mq);
        let a = rat(ap, 1);
        let b = BigRational::one() + rat(bp, 100);
        let inst = ReductionInstance {
            label: "prop".into(),
            tau: Ball::from_rational(&tau, 256),
            mu: Ball::from_rational(&mu, 256),
            a: Ball::from_rational(&a, 256),
            b: Ball::from_rational(&b, 256),
            m: BigInt::from(m),
            tau_exact: Some(tau.clone()),
        };
        if let Ok(out) = reduce_instance(&inst) {
            prop_assert!(out.q > BigInt::from(6 * m));
            prop_assert!(out.epsilon.is_positive());
            let rhs = &a / num_traits::pow(b.clone(), out.bound as usize + 1);
            for u in 0..=m {
                let x = &tau * BigRational::from_integer(u.into()) + &mu;
                prop_assert!((&x - x.round()).abs() >= rhs, "u = {}", u);
            }
        }
    }
}

#[test]
fn family_max_dominates_members() {
    let fam = build_lambda1_family(&SequenceParams::pell(), 10, &pell_m(), Mode::Paper, 2048).unwrap();
    let out = reduce_family(&fam).unwrap();
    assert!(out.outcomes.iter().all(|o| o.bound <= out.bound));
    assert!(out.outcomes.iter().all(|o| o.q > pell_m() * 6));
    // reversing the family changes nothing
    let mut rev = fam.clone();
    rev.reverse();
    let back = reduce_family(&rev).unwrap();
    assert_eq!(back.bound, out.bound);
    assert_eq!(back.epsilon_min.to_decimal(20), out.epsilon_min.to_decimal(20));
}

#[test]
fn epsilon_survives_doubled_precision() {
    let pell = SequenceParams::pell();
    let lo = reduce_family(&build_lambda1_family(&pell, 10, &pell_m(), Mode::Paper, 2048).unwrap()).unwrap();
    let hi = reduce_family(&build_lambda1_family(&pell, 10, &pell_m(), Mode::Paper, 4096).unwrap()).unwrap();
    for (a, b) in lo.outcomes.iter().zip(&hi.outcomes) {
        assert_eq!(a.q, b.q);
        assert_eq!(a.bound, b.bound);
        assert!(b.epsilon.is_positive());
        assert!(a.epsilon.contains_ball(&b.epsilon) || b.epsilon.contains_ball(&a.epsilon) || a.epsilon.cmp_ball(&b.epsilon).is_none());
    }
}

#[test]
fn pell_lambda2_family() {
    let pell = SequenceParams::pell();
    let fam = build_lambda2_family(&pell, 10, &pell_m(), 95, Mode::Paper, 2048).unwrap();
    assert_eq!(fam.len(), 855);
    let out = reduce_family(&fam).unwrap();
    // independent 400-digit evaluation: max bound 99, min ε ≈ 0.000335 at a = 8, j = 53
    assert_eq!(out.bound, 99);
    assert!((out.epsilon_min.to_f64() - 0.000335).abs() < 1e-6);
    let i = fam.iter().position(|f| f.label == "lambda2[a=8,j=53]").unwrap();
    assert_eq!(out.outcomes[i].bound, 99);
    assert!(out.outcomes.iter().all(|o| o.shift.is_none()));
}

#[test]
fn fibonacci_degenerate_instance() {
    // φ⁴ - 1 = √5 φ² makes μ for a = 9, j = 4 exactly 2
    let fib = SequenceParams::fibonacci();
    let fam = build_lambda2_family(&fib, 10, &BigInt::from(10).pow(30), 4, Mode::Paper, 2048).unwrap();
    let i = fam.iter().position(|f| f.label == "lambda2[a=9,j=4]").unwrap();
    assert!(fam[i].mu.contains_int(&BigInt::from(2)));
    let out = reduce_instance(&fam[i]).unwrap();
    assert_eq!(out.shift, Some(0));
    assert!(out.bound < 200);
}
