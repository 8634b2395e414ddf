//! Randomized checks of the library invariants that cut across modules.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use gpade_core::constants::{bound_remainder, Verdict};
use gpade_core::derivation::iterate;
use gpade_core::digits::{digits_of_interval, expand_digits, gfun_value, repetition_count, theorem2_convergent, DigitsError};
use gpade_core::dioph::eval_certified;
use gpade_core::exact::rational::{mul_pow2, rat};
use gpade_core::exact::{IntervalReal, Rational};
use gpade_core::gfun::GFunctionSystem;
use gpade_core::pade::{build, feasible_qh};

fn system(i: usize) -> GFunctionSystem {
    match i {
        0 => GFunctionSystem::log1m().unwrap(),
        _ => GFunctionSystem::polylog(2).unwrap(),
    }
}

fn exact(x: Rational) -> impl Fn(u32) -> Result<IntervalReal, DigitsError> {
    move |_| Ok(IntervalReal::point(x.clone()))
}

/// Base-`b` digits of `num/den` in `[0, 1)` by long division.
fn long_division(num: i64, den: i64, base: u32, count: usize) -> Vec<u32> {
    let mut r = num;
    (0..count)
        .map(|_| {
            r *= base as i64;
            let d = r / den;
            r %= den;
            d as u32
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_sums_are_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let s = rat(a, b) + rat(c, d);
        prop_assert_eq!(s * Rational::from_integer(BigInt::from(b * d)), Rational::from_integer(BigInt::from(a * d + c * b)));
    }

    #[test]
    fn evaluation_nests_under_refinement(sysi in 0usize..2, num in -5i64..=5, den in 6i64..40, j in 1usize..3, e in 20i64..120) {
        let sys = system(sysi);
        let j = j.min(sys.n());
        let z = rat(num, den);
        let w = mul_pow2(&Rational::one(), -e);
        let coarse = eval_certified(&sys, j, &z, &w).unwrap();
        let fine = eval_certified(&sys, j, &z, &(&w / Rational::from_integer(10.into()))).unwrap();
        prop_assert!(coarse.width() <= w);
        prop_assert!(coarse.contains_interval(&fine));
    }

    #[test]
    fn remainder_bound_dominates_at_sampled_z(
        sysi in 0usize..2, p in 2usize..8, sel in 0usize..64, num in -50i64..=50, den in 100i64..400,
    ) {
        let sys = system(sysi);
        let z = rat(num, den);
        prop_assume!(!z.is_zero());
        let qh = feasible_qh(sys.n(), p, 1);
        let (q, h) = qh[sel % qh.len()];
        let approx = build(&sys, p, q, h).unwrap();
        let k_top = h / sys.d();
        let fam = iterate(&approx, &sys, k_top).unwrap();
        for k in 0..=k_top {
            let bound = bound_remainder(&fam, &sys, k, &z).unwrap();
            let qz = fam.qk[k].eval(&z);
            for j in 1..=sys.n() {
                let w = &bound / (qz.abs() + Rational::one()) * mul_pow2(&Rational::one(), -64);
                let f = eval_certified(&sys, j, &z, &w).unwrap();
                let r = (&f.scale(&qz) - &IntervalReal::point(fam.pk[k][j - 1].eval(&z))).abs();
                prop_assert!(r.hi() <= &bound, "k={} j={} |R|<={} bound={}", k, j, r.hi(), bound);
            }
        }
    }

    #[test]
    fn rational_digits_match_long_division(num in 0i64..997, den in 1i64..997, base in 2u32..17, count in 1usize..80) {
        prop_assume!(num < den);
        let ds = expand_digits(exact(rat(num, den)), base, count, 64, 64).unwrap();
        prop_assert_eq!(ds.certified_len, count);
        prop_assert!(ds.integer_part.is_zero());
        prop_assert_eq!(&ds.digits[..count], &long_division(num, den, base, count)[..]);
    }

    #[test]
    fn certified_digits_survive_refinement(sysi in 0usize..2, num in 1i64..=5, den in 7i64..60, bits in 40u32..200) {
        let sys = system(sysi);
        let f = gfun_value(&sys, sys.principal(), rat(num, den));
        let a = digits_of_interval(&f(bits).unwrap(), 10, 80);
        let b = digits_of_interval(&f(2 * bits).unwrap(), 10, 80);
        prop_assert!(b.certified_len >= a.certified_len);
        let l = a.certified_len;
        prop_assert_eq!(&a.digits[..l], &b.digits[..l]);
        if l > 0 {
            prop_assert_eq!(&a.integer_part, &b.integer_part);
        }
    }

    #[test]
    fn repetition_and_convergents_on_rationals(num in 1i64..997, den in 2i64..997, base in 2u32..11, t in 1usize..4, n in 1usize..30) {
        prop_assume!(num < den);
        let x = rat(num, den);
        let ds = expand_digits(exact(x.clone()), base, 400, 64, 64).unwrap();
        // the count depends on the digit string only
        let again = expand_digits(exact(x.clone()), base, 800, 64, 64).unwrap();
        // a block that repeats forever has no finite count
        if let Ok(c1) = repetition_count(&ds, t, n) {
            prop_assert_eq!(c1, repetition_count(&again, t, n).unwrap());
            let c = theorem2_convergent(&ds, &IntervalReal::point(x.clone()), t, n).unwrap();
            prop_assert_eq!(c.match_ok, Verdict::Holds);
            let bt: BigInt = num_traits::pow(BigInt::from(base), t) - 1;
            prop_assert_eq!(c.q_n, num_traits::pow(BigInt::from(base), n - 1) * bt);
            prop_assert!(!c.p_n.is_negative());
        }
    }
}
