use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use heegner_ez::padic::pow_p;
use heegner_ez::{PadicContext, PadicNumber};

const PRIMES: [u64; 4] = [5, 7, 11, 13];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rat(p: u64, r: &BigRational, prec: i64) -> PadicNumber {
    PadicNumber::from_rational(p, r, prec)
}

/// `r` and `r + p^prec·e` are indistinguishable at precision `prec`.
fn perturbed(p: u64, r: &BigRational, prec: i64, e: i64) -> BigRational {
    let shift = if prec >= 0 {
        BigRational::from_integer(pow_p(p, prec))
    } else {
        BigRational::new(BigInt::one(), pow_p(p, -prec))
    };
    r + shift * BigRational::from_integer(e.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn log_is_additive_on_units(pi in 0usize..4, a in 1i64..5000, b in 1i64..5000, m in 8i64..30) {
        let p = PRIMES[pi];
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        let ctx = PadicContext::new(p, m).unwrap();
        let (x, y) = (ctx.int(a), ctx.int(b));
        let lhs = (&x * &y).iwasawa_log().unwrap();
        let rhs = &x.iwasawa_log().unwrap() + &y.iwasawa_log().unwrap();
        prop_assert!(lhs.agrees_with(&rhs, lhs.precision().min(rhs.precision())));
        prop_assert!(lhs.precision() >= m - 1);
    }

    #[test]
    fn log_kills_p_and_roots_of_unity(pi in 0usize..4, a in 1i64..500, k in 0i64..4) {
        let p = PRIMES[pi];
        prop_assume!(a % p as i64 != 0);
        let ctx = PadicContext::new(p, 20).unwrap();
        let x = ctx.int(a);
        let w = ctx.teichmuller(&x).unwrap();
        let scaled = &x * &ctx.int(p as i64).pow(k).unwrap();
        let a1 = scaled.iwasawa_log().unwrap();
        let a2 = x.iwasawa_log().unwrap();
        prop_assert!(a1.agrees_with(&a2, a1.precision().min(a2.precision())));
        prop_assert!(w.iwasawa_log().unwrap().is_zero());
    }

    #[test]
    fn teichmuller_and_sqrt_identities(pi in 0usize..4, a in 1i64..10_000, m in 5i64..40) {
        let p = PRIMES[pi];
        prop_assume!(a % p as i64 != 0);
        let ctx = PadicContext::new(p, m).unwrap();
        let x = ctx.int(a);
        let w = x.teichmuller().unwrap();
        prop_assert_eq!(w.pow(p as i64 - 1).unwrap(), ctx.one());
        prop_assert!(w.agrees_with(&x, 1));
        let sq = &x * &x;
        let r = sq.hensel_sqrt().unwrap();
        prop_assert_eq!(&r * &r, sq);
    }

    #[test]
    fn exp_inverts_log_on_one_units(pi in 0usize..4, k in 1i64..2000, m in 6i64..30) {
        let p = PRIMES[pi];
        let ctx = PadicContext::new(p, m).unwrap();
        let x = ctx.int(1 + p as i64 * k);
        let back = x.iwasawa_log().unwrap().exp().unwrap();
        prop_assert!(back.agrees_with(&x, back.precision()));
        prop_assert!(back.precision() >= m - 1);
    }

    /// Declared output precision is a true lower bound: perturbing each input
    /// within its own precision does not move the result inside that bound.
    #[test]
    fn declared_precision_is_sound(
        pi in 0usize..4,
        (an, ad) in (-3000i64..3000, 1i64..400),
        (bn, bd) in (-3000i64..3000, 1i64..400),
        (ma, mb) in (3i64..20, 3i64..20),
        (ea, eb) in (-9i64..9, -9i64..9),
    ) {
        let p = PRIMES[pi];
        prop_assume!(bn != 0);
        let (ra, rb) = (q(an, ad), q(bn, bd));
        let (x, y) = (rat(p, &ra, ma), rat(p, &rb, mb));
        let (ra2, rb2) = (perturbed(p, &ra, ma, ea), perturbed(p, &rb, mb, eb));
        let big = 80;
        let ops: Vec<(PadicNumber, BigRational)> = vec![
            (&x + &y, &ra2 + &rb2),
            (&x - &y, &ra2 - &rb2),
            (&x * &y, &ra2 * &rb2),
        ];
        for (got, exact) in ops {
            prop_assert!(got.agrees_with(&rat(p, &exact, big), got.precision()), "{} vs {}", got, exact);
        }
        if !y.is_zero() && !rb2.is_zero() {
            let got = x.try_div(&y).unwrap();
            let exact = &ra2 / &rb2;
            prop_assert!(got.agrees_with(&rat(p, &exact, big), got.precision()), "{} vs {}", got, exact);
        }
    }

    #[test]
    fn digits_round_trip(pi in 0usize..4, n in -100_000i64..100_000, d in 1i64..50, m in 2i64..25) {
        let p = PRIMES[pi];
        let x = rat(p, &q(n, d), m);
        let back = rat(p, &x.to_rational(), m);
        prop_assert_eq!(&back, &x);
        let js = serde_json::to_string(&x).unwrap();
        let y: PadicNumber = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(y, x);
    }
}

#[test]
fn log_of_six_matches_series_oracle() {
    // Σ (−1)^{n+1} 5^n/n, summed exactly over terms that can matter at M = 10
    let ctx = PadicContext::new(5, 10).unwrap();
    let mut acc = BigRational::zero();
    for n in 1..40i64 {
        let t = BigRational::new(BigInt::from(5).pow(n as u32), n.into());
        acc = if n % 2 == 1 { acc + t } else { acc - t };
    }
    let want = ctx.rational(&acc);
    let got = ctx.int(6).iwasawa_log().unwrap();
    assert!(got.agrees_with(&want, 10), "{got} vs {want}");
    assert!(ctx.int(5).iwasawa_log().unwrap().is_zero());
    assert!(ctx.int(-1).iwasawa_log().unwrap().is_zero());
}

#[test]
fn named_examples() {
    let c5 = PadicContext::new(5, 10).unwrap();
    assert_eq!(c5.int(1).teichmuller().unwrap(), c5.one());
    let w2 = c5.int(2).teichmuller().unwrap();
    assert_eq!(w2.pow(4).unwrap(), c5.one());
    assert!(w2.agrees_with(&c5.int(2), 1));
    let c7 = PadicContext::new(7, 10).unwrap();
    assert_eq!(c7.int(6).teichmuller().unwrap(), c7.int(-1));
    assert_eq!(c5.int(4).hensel_sqrt().unwrap(), c5.int(2));
    let r = c5.int(-11).hensel_sqrt().unwrap();
    assert!(r.agrees_with(&c5.int(2), 1));
    assert_eq!(&r * &r, c5.int(-11));
    assert!(c5.int(2).hensel_sqrt().is_err());
    assert_eq!(c5.ratio(3, 1).to_string(), "3 + O(5^10)");
}
