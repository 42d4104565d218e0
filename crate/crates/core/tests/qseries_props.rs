use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use heegner_ez::curve::{EllipticCurveData, Reduction};
use heegner_ez::qseries::{an_from_curve, Coeffs, Exponent, QExpansion, DEFAULT_QPREC};
use heegner_ez::{PadicContext, PadicNumber};

fn curve15() -> EllipticCurveData {
    EllipticCurveData::new("15a1", [1, 1, 1, -10, -10], 15, 5).unwrap()
}

fn curve14() -> EllipticCurveData {
    EllipticCurveData::new("14a1", [1, 0, 1, 4, -6], 14, 7).unwrap()
}

fn curve11() -> EllipticCurveData {
    EllipticCurveData::new("11a1", [0, -1, 1, -10, -20], 11, 11).unwrap()
}

fn ap(e: &EllipticCurveData) -> BigRational {
    BigRational::from_integer(e.a_l(e.p).into())
}

fn padic_coeffs(f: &QExpansion) -> Vec<PadicNumber> {
    match &f.coeffs {
        Coeffs::Padic(v) => v.clone(),
        Coeffs::Rational(_) => panic!("expected p-adic coefficients"),
    }
}

#[test]
fn eigenform_coefficients() {
    for e in [curve15(), curve14()] {
        let f = an_from_curve(&e, DEFAULT_QPREC).unwrap();
        let a = f.rational_coeffs().unwrap();
        let int = |n: usize| a[n].to_integer();
        assert_eq!(int(1), BigInt::one());
        assert_eq!(int(6), int(2) * int(3));
        assert_eq!(e.reduction_type(e.p), Reduction::SplitMultiplicative);
        assert_eq!(int(e.p as usize), BigInt::one());
        for l in [11u64, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if e.conductor % l == 0 {
                continue;
            }
            let al = int(l as usize);
            assert!(&al * &al <= BigInt::from(4 * l), "Hasse bound at {l}");
        }
        // multiplicativity on coprime pairs and the Hecke recursion at 2·2
        for (m, n) in [(2usize, 9usize), (4, 7), (8, 11), (3, 13)] {
            if num_integer::gcd(m, n) == 1 {
                assert_eq!(int(m * n), int(m) * int(n));
            }
        }
    }
    // first terms of the conductor-15 form
    let f = an_from_curve(&curve15(), 12).unwrap();
    let want = [0, 1, -1, -1, -1, 1, 1, 0, 3, 1, -1, -4, 1];
    let got: Vec<i64> = f.rational_coeffs().unwrap().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
    assert_eq!(got, want);
}

#[test]
fn up_v_and_depletion_at_full_truncation() {
    for e in [curve15(), curve14(), curve11()] {
        let f = an_from_curve(&e, DEFAULT_QPREC).unwrap();
        assert_eq!(f.v().u_p(), f);
        let dep = f.deplete(&ap(&e));
        assert!(dep.is_depleted());
        assert!(dep.u_p().rational_coeffs().unwrap().iter().all(|c| c.is_zero()));
        assert!(dep.rational_coeffs().unwrap()[e.p as usize].is_zero());
        // U_p f = a_p f on the overlap
        let up = f.u_p();
        let (a, b) = (up.rational_coeffs().unwrap(), f.rational_coeffs().unwrap());
        for n in 0..a.len() {
            assert_eq!(a[n], &ap(&e) * &b[n]);
        }
        let vf = f.v();
        let vc = vf.rational_coeffs().unwrap();
        assert!((0..vc.len()).filter(|m| m % e.p as usize != 0).all(|m| vc[m].is_zero()));
    }
    let q = QExpansion::monomial(5, 40, 5);
    assert_eq!(q.u_p(), QExpansion::monomial(1, 8, 5));
    assert_eq!(QExpansion::monomial(1, 8, 5).v(), QExpansion::monomial(5, 40, 5));
    let zero_ap = an_from_curve(&curve15(), 30).unwrap();
    assert_eq!(zero_ap.deplete(&BigRational::zero()), zero_ap);
}

#[test]
fn d_inverse_round_trip_and_coleman_series() {
    for e in [curve15(), curve14()] {
        let f = an_from_curve(&e, DEFAULT_QPREC).unwrap();
        let dep = f.deplete(&ap(&e));
        let one = dep.atkin_serre_power(&Exponent::Integer(1), None).unwrap();
        assert_eq!(one.weight.base, 4);
        let back = one.atkin_serre_power(&Exponent::Integer(-1), None).unwrap();
        assert_eq!(back, dep);
        let g = f.coleman_value_series(&ap(&e)).unwrap();
        assert_eq!(g.atkin_serre_power(&Exponent::Integer(1), None).unwrap().rational_coeffs(), dep.rational_coeffs());
        assert_eq!(g.rational_coeffs().unwrap()[1], BigRational::one());
        assert!(g.rational_coeffs().unwrap()[e.p as usize].is_zero());
        // p-adic d^{−1} against the exact a_n/n
        let ctx = PadicContext::new(e.p, 15).unwrap();
        let pd = dep.to_padic(&ctx).atkin_serre_power(&Exponent::Integer(-1), Some(&ctx)).unwrap();
        let exact = g.rational_coeffs().unwrap();
        for (n, c) in padic_coeffs(&pd).iter().enumerate() {
            assert!(c.agrees_with(&ctx.rational(&exact[n]), 15), "n = {n}");
        }
        assert!(f.atkin_serre_power(&Exponent::Integer(-1), None).is_err());
    }
}

fn padic_exponent(ctx: &PadicContext, residue: u64, value: i64) -> Exponent {
    Exponent::PAdic { residue, value: ctx.int(value) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_powers_compose(s in -30i64..30, t in -30i64..30, rs in 0u64..4, rt in 0u64..4) {
        let e = curve15();
        let ctx = PadicContext::new(5, 12).unwrap();
        let dep = an_from_curve(&e, 60).unwrap().deplete(&ap(&e)).to_padic(&ctx);
        let es = padic_exponent(&ctx, rs, s);
        let et = padic_exponent(&ctx, rt, t);
        let two = dep.atkin_serre_power(&et, Some(&ctx)).unwrap().atkin_serre_power(&es, Some(&ctx)).unwrap();
        let one = dep.atkin_serre_power(&es.add(&et, &ctx), Some(&ctx)).unwrap();
        for (a, b) in padic_coeffs(&two).iter().zip(padic_coeffs(&one).iter()) {
            prop_assert!(a.agrees_with(b, a.precision().min(b.precision())));
        }
    }

    #[test]
    fn d_power_congruence_continuity(t in -20i64..20, m in 1u32..4, pick in 0usize..2) {
        let e = [curve15(), curve14()][pick].clone();
        let p = e.p as i64;
        let ctx = PadicContext::new(e.p, 12).unwrap();
        let dep = an_from_curve(&e, DEFAULT_QPREC).unwrap().deplete(&ap(&e)).to_padic(&ctx);
        let t2 = t + p.pow(m) * (p - 1);
        let a = padic_coeffs(&dep.atkin_serre_power(&Exponent::Integer(t), Some(&ctx)).unwrap());
        let b = padic_coeffs(&dep.atkin_serre_power(&Exponent::Integer(t2), Some(&ctx)).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(x.agrees_with(y, m as i64 + 1));
        }
    }

    #[test]
    fn padic_integer_power_matches_exact(t in 0i64..6) {
        let e = curve15();
        let ctx = PadicContext::new(5, 12).unwrap();
        let dep = an_from_curve(&e, 80).unwrap().deplete(&ap(&e));
        let exact = dep.atkin_serre_power(&Exponent::Integer(t), None).unwrap();
        let fast = dep.to_padic(&ctx).atkin_serre_power(&Exponent::PAdic { residue: (t % 4) as u64, value: ctx.int(t) }, Some(&ctx)).unwrap();
        let ex = exact.rational_coeffs().unwrap();
        for (n, c) in padic_coeffs(&fast).iter().enumerate() {
            prop_assert!(c.agrees_with(&ctx.rational(&ex[n]), c.precision()), "n = {}", n);
        }
    }
}
