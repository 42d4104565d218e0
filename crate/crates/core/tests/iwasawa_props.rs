use proptest::prelude::*;

use heegner_ez::iwasawa_ez::{
    divide_derivative, exceptional_factor, ez_verify, galois_improved_factor, improved_factor, line_restriction,
    reflect, EZInput, Generator, IwasawaElement, Place, TowerClass,
};
use heegner_ez::series::TwoVarSeries;
use heegner_ez::{PadicContext, PadicNumber};

const P: u64 = 5;
const M: i64 = 20;

fn ctx() -> PadicContext {
    PadicContext::new(P, M).unwrap()
}

fn input(l_f: i64, l_chi: i64, log_loc: i64, w: i64) -> EZInput {
    let c = ctx();
    let lc = c.int(l_chi);
    EZInput::new(&c, c.int(l_f), lc.clone(), w, c.int(log_loc), 1, lc, 1).unwrap()
}

fn element(cs: &[i64]) -> IwasawaElement {
    IwasawaElement::from_ints(&ctx(), cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn divide_round_trip_and_generator_independence(
        a in prop::collection::vec(-10_000i64..10_000, 6),
        b in prop::collection::vec(-10_000i64..10_000, 6),
        g in prop::sample::select(vec![1i64, 2, 3, 4, -1, 7, 12]),
    ) {
        let inner = TowerClass::new(vec![element(&a), element(&b)]).unwrap();
        let z = inner.mul_gamma_minus_one(g).unwrap();
        prop_assert!(z.augmentation().iter().all(|c| c.is_zero()));
        let gen0 = Generator::standard(&ctx()).unwrap();
        let div = divide_derivative(&z, &gen0.power(g)).unwrap();
        // the quotient is the inner class written in T_g; only the top order is lost
        let expect = inner.change_generator(g).unwrap();
        prop_assert_eq!(div.quotient.truncation(), z.truncation() - div.t_precision_lost);
        prop_assert!(div.quotient.agrees_with(&expect, M));
        // level-0 value is the inner augmentation times log η(γ^g)
        for (got, want) in div.level0.iter().zip(inner.augmentation()) {
            prop_assert!(got.agrees_with(&(&want * &gen0.log_eta.scale_int(g)), M));
        }
        // and it does not depend on the generator used for the division
        let base = divide_derivative(&z, &gen0).unwrap();
        for alt in [2i64, 3, -1] {
            let other = divide_derivative(&z, &gen0.power(alt)).unwrap();
            for (x, y) in other.level0.iter().zip(&base.level0) {
                prop_assert!(x.agrees_with(y, M - 1));
            }
        }
    }

    #[test]
    fn change_generator_inverts(a in prop::collection::vec(-500i64..500, 5), g in prop::sample::select(vec![2i64, 3, -1, 6])) {
        // W(γ^g − 1) = Z(T)
        let z = element(&a);
        let w = z.change_generator(g).unwrap();
        let s = IwasawaElement::gamma_power_minus_one(&ctx(), g, z.truncation());
        let mut back = IwasawaElement::zero(&ctx(), z.truncation());
        let mut pw = IwasawaElement::one(&ctx(), z.truncation());
        for k in 0..z.truncation() {
            back = back.add(&pw.scale(&w.coeff(k))).unwrap();
            pw = pw.mul(&s).unwrap();
        }
        for k in 0..z.truncation() {
            prop_assert!(back.coeff(k).agrees_with(&z.coeff(k), M));
        }
    }
}

fn random_series(c: &PadicContext, order: usize, seed: &[i64]) -> TwoVarSeries {
    let mut k = 0;
    TwoVarSeries::from_fn(c, order, |_, _| {
        k += 1;
        c.int(seed[k % seed.len()])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn chain_rule_on_line_vanishing_series(seed in prop::collection::vec(-1000i64..1000, 1..12), order in 1usize..4) {
        let c = ctx();
        // F = (τ − κ/2)·G vanishes on τ = κ/2
        let s = TwoVarSeries::linear(&c, order, c.zero(), -c.ratio(1, 2), c.one());
        let f = s.mul(&random_series(&c, order, &seed)).unwrap();
        prop_assert!(line_restriction(&f).iter().all(|x| x.is_zero()));
        let chain = &f.d_kappa() + &(&f.d_tau() * &c.ratio(1, 2));
        prop_assert!(chain.is_zero());
        // the reflection τ ↦ κ − τ fixes the line
        let r = reflect(&f).unwrap();
        prop_assert!(line_restriction(&r).iter().all(|x| x.is_zero()));
        prop_assert!((&r.d_kappa() + &(&r.d_tau() * &c.ratio(1, 2))).is_zero());
    }

    #[test]
    fn harness_passes_on_random_inputs(
        lf in 1i64..5000, lchi in 1i64..5000, loc in 1i64..5000,
    ) {
        // L-invariants and logarithms live in p·Z_p
        let inp = input(5 * lf, 5 * lchi, 5 * loc, -1);
        let rep = ez_verify(&inp).unwrap();
        prop_assert!(rep.all_pass, "{:?}", rep.failures());
        prop_assert_eq!(rep.identities.len(), 12);
    }
}

#[test]
fn vanishing_l_invariant_predicts_zero() {
    let inp = input(5 * 17, 5 * 17, 5 * 3, -1);
    assert!(inp.l_fk().is_zero());
    let rep = ez_verify(&inp).unwrap();
    assert!(rep.all_pass, "{:?}", rep.failures());
    // zero to at least M digits renders as a bare O(p^n)
    for key in ["prediction", "log(Z'_0)"] {
        let v = &rep.values[key];
        let n: i64 = v.strip_prefix("O(5^").and_then(|r| r.strip_suffix(')')).unwrap().parse().unwrap();
        assert!(n >= M, "{key} = {v}");
    }
}

#[test]
fn w_plus_one_is_degenerate() {
    let rep = ez_verify(&input(5 * 8, 5 * 3, 5 * 2, 1)).unwrap();
    assert!(rep.degenerate && rep.all_pass);
    assert_eq!(rep.identities.len(), 2);
    assert!(EZInput::new(&ctx(), ctx().int(5), ctx().int(5), 0, ctx().int(5), 1, ctx().int(5), 1).is_err());
}

#[test]
fn exceptional_factor_jets_match_closed_form() {
    let c = ctx();
    let inp = input(5 * 11, 5 * 7, 5, -1);
    let e_p = exceptional_factor(&inp, Place::P).unwrap();
    let e_pbar = exceptional_factor(&inp, Place::PBar).unwrap();
    assert!(e_p.constant_term().is_zero() && e_pbar.constant_term().is_zero());
    // E = 1 − exp(σ(−κ/2 + τ)ℓ)/a_p(κ) with a_p = 1 − (𝓛_p/2)κ
    let half = c.ratio(1, 2);
    assert_eq!(e_p.d_kappa(), &(&inp.l_chi - &inp.l_f) * &half);
    assert_eq!(e_p.d_tau(), -&inp.l_chi);
    assert_eq!(e_pbar.d_tau(), inp.l_chi.clone());
    assert_eq!(e_pbar.d_kappa(), -&(&(&inp.l_chi + &inp.l_f) * &half));
}

#[test]
fn improved_factors_against_finite_differences() {
    let c = ctx();
    let inp = input(5 * 11, 5 * 7, 5, -1);
    let ell = &inp.l_chi;
    let one = c.one();
    let inv_p = c.ratio(1, P as i64);
    let ap = |k: &PadicNumber| &one - &(&(&inp.l_f * &c.ratio(1, 2)) * k);
    // improved(κ) = 1 − a_p(κ)·exp(κℓ/2)/p
    let direct = |k: &PadicNumber, t: &PadicNumber, sigma: i64| {
        let arg = (&(&(k * &c.ratio(1, 2)) - t) * ell).scale_int(sigma);
        &one - &(&(&ap(k) * &arg.exp().unwrap()) * &inv_p)
    };
    let imp = improved_factor(&inp).unwrap();
    let gi = galois_improved_factor(&inp, Place::P).unwrap();
    let gib = galois_improved_factor(&inp, Place::PBar).unwrap();
    let zero = c.zero();
    for k in [6i64, 8, 10] {
        let h = c.int(P.pow(k as u32) as i64);
        // one-sided differences are exact to O(h) = k digits, less the 1/p
        let dk = (&direct(&h, &zero, 1) - &direct(&zero, &zero, 1)).try_div(&h).unwrap();
        assert!(dk.agrees_with(&imp.d_kappa(), k - 1), "k = {k}");
        assert!(dk.agrees_with(&gi.d_kappa(), k - 1));
        let dt = (&direct(&zero, &h, 1) - &direct(&zero, &zero, 1)).try_div(&h).unwrap();
        assert!(dt.agrees_with(&gi.d_tau(), k - 1));
        let dtb = (&direct(&zero, &h, -1) - &direct(&zero, &zero, -1)).try_div(&h).unwrap();
        assert!(dtb.agrees_with(&gib.d_tau(), k - 1));
    }
    assert!(imp.d_tau().is_zero());
    let want = &one - &inv_p;
    assert!(imp.constant_term().agrees_with(&want, imp.constant_term().precision()));
}
