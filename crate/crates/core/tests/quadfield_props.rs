use heegner_ez::curve::kronecker;
use heegner_ez::quadfield::{is_fundamental, split_prime, CharacterJet, IdealClass, ImagQuadField};
use heegner_ez::PadicContext;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Independent enumeration of reduced primitive forms.
fn brute_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let n = -disc;
    for a in 1..=n {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (b == -a || a == c)) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out
}

fn fundamental_discs() -> Vec<i64> {
    (3..200).map(|d| -d).filter(|&d| is_fundamental(d)).collect()
}

#[test]
fn class_numbers_match_enumeration_and_analytic_formula() {
    for disc in fundamental_discs() {
        let k = ImagQuadField::new(disc).unwrap();
        let brute = brute_forms(disc);
        assert_eq!(k.class_number as usize, brute.len(), "disc {disc}");
        let mut forms: Vec<_> = k.forms.iter().map(|f| (f.a, f.b, f.c)).collect();
        forms.sort();
        let mut b = brute.clone();
        b.sort();
        assert_eq!(forms, b);
        // h = −(w/2|D|) Σ_{0<a<|D|} a·(D/a), w the number of units
        let n = -disc;
        let w = match disc { -3 => 6, -4 => 4, _ => 2 };
        let s: i64 = (1..n).map(|a| a * kronecker(disc, a as u64)).sum::<i64>() * w / 2;
        assert_eq!(-s % n, 0);
        assert_eq!((-s / n) as u64, k.class_number, "disc {disc}");
    }
}

#[test]
fn composition_group_axioms_exhaustive() {
    for disc in fundamental_discs() {
        let k = ImagQuadField::new(disc).unwrap();
        let e = k.identity();
        for f in &k.forms {
            assert!(f.is_reduced());
            assert_eq!(f.compose(&e), *f);
            assert_eq!(f.compose(&f.inverse()), e);
            for g in &k.forms {
                let fg = f.compose(g);
                assert_eq!(fg, g.compose(f));
                assert!(k.forms.contains(&fg));
                for h in &k.forms {
                    assert_eq!(fg.compose(h), f.compose(&g.compose(h)));
                }
            }
        }
        assert_eq!(k.forms.iter().filter(|f| **f == e).count(), 1);
    }
}

#[test]
fn composition_agrees_with_ideal_multiplication() {
    for disc in fundamental_discs() {
        let k = ImagQuadField::new(disc).unwrap();
        for f in &k.forms {
            assert_eq!(f.ideal().class(), *f);
            for g in &k.forms {
                let prod = f.ideal().mul(&g.ideal());
                assert_eq!(prod.class(), f.compose(g), "disc {disc}: {f:?}·{g:?}");
                assert_eq!(prod.norm(), f.ideal().norm() * g.ideal().norm());
            }
        }
    }
}

#[test]
fn phi_o_is_multiplicative_on_ideals() {
    for (disc, p) in [(-23i64, 13u64), (-31, 7), (-47, 7), (-11, 5), (-20, 7)] {
        let k = ImagQuadField::new(disc).unwrap();
        let ctx = PadicContext::new(p, 25).unwrap();
        let sp = split_prime(&k, &ctx).unwrap();
        let jet = CharacterJet::new(&sp, &ctx).unwrap();
        let one = jet.phi_o(&k, &k.identity()).unwrap();
        assert_eq!(one, ctx.one().with_precision(one.precision()));
        for f in &k.forms {
            for g in &k.forms {
                let prod = f.ideal().mul(&g.ideal());
                let lhs = jet.phi_o_ideal(&k, &prod).unwrap();
                let rhs = &jet.phi_o(&k, f).unwrap() * &jet.phi_o(&k, g).unwrap();
                let n = lhs.precision().min(rhs.precision());
                assert!(n >= 20 && lhs.agrees_with(&rhs, n), "disc {disc}");
            }
        }
    }
}

#[test]
fn reduced_form_invariants() {
    for disc in fundamental_discs() {
        for f in ImagQuadField::new(disc).unwrap().forms {
            let IdealClass { a, b, c } = f;
            assert_eq!(b * b - 4 * a * c, disc);
            assert!(b.abs() <= a && a <= c);
        }
    }
}
