//! Elliptic curves over Q in long Weierstrass form, with exact arithmetic over
//! an imaginary quadratic field `K = Q(√−D)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveData {
    pub label: String,
    /// `[a1, a2, a3, a4, a6]`
    pub a_invariants: [i64; 5],
    pub conductor: u64,
    /// The prime of multiplicative reduction singled out by the catalog.
    pub p: u64,
}

/// Reduction type of a curve at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    Good,
    SplitMultiplicative,
    NonSplitMultiplicative,
    Additive,
}

impl EllipticCurveData {
    pub fn new(label: &str, a: [i64; 5], conductor: u64, p: u64) -> Result<Self> {
        let e = EllipticCurveData { label: label.to_string(), a_invariants: a, conductor, p };
        if e.discriminant().is_zero() {
            return Err(Error::Invalid(format!("curve {label} is singular")));
        }
        Ok(e)
    }

    fn ai(&self) -> [BigInt; 5] {
        self.a_invariants.map(BigInt::from)
    }

    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.ai();
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn c4(&self) -> BigInt {
        let [b2, b4, _, _] = self.b_invariants();
        &b2 * &b2 - 24 * b4
    }

    pub fn c6(&self) -> BigInt {
        let [b2, b4, b6, _] = self.b_invariants();
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> BigRational {
        let c4 = self.c4();
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    /// `#E(F_ℓ)` of the reduced (possibly singular) cubic, point at infinity included.
    pub fn count_points(&self, l: u64) -> u64 {
        let a = self.a_invariants.map(|x| x.rem_euclid(l as i64) as u64);
        let [a1, a2, a3, a4, a6] = a;
        let mut count = 1u64;
        if l == 2 {
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = (y * y + a1 * x * y + a3 * y) % 2;
                    let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                    if lhs == rhs {
                        count += 1;
                    }
                }
            }
            return count;
        }
        // y^2 + (a1 x + a3) y − f(x) = 0 has 1 + (disc | ℓ) roots
        let leg = legendre_table(l);
        for x in 0..l {
            let b = (a1 * x + a3) % l;
            let f = (((x * x % l) * x) % l + a2 * x % l * x % l + a4 * x + a6) % l;
            let disc = (b * b + 4 * f) % l;
            count += (1 + leg[disc as usize]) as u64;
        }
        count
    }

    /// `ℓ + 1 − #Ẽ(F_ℓ)`; at a bad prime this is the usual `0` or `±1`.
    pub fn a_l(&self, l: u64) -> i64 {
        l as i64 + 1 - self.count_points(l) as i64
    }

    pub fn reduction_type(&self, l: u64) -> Reduction {
        let lb = BigInt::from(l);
        if !self.discriminant().is_multiple_of(&lb) {
            return Reduction::Good;
        }
        if self.c4().is_multiple_of(&lb) {
            return Reduction::Additive;
        }
        match self.a_l(l) {
            1 => Reduction::SplitMultiplicative,
            _ => Reduction::NonSplitMultiplicative,
        }
    }

    /// Exact curve-equation residual `y² + a1xy + a3y − x³ − a2x² − a4x − a6`.
    pub fn residual_k(&self, x: &QuadElt, y: &QuadElt) -> QuadElt {
        let d = x.d;
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|c| QuadElt::rational(q(c), d));
        let lhs = &(&(y * y) + &(&(&a1 * x) * y)) + &(&a3 * y);
        let x2 = x * x;
        let rhs = &(&(&(&x2 * x) + &(&a2 * &x2)) + &(&a4 * x)) + &a6;
        &lhs - &rhs
    }

    pub fn is_on_curve(&self, pt: &KPoint) -> bool {
        match pt {
            KPoint::Infinity => true,
            KPoint::Affine(x, y) => self.residual_k(x, y).is_zero(),
        }
    }

    pub fn neg_k(&self, pt: &KPoint) -> KPoint {
        match pt {
            KPoint::Infinity => KPoint::Infinity,
            KPoint::Affine(x, y) => {
                let d = x.d;
                let a1 = QuadElt::rational(q(self.a_invariants[0]), d);
                let a3 = QuadElt::rational(q(self.a_invariants[2]), d);
                KPoint::Affine(x.clone(), &(&(-y) - &(&a1 * x)) - &a3)
            }
        }
    }

    pub fn add_k(&self, p1: &KPoint, p2: &KPoint) -> KPoint {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (KPoint::Infinity, _) => return p2.clone(),
            (_, KPoint::Infinity) => return p1.clone(),
            (KPoint::Affine(x1, y1), KPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let d = x1.d;
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|c| QuadElt::rational(q(c), d));
        let (lam, nu);
        if x1 == x2 {
            let den = &(&(y1 + y1) + &(&a1 * x1)) + &a3;
            if den.is_zero() {
                return KPoint::Infinity;
            }
            if y1 != y2 {
                return KPoint::Infinity;
            }
            let three = QuadElt::rational(q(3), d);
            let two = QuadElt::rational(q(2), d);
            let x1sq = x1 * x1;
            let num = &(&(&(&three * &x1sq) + &(&(&two * &a2) * x1)) + &a4) - &(&a1 * y1);
            lam = &num / &den;
            let numn = &(&(&(-&(&x1sq * x1)) + &(&a4 * x1)) + &(&two * &a6)) - &(&a3 * y1);
            nu = &numn / &den;
        } else {
            let dx = x2 - x1;
            lam = &(y2 - y1) / &dx;
            nu = &(&(y1 * x2) - &(y2 * x1)) / &dx;
        }
        let x3 = &(&(&(&(&lam * &lam) + &(&a1 * &lam)) - &a2) - x1) - x2;
        let y3 = &(&(-&(&(&lam + &a1) * &x3)) - &nu) - &a3;
        KPoint::Affine(x3, y3)
    }

    pub fn mul_k(&self, pt: &KPoint, m: i64) -> KPoint {
        if m < 0 {
            return self.neg_k(&self.mul_k(pt, -m));
        }
        let mut acc = KPoint::Infinity;
        let mut base = pt.clone();
        let mut m = m as u64;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add_k(&acc, &base);
            }
            m >>= 1;
            if m > 0 {
                base = self.add_k(&base, &base);
            }
        }
        acc
    }

    /// Exact torsion test by repeated addition up to `bound` (torsion orders
    /// over quadratic fields are far below 25).
    pub fn torsion_order_k(&self, pt: &KPoint, bound: u64) -> Option<u64> {
        let mut acc = pt.clone();
        for k in 1..=bound {
            if acc == KPoint::Infinity {
                return Some(k);
            }
            acc = self.add_k(&acc, pt);
        }
        None
    }
}

/// Legendre symbols `(a | ℓ)` for `a` in `0..ℓ`.
pub fn legendre_table(l: u64) -> Vec<i64> {
    let mut t = vec![-1i64; l as usize];
    t[0] = 0;
    for x in 1..l {
        t[(x * x % l) as usize] = 1;
    }
    t
}

/// Kronecker symbol `(a | n)` for `n > 0`.
pub fn kronecker(a: i64, n: u64) -> i64 {
    let mut n = n;
    let mut result = 1i64;
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    while n.is_multiple_of(2) {
        n /= 2;
        let r = a.rem_euclid(8);
        if r == 0 || r == 2 || r == 4 || r == 6 {
            return 0;
        }
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    // Jacobi symbol (a | n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 { result } else { 0 }
}

/// An element `re + im·√−D` of `K = Q(√−D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElt {
    pub re: BigRational,
    pub im: BigRational,
    pub d: i64,
}

impl QuadElt {
    pub fn new(re: BigRational, im: BigRational, d: i64) -> Self {
        QuadElt { re, im, d }
    }

    pub fn rational(re: BigRational, d: i64) -> Self {
        QuadElt { re, im: BigRational::zero(), d }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElt { re: self.re.clone(), im: -&self.im, d: self.d }
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + q(self.d) * &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm();
        QuadElt { re: &self.re / &n, im: -&self.im / &n, d: self.d }
    }

    /// Largest absolute numerator/denominator size in bits (height proxy).
    pub fn bits(&self) -> u64 {
        [self.re.numer(), self.re.denom(), self.im.numer(), self.im.denom()]
            .iter()
            .map(|n| n.bits())
            .max()
            .unwrap_or(0)
    }
}

impl std::ops::Add for &QuadElt {
    type Output = QuadElt;
    fn add(self, o: &QuadElt) -> QuadElt {
        QuadElt { re: &self.re + &o.re, im: &self.im + &o.im, d: self.d }
    }
}

impl std::ops::Sub for &QuadElt {
    type Output = QuadElt;
    fn sub(self, o: &QuadElt) -> QuadElt {
        QuadElt { re: &self.re - &o.re, im: &self.im - &o.im, d: self.d }
    }
}

impl std::ops::Neg for &QuadElt {
    type Output = QuadElt;
    fn neg(self) -> QuadElt {
        QuadElt { re: -&self.re, im: -&self.im, d: self.d }
    }
}

impl std::ops::Mul for &QuadElt {
    type Output = QuadElt;
    fn mul(self, o: &QuadElt) -> QuadElt {
        let dd = q(self.d);
        QuadElt {
            re: &self.re * &o.re - dd * &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
            d: self.d,
        }
    }
}

impl std::ops::Div for &QuadElt {
    type Output = QuadElt;
    fn div(self, o: &QuadElt) -> QuadElt {
        self * &o.inv()
    }
}

/// A point of `E(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KPoint {
    Infinity,
    Affine(QuadElt, QuadElt),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e15() -> EllipticCurveData {
        EllipticCurveData::new("15a1", [1, 1, 1, -10, -10], 15, 5).unwrap()
    }

    #[test]
    fn invariants_of_15a1() {
        let e = e15();
        assert_eq!(e.discriminant(), BigInt::from(50625));
        assert_eq!(e.j_invariant(), BigRational::new(111284641.into(), 50625.into()));
        assert_eq!(e.reduction_type(5), Reduction::SplitMultiplicative);
        assert_eq!(e.reduction_type(3), Reduction::NonSplitMultiplicative);
        assert_eq!(e.reduction_type(7), Reduction::Good);
        assert_eq!(e.a_l(2), -1);
        assert_eq!(e.a_l(5), 1);
    }

    #[test]
    fn point_count_matches_brute_force() {
        let e = EllipticCurveData::new("11a1", [0, -1, 1, -10, -20], 11, 11).unwrap();
        for l in [2u64, 3, 5, 7, 13, 17] {
            let mut n = 1;
            let a = e.a_invariants;
            for x in 0..l as i64 {
                for y in 0..l as i64 {
                    let v = y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x - a[3] * x - a[4];
                    if v.rem_euclid(l as i64) == 0 {
                        n += 1;
                    }
                }
            }
            assert_eq!(e.count_points(l), n, "ℓ = {l}");
        }
        // the classical 11a1 coefficients
        assert_eq!([2, 3, 5, 7, 13].map(|l| e.a_l(l)), [-2, -1, 1, -2, 4]);
    }

    #[test]
    fn kronecker_symbols() {
        assert_eq!(kronecker(-11, 3), 1);
        assert_eq!(kronecker(-11, 5), 1);
        assert_eq!(kronecker(-11, 7), -1);
        assert_eq!(kronecker(-11, 11), 0);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-11, 2), -1);
        assert_eq!(kronecker(-8, 2), 0);
    }

    #[test]
    fn group_law_over_k() {
        let e = e15();
        let d = 11;
        let x = QuadElt::rational(q(-17), d);
        let y = QuadElt::new(q(8), q(20), d);
        let pt = KPoint::Affine(x, y);
        assert!(e.is_on_curve(&pt));
        let p2 = e.add_k(&pt, &pt);
        let p3 = e.add_k(&p2, &pt);
        assert!(e.is_on_curve(&p2) && e.is_on_curve(&p3));
        assert_eq!(e.mul_k(&pt, 3), p3);
        assert_eq!(e.add_k(&pt, &e.neg_k(&pt)), KPoint::Infinity);
        assert_eq!(e.add_k(&e.add_k(&p2, &pt), &pt), e.add_k(&p2, &p2));
        assert_eq!(e.torsion_order_k(&pt, 24), None);
    }
}
