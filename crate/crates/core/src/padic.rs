//! Capped absolute-precision p-adic numbers.
//!
//! Every element is stored as `p^val * unit` together with the absolute
//! precision `prec`: the element is known modulo `p^prec`. The unit is reduced
//! modulo `p^(prec - val)`. An element whose digits below `prec` all vanish is
//! the tracked zero `O(p^prec)`; for it `val == prec` and `unit == 0`.
//!
//! Arithmetic never claims more precision than its operands justify.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `p^k` as a big integer.
pub fn pow_p(p: u64, k: i64) -> BigInt {
    assert!(k >= 0, "negative exponent {k}");
    BigInt::from(p).pow(k as u32)
}

/// Valuation of a nonzero integer; `None` for zero.
pub fn ord_p_int(p: u64, n: &BigInt) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Strip all factors of `p`, returning `(v, n / p^v)`.
fn split_p(p: u64, n: &BigInt) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Inverse of `a` modulo `m` (`a` must be coprime to `m`).
pub fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

fn floor_log(p: u64, n: u64) -> i64 {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        q = match q.checked_mul(p) {
            Some(q) => q,
            None => break,
        };
    }
    k
}

fn ord_small(p: u64, mut n: u64) -> i64 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// An element of `Q_p` known to absolute precision `O(p^prec)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    prec: i64,
    unit: BigInt,
}

impl PadicNumber {
    /// The tracked zero `O(p^prec)`.
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNumber { p, val: prec, prec, unit: BigInt::zero() }
    }

    /// `n * p^shift` known modulo `p^prec`.
    pub fn from_scaled(p: u64, n: BigInt, shift: i64, prec: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p, prec);
        }
        let (w, u) = split_p(p, &n);
        let val = shift + w;
        if val >= prec {
            return Self::zero(p, prec);
        }
        let unit = u.mod_floor(&pow_p(p, prec - val));
        PadicNumber { p, val, prec, unit }
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: i64) -> Self {
        Self::from_scaled(p, n.clone(), 0, prec)
    }

    pub fn from_int(p: u64, n: i64, prec: i64) -> Self {
        Self::from_scaled(p, BigInt::from(n), 0, prec)
    }

    pub fn from_rational(p: u64, q: &BigRational, prec: i64) -> Self {
        if q.is_zero() {
            return Self::zero(p, prec);
        }
        let (vn, un) = split_p(p, q.numer());
        let (vd, ud) = split_p(p, q.denom());
        let val = vn - vd;
        if val >= prec {
            return Self::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        let unit = (un * inv_mod(&ud, &m)).mod_floor(&m);
        PadicNumber { p, val, prec, unit }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the element is known modulo `p^precision()`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation; for the tracked zero this is its precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// Drop precision to at most `prec`.
    pub fn with_precision(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_scaled(self.p, self.unit.clone(), self.val, prec)
    }

    /// Same value with the precision raised to `prec`, padding with zero
    /// digits. Only meaningful for values known to be exact.
    pub fn lift_to(&self, prec: i64) -> Self {
        if prec <= self.prec || self.is_zero() {
            return if self.is_zero() { Self::zero(self.p, prec.max(self.prec)) } else { self.with_precision(prec) };
        }
        Self::from_scaled(self.p, self.unit.clone(), self.val, prec)
    }

    /// Exact rational value of the stored representative.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        if self.val >= 0 {
            BigRational::from_integer(&self.unit * pow_p(self.p, self.val))
        } else {
            BigRational::new(self.unit.clone(), pow_p(self.p, -self.val))
        }
    }

    /// Integer representative in `[0, p^prec)`; requires an integral element.
    pub fn to_bigint(&self) -> Result<BigInt> {
        if self.val < 0 {
            return Err(Error::Domain("element is not integral".into()));
        }
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        Ok(&self.unit * pow_p(self.p, self.val))
    }

    /// Base-p digits from `p^val` up to `p^(prec-1)`.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let pb = BigInt::from(self.p);
        let mut u = self.unit.clone();
        for _ in self.val..self.prec {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u64().unwrap_or(0));
            u = q;
        }
        out
    }

    fn check_same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers for different primes");
    }

    /// True when `self` and `other` agree modulo `p^n`.
    pub fn agrees_with(&self, other: &Self, n: i64) -> bool {
        (self - other).val >= n
    }

    /// Number of leading digits on which `self` and `other` agree.
    pub fn agreement(&self, other: &Self) -> i64 {
        (self - other).val
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rel_b = other.relative_precision();
        let prec = (self.prec - other.val).min(self.val - other.val + rel_b);
        if self.is_zero() {
            return Ok(Self::zero(self.p, prec));
        }
        let rel = prec - (self.val - other.val);
        let m = pow_p(self.p, rel);
        let unit = (&self.unit * inv_mod(&other.unit, &m)).mod_floor(&m);
        Ok(PadicNumber { p: self.p, val: self.val - other.val, prec, unit })
    }

    pub fn inverse(&self) -> Result<Self> {
        let one = PadicNumber::from_int(self.p, 1, self.relative_precision().max(1));
        one.try_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.pow(-e)?.inverse();
        }
        if e == 0 {
            return Ok(PadicNumber::from_int(self.p, 1, self.relative_precision().max(1)));
        }
        let mut base = self.clone();
        let mut acc: Option<PadicNumber> = None;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc.unwrap())
    }

    /// Multiply by an exact integer.
    pub fn scale(&self, n: &BigInt) -> Self {
        match ord_p_int(self.p, n) {
            None => Self::zero(self.p, self.prec),
            Some(k) => Self::from_scaled(self.p, &self.unit * n, self.val, self.prec + k),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigInt::from(n))
    }

    /// Divide by `p^k` (shifts the valuation; no precision loss).
    pub fn shift(&self, k: i64) -> Self {
        PadicNumber { p: self.p, val: self.val + k, prec: self.prec + k, unit: self.unit.clone() }
    }

    /// Iwasawa's branch of the p-adic logarithm (`log_p(p) = 0`).
    ///
    /// The result has absolute precision equal to the relative precision of
    /// the input.
    pub fn iwasawa_log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain(format!(
                "log of an element indistinguishable from 0 at precision {}",
                self.prec
            )));
        }
        let p = self.p;
        let r = self.relative_precision();
        // log(u) = log(u^(p-1)) / (p-1), and u^(p-1) is a 1-unit
        let big = pow_p(p, 2 * r + 2);
        let u1 = self.unit.modpow(&BigInt::from(p - 1), &big);
        let z = (u1 - BigInt::one()).mod_floor(&big);
        let zv = match ord_p_int(p, &z) {
            None => return Ok(Self::zero(p, r)),
            Some(v) if v >= r => return Ok(Self::zero(p, r)),
            Some(v) => v,
        };
        let mut nmax = 1u64;
        while (nmax as i64 + 1) * zv - floor_log(p, nmax + 1) < r {
            nmax += 1;
        }
        let extra = floor_log(p, nmax);
        let work = pow_p(p, r + extra);
        let target = pow_p(p, r);
        let mut sum = BigInt::zero();
        let mut zn = BigInt::one();
        for n in 1..=nmax {
            zn = (&zn * &z).mod_floor(&work);
            let k = ord_small(p, n);
            let n_unit = BigInt::from(n / p.pow(k as u32));
            let term = (&zn / pow_p(p, k)) * inv_mod(&n_unit, &target);
            if n % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let sum = (sum * inv_mod(&BigInt::from(p - 1), &target)).mod_floor(&target);
        Ok(Self::from_scaled(p, sum, 0, r))
    }

    /// The exponential series; defined for `ord_p(x) >= 1`.
    pub fn exp(&self) -> Result<Self> {
        let p = self.p;
        if self.is_zero() {
            return Ok(PadicNumber::from_int(p, 1, self.prec));
        }
        if self.val < 1 {
            return Err(Error::Domain(format!("exp requires ord_p(x) >= 1, got {}", self.val)));
        }
        let a = self.prec;
        let target = pow_p(p, a);
        let mut kmax = 0u64;
        // ord(k!) <= (k-1)/(p-1)
        while ((kmax + 1) as i64) * self.val - (kmax as i64) / (p as i64 - 1) < a {
            kmax += 1;
        }
        let mut sum = BigInt::one();
        let mut fact_unit = BigInt::one();
        let mut fact_ord = 0i64;
        let mut u_pow = BigInt::one();
        for k in 1..=kmax {
            let ko = ord_small(p, k);
            fact_ord += ko;
            fact_unit = (fact_unit * BigInt::from(k / p.pow(ko as u32))).mod_floor(&target);
            u_pow = (u_pow * &self.unit).mod_floor(&target);
            let e = k as i64 * self.val - fact_ord;
            if e >= a {
                continue;
            }
            let term = &u_pow * pow_p(p, e) * inv_mod(&fact_unit, &target);
            sum += term;
        }
        Ok(Self::from_scaled(p, sum.mod_floor(&target), 0, a))
    }

    /// Teichmüller representative of a unit, at the element's relative precision.
    pub fn teichmuller(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Domain("Teichmüller lift of a non-unit".into()));
        }
        let prec = self.prec;
        Ok(Self::from_bigint(self.p, &teichmuller_int(self.p, &self.unit, prec), prec))
    }

    /// Canonical Hensel square root: the root congruent to the smaller residue
    /// in `{1, ..., p-1}`.
    pub fn hensel_sqrt(&self) -> Result<Self> {
        let p = self.p;
        if !self.is_unit() {
            return Err(Error::Domain("square root of a non-unit".into()));
        }
        let a0 = (&self.unit % BigInt::from(p)).to_u64().unwrap();
        let r0 = (1..p).find(|r| (r * r) % p == a0).ok_or_else(|| {
            Error::NonResidue(self.unit.mod_floor(&BigInt::from(p)).to_string(), p)
        })?;
        let r0 = r0.min(p - r0);
        let prec = self.prec;
        let m = pow_p(p, prec);
        let a = self.unit.mod_floor(&m);
        let mut r = BigInt::from(r0);
        let mut known = 1;
        while known < prec {
            let two_r = (&r * 2u32).mod_floor(&m);
            r = (&r - (&r * &r - &a) * inv_mod(&two_r, &m)).mod_floor(&m);
            known *= 2;
        }
        Ok(Self::from_bigint(p, &r, prec))
    }
}

/// Teichmüller lift of an integer unit modulo `p^prec`.
pub fn teichmuller_int(p: u64, x: &BigInt, prec: i64) -> BigInt {
    let m = pow_p(p, prec);
    let pb = BigInt::from(p);
    let mut r = x.mod_floor(&m);
    loop {
        let next = r.modpow(&pb, &m);
        if next == r {
            return r;
        }
        r = next;
    }
}

impl Add for &PadicNumber {
    type Output = PadicNumber;
    fn add(self, o: &PadicNumber) -> PadicNumber {
        self.check_same_prime(o);
        let prec = self.prec.min(o.prec);
        let v = self.val.min(o.val);
        let n = &self.unit * pow_p(self.p, self.val - v) + &o.unit * pow_p(self.p, o.val - v);
        PadicNumber::from_scaled(self.p, n, v, prec)
    }
}

impl Sub for &PadicNumber {
    type Output = PadicNumber;
    fn sub(self, o: &PadicNumber) -> PadicNumber {
        self + &(-o)
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_p(self.p, self.relative_precision());
        PadicNumber { p: self.p, val: self.val, prec: self.prec, unit: (&m - &self.unit).mod_floor(&m) }
    }
}

impl Mul for &PadicNumber {
    type Output = PadicNumber;
    fn mul(self, o: &PadicNumber) -> PadicNumber {
        self.check_same_prime(o);
        let prec = (self.prec + o.val).min(o.prec + self.val);
        PadicNumber::from_scaled(self.p, &self.unit * &o.unit, self.val + o.val, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, o: PadicNumber) -> PadicNumber {
                (&self).$m(&o)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, o: &PadicNumber) -> PadicNumber {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        -&self
    }
}

fn power_str(p: u64, k: i64) -> String {
    match k {
        0 => String::new(),
        1 => format!("{p}"),
        _ => format!("{p}^{k}"),
    }
}

impl fmt::Display for PadicNumber {
    /// `d0 + d1·p + d2·p^2 + … + O(p^M)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let k = self.val + i as i64;
            terms.push(if k == 0 { d.to_string() } else { format!("{d}·{}", power_str(self.p, k)) });
        }
        terms.push(format!("O({})", if self.prec == 1 { self.p.to_string() } else { format!("{}^{}", self.p, self.prec) }));
        write!(f, "{}", terms.join(" + "))
    }
}

/// Machine form `{p, M, v, digits[]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PadicJson {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: i64,
    pub v: i64,
    pub digits: Vec<u64>,
}

impl From<&PadicNumber> for PadicJson {
    fn from(x: &PadicNumber) -> Self {
        PadicJson { p: x.p, m: x.prec, v: x.val, digits: x.digits() }
    }
}

impl TryFrom<PadicJson> for PadicNumber {
    type Error = Error;
    fn try_from(j: PadicJson) -> Result<Self> {
        if j.digits.iter().any(|&d| d >= j.p) {
            return Err(Error::Invalid("digit out of range".into()));
        }
        let mut n = BigInt::zero();
        for d in j.digits.iter().rev() {
            n = n * BigInt::from(j.p) + BigInt::from(*d);
        }
        Ok(PadicNumber::from_scaled(j.p, n, j.v, j.m))
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PadicJson::deserialize(d)?;
        PadicNumber::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Shared prime and working precision for one computation.
#[derive(Clone, Debug)]
pub struct PadicContext {
    p: u64,
    prec: i64,
    teichmuller: Vec<BigInt>,
}

impl PadicContext {
    pub fn new(p: u64, prec: i64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::Invalid(format!("p must be a prime >= 5, got {p}")));
        }
        if prec < 1 {
            return Err(Error::Invalid(format!("precision must be positive, got {prec}")));
        }
        let teichmuller = (0..p)
            .map(|a| if a == 0 { BigInt::zero() } else { teichmuller_int(p, &BigInt::from(a), prec) })
            .collect();
        Ok(PadicContext { p, prec, teichmuller })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_int(self.p, n, self.prec)
    }

    pub fn bigint(&self, n: &BigInt) -> PadicNumber {
        PadicNumber::from_bigint(self.p, n, self.prec)
    }

    pub fn rational(&self, q: &BigRational) -> PadicNumber {
        PadicNumber::from_rational(self.p, q, self.prec)
    }

    pub fn ratio(&self, a: i64, b: i64) -> PadicNumber {
        self.rational(&BigRational::new(a.into(), b.into()))
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.p, self.prec)
    }

    pub fn one(&self) -> PadicNumber {
        self.int(1)
    }

    /// Teichmüller lift `ω(x)`; depends only on `x mod p`, returned at the
    /// context precision.
    pub fn teichmuller(&self, x: &PadicNumber) -> Result<PadicNumber> {
        if x.prime() != self.p {
            return Err(Error::ContextMismatch(format!("prime {} vs {}", x.prime(), self.p)));
        }
        if !x.is_unit() {
            return Err(Error::Domain("Teichmüller lift of a non-unit".into()));
        }
        let r = (x.unit() % BigInt::from(self.p)).to_usize().unwrap();
        Ok(self.bigint(&self.teichmuller[r]))
    }

    /// The principal-unit part `<x> = x / ω(x)`.
    pub fn one_unit_part(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let w = self.teichmuller(x)?;
        x.try_div(&w)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}


#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, m: i64) -> PadicContext {
        PadicContext::new(p, m).unwrap()
    }

    #[test]
    fn log_of_p_and_torsion_vanish() {
        let c = ctx(5, 10);
        assert!(c.int(5).iwasawa_log().unwrap().is_zero());
        assert!(c.int(-1).iwasawa_log().unwrap().is_zero());
        assert!(c.int(25 * 7).iwasawa_log().unwrap().agrees_with(&c.int(7).iwasawa_log().unwrap(), 8));
    }

    #[test]
    fn log_of_six_matches_truncated_series() {
        // oracle: sum_{n>=1} (-1)^(n+1) 5^n / n with exact rationals
        let c = ctx(5, 10);
        let mut s = BigRational::zero();
        for n in 1..40i64 {
            let t = BigRational::new(BigInt::from(5).pow(n as u32), BigInt::from(n));
            if n % 2 == 1 { s += t } else { s -= t }
        }
        let want = c.rational(&s);
        let got = c.int(6).iwasawa_log().unwrap();
        assert_eq!(got, want);
        assert_eq!(got.precision(), 10);
    }

    #[test]
    fn log_of_zero_is_a_domain_error() {
        let c = ctx(5, 10);
        assert!(matches!(c.zero().iwasawa_log(), Err(Error::Domain(_))));
        assert!(matches!(c.int(5i64.pow(10)).iwasawa_log(), Err(Error::Domain(_))));
    }

    #[test]
    fn teichmuller_examples() {
        let c = ctx(5, 12);
        assert_eq!(c.teichmuller(&c.int(1)).unwrap(), c.int(1));
        let w2 = c.teichmuller(&c.int(2)).unwrap();
        assert_eq!(w2.pow(4).unwrap(), c.one());
        assert!(w2.agrees_with(&c.int(2), 1));
        // iterate x <- x^p
        let mut x = c.int(2);
        for _ in 0..20 {
            x = x.pow(5).unwrap();
        }
        assert_eq!(w2, x);
        let c7 = ctx(7, 12);
        assert_eq!(c7.teichmuller(&c7.int(6)).unwrap(), c7.int(-1));
        assert!(c.teichmuller(&c.int(10)).is_err());
    }

    #[test]
    fn hensel_sqrt_examples() {
        let c = ctx(5, 10);
        assert_eq!(c.int(4).hensel_sqrt().unwrap(), c.int(2));
        let r = c.int(-11).hensel_sqrt().unwrap();
        assert!(r.agrees_with(&c.int(2), 1));
        assert_eq!(&r * &r, c.int(-11));
        assert!(matches!(c.int(2).hensel_sqrt(), Err(Error::NonResidue(_, 5))));
    }

    #[test]
    fn render_and_json() {
        let c = ctx(5, 4);
        let x = c.int(3 + 4 * 5 + 2 * 125);
        assert_eq!(x.to_string(), "3 + 4·5 + 2·5^3 + O(5^4)");
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"p":5,"M":4,"v":0,"digits":[3,4,0,2]}"#);
        let back: PadicNumber = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        assert_eq!(c.zero().to_string(), "O(5^4)");
        assert_eq!(c.ratio(1, 5).to_string(), "1·5^-1 + O(5^4)");
    }

    #[test]
    fn precision_bookkeeping() {
        let c = ctx(7, 10);
        let a = c.int(7 * 3); // val 1
        let b = c.int(2);
        let q = c.int(5).try_div(&a).unwrap();
        assert_eq!(q.valuation(), -1);
        assert_eq!(q.precision(), 8);
        let prod = &a * &b;
        assert_eq!(prod.precision(), 10);
        assert_eq!((&c.int(1) - &c.int(1)).precision(), 10);
        assert!((&c.int(1) - &c.int(1)).is_zero());
        assert!(matches!(c.int(1).try_div(&c.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn exp_log_inverse() {
        let c = ctx(5, 15);
        let x = c.int(5 * 7);
        let e = x.exp().unwrap();
        assert!(e.iwasawa_log().unwrap().agrees_with(&x, 15));
        assert!(c.int(1).exp().is_err());
    }
}
