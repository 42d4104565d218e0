//! Truncated q-expansions and the operators `U_p`, `V`, p-depletion and the
//! Atkin–Serre powers `d^t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::EllipticCurveData;
use crate::error::{Error, Result};
use crate::padic::{is_prime, PadicContext, PadicNumber, PadicJson};

pub const DEFAULT_QPREC: usize = 200;

/// Coefficients `a_0, …, a_{M_q}` over a uniform ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeffs {
    Rational(Vec<BigRational>),
    Padic(Vec<PadicNumber>),
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Rational(v) => v.len(),
            Coeffs::Padic(v) => v.len(),
        }
    }
}

/// Weight tag `base + 2·shift`, where the shift is present after a p-adic
/// Atkin–Serre power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub base: i64,
    pub shift: Option<PadicNumber>,
}

impl Weight {
    pub fn integer(k: i64) -> Self {
        Weight { base: k, shift: None }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.shift {
            None => write!(f, "{}", self.base),
            Some(s) => write!(f, "{} + 2·({})", self.base, s),
        }
    }
}

/// An exponent for `d^t`: an integer, or a p-adic one given as its component
/// in `Z/(p−1) × Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Integer(i64),
    PAdic { residue: u64, value: PadicNumber },
}

impl Exponent {
    fn residue(&self, p: u64) -> u64 {
        match self {
            Exponent::Integer(t) => t.rem_euclid(p as i64 - 1) as u64,
            Exponent::PAdic { residue, .. } => residue % (p - 1),
        }
    }

    fn value(&self, ctx: &PadicContext) -> PadicNumber {
        match self {
            Exponent::Integer(t) => ctx.int(*t),
            Exponent::PAdic { value, .. } => value.clone(),
        }
    }

    /// Sum of exponents (componentwise).
    pub fn add(&self, o: &Exponent, ctx: &PadicContext) -> Exponent {
        match (self, o) {
            (Exponent::Integer(a), Exponent::Integer(b)) => Exponent::Integer(a + b),
            _ => Exponent::PAdic {
                residue: (self.residue(ctx.p()) + o.residue(ctx.p())) % (ctx.p() - 1),
                value: &self.value(ctx) + &o.value(ctx),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: Weight,
    pub level: u64,
    pub p: u64,
    pub coeffs: Coeffs,
}

impl QExpansion {
    pub fn rational(weight: i64, level: u64, p: u64, coeffs: Vec<BigRational>) -> Self {
        QExpansion { weight: Weight::integer(weight), level, p, coeffs: Coeffs::Rational(coeffs) }
    }

    /// `q^n` truncated at `M_q`.
    pub fn monomial(n: usize, mq: usize, p: u64) -> Self {
        let mut c = vec![BigRational::zero(); mq + 1];
        if n <= mq {
            c[n] = BigRational::one();
        }
        Self::rational(0, 1, p, c)
    }

    /// Truncation `M_q`: the last stored index.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rational_coeffs(&self) -> Option<&[BigRational]> {
        match &self.coeffs {
            Coeffs::Rational(v) => Some(v),
            Coeffs::Padic(_) => None,
        }
    }

    /// Coefficient `a_n` as a p-adic number.
    pub fn coeff_padic(&self, n: usize, ctx: &PadicContext) -> PadicNumber {
        match &self.coeffs {
            Coeffs::Rational(v) => ctx.rational(&v[n]),
            Coeffs::Padic(v) => v[n].clone(),
        }
    }

    /// Reduce to the mod-`p^M` coefficient ring.
    pub fn to_padic(&self, ctx: &PadicContext) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => Coeffs::Padic(v.iter().map(|c| ctx.rational(c)).collect()),
            Coeffs::Padic(v) => Coeffs::Padic(v.clone()),
        };
        QExpansion { coeffs, ..self.clone() }
    }

    fn map_indices(&self, len: usize, f: impl Fn(usize) -> Option<usize>) -> Coeffs {
        match &self.coeffs {
            Coeffs::Rational(v) => {
                Coeffs::Rational((0..len).map(|m| f(m).map_or_else(BigRational::zero, |n| v[n].clone())).collect())
            }
            Coeffs::Padic(v) => {
                let z = PadicNumber::zero(self.p, v[0].precision().max(v.iter().map(|c| c.precision()).min().unwrap_or(1)));
                Coeffs::Padic((0..len).map(|m| f(m).map_or_else(|| z.clone(), |n| v[n].clone())).collect())
            }
        }
    }

    /// `U_p`: `b_n = a_{pn}`, truncation `⌊M_q/p⌋`.
    pub fn u_p(&self) -> Self {
        let p = self.p as usize;
        let len = self.truncation() / p + 1;
        QExpansion { coeffs: self.map_indices(len, |n| Some(p * n)), ..self.clone() }
    }

    /// `V`: `q ↦ q^p`, truncation `p·M_q`.
    pub fn v(&self) -> Self {
        let p = self.p as usize;
        let len = self.truncation() * p + 1;
        QExpansion { coeffs: self.map_indices(len, |m| (m % p == 0).then_some(m / p)), ..self.clone() }
    }

    /// `f − a_p·V(f)` on the range of `f`.
    pub fn deplete(&self, a_p: &BigRational) -> Self {
        let p = self.p as usize;
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => Coeffs::Rational(
                (0..v.len()).map(|m| if m % p == 0 { &v[m] - a_p * &v[m / p] } else { v[m].clone() }).collect(),
            ),
            Coeffs::Padic(v) => {
                let ap = PadicNumber::from_rational(self.p, a_p, v.iter().map(|c| c.precision()).max().unwrap_or(1));
                Coeffs::Padic(
                    (0..v.len()).map(|m| if m % p == 0 { &v[m] - &(&ap * &v[m / p]) } else { v[m].clone() }).collect(),
                )
            }
        };
        QExpansion { coeffs, ..self.clone() }
    }

    /// `a_n = 0` whenever `p | n`.
    pub fn is_depleted(&self) -> bool {
        let p = self.p as usize;
        match &self.coeffs {
            Coeffs::Rational(v) => v.iter().enumerate().all(|(n, c)| n % p != 0 || c.is_zero()),
            Coeffs::Padic(v) => v.iter().enumerate().all(|(n, c)| n % p != 0 || c.is_zero()),
        }
    }

    /// The Atkin–Serre power `d^t`: `a_n ↦ n^t a_n`.
    ///
    /// Integer `t ≥ 0` works in either ring. Negative integer `t` keeps exact
    /// rationals. A p-adic `t` needs a context and produces mod-`p^M` coefficients.
    pub fn atkin_serre_power(&self, t: &Exponent, ctx: Option<&PadicContext>) -> Result<Self> {
        let needs_depletion = !matches!(t, Exponent::Integer(k) if *k >= 0);
        if needs_depletion && !self.is_depleted() {
            return Err(Error::Domain("negative or p-adic powers of d need a p-depleted input".into()));
        }
        match (t, &self.coeffs) {
            (Exponent::Integer(k), Coeffs::Rational(v)) => {
                let coeffs = v
                    .iter()
                    .enumerate()
                    .map(|(n, c)| {
                        if c.is_zero() || n == 0 {
                            return if n == 0 && *k != 0 { BigRational::zero() } else { c.clone() };
                        }
                        c * BigRational::from_integer(BigInt::from(n)).pow(*k as i32)
                    })
                    .collect();
                Ok(QExpansion {
                    weight: Weight { base: self.weight.base + 2 * k, shift: self.weight.shift.clone() },
                    coeffs: Coeffs::Rational(coeffs),
                    ..self.clone()
                })
            }
            _ => {
                let ctx = ctx.ok_or_else(|| Error::Invalid("p-adic exponent needs a context".into()))?;
                if ctx.p() != self.p {
                    return Err(Error::ContextMismatch(format!("expansion at p={} vs context p={}", self.p, ctx.p())));
                }
                let res = t.residue(self.p) as i64;
                let tv = t.value(ctx);
                let mut out = Vec::with_capacity(self.coeffs.len());
                let int_power = match t {
                    Exponent::Integer(k) if *k >= 0 => Some(*k),
                    _ => None,
                };
                for n in 0..self.coeffs.len() {
                    let a = self.coeff_padic(n, ctx);
                    let c = if n == 0 {
                        if int_power == Some(0) { a } else { ctx.zero() }
                    } else if n % self.p as usize == 0 {
                        // depleted inputs carry zeros here; integer powers act directly
                        match int_power {
                            Some(k) => &a * &ctx.int(n as i64).pow(k)?,
                            None => a,
                        }
                    } else {
                        &a * &unit_power(ctx, n as i64, res, &tv)?
                    };
                    out.push(c);
                }
                let shift = match (t, &self.weight.shift) {
                    (Exponent::Integer(_), s) => s.clone(),
                    (_, None) => Some(tv.clone()),
                    (_, Some(s)) => Some(s + &tv),
                };
                let base = self.weight.base + if let Exponent::Integer(k) = t { 2 * k } else { 0 };
                Ok(QExpansion { weight: Weight { base, shift }, coeffs: Coeffs::Padic(out), ..self.clone() })
            }
        }
    }

    /// `d^{−1}` of the p-depletion: `Σ_{p∤n} (a_n/n) q^n`.
    pub fn coleman_value_series(&self, a_p: &BigRational) -> Result<Self> {
        self.deplete(a_p).atkin_serre_power(&Exponent::Integer(-1), None)
    }

    pub fn to_json(&self) -> QExpansionJson {
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => v.iter().map(|c| serde_json::Value::String(c.to_string())).collect(),
            Coeffs::Padic(v) => {
                v.iter().map(|c| serde_json::to_value(PadicJson::from(c)).expect("serialisable")).collect()
            }
        };
        QExpansionJson { weight: self.weight.to_string(), level: self.level, p: self.p, m_q: self.truncation(), coeffs }
    }
}

/// `n^t = ω(n)^{res}·⟨n⟩^t` for `p ∤ n`.
pub fn unit_power(ctx: &PadicContext, n: i64, res: i64, t: &PadicNumber) -> Result<PadicNumber> {
    let x = ctx.int(n);
    let w = ctx.teichmuller(&x)?.pow(res)?;
    let lg = x.iwasawa_log()?;
    Ok(&w * &(t * &lg).exp()?)
}

#[derive(Serialize, Debug, Clone)]
pub struct QExpansionJson {
    pub weight: String,
    pub level: u64,
    pub p: u64,
    #[serde(rename = "M_q")]
    pub m_q: usize,
    pub coeffs: Vec<serde_json::Value>,
}

/// Weight-2 newform attached to the curve: `a_n` for `n ≤ bound` from point
/// counts and the Hecke recursion.
pub fn an_from_curve(curve: &EllipticCurveData, bound: usize) -> Result<QExpansion> {
    if bound < 1 {
        return Err(Error::Invalid("q-expansion bound must be at least 1".into()));
    }
    let n = bound;
    let mut a = vec![0i64; n + 1];
    a[1] = 1;
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    for l in 2..=n {
        if !is_prime(l as u64) {
            continue;
        }
        let al = curve.a_l(l as u64);
        let bad = curve.conductor.is_multiple_of(l as u64);
        a[l] = al;
        let (mut prev, mut cur) = (1i64, al);
        let mut pw = l;
        while let Some(next) = pw.checked_mul(l).filter(|&x| x <= n) {
            let nxt = if bad { al * cur } else { al * cur - l as i64 * prev };
            prev = cur;
            cur = nxt;
            pw = next;
            a[pw] = cur;
        }
    }
    for m in 2..=n {
        let l = spf[m];
        let mut r = m;
        while r % l == 0 {
            r /= l;
        }
        if r != 1 {
            a[m] = a[m / r] * a[r];
        }
    }
    let coeffs = a.into_iter().map(|c| BigRational::from_integer(c.into())).collect::<Vec<_>>();
    let mut c = coeffs;
    c[0] = BigRational::zero();
    Ok(QExpansion::rational(2, curve.conductor, curve.p, c))
}
