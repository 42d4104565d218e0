//! L-invariants: the Tate-period invariant of a split multiplicative curve,
//! the invariant of the quadratic character at a split prime, and their
//! difference.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curve::{EllipticCurveData, Reduction};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::quadfield::SplitPrimeData;

/// Truncated integer power series product.
fn mul_trunc(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `q·j(q) = E_4(q)³ / ∏(1 − qⁿ)²⁴` up to `q^(n−1)`.
pub fn j_series(n: usize) -> Vec<BigInt> {
    // E_4 = 1 + 240 Σ σ_3(m) q^m
    let mut e4 = vec![BigInt::zero(); n];
    e4[0] = BigInt::one();
    for m in 1..n {
        let s: u64 = (1..=m as u64).filter(|d| (m as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
        e4[m] = BigInt::from(240u64 * s);
    }
    // ∏(1 − q^m) by Euler's pentagonal number theorem
    let mut eta = vec![BigInt::zero(); n];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e < n {
                eta[e] += if kk.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    let mut p24 = vec![BigInt::zero(); n];
    p24[0] = BigInt::one();
    let mut base = eta;
    let mut e = 24u32;
    while e > 0 {
        if e & 1 == 1 {
            p24 = mul_trunc(&p24, &base, n);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base, n);
        }
    }
    let e4c = mul_trunc(&mul_trunc(&e4, &e4, n), &e4, n);
    // divide by p24 (constant term 1)
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut c = e4c[i].clone();
        for j in 1..=i {
            c -= &p24[j] * &out[i - j];
        }
        out[i] = c;
    }
    out
}

fn eval_poly(cs: &[BigInt], x: &PadicNumber, ctx: &PadicContext) -> PadicNumber {
    let mut acc = ctx.zero();
    for c in cs.iter().rev() {
        acc = &(&acc * x) + &ctx.bigint(c);
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct TatePeriod {
    pub q: PadicNumber,
    pub j: String,
    /// `ord_p(q_E) = −ord_p(j_E)`.
    pub ord: i64,
    /// Valuation of the forward residual `q − J(q)/j`.
    pub residual_valuation: i64,
    /// Digits lost relative to the working precision.
    pub delta: i64,
}

/// Solve `j(q) = j_E` in `pZ_p` by Newton's method on `q = J(q)/j_E`.
pub fn tate_period(j: &BigRational, ctx: &PadicContext) -> Result<TatePeriod> {
    let p = ctx.p();
    let m = ctx.precision();
    if j.is_zero() {
        return Err(Error::Domain("j = 0 has good reduction".into()));
    }
    let u = ctx.rational(&j.recip());
    let v = u.valuation();
    if v <= 0 {
        return Err(Error::Domain(format!("ord_{p}(j) = {} ≥ 0: not multiplicative", -v)));
    }
    let nterms = (m / v + 2) as usize;
    let js = j_series(nterms);
    let dj: Vec<BigInt> = js.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut q = u.clone();
    for _ in 0..64 {
        let f = &q - &(&u * &eval_poly(&js, &q, ctx));
        let fp = &ctx.one() - &(&u * &eval_poly(&dj, &q, ctx));
        let step = f.try_div(&fp)?;
        let next = &q - &step;
        if next == q {
            break;
        }
        q = next;
    }
    let residual = &q - &(&u * &eval_poly(&js, &q, ctx));
    let rv = residual.valuation();
    Ok(TatePeriod {
        ord: q.valuation(),
        q,
        j: j.to_string(),
        residual_valuation: rv,
        delta: (m - rv).max(0),
    })
}

/// `𝓛_p(f) = log_p(q_E)/ord_p(q_E)`.
pub fn l_invariant_f(tp: &TatePeriod) -> Result<PadicNumber> {
    let ctx = PadicContext::new(tp.q.prime(), tp.q.precision())?;
    tp.q.iwasawa_log()?.try_div(&ctx.int(tp.ord))
}

/// Tate period and `𝓛_p(f)` of a curve that is split multiplicative at `p`.
pub fn l_invariant_of_curve(e: &EllipticCurveData, ctx: &PadicContext) -> Result<(TatePeriod, PadicNumber)> {
    let p = ctx.p();
    match e.reduction_type(p) {
        Reduction::SplitMultiplicative => {}
        r => return Err(Error::Precondition(format!("{} at p = {p} has {r:?} reduction", e.label))),
    }
    let tp = tate_period(&e.j_invariant(), ctx)?;
    let l = l_invariant_f(&tp)?;
    Ok((tp, l))
}

/// `𝓛_𝔭(χ_K)` as `log_p(ϖ_𝔭)/h`, together with the independent form
/// `−2·log_p(π̄_𝔭)/h`.
pub fn l_invariant_chi(sp: &SplitPrimeData) -> Result<(PadicNumber, PadicNumber)> {
    let p = sp.p;
    let prec = sp.varpi.precision();
    let h = PadicNumber::from_int(p, sp.h as i64, prec + 1);
    let a = sp.varpi.iwasawa_log()?.try_div(&h)?;
    let b = sp.pi_bar_image.iwasawa_log()?.scale_int(-2).try_div(&h)?;
    Ok((a, b))
}

#[derive(Clone, Debug, Serialize)]
pub struct LInvariantReport {
    pub l_f: PadicNumber,
    pub l_chi: PadicNumber,
    pub l_fk: PadicNumber,
    pub notes: Vec<String>,
}

/// `𝓛_𝔭(f, K) = 𝓛_p(f) − 𝓛_𝔭(χ_K)`.
pub fn l_invariant_fk(l_f: &PadicNumber, l_chi: &PadicNumber) -> Result<LInvariantReport> {
    if l_f.prime() != l_chi.prime() {
        return Err(Error::ContextMismatch(format!("p = {} vs {}", l_f.prime(), l_chi.prime())));
    }
    Ok(LInvariantReport {
        l_f: l_f.clone(),
        l_chi: l_chi.clone(),
        l_fk: l_f - l_chi,
        notes: vec!["Tate period taken on the global minimal model; Manin constant assumed to be 1".into()],
    })
}

/// Forward check: `j(q) = J(q)/q` evaluated at the computed period.
pub fn j_of_q(q: &PadicNumber, ctx: &PadicContext) -> Result<PadicNumber> {
    let v = q.valuation().max(1);
    let js = j_series((ctx.precision() / v + 3) as usize);
    eval_poly(&js, q, ctx).try_div(q)
}

/// `|ord_p(x)|` helper for rationals.
pub fn ord_rational(p: u64, x: &BigRational) -> i64 {
    let pn = crate::padic::ord_p_int(p, x.numer()).unwrap_or(0);
    let pd = crate::padic::ord_p_int(p, &x.denom().abs()).unwrap_or(0);
    pn - pd
}
