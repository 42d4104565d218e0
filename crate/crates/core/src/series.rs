//! Truncated bivariate power series in `(κ, τ) = (k − 2, t)`.
//!
//! Terms `κ^i τ^j` are kept for total degree `i + j ≤ order`; everything above
//! is discarded consistently by every operation.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoVarSeries {
    p: u64,
    prec: i64,
    order: usize,
    // coeffs[i][j] multiplies κ^i τ^j; row i has length order + 1 - i
    coeffs: Vec<Vec<PadicNumber>>,
}

impl TwoVarSeries {
    pub fn zero(ctx: &PadicContext, order: usize) -> Self {
        let coeffs = (0..=order).map(|i| vec![ctx.zero(); order + 1 - i]).collect();
        TwoVarSeries { p: ctx.p(), prec: ctx.precision(), order, coeffs }
    }

    pub fn constant(ctx: &PadicContext, order: usize, c: PadicNumber) -> Self {
        let mut s = Self::zero(ctx, order);
        s.coeffs[0][0] = c;
        s
    }

    /// The series `κ`.
    pub fn kappa(ctx: &PadicContext, order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        if order >= 1 {
            s.coeffs[1][0] = ctx.one();
        }
        s
    }

    /// The series `τ`.
    pub fn tau(ctx: &PadicContext, order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        if order >= 1 {
            s.coeffs[0][1] = ctx.one();
        }
        s
    }

    /// `c0 + a·κ + b·τ`.
    pub fn linear(ctx: &PadicContext, order: usize, c0: PadicNumber, a: PadicNumber, b: PadicNumber) -> Self {
        let mut s = Self::constant(ctx, order, c0);
        if order >= 1 {
            s.coeffs[1][0] = a;
            s.coeffs[0][1] = b;
        }
        s
    }

    /// Build from a coefficient function `(i, j) ↦ c_{ij}`.
    pub fn from_fn(ctx: &PadicContext, order: usize, mut f: impl FnMut(usize, usize) -> PadicNumber) -> Self {
        let coeffs = (0..=order).map(|i| (0..=order - i).map(|j| f(i, j)).collect()).collect();
        TwoVarSeries { p: ctx.p(), prec: ctx.precision(), order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn ctx(&self) -> PadicContext {
        PadicContext::new(self.p, self.prec).expect("valid context")
    }

    fn zero_like(&self) -> Self {
        let z = PadicNumber::zero(self.p, self.prec);
        let coeffs = (0..=self.order).map(|i| vec![z.clone(); self.order + 1 - i]).collect();
        TwoVarSeries { p: self.p, prec: self.prec, order: self.order, coeffs }
    }

    /// Coefficient of `κ^i τ^j` (zero beyond the truncation).
    pub fn coeff(&self, i: usize, j: usize) -> PadicNumber {
        if i + j > self.order {
            return PadicNumber::zero(self.p, self.prec);
        }
        self.coeffs[i][j].clone()
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: PadicNumber) {
        assert!(i + j <= self.order, "coefficient outside truncation");
        self.coeffs[i][j] = c;
    }

    /// Value at the origin `(k, t) = (2, 0)`.
    pub fn constant_term(&self) -> PadicNumber {
        self.coeffs[0][0].clone()
    }

    /// `∂/∂κ` at the origin.
    pub fn d_kappa(&self) -> PadicNumber {
        self.coeff(1, 0)
    }

    /// `∂/∂τ` at the origin.
    pub fn d_tau(&self) -> PadicNumber {
        self.coeff(0, 1)
    }

    /// Smallest valuation among the coefficients (the zero series gives the
    /// working precision).
    pub fn min_valuation(&self) -> i64 {
        self.coeffs.iter().flatten().map(|c| c.valuation()).min().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.p != o.p || self.order != o.order {
            return Err(Error::ContextMismatch(format!(
                "series over p={} order {} vs p={} order {}",
                self.p, self.order, o.p, o.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = self.clone();
        for (i, row) in r.coeffs.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = &*c + &o.coeffs[i][j];
            }
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.coeffs.iter_mut().flatten().for_each(|c| *c = -&*c);
        r
    }

    pub fn scale(&self, s: &PadicNumber) -> Self {
        let mut r = self.clone();
        r.coeffs.iter_mut().flatten().for_each(|c| *c = &*c * s);
        r
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.order;
        let mut r = self.zero_like();
        for i1 in 0..=n {
            for j1 in 0..=n - i1 {
                let a = &self.coeffs[i1][j1];
                if a.is_zero() && a.precision() >= self.prec {
                    continue;
                }
                for i2 in 0..=n - i1 - j1 {
                    for j2 in 0..=n - i1 - j1 - i2 {
                        let t = a * &o.coeffs[i2][j2];
                        let c = &mut r.coeffs[i1 + i2][j1 + j2];
                        *c = &*c + &t;
                    }
                }
            }
        }
        Ok(r)
    }

    fn with_constant(&self, c: PadicNumber) -> Self {
        let mut r = self.clone();
        r.coeffs[0][0] = c;
        r
    }

    /// `exp(F)`; the constant term must have positive valuation (or vanish).
    pub fn exp(&self) -> Result<Self> {
        let c = self.constant_term();
        let e0 = c.exp()?;
        let ctx = self.ctx();
        let h = self.with_constant(ctx.zero());
        // exp(h) = Σ h^n / n!, and h^n vanishes beyond the truncation for n > order
        let mut acc = Self::constant(&ctx, self.order, ctx.one());
        let mut pw = acc.clone();
        let mut fact = num_bigint::BigInt::from(1);
        for n in 1..=self.order {
            pw = pw.mul(&h)?;
            fact *= n;
            let inv = PadicNumber::from_int(self.p, 1, self.prec).try_div(&ctx.bigint(&fact))?;
            acc = acc.add(&pw.scale(&inv))?;
        }
        Ok(acc.scale(&e0))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ctx = self.ctx();
        let c_inv = ctx.one().try_div(&c)?;
        // 1/(c(1+h)) = c^{-1} Σ (-h)^n
        let h = self.scale(&c_inv).with_constant(ctx.zero());
        let mut acc = Self::constant(&ctx, self.order, ctx.one());
        let mut pw = acc.clone();
        let mh = h.neg();
        for _ in 1..=self.order {
            pw = pw.mul(&mh)?;
            acc = acc.add(&pw)?;
        }
        Ok(acc.scale(&c_inv))
    }

    /// Substitute `κ ↦ a·κ + b·τ`, `τ ↦ c·κ + d·τ`.
    pub fn substitute_linear(&self, a: &PadicNumber, b: &PadicNumber, c: &PadicNumber, d: &PadicNumber) -> Result<Self> {
        let ctx = self.ctx();
        let n = self.order;
        let zero = ctx.zero();
        let kap = Self::linear(&ctx, n, zero.clone(), a.clone(), b.clone());
        let ta = Self::linear(&ctx, n, zero, c.clone(), d.clone());
        let mut kpow = vec![Self::constant(&ctx, n, ctx.one())];
        let mut tpow = vec![Self::constant(&ctx, n, ctx.one())];
        for e in 1..=n {
            kpow.push(kpow[e - 1].mul(&kap)?);
            tpow.push(tpow[e - 1].mul(&ta)?);
        }
        let mut r = self.zero_like();
        for i in 0..=n {
            for j in 0..=n - i {
                let term = kpow[i].mul(&tpow[j])?.scale(&self.coeffs[i][j]);
                r = r.add(&term)?;
            }
        }
        Ok(r)
    }

    /// Restrict to the line `τ = s·κ`, returning the coefficients of the
    /// one-variable series in `κ` up to the truncation order.
    pub fn restrict_to_line(&self, s: &PadicNumber) -> Vec<PadicNumber> {
        let n = self.order;
        let mut out = vec![PadicNumber::zero(self.p, self.prec); n + 1];
        let mut spow = vec![PadicNumber::from_int(self.p, 1, self.prec)];
        for e in 1..=n {
            spow.push(&spow[e - 1] * s);
        }
        for i in 0..=n {
            for j in 0..=n - i {
                out[i + j] = &out[i + j] + &(&self.coeffs[i][j] * &spow[j]);
            }
        }
        out
    }

    /// Evaluate at a point `(κ, τ)` with both coordinates of positive valuation.
    pub fn eval(&self, kappa: &PadicNumber, tau: &PadicNumber) -> PadicNumber {
        let mut acc = PadicNumber::zero(self.p, self.prec);
        let one = PadicNumber::from_int(self.p, 1, self.prec);
        let mut kp = one.clone();
        for i in 0..=self.order {
            let mut tp = one.clone();
            for j in 0..=self.order - i {
                acc = &acc + &(&self.coeffs[i][j] * &(&kp * &tp));
                tp = &tp * tau;
            }
            kp = &kp * kappa;
        }
        acc
    }

    /// Series in `κ` only, from its coefficients.
    pub fn from_kappa_coeffs(ctx: &PadicContext, order: usize, cs: &[PadicNumber]) -> Self {
        Self::from_fn(ctx, order, |i, j| if j == 0 && i < cs.len() { cs[i].clone() } else { ctx.zero() })
    }

    /// Lower every coefficient to at most `prec`.
    pub fn with_precision(&self, prec: i64) -> Self {
        let mut r = self.clone();
        r.coeffs.iter_mut().flatten().for_each(|c| *c = c.with_precision(prec));
        r.prec = r.prec.min(prec);
        r
    }
}

impl fmt::Display for TwoVarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for deg in 0..=self.order {
            for i in (0..=deg).rev() {
                let j = deg - i;
                let c = &self.coeffs[i][j];
                if c.is_zero() {
                    continue;
                }
                let mon = match (i, j) {
                    (0, 0) => String::new(),
                    _ => {
                        let k = match i { 0 => String::new(), 1 => "κ".into(), _ => format!("κ^{i}") };
                        let t = match j { 0 => String::new(), 1 => "τ".into(), _ => format!("τ^{j}") };
                        format!("·{k}{t}")
                    }
                };
                parts.push(format!("({c}){mon}"));
            }
        }
        if parts.is_empty() {
            parts.push(format!("O({}^{})", self.p, self.prec));
        }
        write!(f, "{} + O(deg {})", parts.join(" + "), self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::new(7, 20).unwrap()
    }

    #[test]
    fn exp_inverse_and_log_derivative() {
        let c = ctx();
        let s = TwoVarSeries::linear(&c, 3, c.zero(), c.int(3), c.int(-2));
        let e = s.exp().unwrap();
        assert_eq!(e.constant_term(), c.one());
        assert_eq!(e.d_kappa(), c.int(3));
        assert_eq!(e.d_tau(), c.int(-2));
        // exp(s)·exp(−s) = 1
        let prod = e.mul(&s.neg().exp().unwrap()).unwrap();
        assert_eq!(prod, TwoVarSeries::constant(&c, 3, c.one()));
        let inv = e.inverse().unwrap();
        assert_eq!(inv.mul(&e).unwrap(), TwoVarSeries::constant(&c, 3, c.one()));
        // coefficient of κ^2 in exp(3κ − 2τ) is 9/2
        assert_eq!(e.coeff(2, 0), c.ratio(9, 2));
    }

    #[test]
    fn line_restriction_chain_rule() {
        // F(κ, τ) = τ − κ/2 vanishes on τ = κ/2
        let c = ctx();
        let f = TwoVarSeries::linear(&c, 2, c.zero(), c.ratio(-1, 2), c.one());
        let g = f.mul(&TwoVarSeries::linear(&c, 2, c.int(5), c.int(1), c.int(1))).unwrap();
        assert!(g.restrict_to_line(&c.ratio(1, 2)).iter().all(|x| x.is_zero()));
        assert!((&g.d_kappa() + &g.d_tau().scale_int(1).try_div(&c.int(2)).unwrap()).is_zero());
    }

    #[test]
    fn substitution_reflects_tau() {
        // τ ↦ κ − τ applied twice is the identity
        let c = ctx();
        let f = TwoVarSeries::from_fn(&c, 3, |i, j| c.int((i * 4 + j + 1) as i64));
        let (o, z, m) = (c.one(), c.zero(), c.int(-1));
        let g = f.substitute_linear(&o, &z, &o, &m).unwrap();
        let h = g.substitute_linear(&o, &z, &o, &m).unwrap();
        assert_eq!(h, f);
        assert_eq!(g.coeff(0, 1), -f.coeff(0, 1));
    }
}
