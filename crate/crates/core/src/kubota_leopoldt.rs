//! Kubota–Leopoldt p-adic L-functions of the quadratic character of `K`,
//! assembled from generalized Bernoulli numbers at integer nodes, and the
//! trivial-zero cross-check against `𝓛_𝔭(χ_K)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::kronecker;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::quadfield::ImagQuadField;

/// The universal constant `c` in `L_p′(0, χ_K ω) = c · 𝓛_𝔭(χ_K) · L(0, χ_K)`,
/// determined once on several split pairs and then frozen.
pub const FG_CONSTANT: i64 = -1;

/// Bernoulli numbers `B_0, …, B_n` (with `B_1 = −1/2`) from the integer
/// tangent-number recursion.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n + 1];
    out[0] = BigRational::one();
    if n >= 1 {
        out[1] = BigRational::new((-1).into(), 2.into());
    }
    let kmax = n / 2;
    if kmax == 0 {
        return out;
    }
    // tangent numbers T_k = tan^{(2k−1)}(0)
    let mut t = vec![BigInt::zero(); kmax + 1];
    t[1] = BigInt::one();
    for k in 2..=kmax {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=kmax {
        for j in k..=kmax {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    for k in 1..=kmax {
        let two2k = BigInt::one() << (2 * k);
        let num = BigInt::from(2 * k) * &t[k];
        let den = &two2k * (&two2k - BigInt::one());
        let b = BigRational::new(num, den);
        out[2 * k] = if k % 2 == 1 { b } else { -b };
    }
    out
}

/// The odd quadratic character `χ_K = (disc | ·)` of conductor `D`.
#[derive(Clone, Debug, Serialize)]
pub struct DirichletCharacterData {
    pub modulus: u64,
    /// `χ(a)` for `a = 0, …, D − 1`.
    pub values: Vec<i64>,
    pub odd: bool,
}

impl DirichletCharacterData {
    pub fn quadratic(k: &ImagQuadField) -> Self {
        let d = k.d();
        let values: Vec<i64> = (0..d).map(|a| kronecker(k.disc, a)).collect();
        let odd = values[(d - 1) as usize] == -1;
        DirichletCharacterData { modulus: d, values, odd }
    }

    pub fn eval(&self, n: u64) -> i64 {
        self.values[(n % self.modulus) as usize]
    }

    /// `B_{n,χ} = Σ_k C(n,k)·B_k·D^{k−1}·Σ_{a=1}^{D} χ(a)·a^{n−k}`.
    pub fn generalized_bernoulli(&self, n: usize, bern: &[BigRational]) -> BigRational {
        let d = BigInt::from(self.modulus);
        // power sums S_m = Σ χ(a) a^m
        let mut s = vec![BigInt::zero(); n + 1];
        for a in 1..=self.modulus {
            let c = self.eval(a);
            if c == 0 {
                continue;
            }
            let mut pw = BigInt::one();
            let ab = BigInt::from(a);
            for m in 0..=n {
                if c > 0 {
                    s[m] += &pw;
                } else {
                    s[m] -= &pw;
                }
                pw *= &ab;
            }
        }
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        let mut dpow = BigRational::new(BigInt::one(), d.clone()); // D^{k−1}
        for k in 0..=n {
            if !bern[k].is_zero() && !s[n - k].is_zero() {
                acc += BigRational::from_integer(&binom * &s[n - k]) * &bern[k] * &dpow;
            }
            binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
            dpow *= BigRational::from_integer(d.clone());
        }
        acc
    }

    /// `L(0, χ) = −B_{1,χ} = −(1/D)·Σ a·χ(a)`.
    pub fn l_at_zero(&self) -> BigRational {
        let s: i64 = (1..self.modulus).map(|a| a as i64 * self.eval(a)).sum();
        BigRational::new((-s).into(), (self.modulus as i64).into())
    }
}

/// The p-adic L-function `s ↦ L_p(s, χω^i)` as a Mahler expansion in the
/// node index `x`, where node `x = j` is `s = 1 − n_j`, `n_j = n_0 + (p−1)j`.
#[derive(Clone, Debug, Serialize)]
pub struct KlSeries {
    pub p: u64,
    pub twist: u64,
    pub n0: u64,
    /// Values at the nodes, `L_p(1 − n_j, χω^i)`.
    pub node_values: Vec<PadicNumber>,
    /// Forward differences `Δ^m g(0)`.
    pub mahler: Vec<PadicNumber>,
    /// Every coefficient beyond those stored has valuation at least this.
    pub tail_bound: i64,
}

/// `L_p(1 − n, χω^n·ω^{−n}) = −(1 − χ(p) p^{n−1})·B_{n,χ}/n` at a node.
pub fn node_value(chi: &DirichletCharacterData, p: u64, n: usize, bern: &[BigRational]) -> BigRational {
    let b = chi.generalized_bernoulli(n, bern);
    let euler = BigRational::one()
        - BigRational::from_integer(BigInt::from(chi.eval(p)) * BigInt::from(p).pow(n as u32 - 1));
    -(euler * b) / BigRational::from_integer(BigInt::from(n))
}

/// Assemble `L_p(s, χω^twist)` from `nodes` interpolation points.
pub fn kl_series(chi: &DirichletCharacterData, twist: u64, nodes: usize, ctx: &PadicContext) -> Result<KlSeries> {
    let p = ctx.p();
    if nodes < 2 {
        return Err(Error::Invalid("at least two interpolation nodes are needed".into()));
    }
    let n0 = match twist % (p - 1) {
        0 => p - 1,
        r => r,
    };
    let nmax = n0 as usize + (p as usize - 1) * (nodes - 1);
    let bern = bernoulli_numbers(nmax);
    // extra working precision absorbs the 1/m in the derivative
    let work = PadicContext::new(p, ctx.precision() + 4)?;
    let node_values: Vec<PadicNumber> = (0..nodes)
        .map(|j| work.rational(&node_value(chi, p, n0 as usize + (p as usize - 1) * j, &bern)))
        .collect();
    let mut mahler = Vec::with_capacity(nodes);
    let mut row = node_values.clone();
    for _ in 0..nodes {
        mahler.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // the differences of an Iwasawa function satisfy ord Δ^m ≥ m; confirm on
    // the computed range before trusting the tail bound
    for (m, d) in mahler.iter().enumerate() {
        if !d.is_zero() && d.valuation() < m as i64 - 1 {
            return Err(Error::PrecisionExhausted(format!(
                "Mahler coefficient {m} has valuation {} below the expected bound",
                d.valuation()
            )));
        }
    }
    Ok(KlSeries { p, twist, n0, node_values, mahler, tail_bound: nodes as i64 - 1 })
}

impl KlSeries {
    fn node_coordinate(&self, s: &PadicNumber) -> Result<PadicNumber> {
        let prec = s.precision();
        let num = &PadicNumber::from_int(self.p, 1 - self.n0 as i64, prec) - s;
        num.try_div(&PadicNumber::from_int(self.p, self.p as i64 - 1, prec))
    }

    /// `L_p(s, χω^twist)`, at precision capped by the tail bound.
    pub fn eval(&self, s: &PadicNumber) -> Result<PadicNumber> {
        let x = self.node_coordinate(s)?;
        if x.valuation() < 0 {
            return Err(Error::Domain("s is not in the disc of convergence for this branch".into()));
        }
        let prec = s.precision();
        let mut acc = PadicNumber::zero(self.p, prec);
        let mut binom = PadicNumber::from_int(self.p, 1, prec + 8);
        for (m, d) in self.mahler.iter().enumerate() {
            acc = &acc + &(d * &binom);
            // C(x, m+1) = C(x, m)·(x − m)/(m + 1)
            let xm = &x - &PadicNumber::from_int(self.p, m as i64, prec + 8);
            binom = (&binom * &xm).try_div(&PadicNumber::from_int(self.p, m as i64 + 1, prec + 8))?;
        }
        Ok(acc.with_precision(self.tail_bound.min(prec)))
    }

    /// `d/ds L_p(s, χω)` at `s = 0` (requires the branch with `n_0 = 1`).
    pub fn derivative_at_zero(&self) -> Result<PadicNumber> {
        if self.n0 != 1 {
            return Err(Error::Domain("s = 0 is not a node of this branch".into()));
        }
        let prec = self.mahler[0].precision();
        let mut acc = PadicNumber::zero(self.p, prec);
        for (m, d) in self.mahler.iter().enumerate().skip(1) {
            let t = d.try_div(&PadicNumber::from_int(self.p, m as i64, prec + 8))?;
            acc = if m % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        // the tail Σ_{m ≥ nodes} loses at most log_p(m) digits against ord Δ^m ≥ m
        let loss = (self.mahler.len() as f64).log(self.p as f64).ceil() as i64;
        let bound = self.tail_bound - loss;
        let dx = PadicNumber::from_int(self.p, -(self.p as i64 - 1), prec + 8);
        Ok(acc.try_div(&dx)?.with_precision(bound))
    }
}

/// Nodes needed for `M` reliable digits of the derivative at `s = 0`.
pub fn nodes_for_precision(p: u64, m: i64) -> usize {
    let mut j = m as usize + 2;
    while (j as i64 - 1) - (j as f64).log(p as f64).ceil() as i64 <= m {
        j += 1;
    }
    j
}

#[derive(Clone, Debug, Serialize)]
pub struct FgReport {
    pub p: u64,
    pub disc: i64,
    pub nodes: usize,
    pub l_p_at_zero: PadicNumber,
    pub trivial_zero: bool,
    pub derivative: PadicNumber,
    pub l_at_zero: String,
    pub ratio: PadicNumber,
    pub constant: i64,
    pub l_chi: PadicNumber,
    pub predicted: PadicNumber,
    pub agreement: i64,
    pub pass: bool,
}

/// Compare `L_p′(0, χ_K ω)/L(0, χ_K)` with `FG_CONSTANT·𝓛_𝔭(χ_K)`.
pub fn fg_crosscheck(k: &ImagQuadField, l_chi: &PadicNumber, ctx: &PadicContext) -> Result<FgReport> {
    let p = ctx.p();
    if k.splitting(p) != 1 {
        return Err(Error::Precondition(format!("no trivial zero: p = {p} does not split in Q(√{})", k.disc)));
    }
    let chi = DirichletCharacterData::quadratic(k);
    let nodes = nodes_for_precision(p, ctx.precision());
    let series = kl_series(&chi, 1, nodes, ctx)?;
    let at_zero = series.eval(&ctx.zero())?;
    let derivative = series.derivative_at_zero()?;
    let l0 = chi.l_at_zero();
    let ratio = derivative.try_div(&ctx.rational(&l0))?;
    let predicted = l_chi.scale_int(FG_CONSTANT);
    let agreement = ratio.agreement(&predicted);
    let target = ratio.precision().min(predicted.precision());
    Ok(FgReport {
        p,
        disc: k.disc,
        nodes,
        trivial_zero: at_zero.is_zero(),
        l_p_at_zero: at_zero,
        derivative,
        l_at_zero: l0.to_string(),
        ratio,
        constant: FG_CONSTANT,
        l_chi: l_chi.clone(),
        predicted,
        agreement,
        pass: agreement >= target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_numbers(12);
        let r = |a: i64, c: i64| BigRational::new(a.into(), c.into());
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[6], r(1, 42));
        assert_eq!(b[12], r(-691, 2730));
        assert!(b[3].is_zero());
    }

    #[test]
    fn l_at_zero_is_class_number() {
        for disc in [-11i64, -23, -47, -71] {
            let k = ImagQuadField::new(disc).unwrap();
            let chi = DirichletCharacterData::quadratic(&k);
            assert!(chi.odd);
            assert_eq!(chi.l_at_zero(), BigRational::from_integer(k.class_number.into()));
            let bern = bernoulli_numbers(1);
            assert_eq!(-chi.generalized_bernoulli(1, &bern), chi.l_at_zero());
        }
    }
}

#[cfg(test)]
mod fg_tests {
    use super::*;
    use crate::linvariants::l_invariant_chi;
    use crate::quadfield::split_prime;

    #[test]
    fn trivial_zero_ratio_for_5_and_minus_11() {
        let k = ImagQuadField::new(-11).unwrap();
        let ctx = PadicContext::new(5, 10).unwrap();
        let sp = split_prime(&k, &ctx).unwrap();
        let (l_chi, _) = l_invariant_chi(&sp).unwrap();
        let rep = fg_crosscheck(&k, &l_chi, &ctx).unwrap();
        assert!(rep.trivial_zero);
        assert!(rep.pass, "{rep:?}");
    }
}
