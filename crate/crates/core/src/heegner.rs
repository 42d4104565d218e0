//! Points of `E(K)` from the catalog: hypothesis checks, localization at `𝔭`,
//! and the formal-group logarithm attached to the Néron differential.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{EllipticCurveData, KPoint, QuadElt, Reduction};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::quadfield::{ImagQuadField, SplitPrimeData};

/// A coordinate `rat + sqrt_coeff·√disc` with rationals written as `"n/d"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCoordinate {
    pub rat: String,
    pub sqrt_coeff: String,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Catalog(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Catalog(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Catalog(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

impl KCoordinate {
    pub fn to_quad(&self, d: i64) -> Result<QuadElt> {
        Ok(QuadElt::new(parse_rational(&self.rat)?, parse_rational(&self.sqrt_coeff)?, d))
    }

    pub fn from_quad(q: &QuadElt) -> Self {
        KCoordinate { rat: q.re.to_string(), sqrt_coeff: q.im.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegnerPointData {
    /// The fundamental discriminant `−D_K`.
    pub disc: i64,
    pub x: KCoordinate,
    pub y: KCoordinate,
    pub provenance: String,
}

impl HeegnerPointData {
    pub fn to_kpoint(&self) -> Result<KPoint> {
        let d = -self.disc;
        Ok(KPoint::Affine(self.x.to_quad(d)?, self.y.to_quad(d)?))
    }

    /// Parse and confirm the curve equation holds exactly in `K`.
    pub fn validate(&self, e: &EllipticCurveData) -> Result<KPoint> {
        let pt = self.to_kpoint()?;
        if !e.is_on_curve(&pt) {
            return Err(Error::Catalog(format!(
                "point ({}, {}) is not on {}",
                self.x.rat, self.y.rat, e.label
            )));
        }
        Ok(pt)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotMachineChecked,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub curve: String,
    pub disc: i64,
    pub p: u64,
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&HypothesisCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).collect()
    }
}

/// Every computable hypothesis on `(E, K, p)`; failures are listed, not raised.
pub fn check_hypotheses(e: &EllipticCurveData, disc: i64, p: u64) -> HypothesisReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(HypothesisCheck {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail,
        })
    };
    push("p >= 5", p >= 5, format!("p = {p}"));
    let n_exact = e.conductor;
    let tame = if n_exact.is_multiple_of(p) { n_exact / p } else { n_exact };
    push(
        "conductor is N·p with p ∤ N",
        n_exact.is_multiple_of(p) && tame % p != 0,
        format!("conductor {n_exact} = {tame}·{p}"),
    );
    let red = e.reduction_type(p);
    push(
        "split multiplicative at p (a_p = +1)",
        red == Reduction::SplitMultiplicative,
        format!("a_p = {}, reduction {red:?}", e.a_l(p)),
    );
    match ImagQuadField::new(disc) {
        Err(err) => push("K admissible", false, err.to_string()),
        Ok(k) => {
            push("D_K > 4", k.d() > 4, format!("D_K = {}", k.d()));
            push("p splits in K", k.splitting(p) == 1, format!("({disc} | {p}) = {}", k.splitting(p)));
            let hw = k.heegner_hypothesis(tame);
            push(
                "Heegner hypothesis for N",
                hw.holds && hw.squarefree,
                format!(
                    "N = {tame}; primes above: {}",
                    hw.witness.iter().map(|(l, f)| format!("{l}: ({}, {}, {})", f.a, f.b, f.c)).collect::<Vec<_>>().join(", ")
                ),
            );
            push("p ∤ h_K", k.class_number % p != 0, format!("h_K = {}", k.class_number));
        }
    }
    for item in ["residual representation irreducible", "residual representation p-distinguished"] {
        checks.push(HypothesisCheck {
            name: item.into(),
            status: CheckStatus::NotMachineChecked,
            detail: "not machine-checked".into(),
        });
    }
    HypothesisReport { curve: e.label.clone(), disc, p, checks }
}

/// A point of `E(Q_p)` in primitive projective coordinates `(X : Y : Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpPoint {
    pub x: PadicNumber,
    pub y: PadicNumber,
    pub z: PadicNumber,
}

impl QpPoint {
    pub fn infinity(ctx: &PadicContext) -> Self {
        QpPoint { x: ctx.zero(), y: ctx.one(), z: ctx.zero() }
    }

    fn normalized(x: PadicNumber, y: PadicNumber, z: PadicNumber) -> Result<Self> {
        let k = x.valuation().min(y.valuation()).min(z.valuation());
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(Error::PrecisionExhausted("projective point lost all precision".into()));
        }
        Ok(QpPoint { x: x.shift(-k), y: y.shift(-k), z: z.shift(-k) })
    }

    pub fn is_infinity(&self) -> bool {
        self.z.is_zero() && self.x.is_zero()
    }

    /// In the kernel of reduction: `Z ≡ 0 (mod p)` in primitive coordinates.
    pub fn in_kernel_of_reduction(&self) -> bool {
        self.z.valuation() >= 1
    }

    /// Formal-group parameter `z = −X/Y`.
    pub fn formal_parameter(&self) -> Result<PadicNumber> {
        (-&self.x).try_div(&self.y)
    }

    /// Affine `(x, y)` when `Z` is a unit-or-better.
    pub fn affine(&self) -> Result<(PadicNumber, PadicNumber)> {
        Ok((self.x.try_div(&self.z)?, self.y.try_div(&self.z)?))
    }

    /// Smallest relative precision among the coordinates.
    pub fn precision(&self) -> i64 {
        self.x.precision().min(self.y.precision()).min(self.z.precision())
    }
}

/// Arithmetic on `E(Q_p)` by division-free projective formulas.
pub struct QpCurve {
    pub ctx: PadicContext,
    a: [PadicNumber; 5],
}

impl QpCurve {
    pub fn new(e: &EllipticCurveData, ctx: &PadicContext) -> Self {
        QpCurve { ctx: ctx.clone(), a: e.a_invariants.map(|c| ctx.int(c)) }
    }

    pub fn residual(&self, pt: &QpPoint) -> PadicNumber {
        let [a1, a2, a3, a4, a6] = &self.a;
        let (x, y, z) = (&pt.x, &pt.y, &pt.z);
        let lhs = &(&(&(y * y) * z) + &(&(&(a1 * x) * y) * z)) + &(&(a3 * y) * &(z * z));
        let rhs = &(&(&(&(x * x) * x) + &(&(a2 * &(x * x)) * z)) + &(&(a4 * x) * &(z * z))) + &(a6 * &(&(z * z) * z));
        &lhs - &rhs
    }

    pub fn neg(&self, pt: &QpPoint) -> QpPoint {
        let [a1, _, a3, _, _] = &self.a;
        QpPoint { x: pt.x.clone(), y: &(&(-&pt.y) - &(a1 * &pt.x)) - &(a3 * &pt.z), z: pt.z.clone() }
    }

    fn combine(&self, p1: &QpPoint, z2: &PadicNumber, sum_x: &PadicNumber, u: &PadicNumber, v: &PadicNumber) -> Result<QpPoint> {
        // λ = u/v; the point is (vA : −(u + a1 v)A + v² Z2 (u X1 − v Y1) − a3 Z3 : Z3 = v³ Z1 Z2)
        let [a1, a2, a3, _, _] = &self.a;
        let w = &p1.z * z2;
        let v2 = v * v;
        let a = &(&w * &(&(&(u * u) + &(&(a1 * u) * v)) - &(a2 * &v2))) - &(&v2 * sum_x);
        let x3 = v * &a;
        let z3 = &(&v2 * v) * &w;
        let y3 = &(&(-&(&(u + &(a1 * v)) * &a)) + &(&(&v2 * z2) * &(&(u * &p1.x) - &(v * &p1.y)))) - &(a3 * &z3);
        QpPoint::normalized(x3, y3, z3)
    }

    pub fn double(&self, p1: &QpPoint) -> Result<QpPoint> {
        if p1.is_infinity() {
            return Ok(p1.clone());
        }
        let [a1, a2, a3, a4, _] = &self.a;
        let (x, y, z) = (&p1.x, &p1.y, &p1.z);
        let three = self.ctx.int(3);
        let two = self.ctx.int(2);
        let u = &(&(&(&three * &(x * x)) + &(&(&two * a2) * &(x * z))) + &(a4 * &(z * z))) - &(&(a1 * y) * z);
        let den = &(&(&two * y) + &(a1 * x)) + &(a3 * z);
        if den.is_zero() {
            return Ok(QpPoint::infinity(&self.ctx));
        }
        let v = z * &den;
        let sum_x = &two * &(x * z);
        self.combine(p1, z, &sum_x, &u, &v)
    }

    pub fn add(&self, p1: &QpPoint, p2: &QpPoint) -> Result<QpPoint> {
        if p1.is_infinity() {
            return Ok(p2.clone());
        }
        if p2.is_infinity() {
            return Ok(p1.clone());
        }
        let u = &(&p2.y * &p1.z) - &(&p1.y * &p2.z);
        let v = &(&p2.x * &p1.z) - &(&p1.x * &p2.z);
        if v.is_zero() {
            return if u.is_zero() { self.double(p1) } else { Ok(QpPoint::infinity(&self.ctx)) };
        }
        let sum_x = &(&p1.x * &p2.z) + &(&p2.x * &p1.z);
        self.combine(p1, &p2.z, &sum_x, &u, &v)
    }

    pub fn mul(&self, pt: &QpPoint, m: u64) -> Result<QpPoint> {
        let mut acc = QpPoint::infinity(&self.ctx);
        let mut base = pt.clone();
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            m >>= 1;
            if m > 0 {
                base = self.double(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Image of a point of `E(K)` under `√−D ↦ root`.
pub fn localize_point(pt: &KPoint, root: &PadicNumber, ctx: &PadicContext) -> Result<QpPoint> {
    match pt {
        KPoint::Infinity => Ok(QpPoint::infinity(ctx)),
        KPoint::Affine(x, y) => {
            let emb = |q: &QuadElt| &ctx.rational(&q.re) + &(&ctx.rational(&q.im) * root);
            QpPoint::normalized(emb(x), emb(y), ctx.one())
        }
    }
}

/// Localization at `𝔭` using the split-prime data.
pub fn localize_at(pt: &KPoint, sp: &SplitPrimeData, ctx: &PadicContext) -> Result<QpPoint> {
    localize_point(pt, &sp.sqrt_disc, ctx)
}

/// Integer coefficients of `w(z) = z³ + a1 z w + a2 z² w + a3 w² + a4 z w² + a6 w³`
/// up to `z^n`.
pub fn formal_w(a: [i64; 5], n: usize) -> Vec<BigInt> {
    let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
    let mul = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, d) in y.iter().enumerate().take(n + 1 - i) {
                out[i + j] += c * d;
            }
        }
        out
    };
    let mut w = vec![BigInt::zero(); n + 1];
    // each pass fixes at least one more coefficient
    for _ in 0..=n {
        let w2 = mul(&w, &w);
        let w3 = mul(&w2, &w);
        let mut next = vec![BigInt::zero(); n + 1];
        if n >= 3 {
            next[3] = BigInt::one();
        }
        for i in 0..=n {
            if i >= 1 {
                next[i] += &a1 * &w[i - 1] + &a4 * &w2[i - 1];
            }
            if i >= 2 {
                next[i] += &a2 * &w[i - 2];
            }
            next[i] += &a3 * &w2[i] + &a6 * &w3[i];
        }
        if next == w {
            break;
        }
        w = next;
    }
    w
}

/// Coefficients of the invariant differential
/// `ω = dz / (1 − a1 z − a2 z² − 2a3 w − 2a4 z w − 3a6 w²)` up to `z^n`.
pub fn invariant_differential(a: [i64; 5], n: usize) -> Vec<BigInt> {
    let w = formal_w(a, n + 2);
    let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
    let mut den = vec![BigInt::zero(); n + 1];
    den[0] = BigInt::one();
    let mut w2 = vec![BigInt::zero(); n + 1];
    for i in 0..=n {
        for j in 0..=n - i {
            w2[i + j] += &w[i] * &w[j];
        }
    }
    for i in 0..=n {
        if i == 1 {
            den[i] -= &a1;
        }
        if i == 2 {
            den[i] -= &a2;
        }
        den[i] -= BigInt::from(2) * &a3 * &w[i] + BigInt::from(3) * &a6 * &w2[i];
        if i >= 1 {
            den[i] -= BigInt::from(2) * &a4 * &w[i - 1];
        }
    }
    // invert the unit power series
    let mut inv = vec![BigInt::zero(); n + 1];
    inv[0] = BigInt::one();
    for i in 1..=n {
        let mut c = BigInt::zero();
        for j in 1..=i {
            c -= &den[j] * &inv[i - j];
        }
        inv[i] = c;
    }
    inv
}

/// `λ(z) = Σ c_{n−1} zⁿ/n` at a point of positive valuation.
pub fn formal_log_at(a: [i64; 5], z: &PadicNumber) -> Result<PadicNumber> {
    let p = z.prime();
    let prec = z.precision();
    if z.is_zero() {
        return Ok(PadicNumber::zero(p, prec));
    }
    let v = z.valuation();
    if v < 1 {
        return Err(Error::Domain("formal logarithm needs ord_p(z) ≥ 1".into()));
    }
    // terms zⁿ/n have valuation ≥ n·v − log_p(n)
    let mut n = 1usize;
    while (n as i64 + 1) * v - ((n + 1) as f64).log(p as f64).floor() as i64 <= prec + 1 {
        n += 1;
    }
    let c = invariant_differential(a, n);
    let mut acc = PadicNumber::zero(p, prec);
    let mut zn = PadicNumber::from_int(p, 1, prec);
    for k in 1..=n {
        zn = &zn * z;
        if c[k - 1].is_zero() {
            continue;
        }
        let term = zn.scale(&c[k - 1]).try_div(&PadicNumber::from_int(p, k as i64, prec + 8))?;
        acc = &acc + &term;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalLogResult {
    pub value: PadicNumber,
    /// Multiple `m` with `mP` in the kernel of reduction.
    pub m: u64,
    pub torsion: bool,
    pub parameter: Option<PadicNumber>,
}

/// Smallest `m ≤ bound` with `mP` in the kernel of reduction.
pub fn kernel_multiple(curve: &QpCurve, pt: &QpPoint, bound: u64) -> Result<(u64, QpPoint)> {
    let mut acc = pt.clone();
    for m in 1..=bound {
        if acc.is_infinity() || acc.in_kernel_of_reduction() {
            return Ok((m, acc));
        }
        acc = if m == 1 { curve.double(pt)? } else { curve.add(&acc, pt)? };
    }
    Err(Error::Precondition(format!("no multiple up to {bound} reaches the kernel of reduction")))
}

/// `λ(mP)/m` through the given multiple `m` (which must land in the kernel).
pub fn formal_log_with_multiple(e: &EllipticCurveData, curve: &QpCurve, pt: &QpPoint, m: u64) -> Result<PadicNumber> {
    let mp = curve.mul(pt, m)?;
    if mp.is_infinity() {
        return Ok(curve.ctx.zero());
    }
    if !mp.in_kernel_of_reduction() {
        return Err(Error::Precondition(format!("{m}·P is not in the kernel of reduction")));
    }
    let z = mp.formal_parameter()?;
    let lg = formal_log_at(e.a_invariants, &z)?;
    lg.try_div(&curve.ctx.int(m as i64).lift_to(lg.precision() + 8))
}

const WORK_MARGIN: i64 = 24;

/// The square root of `−D` at the working precision, on the same branch as `root`.
fn lift_root(pt: &KPoint, root: &PadicNumber, work: &PadicContext) -> Result<PadicNumber> {
    let d = match pt {
        KPoint::Affine(x, _) => x.d,
        KPoint::Infinity => return Ok(root.clone()),
    };
    let r = work.int(-d).hensel_sqrt()?;
    Ok(if r.agrees_with(root, 1) { r } else { -r })
}

/// Formal logarithm of a point of `E(K)` localized at `𝔭`.
pub fn formal_log(e: &EllipticCurveData, pt: &KPoint, root: &PadicNumber, ctx: &PadicContext) -> Result<FormalLogResult> {
    if *pt == KPoint::Infinity {
        return Ok(FormalLogResult { value: ctx.zero(), m: 1, torsion: true, parameter: None });
    }
    // projective arithmetic sheds digits near the kernel of reduction; work
    // with a margin and report at the requested precision
    let work = PadicContext::new(ctx.p(), ctx.precision() + WORK_MARGIN)?;
    let root_w = lift_root(pt, root, &work)?;
    let curve = QpCurve::new(e, &work);
    let local = localize_point(pt, &root_w, &work)?;
    let (m, mp) = kernel_multiple(&curve, &local, 10_000)?;
    let z = mp.formal_parameter()?;
    let lg = formal_log_at(e.a_invariants, &z)?;
    let value = lg.try_div(&work.int(m as i64).lift_to(lg.precision() + 8))?.with_precision(ctx.precision());
    // a nonzero logarithm already rules out torsion; the exact search in E(K)
    // is only needed when the value vanishes to working precision
    let torsion = value.is_zero() && e.torsion_order_k(pt, 24).is_some();
    Ok(FormalLogResult { value, m, torsion, parameter: Some(z.with_precision(ctx.precision())) })
}

/// `(1 − p^{−1})·log(loc_𝔭 P)`, the value of the anticyclotomic p-adic
/// L-function at the norm character obtained from the point.
pub fn pgz_value(e: &EllipticCurveData, pt: &KPoint, sp: &SplitPrimeData, ctx: &PadicContext) -> Result<PadicNumber> {
    let lg = formal_log(e, pt, &sp.sqrt_disc, ctx)?;
    let factor = &ctx.one() - &ctx.ratio(1, sp.p as i64);
    Ok(&factor * &lg.value)
}
