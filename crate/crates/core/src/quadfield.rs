//! Imaginary quadratic fields: class groups via reduced forms, split primes,
//! the Heegner hypothesis and the anticyclotomic character jets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::curve::kronecker;
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::series::TwoVarSeries;

/// Primitive positive-definite binary quadratic form `a x² + b xy + c y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl IdealClass {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn reduce(self) -> Self {
        let disc = self.discriminant();
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b.abs() > a || b == -a {
                // b ↦ b mod 2a into (−a, a]
                let two_a = 2 * a;
                let mut nb = b.rem_euclid(two_a);
                if nb > a {
                    nb -= two_a;
                }
                b = nb;
                c = (b * b - disc as i128) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if b.abs() <= a && b != -a {
                break;
            }
        }
        if b < 0 && a == c {
            b = -b;
        }
        IdealClass { a: a as i64, b: b as i64, c: c as i64 }
    }

    /// The principal form of discriminant `disc`.
    pub fn identity(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        IdealClass { a: 1, b, c: (b * b - disc) / 4 }
    }

    pub fn inverse(&self) -> Self {
        IdealClass { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Gauss composition followed by reduction.
    pub fn compose(&self, o: &Self) -> Self {
        let disc = self.discriminant() as i128;
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (o.a as i128, o.b as i128);
        let s = (b1 + b2) / 2;
        let (g1, u1, v1) = egcd(a1, a2);
        let (g, u2, w) = egcd(g1, s);
        let (u, v) = (u2 * u1, u2 * v1);
        let big_a = a1 * a2 / (g * g);
        let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) / 2;
        let big_b = (num / g).rem_euclid(2 * big_a);
        let big_c = (big_b * big_b - disc) / (4 * big_a);
        IdealClass { a: big_a as i64, b: big_b as i64, c: big_c as i64 }.reduce()
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.discriminant());
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    /// The ideal `a Z + ((−b + √disc)/2) Z` attached to the form.
    pub fn ideal(&self) -> Lattice {
        Lattice::hnf(
            self.discriminant(),
            &[OkElt::new(2 * self.a, 0), OkElt::new(-self.b, 1)],
        )
    }
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = egcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// `(x + y√disc)/2` with `x ≡ y·disc (mod 2)`: an element of `O_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OkElt {
    pub x: BigInt,
    pub y: BigInt,
}

impl OkElt {
    pub fn new(x: i64, y: i64) -> Self {
        OkElt { x: x.into(), y: y.into() }
    }

    pub fn mul(&self, o: &Self, disc: i64) -> Self {
        let d = BigInt::from(disc);
        OkElt {
            x: (&self.x * &o.x + d * &self.y * &o.y) / 2,
            y: (&self.x * &o.y + &self.y * &o.x) / 2,
        }
    }

    pub fn conj(&self) -> Self {
        OkElt { x: self.x.clone(), y: -&self.y }
    }

    pub fn norm(&self, disc: i64) -> BigInt {
        (&self.x * &self.x - BigInt::from(disc) * &self.y * &self.y) / 4
    }

    /// Image in `Q_p` under `√disc ↦ root`.
    pub fn embed(&self, root: &PadicNumber, ctx: &PadicContext) -> PadicNumber {
        let two = ctx.int(2);
        (&ctx.bigint(&self.x) + &(&ctx.bigint(&self.y) * root)).try_div(&two).expect("p is odd")
    }
}

/// A full-rank sublattice of `O_K`, in Hermite normal form on the `(x, y)`
/// coordinates of `OkElt`: basis `(A, 0), (B, C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub disc: i64,
    pub basis: [OkElt; 2],
}

impl Lattice {
    pub fn hnf(disc: i64, gens: &[OkElt]) -> Self {
        let mut vs: Vec<(BigInt, BigInt)> = gens.iter().map(|g| (g.x.clone(), g.y.clone())).collect();
        // Euclid on the y-coordinates
        loop {
            vs.retain(|(x, y)| !(x.is_zero() && y.is_zero()));
            let nz: Vec<usize> = (0..vs.len()).filter(|&i| !vs[i].1.is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| vs[i].1.abs()).unwrap();
            let (px, py) = vs[piv].clone();
            for &i in &nz {
                if i != piv {
                    let q = vs[i].1.div_floor(&py);
                    vs[i].0 -= &q * &px;
                    vs[i].1 -= &q * &py;
                }
            }
        }
        let row = vs.iter().position(|v| !v.1.is_zero()).expect("full rank");
        let (mut bx, mut cy) = vs[row].clone();
        let mut ax = BigInt::zero();
        for (i, v) in vs.iter().enumerate() {
            if i != row {
                ax = ax.gcd(&v.0);
            }
        }
        if cy.is_negative() {
            bx = -bx;
            cy = -cy;
        }
        bx = bx.mod_floor(&ax);
        Lattice { disc, basis: [OkElt { x: ax, y: BigInt::zero() }, OkElt { x: bx, y: cy }] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut gens = Vec::new();
        for u in &self.basis {
            for v in &o.basis {
                gens.push(u.mul(v, self.disc));
            }
        }
        Lattice::hnf(self.disc, &gens)
    }

    /// The reduced form of the ideal class, after removing the rational content.
    pub fn class(&self) -> IdealClass {
        let c = &self.basis[1].y;
        let a2 = (&self.basis[0].x / c).to_i64().expect("small ideal");
        let b = -(&self.basis[1].x / c).to_i64().expect("small ideal");
        let a = a2 / 2;
        IdealClass { a, b, c: (b * b - self.disc) / (4 * a) }.reduce()
    }

    /// Norm of the ideal: index in `O_K`.
    pub fn norm(&self) -> BigInt {
        // O_K has basis (2, 0), (disc mod 2, 1): covolume 2
        &self.basis[0].x * &self.basis[1].y / 2
    }

    /// A shortest nonzero element for the norm form (Lagrange–Gauss reduction).
    pub fn shortest(&self) -> OkElt {
        let n = |e: &OkElt| e.norm(self.disc);
        let dot = |u: &OkElt, v: &OkElt| {
            // polar form of the norm: (N(u+v) − N(u) − N(v))
            (&u.x * &v.x - BigInt::from(self.disc) * &u.y * &v.y) / 2
        };
        let mut u = self.basis[0].clone();
        let mut v = self.basis[1].clone();
        if n(&u) > n(&v) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            // v ← v − round(<u,v>/<u,u>)·u, where <u,u> = 2N(u)
            let num = dot(&u, &v);
            let den = 2 * n(&u);
            let q = round_div(&num, &den);
            v = OkElt { x: &v.x - &q * &u.x, y: &v.y - &q * &u.y };
            if n(&v) >= n(&u) {
                return u;
            }
            std::mem::swap(&mut u, &mut v);
        }
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a/b with b > 0
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

pub fn is_squarefree(n: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Fundamental negative discriminant test for `disc = −D`.
pub fn is_fundamental(disc: i64) -> bool {
    if disc >= 0 {
        return false;
    }
    let d = (-disc) as u64;
    match disc.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            // disc/4 ≡ 2, 3 mod 4, i.e. m ≡ 2 or 1 mod 4 for −m
            let r = (-(m as i64)).rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// All reduced forms of discriminant `disc < 0`, sorted.
pub fn reduced_forms(disc: i64) -> Vec<IdealClass> {
    let d = -disc;
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = IdealClass { a, b, c };
            if c >= a && f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

/// `K = Q(√disc)` with its class group.
#[derive(Clone, Debug, Serialize)]
pub struct ImagQuadField {
    pub disc: i64,
    pub class_number: u64,
    pub forms: Vec<IdealClass>,
}

impl ImagQuadField {
    pub fn new(disc: i64) -> Result<Self> {
        if !is_fundamental(disc) {
            return Err(Error::Invalid(format!("{disc} is not a fundamental negative discriminant")));
        }
        let forms = reduced_forms(disc);
        Ok(ImagQuadField { disc, class_number: forms.len() as u64, forms })
    }

    pub fn d(&self) -> u64 {
        (-self.disc) as u64
    }

    /// `(disc | ℓ)`: `1` split, `−1` inert, `0` ramified.
    pub fn splitting(&self, l: u64) -> i64 {
        kronecker(self.disc, l)
    }

    pub fn identity(&self) -> IdealClass {
        IdealClass::identity(self.disc)
    }

    /// The form `(ℓ, b, c)` of a prime above a split or ramified `ℓ`.
    pub fn prime_form(&self, l: u64) -> Option<IdealClass> {
        let l = l as i64;
        let b = (0..2 * l).find(|b| (b * b - self.disc).rem_euclid(4 * l) == 0)?;
        let b = if b > l { b - 2 * l } else { b };
        Some(IdealClass { a: l, b, c: (b * b - self.disc) / (4 * l) })
    }

    /// Heegner hypothesis for a squarefree level: every `ℓ | N` splits.
    pub fn heegner_hypothesis(&self, n: u64) -> HeegnerWitness {
        let mut primes = Vec::new();
        let mut m = n;
        let mut l = 2;
        while m > 1 {
            if m.is_multiple_of(l) {
                primes.push(l);
                while m.is_multiple_of(l) {
                    m /= l;
                }
            }
            l += 1;
        }
        let mut witness = Vec::new();
        let mut holds = true;
        for l in primes {
            if self.splitting(l) == 1 {
                witness.push((l, self.prime_form(l).expect("split prime has a form")));
            } else {
                holds = false;
            }
        }
        HeegnerWitness { holds, squarefree: is_squarefree(n), witness }
    }

    /// Generator `α` of `𝔞^h` for the ideal of the given form.
    pub fn generator_of_power(&self, f: &IdealClass) -> OkElt {
        self.generator_of_ideal_power(&f.ideal())
    }

    /// Generator of `𝔞^h` for an arbitrary ideal `𝔞`.
    pub fn generator_of_ideal_power(&self, base: &Lattice) -> OkElt {
        let mut acc = base.clone();
        for _ in 1..self.class_number {
            acc = acc.mul(base);
        }
        acc.shortest()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeegnerWitness {
    pub holds: bool,
    pub squarefree: bool,
    /// A prime of `K` above each `ℓ | N`, as a form `(ℓ, b, c)`.
    pub witness: Vec<(u64, IdealClass)>,
}

/// A prime `p = 𝔭𝔭̄` split in `K`, with `𝔭^h = (π_𝔭)` and `ϖ_𝔭 = π_𝔭/π̄_𝔭`.
#[derive(Clone, Debug, Serialize)]
pub struct SplitPrimeData {
    pub p: u64,
    pub disc: i64,
    pub h: u64,
    /// `π_𝔭 = (x + y√disc)/2`, `y > 0`.
    pub pi: OkElt,
    pub pi_bar: OkElt,
    /// Canonical Hensel root of `disc` defining the `𝔭`-embedding.
    pub sqrt_disc: PadicNumber,
    pub pi_image: PadicNumber,
    pub pi_bar_image: PadicNumber,
    pub varpi: PadicNumber,
}

/// Locate `𝔭`, solve `x² + D y² = 4p^h` with `p ∤ x` and form `ϖ_𝔭`.
pub fn split_prime(k: &ImagQuadField, ctx: &PadicContext) -> Result<SplitPrimeData> {
    let p = ctx.p();
    if k.splitting(p) != 1 {
        return Err(Error::Precondition(format!("p = {p} does not split in Q(√{})", k.disc)));
    }
    let h = k.class_number;
    if h.is_multiple_of(p) {
        return Err(Error::Precondition(format!("p = {p} divides the class number {h}")));
    }
    let d = BigInt::from(k.d());
    let target = 4 * BigInt::from(p).pow(h as u32);
    let pb = BigInt::from(p);
    // canonical search order: minimal |x|, then y > 0
    let mut sols: Vec<(BigInt, BigInt)> = Vec::new();
    let mut y = BigInt::one();
    while &d * &y * &y <= target {
        let rest = &target - &d * &y * &y;
        let x = rest.sqrt();
        if &x * &x == rest && !x.is_multiple_of(&pb) {
            sols.push((x.clone(), y.clone()));
        }
        y += 1;
    }
    sols.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let (x0, y0) = sols.first().cloned().ok_or_else(|| Error::Domain("norm equation has no solution".into()))?;
    let root = ctx.int(k.disc).hensel_sqrt()?;
    split_prime_with_root(k, ctx, root, x0, y0)
}

/// The flipped embedding `√disc ↦ −root`: `𝔭` and `𝔭̄` trade places, so the
/// algebraic generator becomes the conjugate while the image of `ϖ` is unchanged.
pub fn split_prime_other_embedding(k: &ImagQuadField, ctx: &PadicContext) -> Result<SplitPrimeData> {
    let sp = split_prime(k, ctx)?;
    let x0 = sp.pi.x.abs();
    split_prime_with_root(k, ctx, -&sp.sqrt_disc, x0, sp.pi.y.clone())
}

fn split_prime_with_root(
    k: &ImagQuadField,
    ctx: &PadicContext,
    root: PadicNumber,
    x0: BigInt,
    y0: BigInt,
) -> Result<SplitPrimeData> {
    let (p, h) = (ctx.p(), k.class_number);
    // candidates (±x0 + y0√disc)/2; exactly one has the 𝔭-image of valuation h
    for sx in [x0.clone(), -x0.clone()] {
        let pi = OkElt { x: sx, y: y0.clone() };
        let img = pi.embed(&root, ctx);
        if img.valuation() == h as i64 {
            let pi_bar = pi.conj();
            let bar_img = pi_bar.embed(&root, ctx);
            let varpi = img.try_div(&bar_img)?;
            return Ok(SplitPrimeData {
                p,
                disc: k.disc,
                h,
                pi,
                pi_bar,
                sqrt_disc: root,
                pi_image: img,
                pi_bar_image: bar_img,
                varpi,
            });
        }
    }
    Err(Error::Domain("no generator of 𝔭^h has the expected valuation".into()))
}

impl SplitPrimeData {
    /// The data of `𝔭̄` under the same embedding: `π` and `π̄` trade roles,
    /// so `ϖ` is inverted.
    pub fn conjugate(&self) -> Result<Self> {
        Ok(SplitPrimeData {
            pi: self.pi_bar.clone(),
            pi_bar: self.pi.clone(),
            pi_image: self.pi_bar_image.clone(),
            pi_bar_image: self.pi_image.clone(),
            varpi: self.pi_bar_image.try_div(&self.pi_image)?,
            ..self.clone()
        })
    }
}

/// Evaluation of the anticyclotomic characters as jets in `(κ, τ)`.
#[derive(Clone, Debug)]
pub struct CharacterJet {
    pub ctx: PadicContext,
    pub h: u64,
    pub root: PadicNumber,
    /// `log_p(ϖ_𝔭)`.
    pub log_varpi: PadicNumber,
    /// `log_p(ϖ_𝔭)/h`.
    pub log_varpi_h: PadicNumber,
}

impl CharacterJet {
    pub fn new(sp: &SplitPrimeData, ctx: &PadicContext) -> Result<Self> {
        let log_varpi = sp.varpi.iwasawa_log()?;
        let log_varpi_h = log_varpi.try_div(&ctx.int(sp.h as i64))?;
        Ok(CharacterJet { ctx: ctx.clone(), h: sp.h, root: sp.sqrt_disc.clone(), log_varpi, log_varpi_h })
    }

    /// The weight/twist character on `Fr_𝔭`:
    /// `exp((−κ/2 − τ)·log_p(ϖ_𝔭)/h)`, which is `(p/ϖ_𝔭)^{κ/2}·ϖ_𝔭^{−τ}`
    /// when `h = 1`. Both exponents carry the `1/h` normalisation so that
    /// `τ ↦ κ − τ` stays a symmetry for every class number.
    pub fn frobenius(&self, order: usize) -> Result<TwoVarSeries> {
        let c = &self.ctx;
        let half = c.ratio(1, 2);
        let a = -&(&half * &self.log_varpi_h);
        let b = -&self.log_varpi_h;
        TwoVarSeries::linear(c, order, c.zero(), a, b).exp()
    }

    /// `φ_o` on the ideal attached to a reduced form.
    pub fn phi_o(&self, k: &ImagQuadField, class: &IdealClass) -> Result<PadicNumber> {
        self.phi_o_ideal(k, &class.ideal())
    }

    /// `φ_o(𝔞) = α/ᾱ` for `(α) = 𝔞^h`, under the `𝔭`-embedding.
    pub fn phi_o_ideal(&self, k: &ImagQuadField, a: &Lattice) -> Result<PadicNumber> {
        // α is only defined up to a root of unity, which survives α/ᾱ
        if k.disc >= -4 {
            return Err(Error::Domain(format!("φ_o is not well defined for disc {}: extra units", k.disc)));
        }
        let alpha = k.generator_of_ideal_power(a);
        let num = alpha.embed(&self.root, &self.ctx);
        let den = alpha.conj().embed(&self.root, &self.ctx);
        num.try_div(&den)
    }

    /// `⟨φ_o⟩^τ([𝔞]) = exp(τ·log_p φ_o([𝔞]))`.
    pub fn phi_o_tau(&self, k: &ImagQuadField, class: &IdealClass, order: usize) -> Result<TwoVarSeries> {
        let c = &self.ctx;
        let lg = self.phi_o(k, class)?.iwasawa_log()?;
        TwoVarSeries::linear(c, order, c.zero(), c.zero(), lg).exp()
    }
}
