//! Curve and point catalogs, run configuration, and report serialisation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::EllipticCurveData;
use crate::error::{Error, Result};
use crate::heegner::{check_hypotheses, formal_log, HeegnerPointData, HypothesisReport};
use crate::iwasawa_ez::{ez_verify, EZInput, EZReport, IdentityCheck};
use crate::linvariants::{l_invariant_chi, l_invariant_of_curve};
use crate::padic::PadicContext;
use crate::quadfield::{split_prime, ImagQuadField};

/// Environment variable naming the default catalog path.
pub const CATALOG_ENV: &str = "HEEGNER_EZ_CATALOG";

const BUNDLED: &str = include_str!("../data/catalog.json");

/// One curve record in the on-disk schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub label: String,
    pub a_invariants: [i64; 5],
    pub conductor: u64,
    pub p: u64,
    #[serde(default)]
    pub heegner_points: Vec<HeegnerPointData>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum CatalogFile {
    Wrapped { curves: Vec<CurveRecord> },
    Bare(Vec<CurveRecord>),
}

/// A point record dropped at load time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub label: String,
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub source: String,
    pub curves: BTreeMap<String, EllipticCurveData>,
    pub points: BTreeMap<String, Vec<HeegnerPointData>>,
    pub provenance: BTreeMap<String, String>,
    pub rejects: Vec<Reject>,
}

impl Catalog {
    pub fn bundled() -> Result<Self> {
        Self::from_json_str(BUNDLED, "bundled")
    }

    pub fn from_json_str(s: &str, source: &str) -> Result<Self> {
        let file: CatalogFile =
            serde_json::from_str(s).map_err(|e| Error::Catalog(format!("{source}: schema violation: {e}")))?;
        let records = match file {
            CatalogFile::Wrapped { curves } | CatalogFile::Bare(curves) => curves,
        };
        let mut cat = Catalog {
            source: source.to_string(),
            curves: BTreeMap::new(),
            points: BTreeMap::new(),
            provenance: BTreeMap::new(),
            rejects: Vec::new(),
        };
        for rec in records {
            if cat.curves.contains_key(&rec.label) {
                return Err(Error::Catalog(format!("{source}: duplicate label {}", rec.label)));
            }
            let e = EllipticCurveData::new(&rec.label, rec.a_invariants, rec.conductor, rec.p)
                .map_err(|err| Error::Catalog(format!("{source}: {}: {err}", rec.label)))?;
            let mut kept = Vec::new();
            for (index, pt) in rec.heegner_points.into_iter().enumerate() {
                match pt.validate(&e) {
                    Ok(_) => kept.push(pt),
                    Err(err) => cat.rejects.push(Reject { label: rec.label.clone(), index, reason: err.to_string() }),
                }
            }
            cat.points.insert(rec.label.clone(), kept);
            cat.provenance.insert(rec.label.clone(), rec.provenance);
            cat.curves.insert(rec.label, e);
        }
        Ok(cat)
    }

    pub fn curve(&self, label: &str) -> Result<&EllipticCurveData> {
        self.curves.get(label).ok_or_else(|| Error::Catalog(format!("no curve {label} in {}", self.source)))
    }

    /// Points on `label` defined over `Q(√disc)`.
    pub fn points_for(&self, label: &str, disc: i64) -> Vec<&HeegnerPointData> {
        self.points.get(label).map(|v| v.iter().filter(|p| p.disc == disc).collect()).unwrap_or_default()
    }

    /// Every `(label, p, disc)` for which at least one point is catalogued.
    pub fn triples(&self) -> Vec<(String, u64, i64)> {
        let mut out = Vec::new();
        for (label, pts) in &self.points {
            let p = self.curves[label].p;
            let mut discs: Vec<i64> = pts.iter().map(|x| x.disc).collect();
            discs.sort_unstable();
            discs.dedup();
            out.extend(discs.into_iter().map(|d| (label.clone(), p, d)));
        }
        out
    }

    /// Serialise back to the on-disk schema.
    pub fn to_json(&self) -> Result<String> {
        let curves = self
            .curves
            .values()
            .map(|e| CurveRecord {
                label: e.label.clone(),
                a_invariants: e.a_invariants,
                conductor: e.conductor,
                p: e.p,
                heegner_points: self.points.get(&e.label).cloned().unwrap_or_default(),
                provenance: self.provenance.get(&e.label).cloned().unwrap_or_default(),
            })
            .collect();
        serde_json::to_string_pretty(&CatalogFile::Wrapped { curves }).map_err(|e| Error::Catalog(e.to_string()))
    }
}

pub fn load_catalog(path: &Path) -> Result<Catalog> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
    Catalog::from_json_str(&s, &path.display().to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub prec: i64,
    pub qprec: usize,
    pub tprec: usize,
    pub disc: i64,
    pub label: String,
    pub w: i64,
    pub jet_order: usize,
    pub format: ReportFormat,
}

impl RunConfig {
    pub fn new(label: &str, disc: i64, p: u64, prec: i64) -> Self {
        RunConfig {
            p,
            prec,
            qprec: crate::qseries::DEFAULT_QPREC,
            tprec: 6,
            disc,
            label: label.into(),
            w: -1,
            jet_order: 1,
            format: ReportFormat::Text,
        }
    }

    /// Range checks plus every computable hypothesis on the triple.
    pub fn validate(&self, cat: &Catalog) -> Result<(EllipticCurveData, HypothesisReport)> {
        if self.p < 5 {
            return Err(Error::Precondition(format!("p = {} < 5", self.p)));
        }
        if self.prec < 10 {
            return Err(Error::Precondition(format!("M = {} < 10", self.prec)));
        }
        if self.tprec < self.jet_order + 2 {
            return Err(Error::Precondition(format!("T-truncation {} too small for jet order {}", self.tprec, self.jet_order)));
        }
        let e = cat.curve(&self.label)?.clone();
        if e.p != self.p {
            return Err(Error::Precondition(format!("{} is catalogued at p = {}, not {}", e.label, e.p, self.p)));
        }
        let rep = check_hypotheses(&e, self.disc, self.p);
        if !rep.all_pass() {
            let names: Vec<_> = rep.failures().iter().map(|c| c.name.clone()).collect();
            return Err(Error::Precondition(format!("hypotheses fail: {}", names.join(", "))));
        }
        Ok((e, rep))
    }
}

/// Full pipeline: L-invariants, split-prime data and the Heegner logarithm
/// feed the exceptional-zero harness.
pub fn run_ez(cat: &Catalog, cfg: &RunConfig) -> Result<EZReport> {
    let (e, _) = cfg.validate(cat)?;
    let ctx = PadicContext::new(cfg.p, cfg.prec)?;
    let k = ImagQuadField::new(cfg.disc)?;
    let sp = split_prime(&k, &ctx)?;
    let (_, l_f) = l_invariant_of_curve(&e, &ctx)?;
    let (l_chi, _) = l_invariant_chi(&sp)?;
    let pt = cat
        .points_for(&cfg.label, cfg.disc)
        .first()
        .copied()
        .ok_or_else(|| Error::Catalog(format!("no point on {} over Q(√{})", cfg.label, cfg.disc)))?
        .clone();
    let kp = pt.validate(&e)?;
    let lg = formal_log(&e, &kp, &sp.sqrt_disc, &ctx)?;
    let log_varpi = sp.varpi.iwasawa_log()?;
    let mut inp = EZInput::new(&ctx, l_f, l_chi, cfg.w, lg.value, sp.h, log_varpi, cfg.jet_order)?;
    inp.t_prec = cfg.tprec;
    let mut rep = ez_verify(&inp)?;
    rep.meta.insert("curve".into(), e.label.clone());
    rep.meta.insert("disc".into(), cfg.disc.to_string());
    rep.meta.insert("class number".into(), sp.h.to_string());
    rep.meta.insert("kernel multiple m".into(), lg.m.to_string());
    rep.meta.insert("point provenance".into(), pt.provenance);
    Ok(rep)
}

/// Reports that can be rendered as one line per verified identity.
pub trait TextReport {
    fn text_lines(&self) -> Vec<String>;
}

fn identity_line(c: &IdentityCheck) -> String {
    format!(
        "{} {:<24} {} | {} = {} | agree {} of {} digits",
        if c.pass { "PASS" } else { "FAIL" },
        c.anchor,
        c.statement,
        c.lhs,
        c.rhs,
        c.digits,
        c.precision
    )
}

impl TextReport for EZReport {
    fn text_lines(&self) -> Vec<String> {
        let mut out = vec![format!("# {}", self.framing)];
        let meta: Vec<String> = self.meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push(format!("# p={} M={} w={} jet-order={} {}", self.p, self.prec, self.w, self.jet_order, meta.join(" ")));
        if self.degenerate {
            out.push(format!("# {}", crate::iwasawa_ez::DEGENERATE_MARKER));
        }
        out.extend(self.values.iter().map(|(k, v)| format!("  {k} = {v}")));
        out.extend(self.identities.iter().map(identity_line));
        out.push(format!("overall: {}", if self.all_pass { "PASS" } else { "FAIL" }));
        out
    }
}

impl TextReport for HypothesisReport {
    fn text_lines(&self) -> Vec<String> {
        let mut out = vec![format!("# hypotheses for {} with disc {} at p = {}", self.curve, self.disc, self.p)];
        out.extend(self.checks.iter().map(|c| format!("{:?} {} {}", c.status, c.name, c.detail)));
        out
    }
}

/// Deterministic JSON or text rendering.
pub fn emit_report<R: Serialize + TextReport>(r: &R, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(r).expect("reports serialise"),
        ReportFormat::Text => r.text_lines().join("\n"),
    }
}
