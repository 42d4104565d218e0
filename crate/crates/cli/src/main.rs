use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use heegner_ez::catalog::{emit_report, load_catalog, run_ez, Catalog, ReportFormat, RunConfig, CATALOG_ENV};
use heegner_ez::heegner::{check_hypotheses, formal_log, pgz_value};
use heegner_ez::kubota_leopoldt::fg_crosscheck;
use heegner_ez::linvariants::{l_invariant_chi, l_invariant_fk, l_invariant_of_curve};
use heegner_ez::qseries::{an_from_curve, Exponent};
use heegner_ez::quadfield::{split_prime, ImagQuadField};
use heegner_ez::{Error, PadicContext, PadicNumber};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "heegner-ez", version, about = "Exceptional-zero computations for big Heegner points")]
struct Cli {
    /// Curve/point catalog (JSON); the bundled catalog is used when absent.
    #[arg(long, global = true, env = CATALOG_ENV)]
    catalog: Option<PathBuf>,
    /// p-adic precision M.
    #[arg(long, global = true, default_value_t = 20)]
    prec: i64,
    /// q-expansion truncation.
    #[arg(long, global = true, default_value_t = heegner_ez::qseries::DEFAULT_QPREC)]
    qprec: usize,
    /// T-truncation of Iwasawa-algebra elements.
    #[arg(long, global = true, default_value_t = 6)]
    tprec: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Identity,
    Up,
    V,
    Deplete,
    D,
}

#[derive(Subcommand)]
enum Cmd {
    /// q-expansion of a catalog curve, optionally transformed by one operator.
    Qexp {
        #[arg(long)]
        curve: String,
        #[arg(long, value_enum, default_value_t = Op::Identity)]
        op: Op,
        /// Integer exponent for `d`; applied to the p-depleted form.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        t: i64,
    },
    /// Reduced forms and class number of Q(√disc).
    ClassGroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Generator of 𝔭^h and ϖ_𝔭 for a split prime.
    SplitPrime {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Tate-period and character L-invariants.
    Linv {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Derivative of the Kubota–Leopoldt function against 𝓛_𝔭(χ_K).
    KlCrosscheck {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Formal-group logarithm of the catalogued point.
    HeegnerLog {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Exceptional-zero identities end to end.
    EzVerify {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        w: i64,
        #[arg(long, default_value_t = 1)]
        jet_order: usize,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn exit_for(err: &Error) -> ExitCode {
    match err {
        Error::Precondition(_) | Error::NonResidue(..) | Error::Catalog(_) | Error::Invalid(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn catalog(cli: &Cli) -> heegner_ez::Result<Catalog> {
    match &cli.catalog {
        Some(p) => load_catalog(p),
        None => Catalog::bundled(),
    }
}

/// Text form of a JSON value; serialised p-adic numbers are shown as digit
/// expansions.
fn render(x: &Value) -> String {
    if let Ok(n) = serde_json::from_value::<PadicNumber>(x.clone()) {
        return n.to_string();
    }
    match x {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Write to stdout; a closed pipe (`| head`) ends the process quietly.
fn out(s: &str) {
    if writeln!(std::io::stdout().lock(), "{s}").is_err() {
        std::process::exit(0);
    }
}

fn print_value(v: &Value, format: Format) {
    match format {
        Format::Json => out(&serde_json::to_string_pretty(v).expect("json")),
        Format::Text => match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| out(&format!("{k}: {}", render(x)))),
            other => out(&render(other)),
        },
    }
}

fn show_elt(x: &num_bigint::BigInt, y: &num_bigint::BigInt, disc: i64) -> String {
    let sign = if y.sign() == num_bigint::Sign::Minus { '-' } else { '+' };
    format!("({x} {sign} {}·√{disc})/2", y.magnitude())
}

fn run(cli: &Cli) -> heegner_ez::Result<Outcome> {
    let fmt = cli.report;
    match &cli.cmd {
        Cmd::Qexp { curve, op, t } => {
            let cat = catalog(cli)?;
            let e = cat.curve(curve)?;
            let f = an_from_curve(e, cli.qprec)?;
            let ap = BigRational::from_integer(e.a_l(e.p).into());
            let series = match op {
                Op::Identity => f,
                Op::Up => f.u_p(),
                Op::V => f.v(),
                Op::Deplete => f.deplete(&ap),
                Op::D => {
                    let ctx = PadicContext::new(e.p, cli.prec)?;
                    f.deplete(&ap).atkin_serre_power(&Exponent::Integer(*t), Some(&ctx))?
                }
            };
            out(&serde_json::to_string_pretty(&series.to_json()).expect("json"));
            Ok(Outcome::Pass)
        }
        Cmd::ClassGroup { disc } => {
            let k = ImagQuadField::new(*disc)?;
            print_value(&serde_json::to_value(&k).expect("json"), fmt);
            Ok(Outcome::Pass)
        }
        Cmd::SplitPrime { p, disc } => {
            let ctx = PadicContext::new(*p, cli.prec)?;
            let sp = split_prime(&ImagQuadField::new(*disc)?, &ctx)?;
            let v = json!({
                "p": sp.p, "disc": sp.disc, "h": sp.h,
                "pi": show_elt(&sp.pi.x, &sp.pi.y, sp.disc),
                "pi_bar": show_elt(&sp.pi_bar.x, &sp.pi_bar.y, sp.disc),
                "sqrt_disc": sp.sqrt_disc.to_string(),
                "varpi": sp.varpi.to_string(),
            });
            print_value(&v, fmt);
            Ok(Outcome::Pass)
        }
        Cmd::Linv { curve, p, disc } => {
            let cat = catalog(cli)?;
            let e = cat.curve(curve)?;
            let ctx = PadicContext::new(*p, cli.prec)?;
            let (tp, l_f) = l_invariant_of_curve(e, &ctx)?;
            let sp = split_prime(&ImagQuadField::new(*disc)?, &ctx)?;
            let (l_chi, _) = l_invariant_chi(&sp)?;
            let rep = l_invariant_fk(&l_f, &l_chi)?;
            let v = json!({
                "curve": e.label, "p": p, "disc": disc,
                "q_E": tp.q.to_string(), "ord_q_E": tp.ord, "delta": tp.delta,
                "L_p(f)": rep.l_f.to_string(), "L_P(chi_K)": rep.l_chi.to_string(),
                "L_P(f,K)": rep.l_fk.to_string(), "notes": rep.notes,
            });
            print_value(&v, fmt);
            Ok(Outcome::Pass)
        }
        Cmd::KlCrosscheck { p, disc } => {
            let ctx = PadicContext::new(*p, cli.prec)?;
            let sp = split_prime(&ImagQuadField::new(*disc)?, &ctx)?;
            let (l_chi, _) = l_invariant_chi(&sp)?;
            let rep = fg_crosscheck(&ImagQuadField::new(*disc)?, &l_chi, &ctx)?;
            print_value(&serde_json::to_value(&rep).expect("json"), fmt);
            Ok(if rep.pass { Outcome::Pass } else { Outcome::Fail })
        }
        Cmd::HeegnerLog { curve, p, disc } => {
            let cat = catalog(cli)?;
            let e = cat.curve(curve)?;
            let hyp = check_hypotheses(e, *disc, *p);
            if !hyp.all_pass() {
                eprintln!("{}", emit_report(&hyp, ReportFormat::Text));
                return Err(Error::Precondition("hypotheses fail".into()));
            }
            let ctx = PadicContext::new(*p, cli.prec)?;
            let sp = split_prime(&ImagQuadField::new(*disc)?, &ctx)?;
            let mut rows = Vec::new();
            for pt in cat.points_for(curve, *disc) {
                let kp = pt.validate(e)?;
                let lg = formal_log(e, &kp, &sp.sqrt_disc, &ctx)?;
                rows.push(json!({
                    "x": pt.x, "y": pt.y, "provenance": pt.provenance,
                    "m": lg.m, "torsion": lg.torsion,
                    "log": lg.value.to_string(),
                    "(1-1/p)log": pgz_value(e, &kp, &sp, &ctx)?.to_string(),
                }));
            }
            if rows.is_empty() {
                return Err(Error::Catalog(format!("no point on {curve} over Q(√{disc})")));
            }
            print_value(&json!({ "curve": curve, "p": p, "disc": disc, "points": rows }), fmt);
            Ok(Outcome::Pass)
        }
        Cmd::EzVerify { curve, p, disc, w, jet_order } => {
            let cat = catalog(cli)?;
            let mut cfg = RunConfig::new(curve, *disc, *p, cli.prec);
            cfg.w = *w;
            cfg.jet_order = *jet_order;
            cfg.qprec = cli.qprec;
            cfg.tprec = cli.tprec;
            cfg.format = match fmt {
                Format::Json => ReportFormat::Json,
                Format::Text => ReportFormat::Text,
            };
            let rep = run_ez(&cat, &cfg)?;
            out(&emit_report(&rep, cfg.format));
            Ok(if rep.all_pass { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
