use heegner_ez::catalog::{emit_report, load_catalog, run_ez, Catalog, ReportFormat, RunConfig};
use heegner_ez::heegner::check_hypotheses;
use heegner_ez::iwasawa_ez::{EZReport, DEGENERATE_MARKER};
use heegner_ez::Error;

fn cfg() -> RunConfig {
    RunConfig::new("15a1", -11, 5, 12)
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let cat = Catalog::bundled().unwrap();
    let a = run_ez(&cat, &cfg()).unwrap();
    let b = run_ez(&cat, &cfg()).unwrap();
    assert_eq!(a, b);
    let json = emit_report(&a, ReportFormat::Json);
    assert_eq!(json, emit_report(&b, ReportFormat::Json));
    let back: EZReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    assert_eq!(emit_report(&a, ReportFormat::Text), emit_report(&back, ReportFormat::Text));
}

#[test]
fn text_report_has_one_line_per_identity() {
    let cat = Catalog::bundled().unwrap();
    let r = run_ez(&cat, &cfg()).unwrap();
    let text = emit_report(&r, ReportFormat::Text);
    let verdicts: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).collect();
    assert_eq!(verdicts.len(), r.identities.len());
    for (line, id) in verdicts.iter().zip(&r.identities) {
        assert!(line.contains(&id.anchor), "{line}");
    }
    assert_eq!(text.lines().last(), Some("overall: PASS"));
    assert!(text.contains("kernel multiple m="));
    assert!(!text.contains(DEGENERATE_MARKER));
}

#[test]
fn degenerate_sign_is_marked() {
    let cat = Catalog::bundled().unwrap();
    let mut c = cfg();
    c.w = 1;
    let r = run_ez(&cat, &c).unwrap();
    assert!(r.degenerate && r.all_pass);
    let text = emit_report(&r, ReportFormat::Text);
    assert!(text.contains(DEGENERATE_MARKER));
    let json: serde_json::Value = serde_json::from_str(&emit_report(&r, ReportFormat::Json)).unwrap();
    assert_eq!(json["degenerate"], true);
}

#[test]
fn configuration_errors_are_preconditions() {
    let cat = Catalog::bundled().unwrap();
    let mut bad = vec![];
    let mut c = cfg();
    c.prec = 8;
    bad.push(c);
    let mut c = cfg();
    c.tprec = 2;
    bad.push(c);
    bad.push(RunConfig::new("15a1", -7, 5, 12)); // 5 inert
    bad.push(RunConfig::new("15a1", -11, 7, 12)); // wrong prime
    bad.push(RunConfig::new("37a1", -7, 37, 12)); // a_37 ≠ 1
    for c in bad {
        assert!(matches!(run_ez(&cat, &c), Err(Error::Precondition(_))), "{} {} {}", c.label, c.disc, c.p);
    }
    assert!(matches!(run_ez(&cat, &RunConfig::new("99z9", -11, 5, 12)), Err(Error::Catalog(_))));
    let hyp = check_hypotheses(cat.curve("37a1").unwrap(), -7, 37);
    assert!(emit_report(&hyp, ReportFormat::Text).lines().any(|l| l.starts_with("Fail ")));
}

#[test]
fn catalog_file_round_trip_and_rejects() {
    let cat = Catalog::bundled().unwrap();
    let dir = std::env::temp_dir().join(format!("heegner-ez-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cat.json");
    std::fs::write(&path, cat.to_json().unwrap()).unwrap();
    let back = load_catalog(&path).unwrap();
    assert_eq!(back.curves, cat.curves);
    assert_eq!(back.points, cat.points);
    assert_eq!(back.triples(), cat.triples());
    // a wrong a-invariant puts every point of that curve off the curve
    let broken = cat.to_json().unwrap().replacen("-10,\n        -10", "-10,\n        -11", 1);
    let b = Catalog::from_json_str(&broken, "broken").unwrap();
    assert!(b.rejects.iter().all(|r| r.label == "15a1") && !b.rejects.is_empty());
    // unknown fields are a schema violation
    let extra = r#"[{"label":"x","a_invariants":[0,0,1,-1,0],"conductor":37,"p":37,"rank":1}]"#;
    assert!(matches!(Catalog::from_json_str(extra, "extra"), Err(Error::Catalog(_))));
    assert!(load_catalog(&dir.join("missing.json")).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
