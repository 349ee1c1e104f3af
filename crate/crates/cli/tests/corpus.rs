//! Corpus sessions against their pinned reports.
//!
//! Set `DELTAGROUP_BLESS=1` to rewrite the pinned files.

use std::fs;
use std::path::{Path, PathBuf};

use deltagroup::parse_operator;
use deltagroup_cli::{run_session, to_json, Interpreter, Options, Report, Session, Value};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn sessions() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "session"))
        .collect();
    v.sort();
    assert!(!v.is_empty());
    v
}

fn load(path: &Path) -> Session {
    Session::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

fn without_timing(mut reports: Vec<Report>) -> Vec<Report> {
    for r in &mut reports {
        r.timing_us = 0;
    }
    reports
}

fn pinned_json(path: &Path) -> String {
    let out = run_session(&load(path), &[], &Options::default()).unwrap();
    assert_eq!(
        out.exit_code,
        0,
        "{} failed: {:?}",
        path.display(),
        out.reports.last()
    );
    to_json(&without_timing(out.reports))
}

#[test]
fn corpus_matches_pinned_reports() {
    let bless = std::env::var_os("DELTAGROUP_BLESS").is_some();
    for path in sessions() {
        let json = pinned_json(&path);
        let pinned = path.with_extension("report.json");
        if bless {
            fs::write(&pinned, &json).unwrap();
            continue;
        }
        let expected =
            fs::read_to_string(&pinned).unwrap_or_else(|_| panic!("missing {}", pinned.display()));
        assert!(
            json == expected,
            "{} differs from {}",
            path.display(),
            pinned.display()
        );
    }
}

#[test]
fn runs_are_deterministic() {
    for path in sessions() {
        assert_eq!(pinned_json(&path), pinned_json(&path), "{}", path.display());
    }
}

#[test]
fn json_reports_round_trip() {
    for path in sessions() {
        let out = run_session(&load(&path), &[], &Options::default()).unwrap();
        let back: Vec<Report> = serde_json::from_str(&to_json(&out.reports)).unwrap();
        assert_eq!(back, out.reports);
    }
}

#[test]
fn corpus_operators_round_trip_through_text() {
    let mut seen = 0;
    for path in sessions() {
        let s = load(&path);
        let mut it =
            Interpreter::new(&s.field_text, s.order.as_deref(), &Options::default()).unwrap();
        for l in &s.defs {
            it.define(&l.text).unwrap();
        }
        for l in &s.run {
            it.run(&l.text).unwrap();
        }
        let ring = it.ring().clone();
        let ord = ring.default_order();
        for (name, v) in it.bindings() {
            if let Value::Operator(f) = v {
                let text = f.render(&ord);
                let back = parse_operator(&text, &ring).unwrap();
                assert_eq!(&back, f, "{name} in {}", path.display());
                seen += 1;
            }
        }
    }
    assert!(seen > 10);
}

#[test]
fn landau_session_values() {
    let out = run_session(
        &load(&corpus_dir().join("landau.session")),
        &[],
        &Options::default(),
    )
    .unwrap();
    let text = |cmd: &str| {
        out.reports
            .iter()
            .find(|r| r.command == cmd)
            .unwrap_or_else(|| panic!("no report for {cmd}"))
            .result
            .to_string()
    };
    assert!(text("gauge L").starts_with("gauge (1, 3)"));
    assert!(text("gauge L").contains("omega(s) = 3*s"));
    assert!(text("gauge I").starts_with("gauge (1, 2)"));
    assert!(text("gauge A").starts_with("gauge (1, 1)"));
    assert_eq!(text("member L1 I"), "true");
    assert_eq!(text("member L2 I"), "true");
    assert_eq!(text("principal I"), "not principal");
    assert!(text("dimpoly I").starts_with("omega(s) = 2*s + 2"));
    assert!(text("refine G H").ends_with(
        "\nCONSISTENT with a Jordan-Hölder correspondence: quotient gauges {(1, 1), (1, 1), (1, 1)}"
    ));
    assert!(text("compare G H").starts_with("INCONSISTENT"));
}
