//! Recorded JSON reports: byte-for-byte replay and schema validation.
//!
//! Set `HOCHKIT_BLESS=1` to rewrite the recorded files after an intended change.

use std::path::{Path, PathBuf};

use clap::Parser;
use hochkit::cli::{self, Cli};
use hochkit::report::{Report, REPORT_SCHEMA};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn manifest() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(fixtures().join("reports/MANIFEST")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, cmd) = l.split_once('|').unwrap();
            let mut args = vec!["hochkit".to_string()];
            for a in cmd.split_whitespace() {
                args.push(if a.ends_with(".json") { fixtures().join(a).to_string_lossy().into_owned() } else { a.to_string() });
            }
            (name.trim().to_string(), args)
        })
        .collect()
}

fn run(args: &[String]) -> Report {
    let c = Cli::try_parse_from(args).unwrap();
    cli::run(&c.command, c.cap)
}

fn validator() -> jsonschema::Validator {
    let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn recorded_reports_replay_exactly() {
    let bless = std::env::var_os("HOCHKIT_BLESS").is_some();
    let mut stale = Vec::new();
    for (name, args) in manifest() {
        let json = run(&args).to_json();
        let path = fixtures().join("reports").join(&name);
        if bless {
            std::fs::write(&path, &json).unwrap();
            continue;
        }
        let recorded = std::fs::read_to_string(&path).unwrap_or_default();
        if recorded != json {
            stale.push(name);
        }
    }
    assert!(stale.is_empty(), "reports differ from the recorded ones: {stale:?}");
}

#[test]
fn every_fixture_has_a_recorded_report() {
    let used: Vec<String> = manifest().iter().flat_map(|(_, a)| a.iter().filter(|s| s.ends_with(".json")).cloned()).collect();
    for dir in ["algebra", "deform", "diagram", "ainf", "cech"] {
        for e in std::fs::read_dir(fixtures().join(dir)).unwrap() {
            let p = e.unwrap().path().to_string_lossy().into_owned();
            assert!(used.contains(&p), "{p} has no recorded report");
        }
    }
}

#[test]
fn reports_match_schema() {
    let v = validator();
    for (name, args) in manifest() {
        let value = serde_json::to_value(run(&args)).unwrap();
        let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
    }
}

#[test]
fn error_reports_match_schema() {
    let v = validator();
    let dir = std::env::temp_dir().join(format!("hochkit-err-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"base\": \"Q\",\n \"basis\": 3}").unwrap();
    let missing = dir.join("missing.json");
    let tiny = fixtures().join("ainf/qext-tensor.json");
    let cases: Vec<(Vec<String>, i32, &str)> = vec![
        (vec!["hh".into(), bad.to_string_lossy().into()], 2, "parse"),
        (vec!["hh".into(), missing.to_string_lossy().into()], 2, "io"),
        (vec!["--cap".into(), "10".into(), "npotent".into(), "--n".into(), "2".into(), tiny.to_string_lossy().into()], 3, "cap"),
        (vec!["cech-hh".into(), "--window".into(), "1".into(), fixtures().join("cech/p1.json").to_string_lossy().into()], 3, "unstable"),
    ];
    for (args, code, kind) in cases {
        let mut full = vec!["hochkit".to_string()];
        full.extend(args);
        let r = run(&full);
        assert_eq!(r.exit_code(), code, "{full:?}");
        assert_eq!(r.error.as_ref().unwrap().kind, kind);
        let value = serde_json::to_value(&r).unwrap();
        assert!(v.is_valid(&value), "{full:?}");
    }
    assert!(run(&["hochkit".into(), "hh".into(), bad.to_string_lossy().into()]).error.unwrap().message.contains("line 2"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn spec_examples() {
    let f = |p: &str| fixtures().join(p).to_string_lossy().into_owned();
    let r = run(&["hochkit".into(), "hh".into(), "--max-degree".into(), "3".into(), f("algebra/dualnumbers.json")]);
    let dims: Vec<usize> = r.results.iter().map(|i| i.dimension.unwrap()).collect();
    assert_eq!(dims, [2, 1, 1, 1]);
    let r = run(&["hochkit".into(), "npotent".into(), "--n".into(), "2".into(), f("ainf/qext-tensor.json")]);
    assert!(r.summary.contains(&"2-potent: yes".to_string()), "{:?}", r.summary);
    let r = run(&["hochkit".into(), "check-ainf".into(), "--arity".into(), "4".into(), f("ainf/broken.json")]);
    assert_eq!(r.exit_code(), 2);
    assert!(r.summary[0].contains("(1, 1, e)"), "{:?}", r.summary);
}
