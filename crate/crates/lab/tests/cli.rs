use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use ulambda_lab::golden::{diff_files, strip_timestamps};

const BIN: &str = env!("CARGO_BIN_EXE_ulambda");

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn small_search_args(out: &str) -> Vec<&str> {
    vec![
        "random-search",
        "--lambda-grid",
        "0.3,1.0",
        "--samples",
        "150",
        "--seed",
        "11",
        "--out",
        out,
    ]
}

#[test]
fn random_search_is_byte_identical_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&small_search_args(p.to_str().unwrap()));
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap(),
    );
    let strip = |t: &str| {
        t.lines()
            .filter(|l| !l.contains("\"generated_at_unix\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&ta), strip(&tb));
    assert!(diff_files(&a, &b).unwrap().is_empty());
}

#[test]
fn seed_changes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run(&small_search_args(a.to_str().unwrap()));
    let mut args = small_search_args(b.to_str().unwrap());
    args[6] = "12";
    run(&args);
    assert!(!diff_files(&a, &b).unwrap().is_empty());
}

#[test]
fn csv_format_and_stdout() {
    let o = run(&[
        "verify-sharpness",
        "--lambda-grid",
        "1.0",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("kind,lambda,witness,value,bound,error,pass")
    );
    let zalcman = lines.find(|l| l.starts_with("Zalcman(2),")).unwrap();
    assert!(zalcman.starts_with("Zalcman(2),1.00000000000000,f_lambda,1.00000000000000,"));
}

#[test]
fn exit_codes() {
    let ok = run(&["maximize", "--which", "g3", "--lambda-grid", "1.0"]);
    assert_eq!(code(&ok), 0);
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    let entry = &v["body"]["entries"][0]["result"];
    assert_eq!(entry["argmax"], serde_json::json!([1.0, 0.0]));
    assert!((entry["value"].as_f64().unwrap() - 11.0).abs() < 1e-9);

    for args in [
        &["reproduce-all", "--lambda-grid", "0,0.5"][..],
        &["verify-sharpness", "--lambda-grid", "1.5"],
        &["random-search", "--samples", "0"],
        &["monotonicity", "--format", "xml"],
        &["maximize", "--which", "g4"],
        &["verify-sharpness", "--config", "/nonexistent/ulambda.cfg"],
    ] {
        let o = run(args);
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "lambda_grid = 0.5\nformat = csv\n").unwrap();
    let o = run(&[
        "maximize",
        "--which",
        "g2",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("function,lambda,"));
    assert!(text.contains("theorem silent"));

    let o = run(&[
        "maximize",
        "--which",
        "g2",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["body"]["entries"][0]["flag"], "theorem silent");
    assert_eq!(
        v["header"]["config"]["lambda_grid"],
        serde_json::json!([0.5])
    );

    std::fs::write(&cfg, "lambda_grid = 0.0\n").unwrap();
    let o = run(&["monotonicity", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

fn reproduce_small(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "reproduce-all",
        "--lambda-grid",
        "0.5,1.0",
        "--samples",
        "200",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn reproduce_all_matches_golden_bound_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = reproduce_small(&out, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("report.json").is_file());
    let golden = golden_dir().join("bounds_small.csv");
    if std::env::var_os("ULAMBDA_UPDATE_GOLDEN").is_some() {
        std::fs::copy(out.join("bounds.csv"), &golden).unwrap();
    }
    let diffs = diff_files(&golden, &out.join("bounds.csv")).unwrap();
    assert!(diffs.is_empty(), "{diffs:?}");
}

#[test]
fn tampered_golden_table_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert_eq!(code(&reproduce_small(&out, &[])), 0);

    // an identical golden directory passes, timestamps aside
    let golden = dir.path().join("golden");
    std::fs::create_dir_all(&golden).unwrap();
    for f in ["report.json", "bounds.csv"] {
        std::fs::copy(out.join(f), golden.join(f)).unwrap();
    }
    let rerun = dir.path().join("rerun");
    let o = reproduce_small(&rerun, &["--golden", golden.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // one digit changed in the bound column
    let table = std::fs::read_to_string(golden.join("bounds.csv")).unwrap();
    let tampered = table.replacen("0.500000000000000", "0.500000000000001", 1);
    assert_ne!(table, tampered);
    std::fs::write(golden.join("bounds.csv"), tampered).unwrap();
    let diffs = diff_files(&golden.join("bounds.csv"), &out.join("bounds.csv")).unwrap();
    assert_eq!(diffs.len(), 1, "{diffs:?}");
    let o = reproduce_small(&rerun, &["--golden", golden.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bounds.csv: line"));
}

#[test]
fn cited_members_rebuild_from_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert_eq!(code(&reproduce_small(&out, &[])), 0);
    let text = std::fs::read_to_string(out.join("report.json")).unwrap();
    let report: Value = serde_json::from_str(&text).unwrap();
    let mut rebuilt = 0;
    for l in report["body"]["search"]["lambdas"].as_array().unwrap() {
        for f in l["functionals"].as_array().unwrap() {
            let Some(hash) = f["argmax"]["hash"].as_str() else {
                continue;
            };
            let cited = l["members"]
                .as_array()
                .unwrap()
                .iter()
                .find(|m| m["hash"] == hash)
                .expect("argmax members are cited");
            let member: ulambda_lab::formats::MemberJson =
                serde_json::from_value(cited["member"].clone()).unwrap();
            assert_eq!(member.content_hash(), hash);
            let m = member.rebuild().unwrap();
            let kind = ulambda_core::FunctionalKind::parse(f["kind"].as_str().unwrap()).unwrap();
            let value = ulambda_core::eval_functional(kind, &m).unwrap();
            let reported = f["observed_max_checked"]
                .as_f64()
                .unwrap_or_else(|| f["observed_max"].as_f64().unwrap());
            assert!(
                (value - reported).abs() <= 1e-12,
                "{kind}: {value} vs {reported}"
            );
            rebuilt += 1;
        }
    }
    assert!(rebuilt >= 16);
    for m in report["body"]["sharpness"]["members"].as_array().unwrap() {
        let member: ulambda_lab::formats::MemberJson =
            serde_json::from_value(m["member"].clone()).unwrap();
        assert_eq!(member.content_hash(), m["hash"].as_str().unwrap());
        member.rebuild().unwrap();
    }
}

/// Key structure of a JSON value: objects map keys to schemas, arrays
/// keep the schema of their first element, scalars become type names.
fn schema(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            Value::Object(map.iter().map(|(k, v)| (k.clone(), schema(v))).collect())
        }
        Value::Array(items) => Value::Array(items.first().map(schema).into_iter().collect()),
        Value::Null => "null".into(),
        Value::Bool(_) => "bool".into(),
        Value::Number(_) => "number".into(),
        Value::String(_) => "string".into(),
    }
}

#[test]
fn report_schemas_match_golden() {
    let dir = tempfile::tempdir().unwrap();
    let commands: [(&str, Vec<&str>); 7] = [
        ("verify-sharpness", vec!["verify-sharpness"]),
        ("random-search", vec!["random-search", "--samples", "50"]),
        ("maximize-g1", vec!["maximize", "--which", "g1"]),
        ("maximize-g2", vec!["maximize", "--which", "g2"]),
        ("maximize-g3", vec!["maximize", "--which", "g3"]),
        ("monotonicity", vec!["monotonicity"]),
        ("reproduce-all", vec!["reproduce-all", "--samples", "50"]),
    ];
    let update = std::env::var_os("ULAMBDA_UPDATE_GOLDEN").is_some();
    for (name, mut args) in commands {
        let target = dir.path().join(name);
        let target_str = target.to_str().unwrap().to_string();
        args.extend(["--lambda-grid", "0.5,0.9", "--out", &target_str]);
        let o = run(&args);
        assert_eq!(
            code(&o),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let report_path = if name == "reproduce-all" {
            target.join("report.json")
        } else {
            target
        };
        let mut v: Value =
            serde_json::from_str(&std::fs::read_to_string(report_path).unwrap()).unwrap();
        strip_timestamps(&mut v);
        let actual = schema(&v);
        let golden = golden_dir().join(format!("{name}.schema.json"));
        if update {
            let text = serde_json::to_string_pretty(&actual).unwrap() + "\n";
            std::fs::write(&golden, text).unwrap();
        }
        let expected: Value =
            serde_json::from_str(&std::fs::read_to_string(&golden).unwrap()).unwrap();
        assert_eq!(expected, actual, "{name} schema changed");
    }
}
