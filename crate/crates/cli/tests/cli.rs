use std::process::{Command, Output};

use serde_json::Value;

use sawlab_cli::report::{Cell, Field, RunReport};

fn sawlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sawlab"))
        .args(args)
        .env_remove("SAWLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = sawlab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn count_prints_big_integers_as_strings() {
    let v = json(&["count", "--n-max", "4"]);
    assert_eq!(v["results"]["c"], serde_json::json!(["1", "4", "12", "36", "100"]));
    for key in ["config", "version", "timing_ms", "results", "golden_checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let check = &v["golden_checks"][0];
    assert_eq!(check["name"], "saw_c4");
    assert_eq!(check["rel_err"], 0.0);
}

#[test]
fn validation_and_budget_exit_codes() {
    assert_eq!(sawlab(&["count", "--n-max", "-1"]).status.code(), Some(2));
    assert_eq!(sawlab(&["hit", "--r", "10", "--b", "2"]).status.code(), Some(2));
    assert_eq!(sawlab(&["pull-scan", "--temp-grid", "3:1:0.1"]).status.code(), Some(2));
    assert_eq!(sawlab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(sawlab(&["count", "--n-max", "40"]).status.code(), Some(3));
    let out = sawlab(&["count", "--n-max", "-1"]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn brownian_hit_reports_the_reference() {
    let v = json(&["hit", "--r", "10", "--b", "1", "--check"]);
    let ratio = v["results"]["ratio"].as_f64().unwrap();
    assert!((ratio / 3.8375894519594e-7 - 1.0).abs() < 5e-13);
    let checks = v["golden_checks"].as_array().unwrap();
    let brownian = checks.iter().find(|c| c["name"] == "brownian_ratio_r10").unwrap();
    assert_eq!(brownian["reference"], 3.8375894519594e-7);
    assert_eq!(brownian["passed"], true);
    assert!(!brownian["citation"].as_str().unwrap().is_empty());
}

#[test]
fn json_round_trips() {
    for args in [
        &["count", "--n-max", "6"][..],
        &["hit-asymptotic"],
        &["kappa", "--m-max", "8"],
        &["honeycomb-adsorb", "--l", "2", "--t", "2", "--y", "2"],
        &["pivot-nu", "--n-values", "8,16,32,64", "--samples", "200", "--seed", "5"],
    ] {
        let out = sawlab(args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let report = RunReport::from_json(&text).unwrap();
        let again = RunReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(report, again, "{args:?}");
        assert_eq!(report.config.command.name(), args[0]);
    }
}

#[test]
fn csv_carries_the_json_numbers() {
    let args = ["pull-scan", "--n-max", "6", "--temp-grid", "0.5:2:0.5"];
    let report = RunReport::from_json(&String::from_utf8(sawlab(&args).stdout).unwrap()).unwrap();
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv_text = String::from_utf8(sawlab(&csv_args).stdout).unwrap();
    let mut rows = csv::Reader::from_reader(csv_text.as_bytes());
    let mut seen = 0;
    for row in rows.records() {
        let row = row.unwrap();
        let cell = match &report.results[&row[0]] {
            Field::Scalar(c) => {
                assert_eq!(&row[1], "");
                c.clone()
            }
            Field::Column(cells) => cells[row[1].parse::<usize>().unwrap()].clone(),
        };
        match cell {
            Cell::Real(r) => assert_eq!(row[2].parse::<f64>().unwrap(), r),
            other => assert_eq!(row[2], other.render()),
        }
        seen += 1;
    }
    let expected: usize = report
        .results
        .values()
        .map(|f| match f {
            Field::Scalar(_) => 1,
            Field::Column(c) => c.len(),
        })
        .sum();
    assert_eq!(seen, expected);
}

#[test]
fn identical_configs_give_identical_payloads() {
    let args = ["pivot-nu", "--n-values", "10,20,40,80", "--samples", "300", "--seed", "42"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(json(&args)), strip(json(&args)));
    let other = json(&["pivot-nu", "--n-values", "10,20,40,80", "--samples", "300", "--seed", "43"]);
    assert_ne!(strip(json(&args)), strip(other));
}

#[test]
fn thread_count_from_environment_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| -> Value {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sawlab"));
        cmd.args(["count", "--n-max", "5"]).env_remove("SAWLAB_THREADS");
        if let Some(e) = env {
            cmd.env("SAWLAB_THREADS", e);
        }
        if let Some(f) = flag {
            cmd.args(["--threads", f]);
        }
        serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap()
    };
    assert_eq!(run(Some("3"), None)["config"]["workers"], 3);
    assert_eq!(run(Some("3"), Some("2"))["config"]["workers"], 2);
    let default = run(None, None)["config"]["workers"].as_u64().unwrap();
    assert!(default >= 1);
}

#[test]
fn report_can_go_to_a_file() {
    let path = std::env::temp_dir().join(format!("sawlab-cli-test-{}.json", std::process::id()));
    let out = sawlab(&["trefethen", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report = RunReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(report.golden_checks.iter().all(|c| c.passed));
}

#[test]
fn every_subcommand_runs() {
    for args in [
        &["polygons", "--m-max", "10"][..],
        &["halfplane", "--n-max", "6"],
        &["crossing", "--l", "3"],
        &["interacting", "--n-max", "6"],
        &["mu", "--n-max", "12"],
        &["lambda", "--l", "4"],
        &["honeycomb-local"],
        &["honeycomb-domain"],
        &["hit", "--r", "3"],
        &["adsorb", "--n-max", "12"],
    ] {
        let out = sawlab(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
