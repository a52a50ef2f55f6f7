use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclichyp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn p_at_one_for_n_two() {
    let o = run(&["eval", "p", "--N", "2", "--z", "1", "--json"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    let (re, im) = complex(&v["p"]);
    assert!((re - 2f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
    assert!(v["delta"].is_null());
}

#[test]
fn order_parameter_value() {
    let o = run(&[
        "eval",
        "order-param",
        "--N",
        "2",
        "--n",
        "1",
        "--kprime",
        "0.6",
        "--json",
    ]);
    assert!(o.status.success());
    let v = json_lines(&o)[0]["value"].as_f64().unwrap();
    assert!((v - 0.64f64.powf(0.125)).abs() < 1e-14);
}

#[test]
fn series_json_has_value() {
    let o = run(&[
        "--json", "eval", "series", "--N", "3", "--alpha", "0.3+0.1i", "--beta", "0.5-0.2i", "--k",
        "1",
    ]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["schema_version"], 1);
    assert!(v["value"].is_array());
    assert_eq!(v["cyclic"], true);
}

#[test]
fn closed_form_matches_direct_sum() {
    let o = run(&[
        "eval",
        "closed-form",
        "--N",
        "4",
        "--alpha",
        "0.7+0.9i",
        "--beta",
        "-1.2+0.4i",
        "--k",
        "2",
        "--json",
    ]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn plain_text_eval() {
    let o = run(&["eval", "p", "--N", "3", "--z", "0.5+0.2i"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("p0: ")));
    assert!(s.lines().any(|l| l.starts_with("delta: 0.98")));
}

#[test]
fn verify_summation_passes_and_is_reproducible() {
    let args = [
        "verify",
        "summation",
        "--N",
        "2..4",
        "--samples",
        "20",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines = json_lines(&a);
    assert_eq!(lines.len(), 61);
    let summary = lines.last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["counts"]["passed"], 60);
    assert!(lines[..60]
        .iter()
        .all(|l| l["pass"] == true && l["region"].is_string()));
}

#[test]
fn verify_z4_passes() {
    let o = run(&["verify", "z4", "--N", "3", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn impossible_tolerance_fails_with_code_one() {
    let o = run(&[
        "verify",
        "convolution",
        "--N",
        "3",
        "--samples",
        "3",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_lines(&o).last().unwrap()["pass"], false);
}

#[test]
fn bad_inputs_exit_two() {
    assert_eq!(
        run(&["eval", "p", "--N", "1", "--z", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["eval", "p", "--N", "3", "--z", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "eval",
            "order-param",
            "--N",
            "3",
            "--n",
            "1",
            "--kprime",
            "1.5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "summation", "--N", "5..3"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let o = run(&[
        "verify",
        "recurrence",
        "--N",
        "2",
        "--samples",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn scan_regions_csv_and_json() {
    let args = [
        "scan-regions",
        "--N",
        "3",
        "--alpha",
        "0.8+0.6i",
        "--k",
        "1",
        "--grid",
        "9",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rd.headers().unwrap().get(2), Some("region"));
    assert_eq!(rd.records().count(), 81);

    let mut j = args.to_vec();
    j.push("--json");
    let doc = &json_lines(&run(&j))[0];
    assert_eq!(doc["points"].as_array().unwrap().len(), 81);
    assert_eq!(doc["disagreements"], 0);
}

#[test]
fn rapidity_lies_on_curve() {
    let o = run(&[
        "rapidity",
        "--N",
        "3",
        "--kprime",
        "0.6",
        "--t",
        "0.7+0.2i",
        "--outside",
        "--x-index",
        "1",
        "--json",
    ]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["branch"]["lambda"], "Outside");
    assert_eq!(v["branch"]["x_index"], 1);
    let r = v["residuals"].as_object().unwrap();
    assert!(r.values().all(|x| x.as_f64().unwrap() < 1e-20));
}

#[test]
fn weights_start_at_one() {
    let o = run(&[
        "eval", "weight", "--N", "4", "--kprime", "0.5", "--tp", "0.7+0.2i", "--tq", "1.3-0.4i",
        "--kind", "wbar", "--json",
    ]);
    assert!(o.status.success());
    let w = json_lines(&o)[0]["weights"].as_array().unwrap().clone();
    assert_eq!(w.len(), 4);
    let (re, im) = complex(&w[0]);
    assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
}
