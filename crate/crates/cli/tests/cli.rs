use std::process::{Command, Output};

use qp_forms::embed::{verify_witness, DecisionRecord, TargetSpace, Witness};
use qp_forms::forms::parse_form;
use qp_forms::padic::PrimeContext;
use serde_json::Value;

fn qpforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpforms"))
        .args(args)
        .env_remove("PADIC_DEFAULT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = qpforms(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn embed_reports_no_embedding() {
    let v = json(&["embed", "--prime", "13", "--form", "diag(p,lp)", "--target", "lorentz:4"]);
    assert_eq!(v["embeds"], Value::Bool(false));
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn min_dim_text_and_json() {
    let o = qpforms(&["min-dim", "-p", "5", "-f", "diag(l,p,lp)", "-t", "euclid", "--output", "text"]);
    assert_eq!(stdout(&o).trim(), "6");
    let v = json(&["min-dim", "-p", "5", "-f", "diag(l,p,lp)", "-t", "euclid"]);
    assert_eq!(v["min_n"], 6);
    assert_eq!(v["embeds"], true);
}

#[test]
fn classify_reduces_squares() {
    let v = json(&["classify", "--prime", "7", "--form", "diag(9)"]);
    assert_eq!(v["classes"], serde_json::json!(["1"]));
    let o = qpforms(&["classify", "-p", "7", "-f", "diag(9,0,0)", "--output", "text"]);
    assert_eq!(stdout(&o).trim(), "1 0^2");
}

#[test]
fn invariants_and_equivalence() {
    let v = json(&["invariants", "-p", "5", "-f", "diag(l,p,lp)"]);
    assert_eq!((v["disc"].as_str(), v["hasse"].as_i64()), (Some("1"), Some(-1)));
    let v = json(&["equivalent", "-p", "5", "-f", "diag(1,1)", "-f", "diag(l,l)"]);
    assert_eq!(v["equivalent"], true);
    let v = json(&["equivalent", "-p", "7", "-f", "diag(1,1)", "-f", "diag(l,l)"]);
    assert_eq!(v["equivalent"], true);
    let v = json(&["equivalent", "-p", "7", "-f", "diag(1,p)", "-f", "diag(l,lp)"]);
    assert_eq!(v["equivalent"], false);
}

#[test]
fn gram_input() {
    let dir = std::env::temp_dir().join(format!("qpforms-gram-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.json");
    std::fs::write(&path, r#"{"n":2,"m":[[0,1],[1,0]]}"#).unwrap();
    let v = json(&["equivalent", "-p", "3", "-f", "diag(1,-1)", "--gram", path.to_str().unwrap()]);
    assert_eq!(v["equivalent"], true);
}

#[test]
fn json_round_trips_and_witness_verifies() {
    let args = [
        "embed", "-p", "5", "-f", "diag(1,p,0)", "-t", "euclid:6", "--witness",
    ];
    let o = qpforms(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rec: DecisionRecord = serde_json::from_str(&text).unwrap();
    let original: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_value(&rec).unwrap(), original);

    let ctx = PrimeContext::new(5).unwrap();
    let f = parse_form("diag(1,p,0)", &ctx).unwrap();
    let rows = rec.witness.expect("witness requested");
    let w = Witness::from_strings(&rows, &ctx, rec.precision).unwrap();
    verify_witness(&w, &f, "euclid:6".parse::<TargetSpace>().unwrap()).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["witness", "-p", "7", "-f", "diag(l,p,0)", "-t", "lorentz:6", "--seed", "11"];
    let a = qpforms(&args);
    let b = qpforms(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn batch_preserves_order() {
    let dir = std::env::temp_dir().join(format!("qpforms-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jobs.txt");
    let mut jobs = String::from("# one request per line\n");
    for n in 1..=12 {
        jobs.push_str(&format!("embed -p 5 -f 'diag(l,p,lp)' -t euclid:{n}\n"));
    }
    std::fs::write(&path, jobs).unwrap();
    let o = qpforms(&["--batch", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let embeds: Vec<bool> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["embeds"].as_bool().unwrap())
        .collect();
    let want: Vec<bool> = (1..=12).map(|n| n >= 6).collect();
    assert_eq!(embeds, want);
}

#[test]
fn isotropic_max_with_witness() {
    let v = json(&["isotropic-max", "-p", "3", "-t", "lorentz:7", "--witness"]);
    assert_eq!(v["max_isotropic_dim"], 3);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn constants_honour_precision_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_qpforms"))
        .args(["constants", "-p", "11"])
        .env("PADIC_DEFAULT_PRECISION", "12")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["precision"], 12);
    assert_eq!(v["constants"].as_array().unwrap().len(), 5);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["classify", "-p", "9", "-f", "diag(1)"],
        vec!["classify", "-p", "7", "-f", "diag(1,x)"],
        vec!["embed", "-p", "7", "-f", "diag(1)", "-t", "sphere:3"],
        vec!["embed", "-p", "7", "-f", "diag(1)"],
        vec!["embed", "-p", "7", "-f", "diag(1)", "-t", "lorentz:0"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = qpforms(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn parse_errors_point_at_the_token() {
    let o = qpforms(&["classify", "-p", "7", "-f", "diag(1,x)"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 7"), "{err}");
    assert!(err.lines().last().unwrap().ends_with("       ^"), "{err}");
}
