use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn purecorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_purecorr"))
        .args(args)
        .env_remove("PURECORR_MAX_DIM")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn ep_bell_envelope() {
    let v = json(&purecorr(&["ep", "--family", "bell", "--cut", "A:B", "--restarts", "2"]));
    assert_eq!(v["tool"], "purecorr");
    assert_eq!(v["command"], "ep");
    assert_eq!(v["state"]["family"], "bell");
    assert_eq!(v["config"]["ep"]["restarts"], 2);
    assert!(v["tolerances"]["certificate"].is_number());
    assert!(v["timestamp"].is_number());
    let est = v["result"]["estimate"].as_f64().unwrap();
    assert!((est - 1.0).abs() < 1e-6);
}

#[test]
fn ghz_mixture_reports_bound_coincidence() {
    let v = json(&purecorr(&[
        "ep", "--family", "ghz-mixture", "--params", "0.5,0.5,0.5", "--cut", "A:BC", "--restarts", "2",
    ]));
    let cert = &v["result"]["exactness_certificate"];
    assert_eq!(cert["kind"], "bound-coincidence");
    assert!((cert["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let o = purecorr(&["audit", "no-such-claim"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("thm1-polygamy-pure"));

    let o = purecorr(&["ep", "--family", "werner", "--params", "2.0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = purecorr(&["ep", "--family", "werner", "--params", "0.8", "--ancilla", "1,1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_purecorr"))
        .args(["ep", "--family", "werner", "--params", "0.8"])
        .env("PURECORR_MAX_DIM", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("dimension cap"));

    let o = purecorr(&["audit", "fig2-gap", "--grid", "11"]);
    assert_eq!(o.status.code(), Some(1));

    let o = purecorr(&["audit", "prop3-polygamy", "--family", "w", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn inconclusive_is_flagged_with_exit_zero() {
    let o = purecorr(&["audit", "prop3-polygamy", "--family", "ghz", "--params", "1.0", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["inconclusive"], true);
    assert_eq!(v["result"][0]["verdict"], "inconclusive");
}

#[test]
fn audit_examples() {
    let v = json(&purecorr(&["audit", "thm1-polygamy-pure", "--family", "w", "--n", "3"]));
    let r = &v["result"][0];
    assert!(r["extras"]["equality_residual"].as_f64().unwrap() < 1e-9);

    let v = json(&purecorr(&["audit", "dc-monogamy", "--family", "ghz", "--seed", "11", "--restarts", "2"]));
    let r = &v["result"][0];
    assert!(r["extras"]["equality_residual"].as_f64().unwrap() < 5e-3);
    assert_eq!(r["seed"], 11);

    let v = json(&purecorr(&["audit", "w-closed-form"]));
    assert_eq!(v["result"].as_array().unwrap().len(), 6);
}

#[test]
fn density_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("mixed.json");
    write(
        &good,
        r#"{"dims":[2,2],"re":[0.25,0,0,0,0,0.25,0,0,0,0,0.25,0,0,0,0,0.25],"im":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#,
    );
    let v = json(&purecorr(&["validate", "--input", good.to_str().unwrap()]));
    assert!((v["result"]["entropy"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["state"]["family"], "file");
    assert_eq!(v["state"]["source"], good.to_str().unwrap());

    let bad = dir.path().join("nonherm.json");
    write(&bad, r#"{"dims":[2],"re":[0.5,0.3,0,0.5],"im":[0,0,0,0]}"#);
    let o = purecorr(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hermiticity"));

    let trace = dir.path().join("trace.json");
    write(&trace, r#"{"dims":[2],"re":[0.5,0,0,0.49],"im":[0,0,0,0]}"#);
    let o = purecorr(&["validate", "--input", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trace"));

    let short = dir.path().join("short.json");
    write(&short, r#"{"dims":[2],"re":[1,0,0],"im":[0,0,0,0]}"#);
    let o = purecorr(&["validate", "--input", short.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`re`"));
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = purecorr(&["sweep", "fig2", "--grid", "11", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# config=")));
    assert!(text.lines().any(|l| l.starts_with("# state=")));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "p,i_ab,i_ac,i_a_bc,delta_lb");
    assert_eq!(data.len(), 12);
    let first: Vec<f64> = data[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0; 5]);
    assert!(dir.path().read_dir().unwrap().count() == 1);
}

#[test]
fn config_file_is_strict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, r#"{"ep":{"restarts":3,"seed":5}}"#);
    let v = json(&purecorr(&["ep", "--family", "werner", "--params", "0.5", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["config"]["ep"]["restarts"], 3);
    assert_eq!(v["seed"], 5);

    write(&cfg, r#"{"ep":{"restarts":3,"bogus":1}}"#);
    let o = purecorr(&["ep", "--family", "werner", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn dc_uses_sender_first_cut() {
    let v = json(&purecorr(&["dc", "--family", "bell", "--restarts", "2"]));
    assert!((v["result"]["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["result"]["cut"], "A:B");
}
