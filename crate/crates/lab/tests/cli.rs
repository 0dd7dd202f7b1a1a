use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn slag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slag"))
        .args(args)
        .env_remove("SLAG_SEED")
        .env_remove("SLAG_FAULT")
        .output()
        .expect("run slag")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn lawlor_symmetric_neck() {
    let out = slag(&["lawlor", "--a", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let r = &doc["result"];
    for phi in floats(&r["phi"]) {
        assert!((phi - PI / 3.0).abs() < 1e-10);
    }
    assert!((r["sumPhi"].as_f64().unwrap() - PI).abs() < 1e-8);
    assert!(r["A"].as_f64().unwrap() > 0.0);
    let limits = floats(&r["potentialLimits"]);
    assert!((limits[1] - limits[0] - r["A"].as_f64().unwrap()).abs() < 1e-8);
}

#[test]
fn lawlor_residuals_and_report_envelope() {
    let out = slag(&["lawlor", "--a", "1,2,3", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(doc["result"]["residuals"]["omegaMax"].as_f64().unwrap() < 1e-8);
    assert!(doc["result"]["residuals"]["imOmegaMax"].as_f64().unwrap() < 1e-8);
    assert_eq!(doc["command"], "lawlor");
    assert_eq!(doc["passed"], true);
    assert!(doc["tolerances"]["residual"].as_f64().unwrap() > 0.0);
    assert!(doc["version"]
        .as_str()
        .unwrap()
        .starts_with(env!("CARGO_PKG_VERSION")));
}

#[test]
fn negative_parameter_is_rejected() {
    let out = slag(&["lawlor", "--a", "1,-1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("a_k must be positive"));
}

#[test]
fn expander_reports() {
    let out = slag(&["expander", "--alpha", "1", "--a", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["result"].clone();
    let sum = r["sumPhi"].as_f64().unwrap();
    let limits = floats(&r["thetaLimits"]);
    assert!(limits[0].abs() < 1e-7);
    assert!((limits[1] - (sum - PI)).abs() < 1e-7);
    assert!(r["expanderResidualMax"].as_f64().unwrap() < 1e-7);

    let out = slag(&["expander", "--alpha", "2", "--a", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["result"].clone();
    let sum = r["sumPhi"].as_f64().unwrap();
    let closed = r["A_closedForm"].as_f64().unwrap();
    assert!((closed - (PI - sum) / 4.0).abs() < 1e-12);
    assert!((closed - r["A_potentialLimit"].as_f64().unwrap()).abs() < 1e-7);
}

#[test]
fn zero_alpha_is_rejected() {
    let out = slag(&["expander", "--alpha", "0", "--a", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha must be positive; use lawlor"));
}

#[test]
fn invert_rounded_symmetric_angles() {
    let out = slag(&[
        "invert",
        "--mode",
        "lawlor",
        "--phi",
        "1.0472,1.0472,1.0472",
        "--A",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out)["result"].clone();
    let a = floats(&r["a"]);
    assert!((a[0] - a[1]).abs() < 1e-9 && (a[1] - a[2]).abs() < 1e-9);
    assert!(r["forwardResidual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn invert_round_trips() {
    for a in ["0.7,1.3,2.1", "1,2,3,4", "0.5,0.5,3,1,2"] {
        let fwd = json(&slag(&["lawlor", "--a", a, "--samples", "1"]));
        let phi: Vec<String> = floats(&fwd["result"]["phi"])
            .iter()
            .map(|p| format!("{p:.17e}"))
            .collect();
        let area = format!("{:.17e}", fwd["result"]["A"].as_f64().unwrap());
        let out = slag(&[
            "invert",
            "--mode",
            "lawlor",
            "--phi",
            &phi.join(","),
            "--A",
            &area,
        ]);
        assert_eq!(out.status.code(), Some(0), "{a}");
        let want: Vec<f64> = a.split(',').map(|s| s.parse().unwrap()).collect();
        for (x, y) in floats(&json(&out)["result"]["a"]).iter().zip(&want) {
            assert!((x - y).abs() < 1e-6, "{a}");
        }

        let fwd = json(&slag(&[
            "expander",
            "--alpha",
            "0.7",
            "--a",
            a,
            "--samples",
            "1",
        ]));
        let phi: Vec<String> = floats(&fwd["result"]["phi"])
            .iter()
            .map(|p| format!("{p:.17e}"))
            .collect();
        let out = slag(&[
            "invert",
            "--mode",
            "jlt",
            "--alpha",
            "0.7",
            "--phi",
            &phi.join(","),
        ]);
        assert_eq!(out.status.code(), Some(0), "{a}");
        for (x, y) in floats(&json(&out)["result"]["a"]).iter().zip(&want) {
            assert!((x - y).abs() < 1e-6, "{a}");
        }
    }
}

#[test]
fn invert_outside_domain() {
    let out = slag(&[
        "invert",
        "--mode",
        "jlt",
        "--alpha",
        "1",
        "--phi",
        "2.0,2.0,2.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = slag(&[
        "invert",
        "--mode",
        "lawlor",
        "--phi",
        "1.0,1.0,1.0",
        "--A",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = slag(&[
        "invert",
        "--mode",
        "lawlor",
        "--phi",
        "1.0472,1.0472,1.0472",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_subset_and_fault_injection() {
    let out = slag(&["verify", "--only", "maslov"]);
    assert_eq!(out.status.code(), Some(0));
    let checks = json(&out)["result"]["checks"].as_array().unwrap().clone();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "maslov");

    let out = Command::new(env!("CARGO_BIN_EXE_slag"))
        .args(["verify", "--only", "expander,angles"])
        .env("SLAG_FAULT", "expander-phase")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let checks = doc["result"]["checks"].as_array().unwrap();
    // Checks run in the order given.
    assert_eq!(checks[0]["name"], "expander");
    assert_eq!(checks[0]["passed"], false);
    assert_eq!(checks[1]["name"], "angles");
    assert_eq!(checks[1]["passed"], true);

    assert_eq!(slag(&["verify", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_full_battery() {
    let start = std::time::Instant::now();
    let out = slag(&["verify", "--format", "csv"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(start.elapsed().as_secs() < 60);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| &r[1] == "true"));
}

#[test]
fn output_is_deterministic() {
    let args = ["lawlor", "--a", "1,2,3", "--samples", "50"];
    assert_eq!(slag(&args).stdout, slag(&args).stdout);
    let seeded = Command::new(env!("CARGO_BIN_EXE_slag"))
        .args(args)
        .env("SLAG_SEED", "7")
        .output()
        .unwrap();
    let flag = slag(&["--seed", "7", "lawlor", "--a", "1,2,3", "--samples", "50"]);
    assert_eq!(seeded.stdout, flag.stdout);
    assert_ne!(seeded.stdout, slag(&args).stdout);
}

#[test]
fn csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("decay.csv");
    let out = slag(&[
        "plumbing",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("r_tilde,value,slope\n"));
    assert_eq!(text.lines().count(), 4);
    // Reports without a table cannot be written as CSV.
    let out = slag(&[
        "invert",
        "--mode",
        "jlt",
        "--alpha",
        "1",
        "--phi",
        "0.5,0.5,0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn expansion_table() {
    let out = slag(&[
        "expansion",
        "--m",
        "4",
        "--k",
        "0,3,6",
        "--alpha",
        "0.5",
        "--points",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let modes = json(&out)["result"]["modes"].as_array().unwrap().clone();
    assert_eq!(modes.len(), 3);
    for mode in &modes {
        assert_eq!(mode["table"].as_array().unwrap().len(), 5);
        assert_eq!(mode["table"][0][1].as_f64().unwrap(), 1.0);
        assert!(mode["overlapError"].as_f64().unwrap() < 1e-8);
    }
    assert_eq!(slag(&["expansion", "--alpha", "-1"]).status.code(), Some(2));
}

#[test]
fn floer_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let path = dir.path().join(name);
        std::fs::File::create(&path)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        path.to_str().unwrap().to_string()
    };
    let sphere = write(
        "sphere.json",
        r#"{"generators":[{"id":"x","degree":0,"kind":"infty0"},{"id":"y","degree":3,"kind":"inftyPhi"},
            {"id":"p","degree":1,"fL":0.0,"fLp":1.0},{"id":"q","degree":2,"fL":0.5,"fLp":0.2}],
            "differential":[["p","q"]]}"#,
    );
    let out = slag(&[
        "floer",
        "--input",
        &sphere,
        "--expect-sphere",
        "3",
        "--sl-pair",
        "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let r = json(&out)["result"].clone();
    assert_eq!(r["cohomology"], serde_json::json!({"0": 1, "3": 1}));
    assert_eq!(r["eulerCharacteristic"], 0);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 0);

    let bad = write(
        "bad.json",
        r#"{"generators":[{"id":"a","degree":0},{"id":"b","degree":1},{"id":"c","degree":2}],
            "differential":[["a","b"],["b","c"]]}"#,
    );
    let out = slag(&["floer", "--input", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["valid"], false);

    let out = slag(&["floer", "--input", &bad, "--expect-sphere", "3"]);
    assert_eq!(out.status.code(), Some(1));

    let garbage = write("garbage.json", "{\"generators\": 3}");
    assert_eq!(slag(&["floer", "--input", &garbage]).status.code(), Some(2));
    assert_eq!(
        slag(&["floer", "--input", "/nonexistent/complex.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_mentions_units() {
    let out = slag(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("radians"));
    assert!(slag(&["--version"]).status.success());
    assert_eq!(slag(&[]).status.code(), Some(2));
}
