use std::process::{Command, Output};

use serde_json::Value;

const A: &str = r#"{"coeffs":{"-1":[1,0],"0":[1,0]}}"#;
const B: &str = r#"{"coeffs":{"0":[1,0],"1":[1,0]}}"#;

fn pairedk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairedk")).args(args).env_remove("PAIREDK_CONFIG").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn paired_kernel_of_the_circle_zero_example() {
    let out = pairedk(&["kernel", "--type", "paired", "--a", A, "--b", B]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["status"], "exact");
    assert_eq!(v["dimension"], 1);
    let coeffs = &v["basis"][0]["coeffs"];
    assert_eq!(coeffs["0"][0].as_f64(), Some(1.0));
    assert_eq!(coeffs["-1"][0].as_f64(), Some(-1.0));
    assert!(v["witness_checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn transposed_kernel_is_empty_with_oracle_agreement() {
    let out = pairedk(&["kernel", "--type", "transposed", "--a", A, "--b", B, "--N", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "empty");
    assert!(v["certificate"].as_str().unwrap().contains("not in L2"));
    assert_eq!(v["oracle"]["dimension"], 0);
}

#[test]
fn wiener_hopf_index() {
    let g = r#"{"zeros":[{"z":[2,0]},{"z":[-3,0]}],"poles":[{"z":[0.5,0]}],"gain":[1,0]}"#;
    let out = pairedk(&["factor", "--wh", "--g", g]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["kappa"], -1);
}

#[test]
fn symbols_read_from_files_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(&path, A).unwrap();
    let out = pairedk(&["apply", "--type", "toeplitz", "--g", path.to_str().unwrap(), "--f", B]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // T_{1+1/z}(1+z) = 2 + z
    let result = json(&out)["result"].to_string();
    let back = pairedk_core::symbol::parse_symbol(&result).unwrap();
    for z in pairedk_core::symbol::probe_points(8) {
        assert!((back.eval(z) - (z + 2.0)).norm() < 1e-12);
    }
}

#[test]
fn norm_lies_between_bounds() {
    let v = json(&pairedk(&["norm", "--a", A, "--b", B, "--N", "48"]));
    let lower = v["lower_bound"].as_f64().unwrap();
    assert!(lower >= v["bounds"]["lower"].as_f64().unwrap() - 1e-2);
    assert!(lower <= v["bounds"]["upper"].as_f64().unwrap() + 1e-9);
}

#[test]
fn commutator_with_z_has_rank_one() {
    let out = pairedk(&["commutator", "--a", A, "--b", B, "--g", r#"{"coeffs":{"1":[1,0]}}"#, "--N", "32"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["rank"], 1);
}

#[test]
fn verify_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pairedk(&["verify", "--property", "P_ZERO", "--property", "P_SCALE", "--trials", "2", "--quiet", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stderr.is_empty());
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stored["all_pass"], true);
    assert_eq!(stored["properties"].as_array().unwrap().len(), 2);

    let again = pairedk(&["report", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again), stored);
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 5] = [
        &["kernel", "--bogus"],
        &["kernel", "--a", A, "--b", "{not json"],
        &["kernel", "--a", A, "--b", B, "--tol", "-1"],
        &["verify"],
        &["verify", "--property", "P_NOPE"],
    ];
    for args in cases {
        let out = pairedk(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    assert!(stderr(&pairedk(&["kernel", "--a", A, "--b", "{not json"])).contains("--b"));
    assert!(stderr(&pairedk(&["kernel", "--a", A, "--b", B, "--tol", "0"])).contains("--tol"));
}

#[test]
fn config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(&path, r#"{"oracle_N": 64, "colour": 3}"#).unwrap();
    let out = pairedk(&["--config", path.to_str().unwrap(), "kernel", "--a", A, "--b", B]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("colour"));

    let missing = pairedk(&["--config", dir.path().join("absent.json").to_str().unwrap(), "kernel", "--a", A, "--b", B]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn config_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(&path, r#"{"oracle_N": -1}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pairedk"))
        .args(["kernel", "--a", A, "--b", B])
        .env("PAIREDK_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("oracle_N"));

    std::fs::write(&path, r#"{"oracle_N": 40}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pairedk"))
        .args(["kernel", "--type", "hankel", "--g", A])
        .env("PAIREDK_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["oracle"]["n_requested"], 40);
}

#[test]
fn help_exits_zero() {
    assert_eq!(pairedk(&["--help"]).status.code(), Some(0));
}
