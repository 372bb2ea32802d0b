//! Black-box checks of the command-line interface: the documented
//! fixtures, exit-code contract, and output determinism.

use std::process::Command;

fn trispec(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_trispec"))
        .args(args)
        .output()
        .expect("failed to launch trispec")
}

#[test]
fn taylor_exact_fixture() {
    let out = trispec(&[
        "taylor", "--family", "power", "--alpha", "1/2", "--n", "1", "--kmax", "3", "--exact",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-1/3"));
    assert!(text.contains("1/108"));
    assert!(text.contains("-1/1215"));
}

#[test]
fn spectrum_fixture() {
    let out = trispec(&["spectrum", "--family", "power", "--alpha", "0", "--z", "0", "--N", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, vec![1.0, 4.0, 9.0, 16.0]);
}

#[test]
fn trace_fixture_predicted_limit() {
    let out = trispec(&[
        "trace", "--family", "power", "--alpha", "1/2", "--z", "0.3", "--N", "200",
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let limit = record["predicted_limit"][0].as_f64().unwrap();
    assert!((limit + 0.045).abs() < 1e-9, "predicted {limit}");
    let sum = record["partial_sum"][0].as_f64().unwrap();
    assert!((sum - (-0.09 * 200.0 / 401.0)).abs() < 1e-4);
}

#[test]
fn identical_config_gives_bit_identical_output() {
    let args = [
        "spectrum", "--family", "power", "--alpha", "1/2", "--z", "0.4+0.2i", "--N", "32",
    ];
    let a = trispec(&args);
    let b = trispec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["taylor", "--family", "power", "--alpha", "0.3", "--n", "4", "--kmax", "4"];
    let a = trispec(&args);
    let b = trispec(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    // usage error: unknown subcommand
    let out = trispec(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    // domain error: z outside the window disk
    let out = trispec(&[
        "sigma", "--family", "power", "--alpha", "1/2", "--z", "5.0", "--n", "3", "--j", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    let record: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert!(record["error"].as_str().unwrap().contains("radius"));
}

#[test]
fn branch_points_json_shape() {
    // tiny search region around the origin: no branch points, valid schema
    let out = trispec(&[
        "branch-points", "--family", "power", "--alpha", "0", "--n", "2", "--radius", "0.05",
        "--grid-density", "3",
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["n"], 2);
    assert!(record["points"].as_array().unwrap().is_empty());
}

#[test]
fn monodromy_identity_loop() {
    let out = trispec(&[
        "monodromy", "--family", "power", "--alpha", "0", "--path",
        "[[0,0],[0.1,0],[0.1,0.1],[0,0.1]]", "--n-max", "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["permutation"], serde_json::json!([1, 2, 3]));
}

#[test]
fn whittaker_hill_and_json_families() {
    let out = trispec(&[
        "spectrum", "--family", "whittaker-hill", "--t", "2.0", "--z", "0", "--N", "3",
    ]);
    assert!(out.status.success());

    let out = trispec(&[
        "spectrum", "--family", r#"{"kind":"power","alpha":"1/2"}"#, "--z", "0", "--N", "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() == 4);
}
