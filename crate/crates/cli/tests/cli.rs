use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn problems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slpencil")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn problem(name: &str) -> String {
    problems().join(name).to_string_lossy().into_owned()
}

fn column(json: &str, key: &str) -> Vec<f64> {
    let v: Value = serde_json::from_str(json).unwrap();
    v["pairs"].as_array().unwrap().iter().map(|p| p[key].as_f64().unwrap()).collect()
}

fn write(path: &Path, text: &str) -> String {
    std::fs::write(path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn direct_dirichlet_and_neumann() {
    let d = ok(&["direct", "--input", &problem("dirichlet_zero.toml"), "--n-max", "5", "--grid-size", "512"]);
    for (i, (l, g)) in column(&d, "lambda").iter().zip(column(&d, "gamma")).enumerate() {
        let n = (i + 1) as f64;
        assert!((l - n * n).abs() < 1e-8);
        assert!((g / (PI / (2.0 * n * n)) - 1.0).abs() < 1e-8);
    }
    let n = ok(&["direct", "--input", &problem("neumann_zero.toml"), "--n-max", "4", "--grid-size", "512"]);
    for (i, l) in column(&n, "lambda").iter().enumerate() {
        assert!((l - (i * i) as f64).abs() < 1e-8);
    }
}

#[test]
fn robin_solves_but_does_not_invert() {
    let data = ok(&["direct", "--input", &problem("robin.toml"), "--n-max", "30", "--grid-size", "1024"]);
    let kappa = column(&data, "kappa");
    assert!(kappa[29].abs() < kappa[4].abs() && kappa[29].abs() < 0.02, "{kappa:?}");
    let path = write(&scratch("robin.json"), &data);
    let out = run(&["inverse", "--input", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn inverse_of_dirichlet_data_is_zero() {
    let data = ok(&["direct", "--input", &problem("dirichlet_zero.toml"), "--n-max", "16", "--grid-size", "512"]);
    let input = write(&scratch("dirichlet.json"), &data);
    let report = scratch("dirichlet_report.json");
    let toml = ok(&["inverse", "--input", &input, "--grid-size", "512", "--report", &report.to_string_lossy()]);
    assert!(toml.contains("f = \"infinity\"") && toml.contains("F = \"infinity\""), "{toml}");
    let values: toml::Value = toml::from_str(&toml).unwrap();
    let sigma = values["sigma"]["values"].as_array().unwrap();
    assert!(sigma.iter().all(|v| v.as_float().unwrap().abs() < 1e-6));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(r["base_fit"]["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn finite_flag_completes_the_tail() {
    let data = ok(&["direct", "--input", &problem("dirichlet_zero.toml"), "--n-max", "8", "--grid-size", "512"]);
    let input = write(&scratch("head.json"), &data);
    let report = scratch("head_report.json");
    ok(&["inverse", "--input", &input, "--finite", "--grid-size", "512", "--report", &report.to_string_lossy()]);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["completed_from"], 8);
    assert_eq!(r["pairs_used"], 16);
    // Without completion eight pairs cannot fix ten coefficients.
    assert_eq!(code(&run(&["inverse", "--input", &input, "--grid-size", "512"])), 2);
}

#[test]
fn t_minus_turns_neumann_into_dirichlet() {
    let toml = ok(&["transform", "--input", &problem("neumann_zero.toml"), "--chain", "T-", "--grid-size", "512"]);
    let v: toml::Value = toml::from_str(&toml).unwrap();
    assert_eq!(v["f"].as_str(), Some("infinity"));
    assert_eq!(v["F"].as_str(), Some("infinity"));
    assert!(v["sigma"]["values"].as_array().unwrap().iter().all(|x| x.as_float().unwrap().abs() < 1e-10));
    let back = write(&scratch("from_neumann.toml"), &toml);
    let d = ok(&["direct", "--input", &back, "--n-max", "3"]);
    assert_eq!(column(&d, "lambda").iter().map(|l| l.round()).collect::<Vec<_>>(), vec![1.0, 4.0, 9.0]);
}

#[test]
fn round_trip_chains_report_agreement() {
    for chain in ["T- T+(auto)", "T-+ T+-"] {
        let report = scratch("chain_report.json");
        let toml = ok(&[
            "transform", "--input", &problem("linear_both.toml"), "--chain", chain, "--data", "--n-max", "6",
            "--grid-size", "1024", "--report", &report.to_string_lossy(),
        ]);
        let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(r["indices_before"], r["indices_after"]);
        assert!(r["max_lambda_error"].as_f64().unwrap() < 1e-6, "{chain}: {r}");
        assert!(toml.contains("h0"));
    }
}

#[test]
fn failing_step_is_a_domain_error() {
    let out = run(&["transform", "--input", &problem("dirichlet_zero.toml"), "--chain", "T-", "--grid-size", "256"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("step 1 (T-)"));
    assert_eq!(code(&run(&["transform", "--input", &problem("dirichlet_zero.toml"), "--chain", "T?"])), 2);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(code(&run(&["direct", "--input", "/nonexistent/p.toml"])), 2);
    assert_eq!(code(&run(&["direct"])), 2);
    let bad = write(&scratch("unknown_key.toml"), "f = \"infinity\"\nF = \"infinity\"\nshape = 1\n[sigma]\n");
    assert_eq!(code(&run(&["direct", "--input", &bad])), 2);
    assert_eq!(code(&run(&["direct", "--bogus"])), 2);
}

#[test]
fn iteration_cap_is_a_convergence_failure() {
    let pairs: Vec<String> = (1..=16)
        .map(|n| {
            let scale = if n == 1 { 3.0 } else { 1.0 };
            format!(r#"{{"n": {n}, "lambda": {}, "gamma": {:e}}}"#, n * n, scale * PI / (2.0 * (n * n) as f64))
        })
        .collect();
    let input = write(&scratch("off.json"), &format!(r#"{{"M": -1, "N": -1, "pairs": [{}]}}"#, pairs.join(",")));
    let out = run(&["inverse", "--input", &input, "--max-iter", "1", "--grid-size", "512"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn finite_study_is_byte_deterministic() {
    let file = write(
        &scratch("study.toml"),
        "f = \"infinity\"\nF = \"infinity\"\n[sigma]\ncos = [0.4]\n[solver]\ngrid_size = 512\n\
         [study]\nms = [2, 4]\neps = [0.0, 1e-3]\ndraws = 1\n[study.inverse]\nn_data = 8\nbase_k = 6\ngrid_size = 512\n",
    );
    let a = ok(&["finite-study", "--input", &file, "--seed", "3"]);
    let b = ok(&["finite-study", "--input", &file, "--seed", "3"]);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "m,eps,seed,sign,d_alpha1,error");
    assert_eq!(lines.len(), 1 + 2 * 3);
    let c = ok(&["finite-study", "--input", &file, "--seed", "4"]);
    assert_ne!(a, c);
}

#[test]
fn stability_is_byte_deterministic() {
    let file = write(
        &scratch("stability.toml"),
        "pairs = 3\n[metrics]\nn_max = 16\n[sampler]\nsigma_ranges = [[-1.13, -0.9], [-0.1, 0.1]]\nh_range = [-1.8, -1.65]\n",
    );
    let args = ["stability", "--input", &file, "--grid-size", "512", "--seed", "9"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    assert!(a.starts_with("pair_id,d_alpha,rho_alpha,ratio,seed\n"));
    assert_eq!(a.lines().count(), 4);
}

#[test]
fn direct_output_is_byte_deterministic() {
    let out = scratch("pole.json");
    let args = ["direct", "--input", &problem("pole_right.toml"), "--n-max", "12", "--grid-size", "1024", "--output", &out.to_string_lossy()];
    ok(&args);
    let first = std::fs::read(&out).unwrap();
    ok(&args);
    assert_eq!(first, std::fs::read(&out).unwrap());
}
