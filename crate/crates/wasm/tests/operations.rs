use serde_json::Value;
use slpencil_wasm::{spectrum_json, theta_json, transform_json};

const NEUMANN: &str = r#"
f = { h = 0.0 }
F = { h = 0.0 }
[sigma]
cos = [0.5]
[solver]
grid_size = 1024
"#;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn spectrum_has_normalized_eigenfunctions() {
    let out = parse(&spectrum_json(NEUMANN, 6, 3).unwrap());
    assert_eq!(out["lambda"].as_array().unwrap().len(), 6);
    let efs = out["eigenfunctions"].as_array().unwrap();
    assert_eq!(efs.len(), 3);
    // ∫ y² over the thinned grid by the trapezoid rule stays close to one.
    for ef in efs {
        let x: Vec<f64> = ef["x"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        let y: Vec<f64> = ef["y"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert!((x.last().unwrap() - std::f64::consts::PI).abs() < 1e-12);
        let e: f64 = x.windows(2).zip(y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] * y[0] + y[1] * y[1])).sum();
        assert!((e - 1.0).abs() < 1e-3, "{e}");
    }
}

#[test]
fn t_minus_turns_neumann_into_dirichlet() {
    let out = parse(&transform_json(NEUMANN, "T-", 5).unwrap());
    assert_eq!(out["after"]["indices"], serde_json::json!([-1, -1]));
    let before: Vec<f64> = out["before"]["lambda"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let after: Vec<f64> = out["after"]["lambda"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (a, b) in after.iter().zip(&before[1..]) {
        assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn theta_raises_the_index() {
    let out = parse(&theta_json(r#"{"h": 1.0}"#, 0.0, 2.0, 0.5, -3.0, 3.0, 61).unwrap());
    assert_eq!(out["index_before"], 0);
    assert_eq!(out["index_after"], 1);
    assert_eq!(out["f_hat"].as_array().unwrap().len(), 61);
}

#[test]
fn errors_are_messages() {
    assert!(spectrum_json("f = 1", 4, 1).is_err());
    assert!(spectrum_json(NEUMANN, 0, 1).is_err());
    assert!(transform_json(NEUMANN, "T?", 4).unwrap_err().contains("transform"));
    assert!(theta_json(r#"{"h": 1.0}"#, 0.0, 0.5, 0.0, -1.0, 1.0, 10).unwrap_err().contains("τ"));
}

#[test]
fn demo_page_defaults_work() {
    let page = include_str!("../www/index.html");
    let start = page.find(r#"<textarea id="problem" rows="9">"#).unwrap();
    let body = &page[start..];
    let toml = &body[body.find('>').unwrap() + 1..body.find("</textarea>").unwrap()];
    spectrum_json(toml, 8, 3).unwrap();
    transform_json(toml, "T- T+(auto)", 8).unwrap();
    theta_json(r#"{"h": 1.0, "poles": [{"h": 2.0, "delta": 0.5}]}"#, 0.0, 2.0, 0.0, -6.0, 6.0, 1201).unwrap();
}
