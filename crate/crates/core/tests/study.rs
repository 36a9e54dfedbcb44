use slpencil::inverse::InverseConfig;
use slpencil::study::{finite_study, log_log_slope, StudyConfig};
use slpencil::{Error, MeanZeroFunction, Problem, RationalHN};

fn dirichlet() -> Problem {
    Problem::new(MeanZeroFunction::from_fn(1024, |x| 0.4 * x.cos()).unwrap(), RationalHN::Infinity, RationalHN::Infinity)
}

fn small() -> StudyConfig {
    StudyConfig {
        ms: vec![2, 4, 8],
        inverse: InverseConfig { n_data: 8, base_k: 6, grid_size: 1024, ..InverseConfig::default() },
        ..StudyConfig::default()
    }
}

#[test]
fn slope_of_a_power_law() {
    let pts: Vec<(f64, f64)> = [4.0, 8.0, 16.0].iter().map(|&m: &f64| (m, 3.0 * m.powf(-0.3))).collect();
    assert!((log_log_slope(&pts).unwrap() + 0.3).abs() < 1e-12);
    assert_eq!(log_log_slope(&pts[..1]), None);
}

#[test]
fn exact_study_decreases() {
    let r = finite_study(&dirichlet(), &small()).unwrap();
    assert_eq!(r.rows.len(), 3);
    let d: Vec<f64> = r.rows.iter().map(|row| row.d_alpha1).collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    assert!(r.slope.unwrap() < 0.0);
    assert!((r.theoretical_slope + 0.3).abs() < 1e-15);
}

#[test]
fn zero_noise_is_the_exact_study() {
    let exact = finite_study(&dirichlet(), &small()).unwrap();
    let cfg = StudyConfig { eps: vec![0.0, 1e-3], ..small() };
    let noisy = finite_study(&dirichlet(), &cfg).unwrap();
    for m in [2, 4, 8] {
        assert_eq!(noisy.cell(m, 0.0).unwrap().d_max, exact.cell(m, 0.0).unwrap().d_max);
        assert_eq!(noisy.cell(m, 1e-3).unwrap().runs + noisy.cell(m, 1e-3).unwrap().failures, 2 * cfg.draws);
    }
}

#[test]
fn study_is_deterministic() {
    let cfg = StudyConfig { ms: vec![4], eps: vec![1e-3], seed: 5, ..small() };
    let a = finite_study(&dirichlet(), &cfg).unwrap().to_csv();
    let b = finite_study(&dirichlet(), &cfg).unwrap().to_csv();
    assert_eq!(a, b);
    assert!(a.starts_with("m,eps,seed,sign,d_alpha1,error\n"));
    assert_eq!(a.lines().count(), 1 + 2 * cfg.draws);
}

#[test]
fn bad_configs() {
    let p = dirichlet();
    let swapped = StudyConfig { alpha1: 0.4, alpha2: 0.1, ..small() };
    assert!(matches!(finite_study(&p, &swapped), Err(Error::DomainViolation(_))));
    let long = StudyConfig { ms: vec![16], ..small() };
    assert!(matches!(finite_study(&p, &long), Err(Error::IllPosed(_))));
    let odd = Problem::new(MeanZeroFunction::zero(256), RationalHN::constant(1.0), RationalHN::Infinity);
    assert!(matches!(finite_study(&odd, &small()), Err(Error::OddParity(_))));
}
