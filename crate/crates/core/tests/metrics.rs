use std::f64::consts::PI;

use approx::assert_relative_eq;
use slpencil::metrics::{d_alpha, in_b, in_p, lipschitz_experiment, ratio_table, rho_alpha, Direction, MetricConfig, Sampler};
use slpencil::{complete_finite_data, Error, MeanZeroFunction, Problem, RationalHN, SpectralData};

const G: usize = 1024;

fn problem(sigma: impl Fn(f64) -> f64, f: RationalHN, big_f: RationalHN) -> Problem {
    Problem::new(MeanZeroFunction::from_fn(G, sigma).unwrap(), f, big_f)
}

fn dirichlet(sigma: impl Fn(f64) -> f64) -> Problem {
    problem(sigma, RationalHN::Infinity, RationalHN::Infinity)
}

fn dirichlet_data(n: usize) -> SpectralData {
    let lambda = (1..=n).map(|k| (k * k) as f64).collect();
    let gamma = (1..=n).map(|k| PI / (2.0 * (k * k) as f64)).collect();
    SpectralData::new(-1, -1, lambda, gamma).unwrap()
}

#[test]
fn d_alpha_examples() {
    let p = problem(|x| 0.3 * x.cos(), RationalHN::constant(0.5), RationalHN::linear(1.0, 0.2).unwrap());
    assert_eq!(d_alpha(&p, &p, 0.25).unwrap(), 0.0);

    let q = problem(|x| 0.3 * x.cos() + (2.0 * x).sin(), RationalHN::constant(0.5), RationalHN::linear(1.0, 0.2).unwrap());
    assert_relative_eq!(d_alpha(&p, &q, 0.0).unwrap(), 1.0, max_relative = 1e-6);

    // With both ends Dirichlet only σ contributes.
    let (a, b) = (dirichlet(|x| x.cos()), dirichlet(|x| 0.5 * x.cos()));
    let sigma_only = a.sigma().sub(b.sigma()).unwrap().sobolev_norm(0.25);
    assert_eq!(d_alpha(&a, &b, 0.25).unwrap(), sigma_only);

    let r = problem(|_| 0.0, RationalHN::constant(0.0), RationalHN::Infinity);
    assert!(matches!(d_alpha(&a, &r, 0.0), Err(Error::IndexMismatch(..))));
}

#[test]
fn d_alpha_compares_across_grids() {
    let a = dirichlet(|x| x.cos());
    let b = Problem::new(MeanZeroFunction::from_fn(2 * G, |x| x.cos()).unwrap(), RationalHN::Infinity, RationalHN::Infinity);
    assert!(d_alpha(&a, &b, 0.25).unwrap() < 1e-6);
}

#[test]
fn rho_alpha_examples() {
    let s = dirichlet_data(20);
    assert_eq!(rho_alpha(&s, &s, 0.25, 64).unwrap().value, 0.0);

    let mut doubled = s.clone();
    doubled.gamma[0] *= 2.0;
    let r = rho_alpha(&s, &doubled, 0.25, 64).unwrap();
    assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
    assert_eq!(r.kappa_part, 0.0);
    assert_eq!(r.terms, 20);
    assert!(!r.truncated);

    let neumann = SpectralData::new(0, 0, vec![0.0, 1.0], vec![PI, PI / 2.0]).unwrap();
    assert!(matches!(rho_alpha(&s, &neumann, 0.25, 64), Err(Error::IndexMismatch(..))));
}

#[test]
fn completed_heads_differ_only_in_the_head() {
    let p = dirichlet(|x| 0.4 * x.cos());
    let q = dirichlet(|x| 0.2 * (2.0 * x).cos());
    let (sp, sq) = (p.spectral_data(6).unwrap(), q.spectral_data(6).unwrap());
    let a = complete_finite_data(&sp.lambda, &sp.gamma, -1, -1, 128);
    let b = complete_finite_data(&sq.lambda, &sq.gamma, -1, -1, 128);
    let head = rho_alpha(&a.truncated(6), &b.truncated(6), 0.25, 6).unwrap().value;
    for n_max in [8, 32, 64, 128] {
        let r = rho_alpha(&a, &b, 0.25, n_max).unwrap();
        assert_relative_eq!(r.value, head, max_relative = 1e-12);
    }
    // Truncation stability: doubling n_max moves nothing.
    let (r64, r128) = (rho_alpha(&a, &b, 0.25, 64).unwrap(), rho_alpha(&a, &b, 0.25, 128).unwrap());
    assert!(r64.truncated && !r128.truncated);
    assert!((r128.value / r64.value - 1.0).abs() < 0.01);
}

#[test]
fn membership_examples() {
    let zero = dirichlet(|_| 0.0);
    for (q, delta) in [(0.5, 0.1), (2.0, 0.5), (10.0, 3.0)] {
        let m = in_p(&zero, 0.25, q, delta);
        assert!(m.member, "{:?}", m.reasons);
    }
    for eps in [0.25, 1.0] {
        let m = in_b(&dirichlet_data(30), 0.25, 1.0, eps);
        assert!(m.member, "{:?}", m.reasons);
    }
    assert!(!in_b(&dirichlet_data(30), 0.25, 1.0, 1.5).member);

    let neumann = problem(|_| 0.0, RationalHN::constant(0.0), RationalHN::constant(0.0));
    let m = in_p(&neumann, 0.25, 2.0, 0.5);
    assert!(!m.member);
    assert!(m.reasons.iter().any(|r| r.contains("λ₁")), "{:?}", m.reasons);
}

#[test]
fn metric_axioms_on_samples() {
    let ps = [
        dirichlet(|x| x.cos()),
        dirichlet(|x| -0.5 * (3.0 * x).cos()),
        dirichlet(|x| 0.2 * x.sin() + 0.1 * x),
        dirichlet(|x| (x - 1.0).abs() - 1.0),
    ];
    for alpha in [0.0, 0.25, 0.45] {
        for a in &ps {
            assert!(d_alpha(a, a, alpha).unwrap() < 1e-14);
            for b in &ps {
                let ab = d_alpha(a, b, alpha).unwrap();
                assert_eq!(ab, d_alpha(b, a, alpha).unwrap());
                for c in &ps {
                    assert!(ab <= d_alpha(a, c, alpha).unwrap() + d_alpha(c, b, alpha).unwrap() + 1e-12);
                }
            }
        }
    }
    let data: Vec<SpectralData> = ps.iter().map(|p| p.spectral_data(24).unwrap()).collect();
    for a in &data {
        for b in &data {
            let ab = rho_alpha(a, b, 0.25, 24).unwrap().value;
            assert_eq!(ab, rho_alpha(b, a, 0.25, 24).unwrap().value);
            for c in &data {
                let via = rho_alpha(a, c, 0.25, 24).unwrap().value + rho_alpha(c, b, 0.25, 24).unwrap().value;
                assert!(ab <= via + 1e-12);
            }
        }
    }
}

#[test]
fn identical_pair_is_skipped() {
    let p = dirichlet(|x| x.cos());
    let t = ratio_table(&[(p.clone(), p, 7)], 0.25, 16, Direction::Direct).unwrap();
    assert!(t.rows.is_empty());
    assert_eq!(t.skipped, vec![(0, 7)]);
}

#[test]
fn cosine_family_ratios() {
    // Frozen from a run at G = 2048, n_max = 64.
    let mk = |t: f64| {
        Problem::new(MeanZeroFunction::from_fn(2048, move |x| t * x.cos()).unwrap(), RationalHN::Infinity, RationalHN::Infinity)
    };
    let pairs = vec![(mk(0.0), mk(0.1), 0), (mk(0.0), mk(0.2), 1)];
    let t = ratio_table(&pairs, 0.25, 64, Direction::Direct).unwrap();
    assert_relative_eq!(t.rows[0].ratio, 0.536_997_044_42, max_relative = 1e-6);
    assert_relative_eq!(t.rows[1].ratio, 0.543_704_594_91, max_relative = 1e-6);
    assert!(t.uniform());
    let csv = t.to_csv();
    assert!(csv.starts_with("pair_id,d_alpha,rho_alpha,ratio,seed\n0,"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn experiment_is_reproducible() {
    let cfg = MetricConfig { n_max: 16, ..MetricConfig::default() };
    let sampler = Sampler {
        sigma_ranges: vec![(-1.13, -0.9), (-0.1, 0.1)],
        h_range: (-1.8, -1.65),
        grid_size: 512,
        ..Sampler::new(0, 0, cfg.alpha, cfg.q, cfg.delta)
    };
    let a = lipschitz_experiment(&sampler, 4, &cfg, Direction::Direct, 11).unwrap();
    let b = lipschitz_experiment(&sampler, 4, &cfg, Direction::Direct, 11).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.rows.len(), 4);
    assert!(a.max.is_finite() && a.max >= a.median);
}

#[test]
fn config_validation() {
    assert!(MetricConfig::default().validate().is_ok());
    assert!(MetricConfig { alpha: 0.5, ..MetricConfig::default() }.validate().is_err());
    assert!(MetricConfig { n_max: 4, ..MetricConfig::default() }.validate().is_err());
}
