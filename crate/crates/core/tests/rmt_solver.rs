use corrspec::factor::{analytic_spectrum_block, BlockCluster, BlockModel};
use corrspec::linalg::{pearson_estimator, ReturnMatrix};
use corrspec::rmt::{
    auto_grid, density_from_spectrum, mc_along_grid, mp_density, mp_fit, solve_mc, DegenerateSpectrum, FitTarget,
    MPParams, MpFitOptions, SolverConfig,
};
use corrspec::rng::stream_rng;
use corrspec::stats::{cdf_from_density, ks_statistic};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn specs() -> Vec<(DegenerateSpectrum, f64)> {
    vec![
        (DegenerateSpectrum::new(&[(1.0, 1.0)]).unwrap(), 0.25),
        (DegenerateSpectrum::new(&[(1.0, 1.0)]).unwrap(), 0.7),
        (DegenerateSpectrum::new(&[(0.16, 99.0 / 499.0), (1.0, 400.0 / 499.0)]).unwrap(), 499.0 / 2000.0),
        (DegenerateSpectrum::new(&[(0.7, 99.0 / 499.0), (1.0, 400.0 / 499.0)]).unwrap(), 499.0 / 2000.0),
        (DegenerateSpectrum::new(&[(0.3, 0.2), (1.0, 0.5), (2.5, 0.3)]).unwrap(), 0.1),
        (DegenerateSpectrum::new(&[(0.5, 0.5), (4.0, 0.5)]).unwrap(), 0.05),
    ]
}

#[test]
fn density_is_nonnegative_herglotz() {
    for (spec, q) in specs() {
        let cfg = SolverConfig::auto(&spec, q, 2000).unwrap();
        let m = mc_along_grid(&spec, q, &cfg).unwrap();
        assert!(m.iter().all(|v| v.im <= 0.0), "spec {:?}", spec.atoms());
    }
}

#[test]
fn mass_and_first_moment_are_conserved() {
    for (spec, q) in specs() {
        let cfg = SolverConfig::auto(&spec, q, 6000).unwrap();
        let c = density_from_spectrum(&spec, q, &cfg).unwrap();
        assert!((c.mass - 1.0).abs() < 2e-3, "mass {} for {:?}", c.mass, spec.atoms());
        let m1 = spec.moment(1);
        assert!((c.moment(1) - m1).abs() < 2e-3, "first moment {} vs {m1}", c.moment(1));
        assert!(c.max_residual.unwrap() < 1e-8);
    }
}

#[test]
fn mass_converges_monotonically_as_epsilon_shrinks() {
    for (spec, q) in specs() {
        let hi = 1.5 * spec.max_value() * (1.0 + q.sqrt()).powi(2);
        let lo = 1e-3;
        let n = 8000;
        let grid: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
        let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&eps| {
                let cfg = SolverConfig::new(grid.clone()).with_epsilon(eps);
                (density_from_spectrum(&spec, q, &cfg).unwrap().mass - 1.0).abs()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?} for {:?}", spec.atoms());
    }
}

#[test]
fn two_bulks_for_strong_cluster_spectrum() {
    let spec = DegenerateSpectrum::new(&[(0.16, 99.0 / 499.0), (1.0, 400.0 / 499.0)]).unwrap();
    let q = 499.0 / 2000.0;
    let c = density_from_spectrum(&spec, q, &SolverConfig::auto(&spec, q, 4000).unwrap()).unwrap();
    assert_eq!(c.edges.len(), 2, "{:?}", c.edges);
    assert!(c.edges[0].1 < c.edges[1].0);
}

#[test]
fn vanishing_q_recovers_true_mgf() {
    let spec = DegenerateSpectrum::new(&[(0.3, 0.2), (1.0, 0.5), (2.5, 0.3)]).unwrap();
    for z in [Complex64::new(1.7, 0.5), Complex64::new(0.6, 0.1), Complex64::new(4.0, 2.0)] {
        let m = solve_mc(&spec, 1e-8, z, None).unwrap();
        let big_m: Complex64 = spec.atoms().iter().map(|a| a.weight * a.value / (z - a.value)).sum();
        assert!((m - big_m).norm() < 1e-6, "{m} vs {big_m}");
    }
}

#[test]
fn far_field_asymptote() {
    let spec = DegenerateSpectrum::new(&[(0.3, 0.2), (1.0, 0.5), (2.5, 0.3)]).unwrap();
    let z = Complex64::new(1e6, 1.0);
    let m = solve_mc(&spec, 0.4, z, None).unwrap();
    let want = spec.moment(1) / z;
    assert!(((m - want) / want).norm() < 1e-4);
}

#[test]
fn small_block_model_matches_monte_carlo() {
    // one cluster of 3 at ρ = 0.5 plus 3 independent assets
    let model = BlockModel {
        clusters: vec![BlockCluster { size: 3, rho: 0.5 }],
        n_background: 3,
    };
    let exact = analytic_spectrum_block(&model).unwrap();
    let spec = DegenerateSpectrum::from_analytic(&exact, 1).unwrap();
    let t = 120;
    let q = 6.0 / t as f64;
    let a = 0.5f64.sqrt();
    let mut eigs = Vec::with_capacity(10_002);
    let mut rng = stream_rng(31, 0);
    while eigs.len() < 10_000 {
        let f: Vec<f64> = (0..t).map(|_| rng.sample(StandardNormal)).collect();
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                (0..t)
                    .map(|k| {
                        let e: f64 = rng.sample(StandardNormal);
                        if i < 3 { a * f[k] + a * e } else { e }
                    })
                    .collect()
            })
            .collect();
        eigs.extend(pearson_estimator(&ReturnMatrix::from_rows(&rows).unwrap()).unwrap().eigenvalues().unwrap());
    }
    let grid = auto_grid(&spec, q, 6000).unwrap();
    let curve = density_from_spectrum(&spec, q, &SolverConfig::new(grid)).unwrap();
    let cdf = cdf_from_density(&curve).unwrap();
    eigs.sort_by(f64::total_cmp);
    let d = ks_statistic(&eigs, &cdf);
    assert!(d < 0.05, "KS distance {d}");
}

#[test]
fn fit_recovers_marchenko_pastur_sample() {
    // eigenvalues of a pure-noise sample correlation matrix, N = 500, q = 0.25
    let (n, t) = (500, 2000);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut rng = stream_rng(3, i as u64);
            (0..t).map(|_| rng.sample(StandardNormal)).collect()
        })
        .collect();
    let c = pearson_estimator(&ReturnMatrix::from_rows(&rows).unwrap().standardize().unwrap()).unwrap();
    let eig = c.eigenvalues().unwrap();
    let fit = mp_fit(FitTarget::Sample(&eig), &MpFitOptions::default()).unwrap();
    assert!((0.20..=0.30).contains(&fit.params.q), "q = {}", fit.params.q);
    assert!((0.95..=1.05).contains(&fit.params.sigma), "sigma = {}", fit.params.sigma);
}

#[test]
fn fit_of_exact_curve() {
    let p = MPParams::new(0.4, 1.2).unwrap();
    let curve = p.curve(800).unwrap();
    let fit = mp_fit(FitTarget::Curve(&curve), &MpFitOptions::default()).unwrap();
    assert!((fit.params.q - 0.4).abs() < 1e-3 && (fit.params.sigma - 1.2).abs() < 1e-3, "{:?}", fit.params);
    assert!(mp_density(1.0, &fit.params).unwrap() > 0.0);
}
