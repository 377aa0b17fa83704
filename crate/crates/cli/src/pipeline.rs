//! The subcommands. Each is a pure function of the configuration; files are
//! collected in memory and written by the caller.

use corrspec::cluster::{
    assemble, bootstrap_spectra, mean_rho, overlay_spectrum, BackgroundLevel, BootstrapSpec, ClusterPartition,
};
use corrspec::factor::{analytic_spectrum_strong_clusters, simulate, theoretical_correlation, AnalyticSpectrum};
use corrspec::linalg::{pearson_estimator, CorrelationEstimate, ReturnMatrix};
use corrspec::rmt::{
    auto_grid, density_from_spectrum, mp_fit, DegenerateSpectrum, FitTarget, MPParams, MpFitOptions, SolverConfig,
};
use corrspec::rng::derive_seed;
use corrspec::stats::{cdf_from_density, jarque_bera, ks_normal, ks_test, lilliefors, normal_fit, TestReport};
use corrspec::{histogram, DensityCurve};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{
    BackgroundSetting, InputKind, KsReference, RunConfig, SampleKind, SpectrumSource, TestName,
};
use crate::error::{CliError, CliResult, Context};
use crate::ingest::{read_panel, read_values};
use crate::report::{digest_file, AnalysisReport, InputDigest, Outputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    TheorySpectrum,
    SolveDensity,
    Mp,
    FitMp,
    Estimate,
    Filter,
    Bootstrap,
    Test,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::TheorySpectrum => "theory-spectrum",
            Command::SolveDensity => "solve-density",
            Command::Mp => "mp",
            Command::FitMp => "fit-mp",
            Command::Estimate => "estimate",
            Command::Filter => "filter",
            Command::Bootstrap => "bootstrap",
            Command::Test => "test",
        }
    }
}

/// Runs `cmd` and returns the report together with the files to write.
pub fn run_pipeline(cmd: Command, cfg: &RunConfig) -> CliResult<(AnalysisReport, Outputs)> {
    let mut out = Outputs::default();
    let mut inputs = Vec::new();
    let results = match cmd {
        Command::Simulate => run_simulate(cfg, &mut out)?,
        Command::TheorySpectrum => run_theory(cfg, &mut out)?,
        Command::SolveDensity => run_solve(cfg, &mut out)?,
        Command::Mp => run_mp(cfg, &mut out)?,
        Command::FitMp => run_fit(cfg, &mut out, &mut inputs)?,
        Command::Estimate => run_estimate(cfg, &mut out, &mut inputs)?,
        Command::Filter => run_filter(cfg, &mut out, &mut inputs)?,
        Command::Bootstrap => run_bootstrap(cfg, &mut out, &mut inputs)?,
        Command::Test => run_test(cfg, &mut out, &mut inputs)?,
    };
    let report = AnalysisReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: cmd.name().to_string(),
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        config: cfg.clone(),
        inputs,
        outputs: out.names(),
        results,
    };
    Ok((report, out))
}

fn validate_common(cfg: &RunConfig) -> CliResult<()> {
    if cfg.histogram.bins == 0 {
        return Err(CliError::Validation("histogram.bins must be at least 1".into()));
    }
    if cfg.model.simulations == 0 {
        return Err(CliError::Validation("model.simulations must be at least 1".into()));
    }
    Ok(())
}

/// Ascending eigenvalues of the sample correlation matrix of each simulation.
pub fn simulated_spectra(cfg: &RunConfig) -> CliResult<Vec<Vec<f64>>> {
    validate_common(cfg)?;
    let base = cfg.model.factor_config(cfg.seed)?;
    (0..cfg.model.simulations)
        .into_par_iter()
        .map(|i| {
            let model = base.with_seed(derive_seed(cfg.seed, i as u64));
            let r = simulate(&model).ctx("simulate")?;
            let c = pearson_estimator(&r.standardize().ctx("standardize")?).ctx("pearson")?;
            c.eigenvalues().ctx("eigenvalues")
        })
        .collect()
}

fn without_largest(spectra: &[Vec<f64>], drop: usize) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for s in spectra {
        if drop >= s.len() {
            return Err(CliError::Validation(format!(
                "histogram.drop_largest = {drop} removes every eigenvalue of a {}-dimensional spectrum",
                s.len()
            )));
        }
        out.extend_from_slice(&s[..s.len() - drop]);
    }
    Ok(out)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// One entry per support interval of a histogram with the members' mean.
fn bulk_summary(values: &[f64], curve: &DensityCurve) -> Value {
    let bulks: Vec<Value> = curve
        .edges
        .iter()
        .map(|&(lo, hi)| {
            let inside: Vec<f64> = values.iter().copied().filter(|v| *v >= lo && *v <= hi).collect();
            json!({ "lo": lo, "hi": hi, "count": inside.len(), "mean": mean(&inside) })
        })
        .collect();
    Value::Array(bulks)
}

fn curve_summary(c: &DensityCurve) -> Value {
    json!({
        "points": c.len(),
        "mass": c.mass,
        "first_moment": c.moment(1),
        "edges": c.edges,
        "bin_width": c.bin_width,
    })
}

fn spectrum_json(s: &AnalyticSpectrum) -> Value {
    json!(s.entries.iter().map(|e| json!({"value": e.value, "multiplicity": e.multiplicity})).collect::<Vec<_>>())
}

fn atoms_json(s: &DegenerateSpectrum) -> Value {
    json!(s.atoms().iter().map(|a| json!({"value": a.value, "weight": a.weight})).collect::<Vec<_>>())
}

fn run_simulate(cfg: &RunConfig, out: &mut Outputs) -> CliResult<Value> {
    let spectra = simulated_spectra(cfg)?;
    let all: Vec<f64> = spectra.iter().flatten().copied().collect();
    let kept = without_largest(&spectra, cfg.histogram.drop_largest)?;
    let hist = histogram(&kept, cfg.histogram.bins, None).ctx("histogram")?;
    let largest: Vec<f64> = spectra.iter().map(|s| s[s.len() - 1]).collect();
    let (m, sd) = if largest.len() >= 2 {
        normal_fit(&largest).ctx("largest eigenvalue")?
    } else {
        (largest[0], 0.0)
    };
    let model = cfg.model.factor_config(cfg.seed)?;
    let strong = analytic_spectrum_strong_clusters(&model).ok().map(|s| spectrum_json(&s));
    out.eigs("simulate", &all);
    out.density("simulate", &hist);
    Ok(json!({
        "n_assets": model.n_assets,
        "n_obs": model.n_obs,
        "q": model.rect_ratio(),
        "simulations": spectra.len(),
        "largest": { "mean": m, "sd": sd, "values": largest },
        "bulks": bulk_summary(&kept, &hist),
        "density": curve_summary(&hist),
        "strong_cluster_spectrum": strong,
    }))
}

/// Distinct values of an ascending list, merging neighbours closer than
/// `tol` relative to their size.
fn group_eigenvalues(values: &[f64], tol: f64) -> AnalyticSpectrum {
    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut first = f64::NAN;
    for &v in values {
        match groups.last_mut() {
            Some(g) if (v - first).abs() <= tol * first.abs().max(1.0) => {
                g.0 += v;
                g.1 += 1;
            }
            _ => {
                groups.push((v, 1));
                first = v;
            }
        }
    }
    AnalyticSpectrum::new(groups.into_iter().map(|(s, n)| (s / n as f64, n)))
}

fn model_spectrum(cfg: &RunConfig) -> CliResult<(AnalyticSpectrum, Vec<f64>)> {
    let model = cfg.model.factor_config(cfg.seed)?;
    let exact = theoretical_correlation(&model).ctx("theoretical correlation")?;
    let values = exact.eigenvalues().ctx("eigenvalues")?;
    Ok((group_eigenvalues(&values, 1e-9), values))
}

fn run_theory(cfg: &RunConfig, out: &mut Outputs) -> CliResult<Value> {
    let model = cfg.model.factor_config(cfg.seed)?;
    let (grouped, values) = model_spectrum(cfg)?;
    let strong = analytic_spectrum_strong_clusters(&model).ok().map(|s| spectrum_json(&s));
    out.eigs("theory", &values);
    Ok(json!({
        "n_assets": model.n_assets,
        "exact_spectrum": spectrum_json(&grouped),
        "largest": values[values.len() - 1],
        "trace": values.iter().sum::<f64>(),
        "strong_cluster_spectrum": strong,
    }))
}

/// The degenerate spectrum and ratio selected by the `spectrum` section.
pub fn configured_spectrum(cfg: &RunConfig) -> CliResult<(DegenerateSpectrum, f64)> {
    match cfg.spectrum.source {
        SpectrumSource::Atoms => {
            let pairs: Vec<(f64, f64)> = cfg.spectrum.atoms.iter().map(|a| (a[0], a[1])).collect();
            let s = DegenerateSpectrum::new(&pairs).ctx("spectrum.atoms")?;
            if !(cfg.spectrum.q > 0.0 && cfg.spectrum.q.is_finite()) {
                return Err(CliError::Validation(format!("spectrum.q = {} must be positive", cfg.spectrum.q)));
            }
            Ok((s, cfg.spectrum.q))
        }
        SpectrumSource::Model => {
            let (grouped, _) = model_spectrum(cfg)?;
            let s = DegenerateSpectrum::from_analytic(&grouped, cfg.spectrum.min_multiplicity).ctx("spectrum")?;
            Ok((s, cfg.model.n_assets as f64 / cfg.model.n_obs as f64))
        }
    }
}

pub fn solver_config(cfg: &RunConfig, spec: &DegenerateSpectrum, q: f64) -> CliResult<SolverConfig> {
    let s = &cfg.solver;
    let grid = match (s.grid_lo, s.grid_hi) {
        (None, None) => auto_grid(spec, q, s.points).ctx("solver grid")?,
        (Some(lo), Some(hi)) => {
            if s.points < 2 || !(hi > lo) {
                return Err(CliError::Validation("solver grid needs points >= 2 and grid_hi > grid_lo".into()));
            }
            (0..s.points).map(|k| lo + (hi - lo) * k as f64 / (s.points - 1) as f64).collect()
        }
        _ => return Err(CliError::Validation("give both solver.grid_lo and solver.grid_hi or neither".into())),
    };
    let sc = SolverConfig {
        epsilon: s.epsilon,
        grid,
        branch_seed_z: s.branch_seed_z,
    };
    sc.validate().ctx("solver")?;
    Ok(sc)
}

fn solve(cfg: &RunConfig, spec: &DegenerateSpectrum, q: f64) -> CliResult<DensityCurve> {
    let sc = solver_config(cfg, spec, q)?;
    density_from_spectrum(spec, q, &sc).ctx("density solver")
}

fn solved_summary(c: &DensityCurve, spec: &DegenerateSpectrum, q: f64) -> Value {
    let bulk_means: Vec<Option<f64>> = c.edges.iter().map(|&(lo, hi)| c.mean_on(lo, hi)).collect();
    json!({
        "q": q,
        "atoms": atoms_json(spec),
        "mass": c.mass,
        "first_moment": c.moment(1),
        "expected_first_moment": spec.moment(1),
        "edges": c.edges,
        "bulk_means": bulk_means,
        "max_residual": c.max_residual,
    })
}

fn run_solve(cfg: &RunConfig, out: &mut Outputs) -> CliResult<Value> {
    let (spec, q) = configured_spectrum(cfg)?;
    let curve = solve(cfg, &spec, q)?;
    out.density("solved", &curve);
    Ok(solved_summary(&curve, &spec, q))
}

fn mp_params(cfg: &RunConfig) -> CliResult<MPParams> {
    MPParams::new(cfg.mp.q, cfg.mp.sigma).ctx("mp")
}

fn run_mp(cfg: &RunConfig, out: &mut Outputs) -> CliResult<Value> {
    let p = mp_params(cfg)?;
    let curve = p.curve(cfg.mp.points).ctx("mp curve")?;
    out.density("mp", &curve);
    let (lo, hi) = p.edges();
    Ok(json!({ "q": p.q, "sigma": p.sigma, "edges": [lo, hi], "mass": curve.mass }))
}

/// Values from `input.path` (kind `values`) or from simulations.
fn sample_values(cfg: &RunConfig, inputs: &mut Vec<InputDigest>, kind: SampleKind) -> CliResult<Vec<f64>> {
    match &cfg.input.path {
        Some(p) => {
            if cfg.input.kind != InputKind::Values {
                return Err(CliError::Validation("this command reads a sample: set input.kind = \"values\"".into()));
            }
            inputs.push(digest_file(p)?);
            read_values(p)
        }
        None => {
            let spectra = simulated_spectra(cfg)?;
            match kind {
                SampleKind::Largest => Ok(spectra.iter().map(|s| s[s.len() - 1]).collect()),
                SampleKind::Bulk => without_largest(&spectra, cfg.histogram.drop_largest),
            }
        }
    }
}

fn run_fit(cfg: &RunConfig, out: &mut Outputs, inputs: &mut Vec<InputDigest>) -> CliResult<Value> {
    let sample = sample_values(cfg, inputs, SampleKind::Bulk)?;
    let opts = MpFitOptions {
        bins: cfg.fit.bins,
        q_hint: cfg.fit.q_hint,
        sigma_hint: cfg.fit.sigma_hint,
        max_iter: cfg.fit.max_iter,
        restarts: cfg.fit.restarts,
        seed: cfg.seed,
    };
    let fit = mp_fit(FitTarget::Sample(&sample), &opts).ctx("mp fit")?;
    let hist = histogram(&sample, cfg.fit.bins, None).ctx("histogram")?;
    out.density("sample", &hist);
    out.density("mpfit", &fit.params.curve(cfg.mp.points).ctx("mp curve")?);
    Ok(json!({
        "q": fit.params.q,
        "sigma": fit.params.sigma,
        "residual": fit.residual,
        "converged": fit.converged,
        "iterations": fit.iterations,
        "sample_size": sample.len(),
    }))
}

struct Dataset {
    returns: ReturnMatrix,
    tickers: Vec<String>,
    source: &'static str,
}

/// Returns from `input.path`, or one realization of the model.
fn dataset(cfg: &RunConfig, inputs: &mut Vec<InputDigest>, require_input: bool) -> CliResult<Dataset> {
    match &cfg.input.path {
        Some(p) => {
            inputs.push(digest_file(p)?);
            let panel = read_panel(p, cfg.input.kind)?;
            Ok(Dataset {
                returns: panel.returns,
                tickers: panel.tickers,
                source: "input",
            })
        }
        None if require_input => Err(CliError::Validation("this command needs input.path (or --input)".into())),
        None => {
            let model = cfg.model.factor_config(cfg.seed)?;
            let r = simulate(&model).ctx("simulate")?;
            Ok(Dataset {
                tickers: (0..model.n_assets).map(|i| format!("A{i}")).collect(),
                returns: r,
                source: "model",
            })
        }
    }
}

fn correlation(d: &Dataset) -> CliResult<CorrelationEstimate> {
    pearson_estimator(&d.returns.standardize().ctx("standardize")?).ctx("pearson")
}

fn run_estimate(cfg: &RunConfig, out: &mut Outputs, inputs: &mut Vec<InputDigest>) -> CliResult<Value> {
    validate_common(cfg)?;
    let d = dataset(cfg, inputs, true)?;
    let c = correlation(&d)?;
    let eig = c.eigenvalues().ctx("eigenvalues")?;
    let kept = without_largest(std::slice::from_ref(&eig), cfg.histogram.drop_largest)?;
    let hist = histogram(&kept, cfg.histogram.bins, None).ctx("histogram")?;
    out.eigs("estimate", &eig);
    out.density("estimate", &hist);
    let q = c.rect_ratio();
    let mp = MPParams::new(q, 1.0).ctx("mp reference")?;
    Ok(json!({
        "n_assets": d.returns.n_assets(),
        "n_obs": d.returns.n_obs(),
        "q": q,
        "tickers": d.tickers,
        "largest": eig[eig.len() - 1],
        "bulks": bulk_summary(&kept, &hist),
        "mp_reference_edges": mp.edges(),
    }))
}

struct Filtered {
    data: Dataset,
    c: CorrelationEstimate,
    partition: Option<ClusterPartition>,
}

fn filtered(cfg: &RunConfig, inputs: &mut Vec<InputDigest>) -> CliResult<Filtered> {
    let t = cfg.filter.thresholds()?;
    let data = dataset(cfg, inputs, false)?;
    let c = correlation(&data)?;
    let partition =
        ClusterPartition::select(&c, &t, cfg.filter.min_size, cfg.filter.max_size).ctx("cluster selection")?;
    Ok(Filtered { data, c, partition })
}

fn mean_abs_between(c: &CorrelationEstimate, a: &[usize], b: &[usize], same: bool) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for &i in a {
        for &j in b {
            if same && i == j {
                continue;
            }
            sum += c.get(i, j);
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}

/// Mean of the eigenvalues between the small bulk and the large ones.
fn background_mean(eig: &[f64], n_bar: usize, large: usize) -> Option<f64> {
    let lo = n_bar.saturating_sub(1);
    let hi = eig.len().saturating_sub(large);
    (hi > lo).then(|| mean(&eig[lo..hi]))
}

fn overlay_density(
    cfg: &RunConfig,
    p: &ClusterPartition,
    c: &CorrelationEstimate,
    level: BackgroundLevel,
    q: f64,
) -> CliResult<(DegenerateSpectrum, DensityCurve)> {
    let spec = overlay_spectrum(p, c, cfg.filter.large_eig_count, level).ctx("overlay spectrum")?;
    let curve = solve(cfg, &spec, q)?;
    Ok((spec, curve))
}

fn run_filter(cfg: &RunConfig, out: &mut Outputs, inputs: &mut Vec<InputDigest>) -> CliResult<Value> {
    let f = filtered(cfg, inputs)?;
    let Some(p) = f.partition else {
        return Ok(json!({ "source": f.data.source, "cluster": null }));
    };
    let a = assemble(&f.c, &p).ctx("assemble")?;
    let eig = a.eigenvalues().ctx("eigenvalues")?;
    let rho = mean_rho(&f.c, &p.cluster_idx).ctx("mean correlation")?;
    let large = cfg.filter.large_eig_count;
    let bg_mean = background_mean(&eig, p.n_bar(), large);
    let level = match (cfg.filter.background_level, bg_mean) {
        (BackgroundSetting::Empirical, Some(m)) => BackgroundLevel::Empirical(m),
        _ => BackgroundLevel::Unit,
    };
    let lambda2 = match level {
        BackgroundLevel::Unit => 1.0,
        BackgroundLevel::Empirical(v) => v,
    };
    let split = 0.5 * ((1.0 - rho) + lambda2);
    let small: Vec<f64> = eig.iter().copied().filter(|&v| v < split).collect();
    out.eigs("filter", &eig);
    let overlay = if p.background_idx.is_empty() {
        Value::Null
    } else {
        let (spec, curve) = overlay_density(cfg, &p, &f.c, level, a.rect_ratio())?;
        out.density("overlay", &curve);
        solved_summary(&curve, &spec, a.rect_ratio())
    };
    let names = |idx: &[usize]| idx.iter().map(|&i| f.data.tickers[i].clone()).collect::<Vec<_>>();
    Ok(json!({
        "source": f.data.source,
        "n_obs": f.data.returns.n_obs(),
        "cluster": p.cluster_idx,
        "cluster_tickers": names(&p.cluster_idx),
        "background": p.background_idx,
        "background_tickers": names(&p.background_idx),
        "mean_rho": rho,
        "mean_cross_correlation": mean_abs_between(&f.c, &p.cluster_idx, &p.background_idx, false),
        "mean_background_correlation": mean_abs_between(&f.c, &p.background_idx, &p.background_idx, true),
        "eigenvalues": eig,
        "small_bulk_count": small.len(),
        "small_bulk_mean": if small.is_empty() { None } else { Some(mean(&small)) },
        "background_bulk_mean": bg_mean,
        "largest": eig[eig.len() - 1],
        "overlay": overlay,
    }))
}

fn run_bootstrap(cfg: &RunConfig, out: &mut Outputs, inputs: &mut Vec<InputDigest>) -> CliResult<Value> {
    validate_common(cfg)?;
    let f = filtered(cfg, inputs)?;
    let Some(p) = f.partition else {
        return Ok(json!({ "source": f.data.source, "cluster": null }));
    };
    let keep = cfg.bootstrap.keep_background.unwrap_or(p.background_idx.len());
    let spec = BootstrapSpec {
        iterations: cfg.bootstrap.iterations,
        keep_background: keep,
        reshuffle: cfg.bootstrap.reshuffle,
        seed: cfg.seed,
        bins: cfg.histogram.bins,
    };
    let b = bootstrap_spectra(&f.data.returns, &p, &spec).ctx("bootstrap")?;
    let large = cfg.filter.large_eig_count;
    let n_bar = p.n_bar();
    let dim = n_bar + keep;
    if large + n_bar > dim {
        return Err(CliError::Validation(
            "filter.large_eig_count leaves no background eigenvalues in the bootstrap sample".into(),
        ));
    }
    let bulk = without_largest(&b.spectra, large)?;
    let bg: Vec<f64> = b
        .spectra
        .iter()
        .flat_map(|s| s[n_bar.saturating_sub(1)..s.len() - large].iter().copied())
        .collect();
    let bg_mean = if bg.is_empty() { None } else { Some(mean(&bg)) };
    let level = match (cfg.bootstrap.reshuffle, cfg.filter.background_level, bg_mean) {
        (false, BackgroundSetting::Empirical, Some(m)) => BackgroundLevel::Empirical(m),
        _ => BackgroundLevel::Unit,
    };
    let hist = histogram(&bulk, cfg.histogram.bins, None).ctx("histogram")?;
    out.eigs("bootstrap", &b.pooled_values());
    out.density("bootstrap", &hist);
    let sub = ClusterPartition::new(p.cluster_idx.clone(), p.background_idx[..keep].to_vec(), p.source_dim)
        .ctx("bootstrap partition")?;
    let q = dim as f64 / f.data.returns.n_obs() as f64;
    let (overlay, ks) = if keep == 0 {
        (Value::Null, Value::Null)
    } else {
        let (ospec, curve) = overlay_density(cfg, &sub, &f.c, level, q)?;
        out.density("overlay", &curve);
        let cdf = cdf_from_density(&curve).ctx("overlay cdf")?;
        let ks = ks_test(&bulk, &cdf).ctx("ks against overlay")?;
        (solved_summary(&curve, &ospec, q), json!(ks))
    };
    let rho = mean_rho(&f.c, &p.cluster_idx).ctx("mean correlation")?;
    let lambda2 = match level {
        BackgroundLevel::Unit => 1.0,
        BackgroundLevel::Empirical(v) => v,
    };
    let split = 0.5 * ((1.0 - rho) + lambda2);
    let counts: Vec<usize> = b.spectra.iter().map(|s| s.iter().filter(|&&v| v < split).count()).collect();
    let small: Vec<f64> = b.spectra.iter().flat_map(|s| s[..n_bar.saturating_sub(1)].iter().copied()).collect();
    Ok(json!({
        "source": f.data.source,
        "iterations": b.spectra.len(),
        "keep_background": keep,
        "reshuffle": cfg.bootstrap.reshuffle,
        "cluster": p.cluster_idx,
        "mean_rho": rho,
        "small_bulk_counts": { "min": counts.iter().min(), "max": counts.iter().max() },
        "small_bulk_mean": if small.is_empty() { None } else { Some(mean(&small)) },
        "background_bulk_mean": bg_mean,
        "density": curve_summary(&hist),
        "overlay": overlay,
        "ks_vs_overlay": ks,
    }))
}

fn run_test(cfg: &RunConfig, _out: &mut Outputs, inputs: &mut Vec<InputDigest>) -> CliResult<Value> {
    let sample = sample_values(cfg, inputs, cfg.test.sample)?;
    let mut reports: Vec<TestReport> = Vec::new();
    for t in &cfg.test.tests {
        let r = match t {
            TestName::JarqueBera => jarque_bera(&sample).ctx("jarque-bera")?,
            TestName::Lilliefors => lilliefors(&sample).ctx("lilliefors")?,
            TestName::KolmogorovSmirnov => match cfg.test.ks_reference {
                KsReference::NormalFit => {
                    let (m, sd) = normal_fit(&sample).ctx("normal fit")?;
                    ks_normal(&sample, m, sd).ctx("kolmogorov-smirnov")?
                }
                KsReference::Mp => {
                    let curve = mp_params(cfg)?.curve(cfg.mp.points).ctx("mp curve")?;
                    ks_test(&sample, &cdf_from_density(&curve).ctx("mp cdf")?).ctx("kolmogorov-smirnov")?
                }
                KsReference::Solved => {
                    let (spec, q) = configured_spectrum(cfg)?;
                    let curve = solve(cfg, &spec, q)?;
                    ks_test(&sample, &cdf_from_density(&curve).ctx("solved cdf")?).ctx("kolmogorov-smirnov")?
                }
            },
        };
        reports.push(r);
    }
    let (m, sd) = normal_fit(&sample).ctx("normal fit")?;
    Ok(json!({
        "sample_size": sample.len(),
        "mean": m,
        "sd": sd,
        "tests": reports,
    }))
}
