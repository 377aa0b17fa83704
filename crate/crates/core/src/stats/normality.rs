use statrs::distribution::{ContinuousCDF, Normal};

use super::cdf::Cdf;
use super::TestReport;
use crate::error::{check_param, Error, Result};
use crate::linalg::returns::mean_var;

fn sorted_checked(sample: &[f64], min: usize, what: &'static str) -> Result<Vec<f64>> {
    if sample.len() < min {
        return Err(Error::TooShort {
            what,
            len: sample.len(),
            min,
        });
    }
    if let Some(p) = sample.iter().position(|x| x.is_nan()) {
        return Err(Error::NanInSample(p));
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `sup_x |F_n(x) − F(x)|` with the right-continuous empirical CDF; tied
/// values form a single jump.
pub fn ks_statistic(sorted: &[f64], cdf: &impl Cdf) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf.cdf(x);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

/// Kolmogorov-Smirnov test with asymptotic critical values `c(α) / √n`.
pub fn ks_test(sample: &[f64], cdf: &impl Cdf) -> Result<TestReport> {
    let v = sorted_checked(sample, 10, "KS sample")?;
    let d = ks_statistic(&v, cdf);
    let n = v.len();
    let rn = (n as f64).sqrt();
    Ok(TestReport::new("kolmogorov-smirnov", d, n, |a| ks_coefficient(a) / rn))
}

fn ks_coefficient(alpha: f64) -> f64 {
    match alpha {
        a if a == 0.10 => 1.224,
        a if a == 0.05 => 1.358,
        _ => 1.628,
    }
}

fn central_moments(v: &[f64]) -> (f64, f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in v {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

fn zero_variance() -> Error {
    Error::InvalidParameter {
        name: "sample variance",
        value: 0.0,
        reason: "sample has zero variance",
    }
}

/// `JB = n (S² / 6 + (K − 3)² / 24)`, compared with χ²(2) quantiles.
pub fn jarque_bera(sample: &[f64]) -> Result<TestReport> {
    let v = sorted_checked(sample, 20, "Jarque-Bera sample")?;
    let (_, m2, m3, m4) = central_moments(&v);
    if !(m2 > 0.0) {
        return Err(zero_variance());
    }
    let s = m3 / m2.powf(1.5);
    let k = m4 / (m2 * m2);
    let n = v.len();
    let jb = n as f64 * (s * s / 6.0 + (k - 3.0) * (k - 3.0) / 24.0);
    // χ²(2) quantile at 1 − α is −2 ln α
    Ok(TestReport::new("jarque-bera", jb, n, |a| -2.0 * a.ln()))
}

/// KS distance to a normal law with the sample's own mean and standard
/// deviation; critical values `0.805, 0.886, 1.031` over `√n`.
pub fn lilliefors(sample: &[f64]) -> Result<TestReport> {
    let v = sorted_checked(sample, 20, "Lilliefors sample")?;
    let (mean, sd) = normal_fit(&v)?;
    if !(sd > 0.0) {
        return Err(zero_variance());
    }
    let normal = Normal::new(mean, sd).map_err(|_| zero_variance())?;
    let d = ks_statistic(&v, &|x: f64| normal.cdf(x));
    let n = v.len();
    let rn = (n as f64).sqrt();
    Ok(TestReport::new("lilliefors", d, n, |a| {
        let c = match a {
            a if a == 0.10 => 0.805,
            a if a == 0.05 => 0.886,
            _ => 1.031,
        };
        c / rn
    }))
}

/// KS test against a normal law with the given mean and standard deviation.
pub fn ks_normal(sample: &[f64], mean: f64, sd: f64) -> Result<TestReport> {
    check_param("sd", sd, sd > 0.0 && sd.is_finite(), "must be positive")?;
    check_param("mean", mean, mean.is_finite(), "must be finite")?;
    let normal = Normal::new(mean, sd).map_err(|_| zero_variance())?;
    ks_test(sample, &|x: f64| normal.cdf(x))
}

/// Sample mean and standard deviation (denominator `n − 1`).
pub fn normal_fit(sample: &[f64]) -> Result<(f64, f64)> {
    if sample.len() < 2 {
        return Err(Error::TooShort {
            what: "normal fit sample",
            len: sample.len(),
            min: 2,
        });
    }
    if let Some(p) = sample.iter().position(|x| x.is_nan()) {
        return Err(Error::NanInSample(p));
    }
    let (mean, var) = mean_var(sample);
    Ok((mean, var.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Decision;

    fn std_normal(x: f64) -> f64 {
        Normal::new(0.0, 1.0).unwrap().cdf(x)
    }

    #[test]
    fn ks_critical_values_at_5000() {
        let sample: Vec<f64> = (0..5000).map(|i| (i as f64 + 0.5) / 5000.0).collect();
        let r = ks_test(&sample, &|x: f64| x.clamp(0.0, 1.0)).unwrap();
        let cv: Vec<f64> = r.critical_values.iter().map(|c| c.value).collect();
        for (got, want) in cv.iter().zip([1.73e-2, 1.92e-2, 2.30e-2]) {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
        assert!((r.statistic - 0.5 / 5000.0).abs() < 1e-15);
        assert!(cv[2] > cv[1] && cv[1] > cv[0]);
    }

    #[test]
    fn ks_shifted_sample_rejects() {
        let sample: Vec<f64> = (1..=1000)
            .map(|i| {
                let p = i as f64 / 1001.0;
                statrs::distribution::Normal::new(0.5, 1.0).unwrap().inverse_cdf(p)
            })
            .collect();
        let r = ks_test(&sample, &std_normal).unwrap();
        assert!(r.critical_values.iter().all(|c| c.decision == Decision::Reject));
    }

    #[test]
    fn ks_normal_matches_closure() {
        let s: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() * 2.0 + 1.0).collect();
        let a = ks_normal(&s, 1.0, 2.0).unwrap().statistic;
        let n = Normal::new(1.0, 2.0).unwrap();
        let b = ks_test(&s, &|x: f64| n.cdf(x)).unwrap().statistic;
        assert_eq!(a, b);
        assert!(ks_normal(&s, 0.0, 0.0).is_err());
    }

    #[test]
    fn ks_constant_sample() {
        // the statistic is max(F(x0), 1 - F(x0)) for a point mass at x0
        let r = ks_test(&[0.3; 10], &std_normal).unwrap();
        let f = std_normal(0.3);
        assert!((r.statistic - f.max(1.0 - f)).abs() < 1e-15);
        assert!(ks_test(&[1.0; 9], &std_normal).is_err());
        let mut bad = vec![0.0; 12];
        bad[4] = f64::NAN;
        assert_eq!(ks_test(&bad, &std_normal).unwrap_err(), Error::NanInSample(4));
    }

    #[test]
    fn ks_handles_ties() {
        // two tied values at 0.5 against U(0, 1): jump from 0.2 to 0.6 in ECDF of 5 values
        let s = [0.1, 0.5, 0.5, 0.8, 0.9, 0.05, 0.2, 0.3, 0.6, 0.95];
        let mut v = s.to_vec();
        v.sort_by(f64::total_cmp);
        let brute = {
            // dense evaluation of sup |F_n - F| including left limits
            let mut d: f64 = 0.0;
            for k in 0..=100_000 {
                let x = k as f64 / 100_000.0;
                let fx = v.iter().filter(|&&y| y <= x).count() as f64 / 10.0;
                let fl = v.iter().filter(|&&y| y < x).count() as f64 / 10.0;
                d = d.max((fx - x).abs()).max((fl - x).abs());
            }
            d
        };
        let got = ks_test(&s, &|x: f64| x.clamp(0.0, 1.0)).unwrap().statistic;
        assert!((got - brute).abs() < 1e-4);
    }

    #[test]
    fn jarque_bera_values() {
        let r = jarque_bera(&[1.0; 30].iter().enumerate().map(|(i, _)| if i % 2 == 0 { -1.0 } else { 1.0 }).collect::<Vec<_>>()).unwrap();
        // S = 0, K = 1: JB = n * 4 / 24
        assert!((r.statistic - 30.0 * 4.0 / 24.0).abs() < 1e-12);
        let cv: Vec<f64> = r.critical_values.iter().map(|c| c.value).collect();
        for (got, want) in cv.iter().zip([4.605, 5.992, 9.210]) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
        assert!(jarque_bera(&[2.0; 25]).is_err());
        assert!(jarque_bera(&[2.0; 5]).is_err());
    }

    #[test]
    fn lilliefors_is_affine_invariant() {
        let s: Vec<f64> = (0..200).map(|i| ((i * 7919) % 211) as f64 / 13.0 + (i as f64).sin()).collect();
        let a = lilliefors(&s).unwrap();
        let t: Vec<f64> = s.iter().map(|x| 3.5 * x - 12.0).collect();
        let b = lilliefors(&t).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-12);
        let r = lilliefors(&vec![0.0; 5000].iter().enumerate().map(|(i, _)| i as f64).collect::<Vec<_>>()).unwrap();
        assert!((r.critical_value(0.10).unwrap() - 1.14e-2).abs() < 1e-4);
        assert!((r.critical_value(0.05).unwrap() - 1.25e-2).abs() < 1e-4);
        let cv01 = r.critical_value(0.01).unwrap();
        assert!((cv01 - 1.56e-2).abs() <= 0.1 * 1.56e-2);
    }

    #[test]
    fn normal_fit_values() {
        assert_eq!(normal_fit(&[1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        let (m, s) = normal_fit(&[0.0, 2.0]).unwrap();
        assert_eq!(m, 1.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
        assert!(normal_fit(&[1.0]).is_err());
    }
}
