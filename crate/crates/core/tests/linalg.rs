use corrspec::linalg::{log_returns, pearson_estimator, sym_eigen, Matrix, ReturnMatrix};
use corrspec::rng::stream_rng;
use corrspec::histogram;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn panel(n: usize, t: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, t), n)
}

fn symmetric(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            v[a * n + b]
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pearson_is_symmetric_psd_with_trace_n(rows in (2usize..8, 12usize..40).prop_flat_map(|(n, t)| panel(n, t))) {
        let r = ReturnMatrix::from_rows(&rows).unwrap();
        let Ok(z) = r.standardize() else { return Ok(()) };
        let c = pearson_estimator(&z).unwrap();
        let n = c.dim();
        let t = z.n_obs() as f64;
        prop_assert!(c.matrix().max_asymmetry().2 == 0.0);
        // with the T-1 standard deviation the diagonal is (T-1)/T
        let ev = c.eigenvalues().unwrap();
        prop_assert!(ev[0] > -1e-10);
        let sum: f64 = ev.iter().sum();
        prop_assert!((sum - c.matrix().trace()).abs() < 1e-9);
        prop_assert!((c.matrix().trace() - n as f64 * (t - 1.0) / t).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant(m in (1usize..=6).prop_flat_map(symmetric)) {
        let e = sym_eigen(&m, true).unwrap();
        let n = m.rows();
        let sum: f64 = e.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace()).abs() < 1e-9);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
        let det = cofactor_det(&rows);
        let prod: f64 = e.eigenvalues.iter().product();
        prop_assert!((prod - det).abs() < 1e-8 * (1.0 + det.abs()));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenpairs_satisfy_definition(m in (2usize..=90).prop_flat_map(symmetric)) {
        let e = sym_eigen(&m, true).unwrap();
        let scale = m.max_abs().max(1.0);
        for j in 0..m.rows() {
            let v = e.eigenvector(j).unwrap();
            let av = m.mul_vec(&v);
            let err = av.iter().zip(&v).map(|(a, x)| (a - e.eigenvalues[j] * x).abs()).fold(0.0, f64::max);
            prop_assert!(err < 1e-9 * scale * m.rows() as f64);
        }
    }

    #[test]
    fn log_returns_round_trip(start in 0.5f64..200.0, steps in prop::collection::vec(-0.2f64..0.2, 1..50)) {
        let mut prices = vec![start];
        for s in &steps {
            let last = *prices.last().unwrap();
            prices.push(last * s.exp());
        }
        let r = log_returns(&prices).unwrap();
        prop_assert_eq!(r.len(), steps.len());
        let mut p = start;
        for (x, want) in r.iter().zip(&prices[1..]) {
            p *= x.exp();
            prop_assert!((p - want).abs() < 1e-9 * want);
        }
    }
}

#[test]
fn histogram_of_normals_tracks_pdf() {
    let mut rng = stream_rng(5, 0);
    let v: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
    let h = histogram(&v, 80, Some((-4.0, 4.0))).unwrap();
    for (x, r) in h.lambda.iter().zip(&h.rho) {
        let pdf = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((r - pdf).abs() < 0.02, "x={x} hist={r} pdf={pdf}");
    }
}

#[test]
fn independent_rows_are_nearly_uncorrelated() {
    let (n, t) = (50, 5000);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut rng = stream_rng(17, i as u64);
            (0..t).map(|_| rng.sample(StandardNormal)).collect()
        })
        .collect();
    let c = pearson_estimator(&ReturnMatrix::from_rows(&rows).unwrap().standardize().unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(c.get(i, j).abs());
            }
        }
    }
    assert!(worst < 0.1, "max off-diagonal {worst}");
    assert!((c.rect_ratio() - 0.01).abs() < 1e-15);
}
