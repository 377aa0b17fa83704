//! Complex polynomials in ascending coefficient order and the Aberth-Ehrlich
//! simultaneous root finder.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// `p · (a + b x)`.
pub(crate) fn mul_linear(p: &[Complex64], a: Complex64, b: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k] += c * a;
        out[k + 1] += c * b;
    }
    out
}

pub(crate) fn add_into(acc: &mut Vec<Complex64>, p: &[Complex64], scale: Complex64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Complex64::new(0.0, 0.0));
    }
    for (a, &c) in acc.iter_mut().zip(p) {
        *a += scale * c;
    }
}

/// `(p(x), p'(x))` by Horner's scheme.
pub fn eval_with_derivative(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        d = d * x + v;
        v = v * x + c;
    }
    (v, d)
}

/// All roots of `p`, counted with multiplicity. The leading coefficient must
/// be nonzero.
pub fn aberth_roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = p[n];
    if lead.norm() == 0.0 {
        return Err(Error::RootFinding { iterations: 0, degree: n });
    }
    if n == 1 {
        return Ok(vec![-p[0] / p[1]]);
    }

    let center = -p[n - 1] / (lead * n as f64);
    // shifted polynomial bound: radius from |c_k / c_n|^(1/(n-k))
    let radius = (0..n)
        .map(|k| (p[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3 * (1.0 + center.norm()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, th)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, d) = eval_with_derivative(p, z[k]);
            if v.norm() == 0.0 {
                done[k] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += 1.0 / (z[k] - z[j]);
                }
            }
            let den = d - v * s;
            let w = if den.norm() == 0.0 {
                Complex64::new(1e-8 * (1.0 + z[k].norm()), 0.0)
            } else {
                v / den
            };
            z[k] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                done[k] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return Ok(z);
        }
    }
    // Accept if every residual is at rounding level even though steps stalled.
    let scale: f64 = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let ok = z.iter().all(|&r| {
        let (v, _) = eval_with_derivative(p, r);
        let mag: f64 = p.iter().rev().fold(0.0, |acc, c| acc * r.norm() + c.norm());
        v.norm() <= 1e3 * f64::EPSILON * mag.max(scale)
    });
    if ok {
        Ok(z)
    } else {
        Err(Error::RootFinding {
            iterations: MAX_ITER,
            degree: n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        roots
            .iter()
            .fold(vec![c(1.0, 0.0)], |p, &r| mul_linear(&p, -r, c(1.0, 0.0)))
    }

    fn matches(found: &[Complex64], want: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; want.len()];
        found.iter().all(|f| {
            let best = want
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|a, b| (a.1 - f).norm().total_cmp(&(b.1 - f).norm()));
            match best {
                Some((i, w)) if (w - f).norm() < tol => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn recovers_known_roots() {
        let want = [c(1.0, 0.0), c(-2.0, 0.5), c(0.3, -4.0), c(10.0, 0.0), c(0.001, 0.0)];
        let p = from_roots(&want);
        let found = aberth_roots(&p).unwrap();
        assert_eq!(found.len(), 5);
        assert!(matches(&found, &want, 1e-9));
    }

    #[test]
    fn horner_derivative() {
        // 1 + 2x + 3x^2 at x = 2: value 17, derivative 14
        let p = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert_eq!(eval_with_derivative(&p, c(2.0, 0.0)), (c(17.0, 0.0), c(14.0, 0.0)));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(aberth_roots(&[c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert_eq!(aberth_roots(&[c(2.0, 0.0), c(4.0, 0.0)]).unwrap(), vec![c(-0.5, 0.0)]);
        let double = from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        let r = aberth_roots(&double).unwrap();
        assert_eq!(r.len(), 3);
        assert!(matches(&r, &[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)], 1e-6));
    }
}
