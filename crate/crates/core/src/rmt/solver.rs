//! Sample-spectrum moment generating function `m_c(z)` from a true spectrum.
//!
//! With `u = 1 + q m` and `Z = z / u`, the relation `m = M_C(Z)` becomes
//!
//! ```text
//! P(u) = (u − 1) Π_j (z − Λ_j u) − q Σ_i w_i Λ_i u Π_{j≠i} (z − Λ_j u) = 0,
//! ```
//!
//! a polynomial of degree `L + 1` whose leading coefficient `(−1)^L Π Λ_j`
//! does not depend on `q`. All roots are found at once and the physical one
//! is picked by the admissibility rules below.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{add_into, aberth_roots, mul_linear};
use super::spectrum::DegenerateSpectrum;
use crate::error::{check_param, Error, Result};

const POLISH_STEPS: usize = 12;
const RELAXED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSolution {
    pub m: Complex64,
    /// Every root of the polynomial, as values of `m`.
    pub roots: Vec<Complex64>,
    /// `|M_C(z / (1 + q m)) − m|` at the selected root.
    pub residual: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polynomial_in_u(spec: &DegenerateSpectrum, q: f64, z: Complex64) -> Vec<Complex64> {
    let atoms = spec.atoms();
    let factor = |j: usize| (z, c(-atoms[j].value, 0.0));
    let all = (0..atoms.len()).fold(vec![c(1.0, 0.0)], |p, j| {
        let (a, b) = factor(j);
        mul_linear(&p, a, b)
    });
    let mut out = mul_linear(&all, c(-1.0, 0.0), c(1.0, 0.0));
    for (i, atom) in atoms.iter().enumerate() {
        let mut others = vec![c(0.0, 0.0), c(1.0, 0.0)];
        for j in (0..atoms.len()).filter(|&j| j != i) {
            let (a, b) = factor(j);
            others = mul_linear(&others, a, b);
        }
        add_into(&mut out, &others, c(-q * atom.weight * atom.value, 0.0));
    }
    out
}

/// `f(m) = m − Σ w_i Λ_i u / (z − Λ_i u)` and `f'(m)`.
fn fixed_point(spec: &DegenerateSpectrum, q: f64, z: Complex64, m: Complex64) -> (Complex64, Complex64) {
    let u = 1.0 + q * m;
    let mut f = m;
    let mut df = c(1.0, 0.0);
    for a in spec.atoms() {
        let d = z - a.value * u;
        let wl = a.weight * a.value;
        f -= wl * u / d;
        df -= wl * q * z / (d * d);
    }
    (f, df)
}

fn polish(spec: &DegenerateSpectrum, q: f64, z: Complex64, mut m: Complex64) -> Complex64 {
    let (mut f, mut df) = fixed_point(spec, q, z, m);
    for _ in 0..POLISH_STEPS {
        if df.norm() == 0.0 || !f.norm().is_finite() {
            break;
        }
        let next = m - f / df;
        let (f2, df2) = fixed_point(spec, q, z, next);
        if !(f2.norm() < f.norm()) {
            break;
        }
        let step = (next - m).norm();
        m = next;
        f = f2;
        df = df2;
        if step <= 2.0 * f64::EPSILON * m.norm() {
            break;
        }
    }
    m
}

/// Solves for `m_c(z)`, `Im z > 0`.
///
/// A root is admissible when `Im m < 0` and `Im(z / (1 + q m)) > 0`. If
/// exactly one root qualifies it is returned. Otherwise (ties from rounding
/// near the real axis) the candidate closest to `prev`, or to the large-`z`
/// asymptote `Σ w_i Λ_i / z` when no `prev` is given, is chosen.
pub fn solve_mc(spec: &DegenerateSpectrum, q: f64, z: Complex64, prev: Option<Complex64>) -> Result<Complex64> {
    Ok(solve_mc_detailed(spec, q, z, prev)?.m)
}

pub fn solve_mc_detailed(
    spec: &DegenerateSpectrum,
    q: f64,
    z: Complex64,
    prev: Option<Complex64>,
) -> Result<MSolution> {
    check_param("q", q, q > 0.0 && q.is_finite(), "must be positive")?;
    check_param("Im z", z.im, z.im > 0.0 && z.re.is_finite(), "must be positive")?;

    let poly = polynomial_in_u(spec, q, z);
    let degree = spec.len() + 1;
    let u_roots = aberth_roots(&poly)?;
    if u_roots.len() != degree {
        return Err(Error::RootFinding {
            iterations: 0,
            degree: u_roots.len(),
        });
    }
    let roots: Vec<Complex64> = u_roots
        .iter()
        .map(|&u| polish(spec, q, z, (u - 1.0) / q))
        .collect();

    let image = |m: Complex64| z / (1.0 + q * m);
    let strict: Vec<usize> = (0..degree)
        .filter(|&k| roots[k].im < 0.0 && image(roots[k]).im > 0.0)
        .collect();
    let candidates: Vec<usize> = match strict.len() {
        1 => strict.clone(),
        0 => (0..degree)
            .filter(|&k| {
                let (m, zz) = (roots[k], image(roots[k]));
                m.im <= RELAXED_TOL * (1.0 + m.norm()) && zz.im >= -RELAXED_TOL * (1.0 + zz.norm())
            })
            .collect(),
        _ => strict.clone(),
    };
    let reference = prev.unwrap_or_else(|| spec.moment(1) / z);
    let pick = candidates
        .iter()
        .copied()
        .min_by(|&a, &b| (roots[a] - reference).norm().total_cmp(&(roots[b] - reference).norm()))
        .ok_or_else(|| Error::BranchSelection {
            z,
            roots: roots.clone(),
            detail: "no root has Im m <= 0 with Im Z >= 0".into(),
        })?;
    let m = roots[pick];
    let residual = fixed_point(spec, q, z, m).0.norm();
    Ok(MSolution { m, roots, residual })
}
