//! Numerical roots of the `N`-coefficient numerators, for the unit-circle
//! observation. Report only; nothing here asserts the observation.

use num_complex::Complex64;
use serde::Serialize;

use super::MomentPoly;

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientZeros {
    pub n_power: u32,
    pub roots: Vec<(f64, f64)>,
    pub max_modulus_deviation: f64,
    pub min_separation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub p: usize,
    pub tol: f64,
    pub per_coefficient: Vec<CoefficientZeros>,
    pub max_modulus_deviation: f64,
    pub min_separation: f64,
    pub within_tol: bool,
}

/// Roots of `Σ c_i z^i` (lowest first) by Aberth–Ehrlich iteration.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let a: Vec<Complex64> = c.iter().map(|v| Complex64::new(v / lead, 0.0)).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for coef in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + coef;
        }
        (p, dp)
    };
    // Cauchy bound for the starting circle
    let radius = 1.0 + a[..n].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius.min(2.0),
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    // polish with Newton
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

pub fn unit_circle_zeros(m: &MomentPoly, tol: f64) -> ZeroReport {
    let p = m.p() as u32;
    let mut per = Vec::new();
    for a in 1..=p {
        let d = (p + 1 - a) as usize;
        let poly = m.n_coefficient(a);
        // numerator Σ c_b κ^{d-b}: coefficient of κ^i is c_{d-i}
        let num: Vec<f64> = (0..=d)
            .map(|i| poly.get(d - i).map(|c| c.to_f64()).unwrap_or(0.0))
            .collect();
        let roots = polynomial_roots(&num);
        let dev = roots
            .iter()
            .map(|r| (r.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        let mut sep = f64::INFINITY;
        for i in 0..roots.len() {
            for j in 0..i {
                sep = sep.min((roots[i] - roots[j]).norm());
            }
        }
        per.push(CoefficientZeros {
            n_power: a,
            roots: roots.iter().map(|r| (r.re, r.im)).collect(),
            max_modulus_deviation: dev,
            min_separation: sep,
        });
    }
    let max_dev = per
        .iter()
        .map(|c| c.max_modulus_deviation)
        .fold(0.0, f64::max);
    let min_sep = per
        .iter()
        .map(|c| c.min_separation)
        .fold(f64::INFINITY, f64::min);
    ZeroReport {
        p: m.p(),
        tol,
        per_coefficient: per,
        max_modulus_deviation: max_dev,
        min_separation: min_sep,
        within_tol: max_dev < tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cyclotomic() {
        // z^4 + z^3 + z^2 + z + 1
        let r = polynomial_roots(&[1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            let p = z.powu(5) - 1.0;
            assert!(p.norm() < 1e-11);
        }
    }

    #[test]
    fn real_roots() {
        // (z - 2)(z + 3) = z² + z − 6
        let mut r: Vec<f64> = polynomial_roots(&[-6.0, 1.0, 1.0])
            .iter()
            .map(|z| z.re)
            .collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] + 3.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }
}
