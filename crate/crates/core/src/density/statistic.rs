use std::sync::Arc;

use crate::arith::{Rational, Var, X};
use crate::error::DensityError;

use super::hadamard::{finite_part, PolyFn, QuadConfig, SmoothFn};
use super::halfg::HalfGPoly;
use super::smoothed::{polynomial_mean, SmoothedDensity};

/// The function `a` in `A = Σ_j a(λ_j)`.
#[derive(Clone)]
pub enum LinearStatistic {
    /// `Σ c_i x^i`, integrated exactly.
    Polynomial(Vec<Rational>),
    Smooth(Arc<dyn SmoothFn>),
}

impl LinearStatistic {
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        LinearStatistic::Polynomial(c)
    }

    /// Chebyshev `T_k(x)` of the first kind.
    pub fn chebyshev(k: usize) -> Self {
        let mut prev = vec![Rational::one()];
        let mut cur = vec![Rational::zero(), Rational::one()];
        if k == 0 {
            return LinearStatistic::Polynomial(prev);
        }
        for _ in 1..k {
            let mut next = vec![Rational::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c * &Rational::from_int(2);
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= c;
            }
            prev = cur;
            cur = next;
        }
        LinearStatistic::Polynomial(cur)
    }

    /// The same function behind the numeric (quadrature) path.
    pub fn as_smooth(&self) -> Arc<dyn SmoothFn> {
        match self {
            LinearStatistic::Polynomial(c) => {
                Arc::new(PolyFn(c.iter().map(Rational::to_f64).collect()))
            }
            LinearStatistic::Smooth(f) => f.clone(),
        }
    }
}

/// `∫ a ρ̃_l` for a polynomial `a`, exact in ℚ[h, √g^{±1}].
pub fn polynomial_statistic_exact(coeffs: &[Rational], d: &SmoothedDensity) -> HalfGPoly {
    let mut out = HalfGPoly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&polynomial_mean(d, k as u32).scale(c));
        }
    }
    out
}

/// `F(y) = ½[f(√y) + f(−√y)]` with `f(u) = a(2√g u) P(2√g u)`.
struct EvenPart<'a> {
    a: &'a dyn SmoothFn,
    /// bulk numerator as a polynomial in x at fixed g, h
    p: Vec<f64>,
    scale: f64,
}

impl EvenPart<'_> {
    /// `f^{(j)}(u)` for `j ≤ k`.
    fn f_derivs(&self, u: f64, k: usize) -> Vec<f64> {
        let x = self.scale * u;
        let ad = self.a.derivatives(x, k);
        let pd = PolyFn(self.p.clone()).derivatives(x, k);
        let mut out = Vec::with_capacity(k + 1);
        let mut binom = vec![1.0f64];
        for j in 0..=k {
            if j > 0 {
                let mut next = vec![1.0; j + 1];
                for i in 1..j {
                    next[i] = binom[i - 1] + binom[i];
                }
                binom = next;
            }
            let leib: f64 = (0..=j).map(|i| binom[i] * ad[i] * pd[j - i]).sum();
            out.push(leib * self.scale.powi(j as i32));
        }
        out
    }
}

impl SmoothFn for EvenPart<'_> {
    fn order(&self) -> usize {
        self.a.order()
    }

    fn derivatives(&self, y: f64, k: usize) -> Vec<f64> {
        let u0 = y.sqrt();
        if k == 0 {
            let v = 0.5 * (self.f_derivs(u0, 0)[0] + self.f_derivs(-u0, 0)[0]);
            return vec![v];
        }
        // √(y + t) − √y = Σ_{i≥1} w_i t^i
        let mut w = vec![0.0; k + 1];
        let mut b = 1.0;
        for i in 1..=k {
            b *= (0.5 - (i - 1) as f64) / i as f64;
            w[i] = u0 * b * y.powi(-(i as i32));
        }
        let fp = self.f_derivs(u0, k);
        let fm = self.f_derivs(-u0, k);
        let mut series = vec![0.0; k + 1];
        let mut wpow = vec![0.0; k + 1];
        wpow[0] = 1.0;
        let mut fact = 1.0;
        for j in 0..=k {
            if j > 0 {
                fact *= j as f64;
                let mut next = vec![0.0; k + 1];
                for (i, a) in wpow.iter().enumerate() {
                    for (m, b) in w.iter().enumerate().skip(1) {
                        if i + m <= k {
                            next[i + m] += a * b;
                        }
                    }
                }
                wpow = next;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = 0.5 * (fp[j] + sign * fm[j]) / fact;
            for i in 0..=k {
                series[i] += c * wpow[i];
            }
        }
        let mut fact = 1.0;
        series
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if i > 0 {
                    fact *= i as f64;
                }
                s * fact
            })
            .collect()
    }
}

/// `∫ a ρ̃_l` at numeric `g` and `h`, with the bulk by Hadamard quadrature.
pub fn statistic_order_value(
    a: &dyn SmoothFn,
    d: &SmoothedDensity,
    g: f64,
    h: f64,
    cfg: &QuadConfig,
) -> Result<f64, DensityError> {
    let s = g.sqrt();
    let mut total = 0.0;
    if let Some(top) = d.max_delta_order() {
        if a.order() < top {
            return Err(DensityError::InsufficientSmoothness {
                needed: top,
                available: a.order(),
            });
        }
        let plus = a.derivatives(2.0 * s, top);
        let minus = a.derivatives(-2.0 * s, top);
        for (&j, c) in d.delta() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += c.eval_f64(g, h) * sign * (plus[j] + sign * minus[j]);
        }
    }
    if let Some((e, num)) = d.bulk() {
        let mut vals = [0.0; crate::arith::NVARS];
        vals[Var::G.index()] = g;
        vals[Var::H.index()] = h;
        let p: Vec<f64> = num.coeffs_in(X).iter().map(|c| c.eval_f64(&vals)).collect();
        let n = (-(e as i64) - 1) / 2;
        let f = EvenPart {
            a,
            p,
            scale: 2.0 * s,
        };
        let i = finite_part(&f, n, n.max(0) as usize, cfg)?;
        total += (2.0 * s).powi(1 + e) * i / std::f64::consts::PI;
    }
    Ok(total)
}

/// Coefficients `c_l` of `⟨Σ_j a(λ_j)⟩ = Σ_l N^{1−l} c_l` in the starred
/// ensemble with coupling `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct StatisticSeries {
    pub per_order: Vec<f64>,
    /// Present for polynomial statistics at rational parameters.
    pub exact: Option<Vec<Rational>>,
}

impl StatisticSeries {
    pub fn at(&self, n: f64) -> f64 {
        self.per_order
            .iter()
            .enumerate()
            .map(|(l, c)| c * n.powi(1 - l as i32))
            .sum()
    }
}

/// `g^{l−1} κ^{−l/2} v` with `h = √κ − 1/√κ`, exactly.
fn exact_coefficient(
    v: &HalfGPoly,
    l: usize,
    g: &Rational,
    kappa: &Rational,
) -> Result<Rational, DensityError> {
    let mut acc = Rational::zero();
    let km1 = kappa - &Rational::one();
    for (&(a, s), c) in v.terms() {
        // h^a κ^{−l/2} = (κ − 1)^a κ^{−(a+l)/2}
        if s % 2 != 0 || (a as usize + l) % 2 != 0 {
            return Err(DensityError::IrrationalValue(format!(
                "term {c} h^{a} g^({s}/2) at order {l}"
            )));
        }
        let kp = -((a as i32 + l as i32) / 2);
        acc += c * &(km1.pow(a as i32) * kappa.pow(kp) * g.pow(s / 2 + l as i32 - 1));
    }
    Ok(acc)
}

/// Mean of a linear statistic through the densities `ρ̃_0..ρ̃_{l_max}`.
/// Polynomial statistics are integrated exactly; smooth ones by quadrature.
pub fn linear_statistic_mean(
    a: &LinearStatistic,
    densities: &[SmoothedDensity],
    g: &Rational,
    kappa: &Rational,
    cfg: &QuadConfig,
) -> Result<StatisticSeries, DensityError> {
    let gf = g.to_f64();
    let kf = kappa.to_f64();
    let hf = kf.sqrt() - 1.0 / kf.sqrt();
    let weight = |l: usize| gf.powi(l as i32 - 1) * kf.powf(-(l as f64) / 2.0);
    match a {
        LinearStatistic::Polynomial(c) => {
            let vals: Vec<HalfGPoly> = densities
                .iter()
                .map(|d| polynomial_statistic_exact(c, d))
                .collect();
            let exact: Result<Vec<Rational>, _> = vals
                .iter()
                .enumerate()
                .map(|(l, v)| exact_coefficient(v, l, g, kappa))
                .collect();
            let per_order = vals
                .iter()
                .enumerate()
                .map(|(l, v)| v.eval_f64(gf, hf) * weight(l))
                .collect();
            Ok(StatisticSeries {
                per_order,
                exact: exact.ok(),
            })
        }
        LinearStatistic::Smooth(f) => {
            let per_order = densities
                .iter()
                .enumerate()
                .map(|(l, d)| Ok(statistic_order_value(f.as_ref(), d, gf, hf, cfg)? * weight(l)))
                .collect::<Result<Vec<_>, DensityError>>()?;
            Ok(StatisticSeries {
                per_order,
                exact: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::density_from_resolvent;

    #[test]
    fn chebyshev_coefficients() {
        let LinearStatistic::Polynomial(c) = LinearStatistic::chebyshev(4) else {
            unreachable!()
        };
        let want: Vec<Rational> = [1, 0, -8, 0, 8]
            .iter()
            .map(|&v| Rational::from_int(v))
            .collect();
        assert_eq!(c, want);
    }

    #[test]
    fn even_part_derivatives() {
        // f(u) = u⁴ at scale 1 → F(y) = y², F'(1) = 2, F''(1) = 2
        let a = PolyFn(vec![1.0]);
        let f = EvenPart {
            a: &a,
            p: vec![0.0, 0.0, 0.0, 0.0, 1.0],
            scale: 1.0,
        };
        let d = f.derivatives(1.0, 3);
        for (got, want) in d.iter().zip([1.0, 2.0, 2.0, 0.0]) {
            assert!((got - want).abs() < 1e-12, "{d:?}");
        }
    }

    #[test]
    fn semicircle_second_moment() {
        let d0 = density_from_resolvent(&"(x - y)/2".parse().unwrap(), 0).unwrap();
        let v = statistic_order_value(
            &PolyFn(vec![0.0, 0.0, 1.0]),
            &d0,
            0.25,
            0.0,
            &QuadConfig::default(),
        )
        .unwrap();
        // g² C_1 = 1/16
        assert!((v - 0.0625).abs() < 1e-12, "{v}");
    }
}
