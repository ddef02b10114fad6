//! Finite-part integrals `∫₀¹ y^{−1/2} (1−y)^{−n−1/2} F(y) dy`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::arith::rational::gamma_half_over_sqrt_pi;
use crate::error::DensityError;

/// A function with explicitly supplied derivatives.
pub trait SmoothFn: Send + Sync {
    /// Highest derivative order available.
    fn order(&self) -> usize;
    /// `[f(x), f'(x), …, f^{(k)}(x)]` for `k ≤ order()`.
    fn derivatives(&self, x: f64, k: usize) -> Vec<f64>;

    fn value(&self, x: f64) -> f64 {
        self.derivatives(x, 0)[0]
    }
}

/// Polynomial `Σ c_i x^i`; every derivative is available.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFn(pub Vec<f64>);

impl SmoothFn for PolyFn {
    fn order(&self) -> usize {
        usize::MAX
    }

    fn derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        let mut c = self.0.clone();
        let mut out = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            out.push(c.iter().rev().fold(0.0, |acc, a| acc * x + a));
            c = c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| i as f64 * a)
                .collect();
        }
        out
    }
}

/// Wraps a closure returning value and derivatives through `order`.
pub struct FnHandle<F> {
    order: usize,
    f: F,
}

impl<F> FnHandle<F>
where
    F: Fn(f64, usize) -> Vec<f64> + Send + Sync,
{
    pub fn new(order: usize, f: F) -> Self {
        FnHandle { order, f }
    }
}

impl<F> SmoothFn for FnHandle<F>
where
    F: Fn(f64, usize) -> Vec<f64> + Send + Sync,
{
    fn order(&self) -> usize {
        self.order
    }

    fn derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        assert!(
            k <= self.order,
            "derivative {k} beyond declared order {}",
            self.order
        );
        (self.f)(x, k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: usize,
    pub max_intervals: usize,
    /// `1 − y` below which the subtracted integrand is evaluated through the
    /// integral form of the Taylor remainder instead of a cancelling difference.
    pub remainder_radius: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_depth: 40,
            max_intervals: 4000,
            remainder_radius: 0.5,
        }
    }
}

// Kronrod 15-point nodes and weights with the embedded 7-point Gauss rule.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// `(integral, error estimate, ∫ magnitude)` on `[a, b]` for an integrand
/// returning `(value, magnitude of the terms it was computed from)`.
fn gk15<F: Fn(f64) -> (f64, f64)>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (fc, mc) = f(c);
    let mut kron = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WK[7] * mc;
    for i in 0..7 {
        let dx = h * XK[i];
        let ((l, ml), (r, mr)) = (f(c - dx), f(c + dx));
        kron += WK[i] * (l + r);
        abs += WK[i] * (ml + mr);
        if i % 2 == 1 {
            gauss += WG[i / 2] * (l + r);
        }
    }
    (kron * h, ((kron - gauss) * h).abs(), abs * h.abs())
}

/// Globally adaptive G7K15 on `[a, b]`: the interval with the largest error
/// estimate is bisected until the total meets the tolerance.
pub fn adaptive_gk15<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<f64, DensityError> {
    adaptive_scaled(
        |x| {
            let v = f(x);
            (v, v.abs())
        },
        a,
        b,
        cfg,
    )
}

/// As [`adaptive_gk15`]; error estimates below ~100 ulp of the integrated
/// magnitude count as converged.
fn adaptive_scaled<F: Fn(f64) -> (f64, f64)>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<f64, DensityError> {
    struct Piece {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
        abs: f64,
        depth: usize,
    }
    let (val, err, abs) = gk15(&f, a, b);
    let mut pieces = vec![Piece {
        a,
        b,
        val,
        err,
        abs,
        depth: 0,
    }];
    loop {
        let total: f64 = pieces.iter().map(|p| p.val).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        let abs: f64 = pieces.iter().map(|p| p.abs).sum();
        let floor = 100.0 * f64::EPSILON * abs;
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()).max(floor) {
            return Ok(total);
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one piece");
        let p = pieces.swap_remove(worst);
        if p.depth >= cfg.max_depth || pieces.len() >= cfg.max_intervals || !err.is_finite() {
            return Err(DensityError::QuadratureNonConvergence {
                depth: p.depth,
                estimate: total,
                error: err,
            });
        }
        let m = 0.5 * (p.a + p.b);
        for (a, b) in [(p.a, m), (m, p.b)] {
            let (val, err, abs) = gk15(&f, a, b);
            pieces.push(Piece {
                a,
                b,
                val,
                err,
                abs,
                depth: p.depth + 1,
            });
        }
    }
}

/// `B(1/2, q − n + 1/2)` for `q ≥ n`; `q − n + 1 ≤ 0` gives the zero finite part.
fn beta_half(q: i64, n: i64) -> f64 {
    let d = q - n;
    if d < 0 {
        return 0.0;
    }
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    PI * gamma_half_over_sqrt_pi(d).to_f64() / fact
}

/// Finite part with `α = n + 1/2` (`n ≥ −1`) and `terms` Taylor terms of
/// `F` at `y = 1` subtracted; `F^{(terms)}` must be available. Subtracted
/// terms with `q ≥ n` are added back through their Beta values, so the
/// result does not depend on `terms`.
pub(crate) fn finite_part(
    f: &dyn SmoothFn,
    n: i64,
    terms: usize,
    cfg: &QuadConfig,
) -> Result<f64, DensityError> {
    let min = n.max(0) as usize;
    if terms < min {
        return Err(DensityError::SubtractionOrder { terms, min });
    }
    if f.order() < terms {
        return Err(DensityError::InsufficientSmoothness {
            needed: terms,
            available: f.order(),
        });
    }
    let at_one = f.derivatives(1.0, terms.saturating_sub(1));
    let mut taylor = Vec::with_capacity(terms);
    let mut fact = 1.0;
    for (q, d) in at_one.iter().take(terms).enumerate() {
        if q > 0 {
            fact *= q as f64;
        }
        taylor.push(d / fact);
    }
    let fact_m1: f64 = (1..terms).map(|i| i as f64).product();
    // y = sin²θ: y^{−1/2}(1−y)^{−n−1/2} dy = 2 cos^{−2n}θ dθ
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let one_minus = c * c;
        let y = s * s;
        if terms == 0 {
            let v = 2.0 * f.value(y) * c.powi(-2 * n as i32);
            return (v, v.abs());
        }
        if one_minus < cfg.remainder_radius {
            // F − T = (y−1)^m/(m−1)! ∫₀¹ (1−t)^{m−1} F^{(m)}(1 + t(y−1)) dt
            let (mut inner, mut mag) = (0.0, 0.0);
            for &(t, w) in &GL16 {
                let t = 0.5 * (1.0 + t);
                let d = f.derivatives(1.0 - t * one_minus, terms)[terms];
                let term = 0.5 * w * (1.0 - t).powi(terms as i32 - 1) * d;
                inner += term;
                mag += term.abs();
            }
            let sign = if terms % 2 == 0 { 1.0 } else { -1.0 };
            let amp = 2.0 / fact_m1 * c.powi(2 * (terms as i32 - n as i32));
            (sign * inner * amp, mag * amp)
        } else {
            let t = -one_minus;
            let sub = taylor.iter().rev().fold(0.0, |acc, a| acc * t + a);
            let mag = taylor
                .iter()
                .rev()
                .fold(0.0, |acc, a| acc * one_minus + a.abs());
            let fy = f.value(y);
            let amp = 2.0 * c.powi(-2 * n as i32);
            ((fy - sub) * amp, (fy.abs() + mag) * amp)
        }
    };
    let mut total = adaptive_scaled(integrand, 0.0, FRAC_PI_2, cfg)?;
    for q in n.max(0)..terms as i64 {
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * taylor[q as usize] * beta_half(q, n);
    }
    Ok(total)
}

// 16-point Gauss–Legendre on [−1, 1], (node, weight) pairs.
const GL16: [(f64, f64); 16] = [
    (-0.989_400_934_991_649_9, 0.027_152_459_411_754_09),
    (-0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (-0.865_631_202_387_831_8, 0.095_158_511_682_492_78),
    (-0.755_404_408_355_003, 0.124_628_971_255_533_9),
    (-0.617_876_244_402_643_8, 0.149_595_988_816_576_7),
    (-0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (-0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (-0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (0.617_876_244_402_643_8, 0.149_595_988_816_576_7),
    (0.755_404_408_355_003, 0.124_628_971_255_533_9),
    (0.865_631_202_387_831_8, 0.095_158_511_682_492_78),
    (0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (0.989_400_934_991_649_9, 0.027_152_459_411_754_09),
];

/// Hadamard finite part of `∫₀¹ y^{−1/2}(1−y)^{−n−1/2} F(y) dy`: the first
/// `n` Taylor terms at `y = 1` are subtracted (their Beta finite parts
/// vanish) and the remainder is integrated numerically. `F` must supply
/// derivatives through order `n`.
pub fn hadamard_finite_part(
    f: &dyn SmoothFn,
    n: usize,
    cfg: &QuadConfig,
) -> Result<f64, DensityError> {
    finite_part(f, n as i64, n, cfg)
}

/// As [`hadamard_finite_part`] with `terms ≥ n` Taylor terms subtracted.
pub fn hadamard_finite_part_with(
    f: &dyn SmoothFn,
    n: usize,
    terms: usize,
    cfg: &QuadConfig,
) -> Result<f64, DensityError> {
    finite_part(f, n as i64, terms, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk15_is_exact_on_polynomials() {
        let (v, _, _) = gk15(&|x: f64| (x.powi(20), 0.0), 0.0, 1.0);
        assert!((v - 1.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn poly_derivatives() {
        let p = PolyFn(vec![1.0, 0.0, 3.0]);
        assert_eq!(p.derivatives(2.0, 3), vec![13.0, 12.0, 6.0, 0.0]);
    }

    #[test]
    fn beta_values() {
        let f = PolyFn(vec![0.0, 1.0]);
        let v = hadamard_finite_part(&f, 1, &QuadConfig::default()).unwrap();
        assert!((v + PI).abs() < 1e-9, "{v}");
        let one = PolyFn(vec![1.0]);
        assert!(
            hadamard_finite_part(&one, 1, &QuadConfig::default())
                .unwrap()
                .abs()
                < 1e-12
        );
        let v = hadamard_finite_part(&one, 0, &QuadConfig::default()).unwrap();
        assert!((v - PI).abs() < 1e-10);
    }

    #[test]
    fn short_subtraction_is_rejected() {
        let one = PolyFn(vec![1.0]);
        assert!(matches!(
            hadamard_finite_part_with(&one, 2, 1, &QuadConfig::default()),
            Err(DensityError::SubtractionOrder { terms: 1, min: 2 })
        ));
    }
}
