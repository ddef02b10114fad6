use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::McError;

/// Eigenvalue scaling of the sampled matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Convention {
    /// Weight `e^{−βNλ²/(4g)}`; the limiting support is `(−2√g, 2√g)`.
    Starred { g: f64 },
    /// Weight `e^{−κλ²/2}`.
    Unscaled,
}

impl Default for Convention {
    fn default() -> Self {
        Convention::Starred { g: 0.25 }
    }
}

/// The matrix `scale · T`, with `T` tridiagonal, `diagonal[i] ~ N(0, 2)` and
/// `off_diagonal[i] ~ χ_{β(N−1−i)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSample {
    pub n: usize,
    pub beta: f64,
    pub scale: f64,
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

pub(crate) fn scale_for(n: usize, beta: f64, convention: Convention) -> f64 {
    // 1/√2 from the N(0, 2) diagonal, then 1/√κ = √(2/β)
    let unscaled = 1.0 / beta.sqrt();
    match convention {
        Convention::Unscaled => unscaled,
        Convention::Starred { g } => unscaled * (g / n as f64).sqrt(),
    }
}

pub(crate) fn validate(n: usize, beta: f64, convention: Convention) -> Result<(), McError> {
    if n == 0 {
        return Err(McError::InvalidParameter("N must be at least 1".into()));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(McError::InvalidParameter(format!(
            "beta = {beta} must be positive"
        )));
    }
    if let Convention::Starred { g } = convention {
        if !(g > 0.0 && g.is_finite()) {
            return Err(McError::InvalidParameter(format!(
                "g = {g} must be positive"
            )));
        }
    }
    Ok(())
}

/// `χ_k = √(2 · Gamma(k/2, 1))`.
fn chi<R: Rng>(rng: &mut R, k: f64) -> f64 {
    let gamma = Gamma::new(0.5 * k, 1.0).expect("positive shape");
    (2.0 * gamma.sample(rng)).sqrt()
}

pub(crate) fn draw<R: Rng>(rng: &mut R, n: usize, beta: f64, scale: f64) -> TridiagonalSample {
    let diagonal = (0..n)
        .map(|_| std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let off_diagonal = (1..n).map(|i| chi(rng, beta * (n - i) as f64)).collect();
    TridiagonalSample {
        n,
        beta,
        scale,
        diagonal,
        off_diagonal,
    }
}

pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One matrix from the stream `(seed, stream)`.
pub fn sample(
    n: usize,
    beta: f64,
    seed: u64,
    stream: u64,
    convention: Convention,
) -> Result<TridiagonalSample, McError> {
    validate(n, beta, convention)?;
    let mut rng = rng_for(seed, stream);
    Ok(draw(&mut rng, n, beta, scale_for(n, beta, convention)))
}

/// `Tr(scale·T)^{2p}` for `p = 0..=p_max`, as `Σ_i ‖(scale·T)^p e_i‖²`.
/// The vector `T^k e_i` lives on the band `|j − i| ≤ k`.
pub fn trace_moments(s: &TridiagonalSample, p_max: usize) -> Vec<f64> {
    let n = s.n;
    let d: Vec<f64> = s.diagonal.iter().map(|v| v * s.scale).collect();
    let b: Vec<f64> = s.off_diagonal.iter().map(|v| v * s.scale).collect();
    let mut out = vec![0.0; p_max + 1];
    let width = 2 * p_max + 1;
    let mut cur = vec![0.0; width];
    let mut next = vec![0.0; width];
    for i in 0..n {
        // cur[t] holds component i − p_max + t
        cur.fill(0.0);
        next.fill(0.0);
        cur[p_max] = 1.0;
        out[0] += 1.0;
        for k in 1..=p_max {
            let lo = i.saturating_sub(k);
            let hi = (i + k).min(n - 1);
            for j in lo..=hi {
                let t = j + p_max - i;
                let mut v = d[j] * cur[t];
                if j > 0 && t > 0 {
                    v += b[j - 1] * cur[t - 1];
                }
                if j + 1 < n && t + 1 < width {
                    v += b[j] * cur[t + 1];
                }
                next[t] = v;
            }
            std::mem::swap(&mut cur, &mut next);
            out[k] += (lo..=hi).map(|j| cur[j + p_max - i].powi(2)).sum::<f64>();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_only() {
        let s = TridiagonalSample {
            n: 3,
            beta: 1.0,
            scale: 1.0,
            diagonal: vec![1.0, -2.0, 0.5],
            off_diagonal: vec![0.0, 0.0],
        };
        let t = trace_moments(&s, 3);
        for (p, v) in t.iter().enumerate() {
            let want: f64 = s.diagonal.iter().map(|d| d.powi(2 * p as i32)).sum();
            assert!((v - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sample(0, 2.0, 1, 0, Convention::Unscaled).is_err());
        assert!(sample(3, -1.0, 1, 0, Convention::Unscaled).is_err());
        assert!(sample(3, 1.0, 1, 0, Convention::Starred { g: 0.0 }).is_err());
    }
}
