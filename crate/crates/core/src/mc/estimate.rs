use crate::arith::Rational;
use crate::error::McError;
use crate::moments::{moment_polynomial_from, ResolventCoefficients};

use super::sample::{draw, rng_for, scale_for, trace_moments, validate, Convention};

/// Matrices drawn from one RNG stream. Fixed, so that the reduction order
/// does not depend on the thread count.
const CHUNK: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub beta: f64,
    pub p_max: usize,
    pub samples: usize,
    pub seed: u64,
    /// Chunk `c` draws from stream `stream · 2³² + c`.
    pub stream: u64,
    pub convention: Convention,
    pub threads: usize,
}

impl McConfig {
    pub fn new(n: usize, beta: f64, p_max: usize, samples: usize, seed: u64) -> Self {
        McConfig {
            n,
            beta,
            p_max,
            samples,
            seed,
            stream: 0,
            convention: Convention::default(),
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimate {
    pub p: usize,
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
    pub exact: f64,
    pub z: f64,
}

impl MomentEstimate {
    /// `|z| > 4`.
    pub fn flagged(&self) -> bool {
        !(self.z.abs() <= 4.0)
    }
}

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Default)]
struct Acc {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Acc {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Acc) {
        if o.count == 0.0 {
            return;
        }
        let total = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count / total;
        self.m2 += o.m2 + d * d * self.count * o.count / total;
        self.count = total;
    }
}

/// Exact `⟨Tr G^{2p}⟩` for `p ≤ p_max` at `κ = β/2` in the given convention.
pub fn exact_moments(
    n: usize,
    beta: f64,
    p_max: usize,
    convention: Convention,
) -> Result<Vec<Rational>, McError> {
    validate(n, beta, convention)?;
    let kappa = Rational::from_f64(beta / 2.0)
        .ok_or_else(|| McError::InvalidParameter(format!("beta = {beta}")))?;
    let nn = Rational::from_int(n as i64);
    let table = ResolventCoefficients::from_series(p_max, p_max);
    let factor = match convention {
        Convention::Unscaled => Rational::one(),
        Convention::Starred { g } => {
            let g = Rational::from_f64(g)
                .ok_or_else(|| McError::InvalidParameter(format!("g = {g}")))?;
            &g / &nn
        }
    };
    (0..=p_max)
        .map(|p| {
            let m = moment_polynomial_from(p, &table).expect("series table covers p_max");
            Ok(m.eval(&nn, &kappa) * factor.pow(p as i32))
        })
        .collect()
}

fn run_chunk(cfg: &McConfig, chunk: usize, scale: f64) -> Vec<Acc> {
    let mut rng = rng_for(cfg.seed, (cfg.stream << 32) + chunk as u64);
    let count = CHUNK.min(cfg.samples - chunk * CHUNK);
    let mut acc = vec![Acc::default(); cfg.p_max + 1];
    for _ in 0..count {
        let s = draw(&mut rng, cfg.n, cfg.beta, scale);
        for (a, t) in acc.iter_mut().zip(trace_moments(&s, cfg.p_max)) {
            a.push(t);
        }
    }
    acc
}

/// Sample means of `Tr G^{2p}` with z-scores against the exact moments.
pub fn estimate_with(cfg: &McConfig) -> Result<Vec<MomentEstimate>, McError> {
    validate(cfg.n, cfg.beta, cfg.convention)?;
    if cfg.samples < 100 {
        return Err(McError::InvalidParameter(format!(
            "samples = {} is below 100",
            cfg.samples
        )));
    }
    let exact = exact_moments(cfg.n, cfg.beta, cfg.p_max, cfg.convention)?;
    let scale = scale_for(cfg.n, cfg.beta, cfg.convention);
    let chunks = cfg.samples.div_ceil(CHUNK);
    let threads = cfg.threads.clamp(1, chunks);
    let mut results: Vec<Vec<Acc>> = vec![Vec::new(); chunks];
    std::thread::scope(|scope| {
        let per = chunks.div_ceil(threads);
        for (t, slot) in results.chunks_mut(per).enumerate() {
            scope.spawn(move || {
                for (i, r) in slot.iter_mut().enumerate() {
                    *r = run_chunk(cfg, t * per + i, scale);
                }
            });
        }
    });
    let mut total = vec![Acc::default(); cfg.p_max + 1];
    for r in &results {
        for (a, b) in total.iter_mut().zip(r) {
            a.merge(b);
        }
    }
    Ok(total
        .iter()
        .zip(exact)
        .enumerate()
        .map(|(p, (a, e))| {
            let var = if a.count > 1.0 {
                a.m2 / (a.count - 1.0)
            } else {
                0.0
            };
            let stderr = (var / a.count).sqrt();
            let exact = e.to_f64();
            let z = if stderr > 0.0 {
                (a.mean - exact) / stderr
            } else if (a.mean - exact).abs() <= 1e-12 * exact.abs().max(1.0) {
                0.0
            } else {
                f64::INFINITY
            };
            MomentEstimate {
                p,
                samples: cfg.samples,
                mean: a.mean,
                stderr,
                exact,
                z,
            }
        })
        .collect())
}

/// [`estimate_with`] in the starred convention, single-threaded.
pub fn estimate_and_compare(
    n: usize,
    beta: f64,
    p_max: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<MomentEstimate>, McError> {
    estimate_with(&McConfig::new(n, beta, p_max, samples, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..50).map(|i| (i as f64).sin() * 3.0 + 1.0).collect();
        let mut whole = Acc::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Acc::default(), Acc::default());
        xs[..17].iter().for_each(|&x| a.push(x));
        xs[17..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean - whole.mean).abs() < 1e-13);
        assert!((a.m2 - whole.m2).abs() < 1e-10);
    }

    #[test]
    fn gue_second_moment_is_n_squared() {
        let e = exact_moments(8, 2.0, 1, Convention::Unscaled).unwrap();
        assert_eq!(e[1], Rational::from_int(64));
        let e = exact_moments(4, 1.0, 2, Convention::Unscaled).unwrap();
        assert_eq!(e[2], Rational::from_int(228));
    }
}
