//! Random planar harmonic fields and Monte Carlo zero-count statistics.
//!
//! A degree-`n` truncated random harmonic field is sampled in the real basis
//! `r^k cos(k theta)`, `r^k sin(k theta)` (for `k = 0` the cosine term only)
//! with independent standard Gaussian coefficients on each of the two real
//! components, then converted to the `p + conj(q)` form:
//!
//! ```text
//! alpha_k = xi_{k,0,1} + i xi_{k,0,2}   (cos-side pair)
//! beta_k  = xi_{k,1,1} + i xi_{k,1,2}   (sin-side pair, k >= 1)
//! p_k = (alpha_k - i beta_k) / 2
//! q_k = (conj(alpha_k) - i conj(beta_k)) / 2
//! ```
//!
//! so that `p(z) + conj(q(z))` reproduces the real-basis sum exactly.
//! Sampling is counter-based: each Gaussian is a pure function of
//! `(seed, trial, k, i, j)`, which makes every trial reproducible and
//! independent of evaluation order.

use crate::planar::{self, PlanarError, PlanarHarmonicField, SolveOptions};
use crate::poly::ComplexUnivariate;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnsembleError {
    /// Degree must be at least 1.
    DegreeZero,
    /// No trial produced a usable zero count.
    AllTrialsDiscarded,
}

impl fmt::Display for EnsembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleError::DegreeZero => write!(f, "degree must be at least 1"),
            EnsembleError::AllTrialsDiscarded => write!(f, "every trial was discarded"),
        }
    }
}

impl core::error::Error for EnsembleError {}

/// Parameters of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
}

/// Per-trial zero counts of one sampled field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialCount {
    pub trial: usize,
    pub n_f: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

/// Aggregate statistics over the non-discarded trials.
#[derive(Debug, Clone)]
pub struct MonteCarloResult {
    pub mean: f64,
    /// Standard error of the mean (sample std / sqrt(kept trials)).
    pub std_error: f64,
    pub counts: Vec<TrialCount>,
    /// Trials dropped because the solve degenerated or a zero stayed
    /// unclassified (singular Jacobian).
    pub discarded: usize,
    /// Set when more than 10% of trials were discarded.
    pub warning: Option<String>,
}

/// splitmix64: the standard 64-bit finalizer-based generator step.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Uniform in (0, 1], never exactly zero (safe under `ln`).
fn unit_open(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 1.0) / (1u64 << 53) as f64
}

/// Standard Gaussian `xi_{k,i,j}` as a pure function of its key, via
/// Box-Muller on two splitmix64 outputs.
fn gaussian(seed: u64, trial: u64, k: u64, i: u64, j: u64) -> f64 {
    let key = splitmix64(
        splitmix64(splitmix64(splitmix64(seed ^ 0x853c49e6748fea9b).wrapping_add(trial)) ^ k)
            .wrapping_add(i),
    ) ^ j;
    let u1 = unit_open(splitmix64(key));
    let u2 = unit_open(splitmix64(key.wrapping_add(1)));
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Draw one random field of degree `n` for the given trial index.
///
/// Generically `deg p = deg q = n`; the leading coefficients vanish only on
/// a measure-zero event, and such draws are discarded downstream if the
/// solve degenerates.
pub fn sample_planar(spec: &EnsembleSpec, trial: usize) -> PlanarHarmonicField {
    let n = spec.n;
    let mut p = Vec::with_capacity(n + 1);
    let mut q = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let alpha = Complex64::new(
            gaussian(spec.seed, trial as u64, k as u64, 0, 1),
            gaussian(spec.seed, trial as u64, k as u64, 0, 2),
        );
        // the sin(k theta) basis function is absent at k = 0
        let beta = if k == 0 {
            Complex64::ZERO
        } else {
            Complex64::new(
                gaussian(spec.seed, trial as u64, k as u64, 1, 1),
                gaussian(spec.seed, trial as u64, k as u64, 1, 2),
            )
        };
        let i = Complex64::new(0.0, 1.0);
        p.push((alpha - i * beta) * 0.5);
        q.push((alpha.conj() - i * beta.conj()) * 0.5);
    }
    PlanarHarmonicField::new(ComplexUnivariate::new(p), ComplexUnivariate::new(q))
}

/// Evaluate the sampled field in the real basis directly: used as a
/// conversion oracle in tests and exposed for diagnostics.
pub fn eval_real_basis(spec: &EnsembleSpec, trial: usize, z: Complex64) -> f64 {
    let (r, theta) = z.to_polar();
    let mut acc = 0.0;
    for k in 0..=spec.n {
        let rk = r.powi(k as i32);
        acc += gaussian(spec.seed, trial as u64, k as u64, 0, 1) * rk * (k as f64 * theta).cos();
        if k >= 1 {
            acc +=
                gaussian(spec.seed, trial as u64, k as u64, 1, 1) * rk * (k as f64 * theta).sin();
        }
    }
    acc
}

/// Imaginary-part companion of [`eval_real_basis`] (the `j = 2` Gaussians).
pub fn eval_real_basis_im(spec: &EnsembleSpec, trial: usize, z: Complex64) -> f64 {
    let (r, theta) = z.to_polar();
    let mut acc = 0.0;
    for k in 0..=spec.n {
        let rk = r.powi(k as i32);
        acc += gaussian(spec.seed, trial as u64, k as u64, 0, 2) * rk * (k as f64 * theta).cos();
        if k >= 1 {
            acc +=
                gaussian(spec.seed, trial as u64, k as u64, 1, 2) * rk * (k as f64 * theta).sin();
        }
    }
    acc
}

/// Monte Carlo estimate of the expected zero count `E[N_F]` at degree `n`.
///
/// Degenerate draws (non-isolated zero sets, or a trial with a singular
/// zero the classifier cannot orient) are discarded; a warning is attached
/// when they exceed 10% of the requested trials.
pub fn expected_zeros(spec: &EnsembleSpec) -> Result<MonteCarloResult, EnsembleError> {
    if spec.n == 0 {
        return Err(EnsembleError::DegreeZero);
    }
    let opts = SolveOptions::default();
    let mut counts = Vec::with_capacity(spec.trials);
    let mut discarded = 0usize;
    for trial in 0..spec.trials {
        let field = sample_planar(spec, trial);
        match planar::solve(&field, &opts) {
            Ok(report) if report.n_singular == 0 => counts.push(TrialCount {
                trial,
                n_f: report.n_f,
                n_plus: report.n_plus,
                n_minus: report.n_minus,
            }),
            Ok(_) => discarded += 1,
            Err(PlanarError::NonIsolatedZeroSet) | Err(PlanarError::DegenerateField) => {
                discarded += 1
            }
        }
    }
    if counts.is_empty() {
        return Err(EnsembleError::AllTrialsDiscarded);
    }
    let kept = counts.len() as f64;
    let mean = counts.iter().map(|c| c.n_f as f64).sum::<f64>() / kept;
    let var = counts
        .iter()
        .map(|c| (c.n_f as f64 - mean).powi(2))
        .sum::<f64>()
        / (kept - 1.0).max(1.0);
    let std_error = (var / kept).sqrt();
    let warning = if discarded * 10 > spec.trials {
        Some(alloc::format!(
            "{discarded} of {} trials discarded; statistics may be biased",
            spec.trials
        ))
    } else {
        None
    };
    Ok(MonteCarloResult {
        mean,
        std_error,
        counts,
        discarded,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_matches_real_basis() {
        // p + conj(q) built from (alpha, beta) must equal the direct
        // real-basis sums at arbitrary points
        let spec = EnsembleSpec {
            n: 5,
            seed: 7,
            trials: 1,
        };
        let field = sample_planar(&spec, 0);
        for k in 0..100 {
            let r = 0.05 + 2.0 * (k as f64 / 100.0);
            let theta = 2.0 * PI * (k as f64 * 0.618).fract();
            let z = Complex64::from_polar(r, theta);
            let f = field.eval_field(z);
            let re = eval_real_basis(&spec, 0, z);
            let im = eval_real_basis_im(&spec, 0, z);
            let scale = 1.0 + f.norm();
            assert!((f.re - re).abs() < 1e-10 * scale, "re mismatch at {z}");
            assert!((f.im - im).abs() < 1e-10 * scale, "im mismatch at {z}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = EnsembleSpec {
            n: 4,
            seed: 42,
            trials: 1,
        };
        let a = sample_planar(&spec, 3);
        let b = sample_planar(&spec, 3);
        assert_eq!(a.p().coeffs(), b.p().coeffs());
        assert_eq!(a.q().coeffs(), b.q().coeffs());
        // different trials decorrelate
        let c = sample_planar(&spec, 4);
        assert_ne!(a.p().coeffs(), c.p().coeffs());
    }

    #[test]
    fn gaussians_have_sane_moments() {
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        let n = 20_000;
        for t in 0..n {
            let g = gaussian(1, t, 0, 0, 1);
            sum += g;
            sum2 += g * g;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn degree_one_mean_is_one() {
        // a degree-1 harmonic field with |p1| != |q1| has exactly one zero
        let spec = EnsembleSpec {
            n: 1,
            seed: 42,
            trials: 40,
        };
        let result = expected_zeros(&spec).unwrap();
        assert_eq!(result.mean, 1.0);
        assert_eq!(result.std_error, 0.0);
        assert_eq!(result.discarded, 0);
    }

    #[test]
    fn parity_holds_when_analytic_degree_dominates() {
        // force deg p > deg q by zeroing the top coefficient of q; then
        // N_+ - N_- = n and N_F = 2 N_- + n has the parity of n
        let spec = EnsembleSpec {
            n: 3,
            seed: 11,
            trials: 12,
        };
        let opts = SolveOptions::default();
        for trial in 0..spec.trials {
            let field = sample_planar(&spec, trial);
            let mut q = field.q().coeffs().to_vec();
            q.truncate(spec.n); // deg q <= n - 1
            let forced = PlanarHarmonicField::new(field.p().clone(), ComplexUnivariate::new(q));
            let report = planar::solve(&forced, &opts).unwrap();
            if report.n_singular > 0 {
                continue;
            }
            assert_eq!(report.n_f % 2, spec.n % 2, "trial {trial}");
            assert_eq!(
                report.n_plus as i64 - report.n_minus as i64,
                spec.n as i64,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn monte_carlo_runs_at_small_degree() {
        let spec = EnsembleSpec {
            n: 2,
            seed: 42,
            trials: 30,
        };
        let result = expected_zeros(&spec).unwrap();
        assert!(result.mean >= 1.0, "mean {}", result.mean);
        // Bezout: at most n^2 = 4 zeros per trial
        for c in &result.counts {
            assert!(c.n_f <= 4);
            assert_eq!(c.n_f, c.n_plus + c.n_minus);
        }
        assert!(result.counts.len() + result.discarded == spec.trials);
    }

    #[test]
    fn zero_degree_rejected() {
        let spec = EnsembleSpec {
            n: 0,
            seed: 1,
            trials: 5,
        };
        assert!(matches!(
            expected_zeros(&spec),
            Err(EnsembleError::DegreeZero)
        ));
    }
}
