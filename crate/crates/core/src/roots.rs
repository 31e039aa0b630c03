//! Simultaneous root finding for complex univariate polynomials.
//!
//! Aberth–Ehrlich iteration from Newton-polygon initial guesses, followed by
//! a few Newton polishing steps per root and cluster detection.

use crate::poly::ComplexUnivariate;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootsError {
    /// Degree-0 (or zero) polynomial has no roots to find.
    ConstantPolynomial,
}

impl fmt::Display for RootsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootsError::ConstantPolynomial => write!(f, "constant polynomial has no roots"),
        }
    }
}

impl core::error::Error for RootsError {}

/// All roots of one polynomial, counted with multiplicity.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Inclusion radius estimate `deg * |p(r)| / |p'(r)|` per root.
    pub error_radii: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations: usize,
    /// Indices whose error radii overlap a neighbor (probable multiple root).
    pub clustered: Vec<bool>,
}

impl RootSet {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

const MAX_ITERATIONS: usize = 200;
const NEWTON_POLISH_STEPS: usize = 3;

/// Find all roots of `poly` by Aberth–Ehrlich simultaneous iteration.
///
/// `tol` bounds the Aberth correction norm relative to `1 + |z|`; pass
/// `1e-12` unless there is a reason not to. Roots that fail to converge
/// within 200 iterations are returned with their `converged` flag unset.
pub fn all_roots(poly: &ComplexUnivariate, tol: f64) -> Result<RootSet, RootsError> {
    let deg = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(RootsError::ConstantPolynomial),
    };
    // Factor out exact roots at the origin so the iteration sees a nonzero
    // constant term.
    let mut zero_mult = 0usize;
    while poly.coeff(zero_mult).norm() == 0.0 {
        zero_mult += 1;
    }
    let reduced = ComplexUnivariate::new(poly.coeffs()[zero_mult..].to_vec());
    let rdeg = deg - zero_mult;

    let mut z = initial_guesses(&reduced);
    let dp = reduced.derivative();
    let mut converged = vec![rdeg == 0; rdeg];
    let mut iterations = 0;

    for it in 0..MAX_ITERATIONS {
        iterations = it + 1;
        let mut any_active = false;
        let corrections: Vec<Complex64> = (0..rdeg)
            .map(|k| {
                if converged[k] {
                    return Complex64::ZERO;
                }
                any_active = true;
                let pk = reduced.horner(z[k]);
                let dpk = dp.horner(z[k]);
                let newton = if dpk.norm() > 0.0 {
                    pk / dpk
                } else {
                    // derivative vanished: nudge off the critical point
                    return Complex64::new(tol * 10.0, tol * 10.0);
                };
                let mut repulsion = Complex64::ZERO;
                for j in 0..rdeg {
                    if j != k {
                        let d = z[k] - z[j];
                        if d.norm() > 0.0 {
                            repulsion += d.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
                if denom.norm() > 1e-300 {
                    newton / denom
                } else {
                    newton
                }
            })
            .collect();
        if !any_active {
            break;
        }
        for k in 0..rdeg {
            if converged[k] {
                continue;
            }
            z[k] -= corrections[k];
            if corrections[k].norm() <= tol * (1.0 + z[k].norm()) {
                converged[k] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            break;
        }
    }

    // Newton polish
    for k in 0..rdeg {
        for _ in 0..NEWTON_POLISH_STEPS {
            let pk = reduced.horner(z[k]);
            let dpk = dp.horner(z[k]);
            if dpk.norm() == 0.0 {
                break;
            }
            let step = pk / dpk;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            z[k] -= step;
        }
    }

    let mut roots = vec![Complex64::ZERO; zero_mult];
    roots.extend_from_slice(&z);
    let mut error_radii = vec![0.0; zero_mult];
    let mut conv = vec![true; zero_mult];
    let full_dp = poly.derivative();
    for &r in &z {
        let pv = poly.horner(r).norm();
        let dv = full_dp.horner(r).norm();
        error_radii.push(if dv > 0.0 {
            deg as f64 * pv / dv
        } else {
            f64::INFINITY
        });
    }
    conv.extend_from_slice(&converged);

    // Cluster detection: roots within 10x of each other's error radii are
    // flagged and snapped to their cluster mean.
    let clustered = detect_clusters(&mut roots, &error_radii);

    Ok(RootSet {
        roots,
        error_radii,
        converged: conv,
        iterations,
        clustered,
    })
}

fn detect_clusters(roots: &mut [Complex64], radii: &[f64]) -> Vec<bool> {
    let n = roots.len();
    let mut cluster_id: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let merge_dist = 10.0 * radii[i].max(radii[j]);
            if merge_dist.is_finite() && (roots[i] - roots[j]).norm() <= merge_dist {
                let (a, b) = (cluster_id[i], cluster_id[j]);
                let keep = a.min(b);
                for id in cluster_id.iter_mut() {
                    if *id == a || *id == b {
                        *id = keep;
                    }
                }
            }
        }
    }
    let mut flags = vec![false; n];
    for id in 0..n {
        let members: Vec<usize> = (0..n).filter(|&k| cluster_id[k] == id).collect();
        if members.len() > 1 {
            let mean = members.iter().map(|&k| roots[k]).sum::<Complex64>()
                / members.len() as f64;
            for &k in &members {
                roots[k] = mean;
                flags[k] = true;
            }
        }
    }
    flags
}

/// Initial guesses on circles from the Newton polygon of the coefficient
/// magnitudes (upper convex hull of `(k, ln|c_k|)`), with an irrational
/// angular offset to break symmetric configurations.
fn initial_guesses(poly: &ComplexUnivariate) -> Vec<Complex64> {
    let deg = poly.degree().unwrap_or(0);
    let coeffs = poly.coeffs();
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();

    // upper convex hull by monotone chain over the (k, log|c_k|) points
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1)
                - (p.0 as f64 - a.0 as f64) * (b.1 - a.1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut guesses = Vec::with_capacity(deg);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp();
        for t in 0..count {
            let angle = 2.0 * PI * (t as f64 / count as f64 + GOLDEN * (i as f64 + 1.0));
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    debug_assert_eq!(guesses.len(), deg);
    while guesses.len() < deg {
        guesses.push(Complex64::from_polar(
            1.0,
            2.0 * PI * GOLDEN * guesses.len() as f64,
        ));
    }
    guesses
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        v
    }

    #[test]
    fn quadratic_pure_imaginary_roots() {
        let p = ComplexUnivariate::from_real(&[1.0, 0.0, 1.0]);
        let rs = all_roots(&p, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 2);
        let roots = sorted_by_arg(rs.roots);
        assert!((roots[0] - Complex64::new(0.0, -1.0)).norm() < 1e-10);
        assert!((roots[1] - Complex64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn eighth_roots_of_unity() {
        let mut coeffs = [0.0; 9];
        coeffs[0] = -1.0;
        coeffs[8] = 1.0;
        let p = ComplexUnivariate::from_real(&coeffs);
        let rs = all_roots(&p, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 8);
        assert!(rs.all_converged());
        for r in &rs.roots {
            assert!((r.norm() - 1.0).abs() < 1e-10);
            assert!(p.horner(*r).norm() < 1e-10);
        }
    }

    #[test]
    fn wilkinson_style_integer_roots() {
        let roots: Vec<Complex64> = (1..=10)
            .map(|k| Complex64::new(k as f64, 0.0))
            .collect();
        let p = ComplexUnivariate::from_roots(&roots);
        let rs = all_roots(&p, 1e-12).unwrap();
        let mut found = rs.roots.clone();
        found.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (f, e) in found.iter().zip(&roots) {
            assert!((f - e).norm() < 1e-7, "expected {e}, got {f}");
        }
    }

    #[test]
    fn constant_is_an_error() {
        let p = ComplexUnivariate::from_real(&[3.0]);
        assert!(matches!(
            all_roots(&p, 1e-12),
            Err(RootsError::ConstantPolynomial)
        ));
    }

    #[test]
    fn roots_at_origin_handled() {
        // z^3 (z - 2)
        let p = ComplexUnivariate::from_real(&[0.0, 0.0, 0.0, -2.0, 1.0]);
        let rs = all_roots(&p, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 4);
        let at_origin = rs.roots.iter().filter(|r| r.norm() < 1e-12).count();
        assert_eq!(at_origin, 3);
        assert!(rs
            .roots
            .iter()
            .any(|r| (r - Complex64::new(2.0, 0.0)).norm() < 1e-10));
    }

    #[test]
    fn vieta_sum_check() {
        // random-ish fixed coefficients
        let p = ComplexUnivariate::new(
            [
                (0.3, -0.1),
                (-0.7, 0.2),
                (0.05, 0.9),
                (-0.4, -0.33),
                (0.8, 0.1),
            ]
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect(),
        );
        let rs = all_roots(&p, 1e-12).unwrap();
        let sum: Complex64 = rs.roots.iter().sum();
        let expect = -p.coeff(3) / p.coeff(4);
        assert!((sum - expect).norm() < 1e-8 * (1.0 + expect.norm()));
    }
}
