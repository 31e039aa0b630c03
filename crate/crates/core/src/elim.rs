//! Conjugate-variable elimination.
//!
//! Zeros of `F(z) = p(z) + conj(q(z))` satisfy, with `w = conj(z)`, the
//! bivariate system `A(z,w) = p(z) + qbar(w) = 0`, `B(z,w) = q(z) + pbar(w)
//! = 0` (bars conjugate the coefficients). The Sylvester resultant in `w`
//! collapses the system to one polynomial `R(z)` vanishing at every zero of
//! `F`. `R` is computed numerically: evaluate the resultant at scaled roots
//! of unity, take each determinant by LU with partial pivoting, and recover
//! the coefficients by an inverse DFT.

use crate::poly::ComplexUnivariate;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElimError {
    /// One input has `w`-degree 0; solve the univariate equation directly.
    DegenerateElimination,
    /// The resultant vanishes identically: the zero set is not isolated.
    NonIsolatedZeroSet,
}

impl fmt::Display for ElimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElimError::DegenerateElimination => {
                write!(f, "elimination variable does not appear; solve directly")
            }
            ElimError::NonIsolatedZeroSet => {
                write!(f, "resultant is identically zero: non-isolated zero set")
            }
        }
    }
}

impl core::error::Error for ElimError {}

/// Polynomial in `(z, w)`, stored as `w`-power coefficients each of which is
/// a polynomial in `z`. The top `w`-coefficient is not identically zero.
#[derive(Debug, Clone)]
pub struct BivariatePoly {
    w_coeffs: Vec<ComplexUnivariate>,
}

impl BivariatePoly {
    pub fn new(mut w_coeffs: Vec<ComplexUnivariate>) -> Self {
        while w_coeffs.last().is_some_and(|c| c.is_zero()) {
            w_coeffs.pop();
        }
        Self { w_coeffs }
    }

    pub fn deg_w(&self) -> usize {
        self.w_coeffs.len().saturating_sub(1)
    }

    pub fn deg_z(&self) -> usize {
        self.w_coeffs
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn w_coeffs(&self) -> &[ComplexUnivariate] {
        &self.w_coeffs
    }

    /// Coefficients (in `w`) evaluated at a fixed `z`.
    fn eval_z(&self, z: Complex64) -> Vec<Complex64> {
        self.w_coeffs.iter().map(|c| c.horner(z)).collect()
    }
}

/// Build `A(z,w) = p(z) + qbar(w)` and `B(z,w) = q(z) + pbar(w)`.
///
/// Common solutions with `w = conj(z)` are exactly the zeros of
/// `F(z) = p(z) + conj(q(z))`.
pub fn build_conjugate_system(
    p: &ComplexUnivariate,
    q: &ComplexUnivariate,
) -> (BivariatePoly, BivariatePoly) {
    let qbar = q.conj_coefficients();
    let pbar = p.conj_coefficients();
    (assemble(p, &qbar), assemble(q, &pbar))
}

/// `base(z) + other(w)` as a bivariate polynomial.
fn assemble(base: &ComplexUnivariate, other: &ComplexUnivariate) -> BivariatePoly {
    let deg_w = other.degree().unwrap_or(0);
    let mut w_coeffs = Vec::with_capacity(deg_w + 1);
    w_coeffs.push(base.add(&ComplexUnivariate::constant(other.coeff(0))));
    for k in 1..=deg_w {
        w_coeffs.push(ComplexUnivariate::constant(other.coeff(k)));
    }
    BivariatePoly::new(w_coeffs)
}

/// Sylvester resultant of `A` and `B` with respect to `w`.
pub fn resultant_w(a: &BivariatePoly, b: &BivariatePoly) -> Result<ComplexUnivariate, ElimError> {
    let (da, db) = (a.deg_w(), b.deg_w());
    if da == 0 || db == 0 {
        return Err(ElimError::DegenerateElimination);
    }
    // degree bound for R(z), hence the node count
    let bound = a.deg_z() * db + b.deg_z() * da;
    let nodes = bound + 1;

    // Node radius: 3-step geometric search keeping the determinant
    // magnitudes inside a 1e12 dynamic range.
    let mut rho = 1.0f64;
    let mut best = evaluate_determinants(a, b, rho, nodes);
    for _ in 0..3 {
        if dynamic_range(&best) < 1e12 {
            break;
        }
        for candidate in [rho * 2.0, rho * 0.5] {
            let vals = evaluate_determinants(a, b, candidate, nodes);
            if dynamic_range(&vals) < dynamic_range(&best) {
                rho = candidate;
                best = vals;
                break;
            }
        }
    }
    let dets = best;

    // Structural-degeneracy test: all node determinants vanish.
    let size = da + db;
    let entry_scale = a
        .w_coeffs()
        .iter()
        .chain(b.w_coeffs())
        .map(|c| c.coeff_scale())
        .fold(0.0, f64::max)
        .max(1.0);
    let zero_threshold = 1e-250_f64.max(entry_scale.powi(size as i32) * 1e-250);
    let max_det = dets.iter().map(|d| d.norm()).fold(0.0, f64::max);
    if max_det < zero_threshold {
        return Err(ElimError::NonIsolatedZeroSet);
    }

    // inverse DFT in fixed node order recovers the coefficients of R
    let m = nodes as f64;
    let mut coeffs = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let mut acc = Complex64::ZERO;
        for (j, &d) in dets.iter().enumerate() {
            let angle = -2.0 * PI * (j * k % nodes) as f64 / m;
            acc += d * Complex64::from_polar(1.0, angle);
        }
        let rho_pow = rho.powi(k as i32);
        coeffs.push(acc / (m * rho_pow));
    }
    Ok(ComplexUnivariate::new(coeffs))
}

fn dynamic_range(dets: &[Complex64]) -> f64 {
    let mut max = 0.0f64;
    let mut min = f64::INFINITY;
    for d in dets {
        let n = d.norm();
        if n > 0.0 {
            max = max.max(n);
            min = min.min(n);
        }
    }
    if min.is_finite() && min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

fn evaluate_determinants(
    a: &BivariatePoly,
    b: &BivariatePoly,
    rho: f64,
    nodes: usize,
) -> Vec<Complex64> {
    (0..nodes)
        .map(|j| {
            let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / nodes as f64);
            sylvester_det(&a.eval_z(z), &b.eval_z(z))
        })
        .collect()
}

/// Determinant of the Sylvester matrix of two numeric polynomials given by
/// ascending coefficients.
fn sylvester_det(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    let mut m = vec![Complex64::ZERO; n * n];
    // db rows of a's coefficients (descending), then da rows of b's
    for r in 0..db {
        for (k, &c) in a.iter().rev().enumerate() {
            m[r * n + r + k] = c;
        }
    }
    for r in 0..da {
        for (k, &c) in b.iter().rev().enumerate() {
            m[(db + r) * n + r + k] = c;
        }
    }
    lu_det(&mut m, n)
}

/// Determinant by LU with partial pivoting; consumes the buffer.
fn lu_det(m: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        let mut pnorm = m[col * n + col].norm();
        for r in (col + 1)..n {
            let v = m[r * n + col].norm();
            if v > pnorm {
                pivot = r;
                pnorm = v;
            }
        }
        if pnorm == 0.0 {
            return Complex64::ZERO;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let diag = m[col * n + col];
        det *= diag;
        for r in (col + 1)..n {
            let factor = m[r * n + col] / diag;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[r * n + k] -= factor * v;
            }
        }
    }
    det
}
