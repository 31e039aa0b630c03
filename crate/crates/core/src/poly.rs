//! Dense complex univariate and sparse real multivariate polynomials.
//!
//! [`ComplexUnivariate`] stores coefficients densely in ascending power
//! order and backs the analytic polynomials `p`, `q`, `f` and the resultant
//! `R(z)`. [`RealMultivariate`] is a sparse exponent-map representation for
//! the harmonic components of higher-dimensional fields.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Evaluation point has a NaN or infinite part.
    NonFiniteInput,
    /// Point length does not match the polynomial dimension.
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::NonFiniteInput => write!(f, "non-finite evaluation point"),
            PolyError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
        }
    }
}

impl core::error::Error for PolyError {}

/// Dense complex polynomial, coefficients in ascending power order.
///
/// Exactly-zero trailing coefficients are trimmed on construction, so the
/// degree of a nonzero polynomial is `coeffs.len() - 1`. Fuzzy trimming is
/// never silent; callers with noisy coefficients use [`Self::trim_trailing`]
/// with an explicit tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexUnivariate {
    coeffs: Vec<Complex64>,
}

impl ComplexUnivariate {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots, built by repeated
    /// multiplication of linear factors.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::constant(Complex64::new(1.0, 0.0));
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(Complex64::ZERO)
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, PolyError> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(PolyError::NonFiniteInput);
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation with a running rounding-error bound on the result.
    pub fn eval_with_error(&self, z: Complex64) -> (Complex64, f64) {
        let zn = z.norm();
        let mut acc = Complex64::ZERO;
        let mut err = 0.0f64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
            err = err * zn + acc.norm();
        }
        // ~2*sqrt(2)*eps per fused step in complex Horner
        (acc, err * (2.0 * f64::EPSILON) * (2.0 * self.coeffs.len() as f64))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|&c| -c).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Conjugate every coefficient. Satisfies
    /// `conj_coefficients(q).eval(conj(z)) = conj(q.eval(z))`.
    pub fn conj_coefficients(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Drop trailing coefficients with magnitude below `tol` relative to the
    /// largest coefficient. Used before root-finding on interpolated data.
    pub fn trim_trailing(&self, tol: f64) -> Self {
        let scale = self.coeff_scale();
        if scale == 0.0 {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= tol * scale) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }
}

/// Sparse real polynomial in `d` variables, keyed by exponent multi-index.
///
/// Zero coefficients are never stored; all stored multi-indices have length
/// equal to the dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMultivariate {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl RealMultivariate {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate variable `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut e = vec![0u32; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, 1.0);
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(PolyError::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        debug_assert_eq!(exps.len(), self.dim);
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c != 0.0 {
                    v.insert(c);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.dim);
        if s == 0.0 {
            return out;
        }
        for (e, &c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zero(self.dim);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Homogeneous part of top total degree.
    pub fn leading_part(&self) -> Self {
        let n = self.degree();
        let mut out = Self::zero(self.dim);
        for (e, &c) in &self.terms {
            if e.iter().sum::<u32>() == n {
                out.terms.insert(e.clone(), c);
            }
        }
        out
    }

    /// Everything below the top total degree.
    pub fn lower_part(&self) -> Self {
        self.sub(&self.leading_part())
    }

    pub fn coeff_scale(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn eval_multi(&self, x: &[f64]) -> Result<f64, PolyError> {
        if x.len() != self.dim {
            return Err(PolyError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (xi, &ei) in x.iter().zip(e) {
                t *= xi.powi(ei as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Sum of second partial derivatives.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, &c) in &self.terms {
            for i in 0..self.dim {
                if e[i] >= 2 {
                    let mut de = e.clone();
                    de[i] -= 2;
                    out.add_term(de, c * (e[i] as f64) * (e[i] as f64 - 1.0));
                }
            }
        }
        out
    }

    /// Laplacian coefficients all vanish, exactly or below `1e-12` relative
    /// to the coefficient scale of the polynomial.
    pub fn is_harmonic(&self) -> bool {
        let lap = self.laplacian();
        let scale = self.coeff_scale().max(1.0);
        lap.terms.values().all(|c| c.abs() <= 1e-12 * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_root_of_z2_plus_1() {
        let p = ComplexUnivariate::from_real(&[1.0, 0.0, 1.0]);
        let v = p.eval(c(0.0, 1.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn eval_constant() {
        let p = ComplexUnivariate::from_real(&[5.0]);
        assert_eq!(p.eval(c(3.0, -2.0)).unwrap(), c(5.0, 0.0));
    }

    #[test]
    fn eval_rejects_non_finite() {
        let p = ComplexUnivariate::from_real(&[1.0, 1.0]);
        assert_eq!(
            p.eval(c(f64::NAN, 0.0)),
            Err(PolyError::NonFiniteInput)
        );
        assert_eq!(
            p.eval(c(0.0, f64::INFINITY)),
            Err(PolyError::NonFiniteInput)
        );
    }

    #[test]
    fn eval_quadratic_family_root() {
        // P for n=8, a=1 is z^2 + 6z + 21 with roots -3 ± i*sqrt(12)
        let p = ComplexUnivariate::from_real(&[21.0, 6.0, 1.0]);
        let z_plus = c(-3.0, 12.0f64.sqrt());
        assert!(p.eval(z_plus).unwrap().norm() < 1e-12);
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = ComplexUnivariate::from_real(&[-1.0, 1.0]);
        let b = ComplexUnivariate::from_real(&[1.0, 1.0]);
        assert_eq!(a.mul(&b), ComplexUnivariate::from_real(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn mul_by_zero() {
        let a = ComplexUnivariate::from_real(&[1.0, 2.0, 3.0]);
        assert!(a.mul(&ComplexUnivariate::zero()).is_zero());
    }

    #[test]
    fn mul_builds_family_f_with_vanishing_subleading() {
        // f = (z-1)^6 (z^2 + 6z + 21) for n = 8, a = 1:
        // the z^7 and z^6 coefficients cancel, f = z^8 + O(z^5).
        let one = c(1.0, 0.0);
        let factor = ComplexUnivariate::from_roots(&[one; 6]);
        let quad = ComplexUnivariate::from_real(&[21.0, 6.0, 1.0]);
        let f = factor.mul(&quad);
        assert_eq!(f.degree(), Some(8));
        let scale = f.coeff_scale();
        assert!(f.coeff(7).norm() <= 1e-12 * scale);
        assert!(f.coeff(6).norm() <= 1e-12 * scale);
    }

    #[test]
    fn derivative_basic() {
        let p = ComplexUnivariate::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            p.derivative(),
            ComplexUnivariate::from_real(&[0.0, 0.0, 3.0])
        );
        assert!(ComplexUnivariate::from_real(&[7.0]).derivative().is_zero());
    }

    #[test]
    fn conj_coefficients_involution_and_identity() {
        let q = ComplexUnivariate::new(vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, -3.0)]);
        assert_eq!(q.conj_coefficients().conj_coefficients(), q);
        // real-coefficient polynomial is fixed
        let r = ComplexUnivariate::from_real(&[1.0, -2.0, 3.0]);
        assert_eq!(r.conj_coefficients(), r);
        // (1+i)z -> (1-i)z
        let s = ComplexUnivariate::new(vec![Complex64::ZERO, c(1.0, 1.0)]);
        assert_eq!(
            s.conj_coefficients(),
            ComplexUnivariate::new(vec![Complex64::ZERO, c(1.0, -1.0)])
        );
    }

    #[test]
    fn trailing_trim_invariant() {
        let p = ComplexUnivariate::new(vec![c(1.0, 0.0), Complex64::ZERO, Complex64::ZERO]);
        assert_eq!(p.degree(), Some(0));
        assert!(ComplexUnivariate::new(vec![Complex64::ZERO]).is_zero());
    }

    #[test]
    fn laplacian_harmonic_and_not() {
        // x^2 - y^2 is harmonic
        let d2 = |e: Vec<u32>, c: f64| (e, c);
        let p = RealMultivariate::from_terms(2, [d2(vec![2, 0], 1.0), d2(vec![0, 2], -1.0)])
            .unwrap();
        assert!(p.laplacian().is_zero());
        assert!(p.is_harmonic());
        // x^2 -> 2
        let q = RealMultivariate::from_terms(2, [d2(vec![2, 0], 1.0)]).unwrap();
        assert_eq!(q.laplacian(), RealMultivariate::constant(2, 2.0));
    }

    #[test]
    fn laplacian_of_u_3d() {
        // u = xy(6z^2 - x^2 - y^2) = 6xyz^2 - x^3 y - x y^3
        let u = RealMultivariate::from_terms(
            3,
            [
                (vec![1, 1, 2], 6.0),
                (vec![3, 1, 0], -1.0),
                (vec![1, 3, 0], -1.0),
            ],
        )
        .unwrap();
        assert!(u.laplacian().is_zero());
    }

    #[test]
    fn laplacian_linearity_on_rationals() {
        let a = RealMultivariate::from_terms(2, [(vec![4, 0], 3.0), (vec![2, 1], -2.0)]).unwrap();
        let b = RealMultivariate::from_terms(2, [(vec![0, 3], 5.0), (vec![2, 1], 2.0)]).unwrap();
        assert_eq!(a.add(&b).laplacian(), a.laplacian().add(&b.laplacian()));
    }

    #[test]
    fn eval_multi_examples() {
        // w4 = 35 z^4 - 30 z^2 (x^2+y^2+z^2) + 3 (x^2+y^2+z^2)^2 at (0,0,1) = 8
        let x = RealMultivariate::var(3, 0);
        let y = RealMultivariate::var(3, 1);
        let z = RealMultivariate::var(3, 2);
        let rho2 = x.mul(&x).add(&y.mul(&y)).add(&z.mul(&z));
        let z2 = z.mul(&z);
        let w4 = z2
            .mul(&z2)
            .scale(35.0)
            .sub(&z2.mul(&rho2).scale(30.0))
            .add(&rho2.mul(&rho2).scale(3.0));
        assert_eq!(w4.eval_multi(&[0.0, 0.0, 1.0]).unwrap(), 8.0);

        let u = RealMultivariate::from_terms(
            3,
            [
                (vec![1, 1, 2], 6.0),
                (vec![3, 1, 0], -1.0),
                (vec![1, 3, 0], -1.0),
            ],
        )
        .unwrap();
        assert_eq!(u.eval_multi(&[0.0, 2.0, 5.0]).unwrap(), 0.0);
        assert_eq!(
            RealMultivariate::zero(3).eval_multi(&[1.0, 2.0, 3.0]).unwrap(),
            0.0
        );
    }

    #[test]
    fn eval_multi_dimension_mismatch() {
        let p = RealMultivariate::var(3, 0);
        assert!(matches!(
            p.eval_multi(&[1.0, 2.0]),
            Err(PolyError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn leading_lower_split() {
        let p = RealMultivariate::from_terms(
            2,
            [(vec![2, 0], 1.0), (vec![0, 2], -1.0), (vec![1, 0], 4.0), (vec![0, 0], -3.0)],
        )
        .unwrap();
        let top = p.leading_part();
        assert_eq!(top.degree(), 2);
        assert_eq!(p, top.add(&p.lower_part()));
    }
}
