//! The explicit counterexample family with `m = n - 3`.
//!
//! For `n >= 4` and a parameter `a`, take
//! `f(z) = (z - a)^{n-2} P(z)` with
//! `P(z) = z^2 + (n-2) a z + (n-2)(n-1) a^2 / 2`,
//! chosen so `f(z) = z^n + O(z^{n-3})`. With `p = z^n + f` and
//! `q = -z^n + f`, the roots of `conj(p(z)) = q(z)` are the zeros of the
//! canonical-convention field `p + conj(-q)`, and their number grows like
//! `n^2 - 3n + O(1)`, past the `3n - 2 + m(m-1)` conjectured valence bound.

use crate::planar::{PlanarHarmonicField, ProductForm};
use crate::poly::ComplexUnivariate;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    /// The construction needs `n >= 4`.
    DegreeTooSmall,
    /// `a = 0` collapses the quadratic factor.
    DegenerateParameter,
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::DegreeTooSmall => write!(f, "family requires n >= 4"),
            FamilyError::DegenerateParameter => write!(f, "family requires a != 0"),
        }
    }
}

impl core::error::Error for FamilyError {}

/// One member of the family with all of its closed-form quantities.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub n: usize,
    pub a: Complex64,
    /// `f = (z-a)^{n-2} P`.
    pub f: ComplexUnivariate,
    /// The quadratic factor `P`.
    pub p_quad: ComplexUnivariate,
    /// Canonical-convention analytic part, `p_gen = p = z^n + f`.
    pub p_gen: ComplexUnivariate,
    /// Canonical-convention anti-analytic part, `q_gen = -q = z^n - f`.
    pub q_gen: ComplexUnivariate,
    /// Critical points of `f` other than `a`.
    pub zeta_plus: Complex64,
    pub zeta_minus: Complex64,
    /// The two roots of `P` (roots of `f` other than `a`).
    pub z_plus: Complex64,
    pub z_minus: Complex64,
    /// Angular variation of `f` along the path from `z_plus` to `z_minus`.
    pub delta_arg: f64,
    /// Lower bound on the number of level curves passing between `z_plus`
    /// and `z_minus`.
    pub k_bound: i64,
    /// Guaranteed zero count of the instance.
    pub predicted_lower: i64,
    /// `3n - 2 + m(m-1)` with `m = n - 3`.
    pub conjectured_max: i64,
    /// `2m(n-1) + n` with `m = n - 3`.
    pub implied_total_bound: i64,
}

impl FamilyInstance {
    pub fn m(&self) -> usize {
        self.n - 3
    }

    /// The field in the solver's `p + conj(q)` convention, carrying the
    /// factored evaluator: coefficient-form Horner cannot resolve
    /// `2 Re(z^n)` against the large mixed coefficients near the origin.
    pub fn field(&self) -> PlanarHarmonicField {
        let nf = self.n as f64;
        PlanarHarmonicField::new(self.p_gen.clone(), self.q_gen.clone()).with_product_form(
            ProductForm {
                n: self.n as u32,
                a: self.a,
                b1: self.a * (nf - 2.0),
                b0: self.a * self.a * ((nf - 2.0) * (nf - 1.0) / 2.0),
            },
        )
    }
}

/// Construct the instance for `(n, a)`.
pub fn build(n: usize, a: Complex64) -> Result<FamilyInstance, FamilyError> {
    if n < 4 {
        return Err(FamilyError::DegreeTooSmall);
    }
    if a.norm() == 0.0 {
        return Err(FamilyError::DegenerateParameter);
    }
    let nf = n as f64;
    let p_quad = ComplexUnivariate::new(vec![
        a * a * ((nf - 2.0) * (nf - 1.0) / 2.0),
        a * (nf - 2.0),
        Complex64::new(1.0, 0.0),
    ]);
    // (z - a)^{n-2} by binomial expansion: exact for integer real a
    let factor = binomial_power(-a, n - 2);
    let f = factor.mul(&p_quad);
    let mut zn = vec![Complex64::ZERO; n + 1];
    zn[n] = Complex64::new(1.0, 0.0);
    let zn = ComplexUnivariate::new(zn);
    let p_gen = zn.add(&f);
    let q_gen_raw = zn.sub(&f);
    // deg q = n - 3 structurally; discard the cancelled top coefficients
    let keep = q_gen_raw.coeffs().len().min(n - 2);
    let q_gen = ComplexUnivariate::new(q_gen_raw.coeffs()[..keep].to_vec());

    let (zeta_plus, zeta_minus) = critical_points(n, a);
    let (z_plus, z_minus) = extra_roots(n, a);

    Ok(FamilyInstance {
        n,
        a,
        f,
        p_quad,
        p_gen,
        q_gen,
        zeta_plus,
        zeta_minus,
        z_plus,
        z_minus,
        delta_arg: delta_arg(n),
        k_bound: k_bound(n),
        predicted_lower: predicted_lower(n),
        conjectured_max: conjectured_max(n, n - 3),
        implied_total_bound: (2 * (n - 3) * (n - 1) + n) as i64,
    })
}

/// `(z + c)^k` by binomial expansion.
fn binomial_power(c: Complex64, k: usize) -> ComplexUnivariate {
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut binom = 1.0f64;
    let mut cpow = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..k {
        cpow.push(cpow.last().unwrap() * c);
    }
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k - j + 1) as f64 / j as f64;
        }
        // coefficient of z^j is C(k, j) c^{k-j}
        coeffs.push(cpow[k - j] * binom);
    }
    ComplexUnivariate::new(coeffs)
}

/// The two critical points of `f` that are not `a`:
/// `zeta = (-(n-3)/2 +/- i sqrt((n-3)(n-1))/2) a`.
pub fn critical_points(n: usize, a: Complex64) -> (Complex64, Complex64) {
    let nf = n as f64;
    let re = -(nf - 3.0) / 2.0;
    let im = ((nf - 3.0) * (nf - 1.0)).sqrt() / 2.0;
    (Complex64::new(re, im) * a, Complex64::new(re, -im) * a)
}

/// The two roots of `P`: `z = -a ((n-2)/2 -/+ i sqrt(n^2 - 2n)/2)`.
pub fn extra_roots(n: usize, a: Complex64) -> (Complex64, Complex64) {
    let nf = n as f64;
    let re = (nf - 2.0) / 2.0;
    let im = (nf * nf - 2.0 * nf).sqrt() / 2.0;
    (
        -a * Complex64::new(re, -im),
        -a * Complex64::new(re, im),
    )
}

/// Angular variation of `f` between its two extra roots:
/// `2 (n-2) arctan(sqrt(n^2 - 2n) / n)`.
pub fn delta_arg(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (nf - 2.0) * ((nf * nf - 2.0 * nf).sqrt() / nf).atan()
}

/// Lower bound on the number of level curves passing between `z_plus` and
/// `z_minus`: `2 floor(delta_arg / (2 pi)) - 1`.
pub fn k_bound(n: usize) -> i64 {
    2 * (delta_arg(n) / (2.0 * PI)).floor() as i64 - 1
}

/// Guaranteed zero count:
/// `n^2 - 4n + 4 floor((n-2)/pi arctan(sqrt(n^2-2n)/n)) + 2`.
pub fn predicted_lower(n: usize) -> i64 {
    let nf = n as f64;
    let fl = (delta_arg(n) / (2.0 * PI)).floor() as i64;
    (nf * nf - 4.0 * nf) as i64 + 4 * fl + 2
}

/// Wilmshurst's conjectured maximum `3n - 2 + m(m-1)`.
pub fn conjectured_max(n: usize, m: usize) -> i64 {
    assert!(m < n, "requires m < n");
    (3 * n - 2 + m * m.saturating_sub(1)) as i64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    /// `f(zeta)` came out (numerically) real at a critical point: the level
    /// set passes through it and the counting argument degrades. Perturb `a`.
    IrregularInstance,
}

/// Check that neither free critical point of `f` lies on the level set
/// `Im f = 0`.
///
/// For real `a` this verifies that `arg f(zeta_plus)` stays away from
/// multiples of pi by more than `1e-6`; for complex `a` it additionally
/// requires `|Im f(zeta)| > 1e-9` at both critical points.
pub fn check_regularity(inst: &FamilyInstance) -> Regularity {
    check_regularity_of(&inst.f, inst.a, inst.zeta_plus, inst.zeta_minus)
}

fn check_regularity_of(
    f: &ComplexUnivariate,
    a: Complex64,
    zeta_plus: Complex64,
    zeta_minus: Complex64,
) -> Regularity {
    let fp = f.horner(zeta_plus);
    let arg_dist = (fp.arg() / PI - (fp.arg() / PI).round()).abs() * PI;
    if arg_dist <= 1e-6 {
        return Regularity::IrregularInstance;
    }
    if a.im != 0.0 {
        let fm = f.horner(zeta_minus);
        if fp.im.abs() <= 1e-9 || fm.im.abs() <= 1e-9 {
            return Regularity::IrregularInstance;
        }
    }
    Regularity::Regular
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn build_n8_quadratic_factor() {
        let inst = build(8, c(1.0, 0.0)).unwrap();
        assert_eq!(
            inst.p_quad,
            ComplexUnivariate::from_real(&[21.0, 6.0, 1.0])
        );
    }

    #[test]
    fn build_n8_subleading_coefficients_vanish() {
        let inst = build(8, c(1.0, 0.0)).unwrap();
        let scale = inst.f.coeff_scale();
        assert!(inst.f.coeff(7).norm() <= 1e-12 * scale);
        assert!(inst.f.coeff(6).norm() <= 1e-12 * scale);
    }

    #[test]
    fn build_degrees_and_leading() {
        let inst = build(8, c(1.0, 0.0)).unwrap();
        assert_eq!(inst.p_gen.degree(), Some(8));
        assert!((inst.p_gen.leading() - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(inst.q_gen.degree(), Some(5));
        let small = build(4, c(1.0, 0.0)).unwrap();
        assert_eq!(small.m(), 1);
        assert_eq!(small.q_gen.degree(), Some(1));
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(build(3, c(1.0, 0.0)), Err(FamilyError::DegreeTooSmall)));
        assert!(matches!(build(8, Complex64::ZERO), Err(FamilyError::DegenerateParameter)));
    }

    #[test]
    fn p_quad_vanishes_at_extra_roots() {
        for (n, a) in [(8, c(1.0, 0.0)), (11, c(1.0, 0.04)), (16, c(1.0, 0.01))] {
            let inst = build(n, a).unwrap();
            assert!(inst.p_quad.horner(inst.z_plus).norm() < 1e-10 * inst.p_quad.coeff_scale());
            assert!(inst.p_quad.horner(inst.z_minus).norm() < 1e-10 * inst.p_quad.coeff_scale());
        }
    }

    #[test]
    fn critical_points_closed_form_n8() {
        let (zp, zm) = critical_points(8, c(1.0, 0.0));
        assert!((zp - c(-2.5, 35.0f64.sqrt() / 2.0)).norm() < 1e-12);
        assert!((zm - zp.conj()).norm() < 1e-12);
        let (z4, _) = critical_points(4, c(1.0, 0.0));
        assert!((z4 - c(-0.5, 3.0f64.sqrt() / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn critical_points_scale_linearly_in_a() {
        let (zp1, zm1) = critical_points(9, c(1.0, 0.3));
        let (zp2, zm2) = critical_points(9, c(2.0, 0.6));
        assert!((zp2 - zp1 * 2.0).norm() < 1e-12);
        assert!((zm2 - zm1 * 2.0).norm() < 1e-12);
    }

    #[test]
    fn critical_points_agree_with_quadratic_solver() {
        // roots of n z^2 + (n^2 - 3n) a z + (n-2) n (n-3) a^2 / 2
        for n in [4usize, 8, 13, 16] {
            let a = c(1.0, 0.02);
            let nf = n as f64;
            let quad = ComplexUnivariate::new(alloc::vec![
                a * a * ((nf - 2.0) * nf * (nf - 3.0) / 2.0),
                a * (nf * nf - 3.0 * nf),
                c(nf, 0.0),
            ]);
            let (zp, zm) = critical_points(n, a);
            assert!(quad.horner(zp).norm() < 1e-10 * quad.coeff_scale());
            assert!(quad.horner(zm).norm() < 1e-10 * quad.coeff_scale());
        }
    }

    #[test]
    fn critical_points_kill_derivative() {
        for n in [5usize, 8, 12] {
            let a = c(1.0, 0.0);
            let inst = build(n, a).unwrap();
            let df = inst.f.derivative();
            for zeta in [inst.zeta_plus, inst.zeta_minus] {
                // f'(zeta) / (zeta - a)^{n-3} ~ 0
                let denom = (zeta - a).powu(n as u32 - 3);
                let val = df.horner(zeta) / denom;
                assert!(val.norm() < 1e-8 * df.coeff_scale().max(1.0));
            }
        }
    }

    #[test]
    fn extra_roots_n8() {
        let (zp, zm) = extra_roots(8, c(1.0, 0.0));
        assert!((zp - c(-3.0, 48.0f64.sqrt() / 2.0)).norm() < 1e-12);
        assert!((zm - zp.conj()).norm() < 1e-12);
    }

    #[test]
    fn f_vanishes_at_extra_roots() {
        let inst = build(8, c(1.0, 0.0)).unwrap();
        assert!(inst.f.horner(inst.z_plus).norm() < 1e-10 * inst.f.coeff_scale());
    }

    #[test]
    fn delta_arg_values() {
        assert!((delta_arg(8) - 8.5646).abs() < 1e-3);
        assert!((delta_arg(4) - 2.4619).abs() < 1e-3);
        // large-n limit: arctan -> pi/4
        let n = 100_000;
        let limit = delta_arg(n) / (2.0 * (n as f64 - 2.0));
        assert!((limit - PI / 4.0).abs() < 1e-3);
    }

    #[test]
    fn k_bound_values() {
        assert_eq!(k_bound(8), 1);
        assert_eq!(k_bound(16), 5);
        assert_eq!(k_bound(4), -1);
    }

    #[test]
    fn predicted_lower_values() {
        assert_eq!(predicted_lower(8), 38);
        assert_eq!(predicted_lower(16), 206);
        assert_eq!(predicted_lower(20), 338);
        // consistency with the K-count form n^2 - 4n + 2K + 4
        for n in 4..=60 {
            let nn = n as i64;
            assert_eq!(predicted_lower(n), nn * nn - 4 * nn + 2 * k_bound(n) + 4);
        }
    }

    #[test]
    fn conjectured_max_values() {
        assert_eq!(conjectured_max(16, 13), 202);
        assert_eq!(conjectured_max(8, 5), 42);
        for n in [4usize, 9, 17] {
            assert_eq!(conjectured_max(n, 1), (3 * n - 2) as i64);
        }
    }

    #[test]
    fn counterexample_regime_onset() {
        // whenever floor((n-2)/pi arctan(...)) >= 3 the prediction beats the
        // conjectured maximum for m = n - 3
        for n in 4..=200usize {
            let fl = (delta_arg(n) / (2.0 * PI)).floor() as i64;
            if fl >= 3 {
                assert!(
                    predicted_lower(n) > conjectured_max(n, n - 3),
                    "n = {n}: {} <= {}",
                    predicted_lower(n),
                    conjectured_max(n, n - 3)
                );
            }
        }
    }

    #[test]
    fn asymptotic_gap_is_bounded() {
        for n in 4..=200usize {
            let nn = n as i64;
            let gap = (predicted_lower(n) - nn * nn + 3 * nn).abs();
            assert!(gap <= 8, "n = {n}: gap {gap}");
        }
    }

    #[test]
    fn regularity_of_shipped_instances() {
        let real = build(8, c(1.0, 0.0)).unwrap();
        assert_eq!(check_regularity(&real), Regularity::Regular);
        let perturbed = build(8, c(1.0, 0.04)).unwrap();
        assert_eq!(check_regularity(&perturbed), Regularity::Regular);
    }

    #[test]
    fn synthetic_irregular_instance() {
        // replace f by a polynomial real-positive at zeta_plus: arg = 0
        let mut inst = build(8, c(1.0, 0.0)).unwrap();
        inst.f = ComplexUnivariate::from_real(&[1.0]);
        assert_eq!(check_regularity(&inst), Regularity::IrregularInstance);
    }

    #[test]
    fn field_zeros_match_paper_equation() {
        // zeros of p_gen + conj(q_gen) are roots of conj(p) = q with
        // p = z^n + f, q = -z^n + f
        let inst = build(6, c(1.0, 0.02)).unwrap();
        let field = inst.field();
        let zn = {
            let mut v = alloc::vec![Complex64::ZERO; 7];
            v[6] = c(1.0, 0.0);
            ComplexUnivariate::new(v)
        };
        let p = zn.add(&inst.f);
        let q = zn.neg().add(&inst.f);
        for t in 0..40 {
            let z = Complex64::from_polar(1.7, 0.157 * t as f64);
            let lhs = field.eval_field(z);
            let rhs = p.horner(z).conj() - q.horner(z);
            // p_gen + conj(q_gen) = p - conj(q) = conj( conj(p) - q )
            assert!((lhs - rhs.conj()).norm() < 1e-9 * inst.f.coeff_scale());
        }
    }
}
