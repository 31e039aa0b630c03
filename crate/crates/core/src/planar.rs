//! The central solver for planar harmonic fields `F(z) = p(z) + conj(q(z))`:
//! locate every zero, classify its orientation by the Jacobian sign, and
//! compare the counts against the classical and conjectured valence bounds.

use crate::certify;
use crate::elim::{self, ElimError};
use crate::poly::ComplexUnivariate;
use crate::roots;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanarError {
    /// The zero set is a curve, not isolated points (e.g. `F = 2 Re z`).
    NonIsolatedZeroSet,
    /// Both `p` and `q` are constant; nothing to solve.
    DegenerateField,
}

impl fmt::Display for PlanarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarError::NonIsolatedZeroSet => write!(f, "non-isolated zero set"),
            PlanarError::DegenerateField => write!(f, "both parts constant"),
        }
    }
}

impl core::error::Error for PlanarError {}

/// Product-form evaluator for fields of the special shape
/// `p = z^n + f`, `q = z^n - f` with `f = (z - a)^{n-2} (z^2 + b1 z + b0)`,
/// so that `F = p + conj(q) = 2 Re(z^n) + 2 i Im(f(z))`.
///
/// Evaluating `p` and `q` by Horner destroys this structure: their
/// coefficients reach magnitudes far above `|z^n|` near the origin, so the
/// absolute roundoff of the coefficient form swamps the `2 Re(z^n)`
/// component entirely (for n = 16 it is below roundoff for `|z| < 0.2`).
/// The product form keeps every factor to full relative precision, which
/// makes zero locations, Jacobian signs, and contour windings near the
/// origin computable in double precision at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductForm {
    pub n: u32,
    pub a: Complex64,
    /// Linear coefficient of the quadratic factor.
    pub b1: Complex64,
    /// Constant coefficient of the quadratic factor.
    pub b0: Complex64,
}

impl ProductForm {
    /// `f(z)` and `f'(z)` from the factored representation.
    fn f_and_df(&self, z: Complex64) -> (Complex64, Complex64) {
        let za = z - self.a;
        let quad = (z + self.b1) * z + self.b0;
        let dquad = 2.0 * z + self.b1;
        let k = self.n - 2;
        // f = (z-a)^k quad, f' = (z-a)^{k-1} (k quad + (z-a) quad')
        let w = za.powu(k - 1);
        let f = w * za * quad;
        let df = w * (k as f64 * quad + za * dquad);
        (f, df)
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let zn = z.powu(self.n);
        let (f, _) = self.f_and_df(z);
        Complex64::new(2.0 * zn.re, 2.0 * f.im)
    }

    /// Roundoff bound on `eval`: each component carries a small relative
    /// error of its *magnitude* (`|z|^n` resp. `|f|`), not of the
    /// coefficient scale.
    fn eval_error(&self, z: Complex64) -> f64 {
        let zn_mag = z.norm().powi(self.n as i32);
        let za = z - self.a;
        let quad_mag = ((z.norm() + self.b1.norm()) * z.norm() + self.b0.norm()).abs();
        let f_mag = za.norm().powi(self.n as i32 - 2) * quad_mag;
        4.0 * self.n as f64 * f64::EPSILON * (zn_mag + f_mag) + f64::MIN_POSITIVE
    }

    /// `(A, B) = (n z^{n-1}, f'(z))`, the halves of
    /// `p' = A + B` and `q' = A - B`.
    fn split_derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        let a = self.n as f64 * z.powu(self.n - 1);
        let (_, df) = self.f_and_df(z);
        (a, df)
    }

    /// `|p'|^2 - |q'|^2 = 4 Re(A conj(B))`, computed without the
    /// catastrophic cancellation of the two squared norms.
    fn jacobian(&self, z: Complex64) -> f64 {
        let (a, b) = self.split_derivatives(z);
        4.0 * (a * b.conj()).re
    }
}

/// `F(z) = p(z) + conj(q(z))` with `p` not identically zero.
#[derive(Debug, Clone)]
pub struct PlanarHarmonicField {
    p: ComplexUnivariate,
    q: ComplexUnivariate,
    product: Option<ProductForm>,
}

impl PlanarHarmonicField {
    pub fn new(p: ComplexUnivariate, q: ComplexUnivariate) -> Self {
        assert!(!p.is_zero(), "p must not be identically zero");
        Self {
            p,
            q,
            product: None,
        }
    }

    /// Attach a product-form evaluator; evaluation, Jacobians, and Newton
    /// steps then use it instead of the coefficient representation.
    pub fn with_product_form(mut self, pf: ProductForm) -> Self {
        self.product = Some(pf);
        self
    }

    pub fn p(&self) -> &ComplexUnivariate {
        &self.p
    }

    pub fn q(&self) -> &ComplexUnivariate {
        &self.q
    }

    /// Analytic degree `n = deg p`.
    pub fn analytic_degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }

    /// Anti-analytic degree `m = deg q` (0 for `q = 0`).
    pub fn anti_degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    /// `p(z) + conj(q(z))`.
    pub fn eval_field(&self, z: Complex64) -> Complex64 {
        if let Some(pf) = &self.product {
            return pf.eval(z);
        }
        self.p.horner(z) + self.q.horner(z).conj()
    }

    /// Jacobian of `F` as a planar map: `|p'(z)|^2 - |q'(z)|^2`.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        if let Some(pf) = &self.product {
            return pf.jacobian(z);
        }
        let dp = self.p.derivative().horner(z);
        let dq = self.q.derivative().horner(z);
        dp.norm_sqr() - dq.norm_sqr()
    }

    pub fn coeff_scale(&self) -> f64 {
        self.p.coeff_scale().max(self.q.coeff_scale())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
    Singular,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
            Orientation::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Zero {
    pub location: Complex64,
    pub jacobian: f64,
    pub orientation: Orientation,
    pub residual: f64,
    pub refined: bool,
}

/// The five bounds of interest alongside satisfaction flags.
#[derive(Debug, Clone)]
pub struct BoundTable {
    /// `n^2` (Bezout).
    pub bezout: u64,
    /// `n^2`, valid only when `n > m` (Wilmshurst's theorem hypothesis).
    pub wilmshurst_theorem: u64,
    pub wilmshurst_applicable: bool,
    /// `3n - 2 + m(m-1)` (Wilmshurst's conjecture).
    pub conjecture_wilmshurst: u64,
    /// `m(n-1)` bound on orientation-reversing zeros.
    pub conjecture_new_nminus: u64,
    /// `2m(n-1) + n` total implied by the reversing-zero bound.
    pub conjecture_new_total: u64,
    pub bezout_satisfied: bool,
    pub wilmshurst_theorem_satisfied: bool,
    pub conjecture_wilmshurst_satisfied: bool,
    pub conjecture_new_nminus_satisfied: bool,
    pub conjecture_new_total_satisfied: bool,
}

impl BoundTable {
    pub fn compute(n: usize, m: usize, n_f: usize, n_minus: usize) -> Self {
        let (n_u, m_u) = (n as u64, m as u64);
        let bezout = n_u * n_u;
        let conjecture_wilmshurst = 3 * n_u - 2 + m_u * (m_u.saturating_sub(1));
        let conjecture_new_nminus = m_u * (n_u.saturating_sub(1));
        let conjecture_new_total = 2 * conjecture_new_nminus + n_u;
        BoundTable {
            bezout,
            wilmshurst_theorem: bezout,
            wilmshurst_applicable: n > m,
            conjecture_wilmshurst,
            conjecture_new_nminus,
            conjecture_new_total,
            bezout_satisfied: (n_f as u64) <= bezout,
            wilmshurst_theorem_satisfied: (n_f as u64) <= bezout,
            conjecture_wilmshurst_satisfied: (n_f as u64) <= conjecture_wilmshurst,
            conjecture_new_nminus_satisfied: (n_minus as u64) <= conjecture_new_nminus,
            conjecture_new_total_satisfied: (n_f as u64) <= conjecture_new_total,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveDiagnostics {
    /// Resultant roots whose Newton refinement diverged or stalled with a
    /// residual above the acceptance tolerance.
    pub spurious_candidates: usize,
    /// Accepted candidates merged into an earlier zero.
    pub merged_duplicates: usize,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub zeros: Vec<Zero>,
    pub n_f: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_singular: usize,
    /// Filled by the certifier, not by the solver.
    pub winding_at_infinity: Option<i64>,
    pub bounds: BoundTable,
    pub certified: bool,
    pub diagnostics: SolveDiagnostics,
    pub analytic_degree: usize,
    pub anti_degree: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Residual acceptance threshold as a multiple of the pointwise
    /// evaluation roundoff bound.
    pub tol_accept: f64,
    /// Merge radius, scaled by `max(1, |z|)`.
    pub merge_radius: f64,
    pub max_newton_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_accept: 64.0,
            merge_radius: 1e-6,
            max_newton_steps: 60,
        }
    }
}

/// Relative singularity threshold at `z`: `1e-12 (|p'|^2 + |q'|^2 + 1)`.
///
/// Genuinely singular zeros compute a Jacobian at roundoff level (relative
/// ~1e-15); nearly-singular but honestly signed zeros can sit as low as
/// ~1e-10 relative, so the cutoff lives between the two.
fn singular_threshold(field: &PlanarHarmonicField, z: Complex64) -> f64 {
    if let Some(pf) = &field.product {
        // the product-form Jacobian 4 Re(A conj B) carries relative error
        // ~n eps of |A||B|, not of the squared norms
        let (a, b) = pf.split_derivatives(z);
        return 1e-11 * (4.0 * a.norm() * b.norm()) + f64::MIN_POSITIVE;
    }
    let dp = field.p.derivative().horner(z);
    let dq = field.q.derivative().horner(z);
    1e-12 * (dp.norm_sqr() + dq.norm_sqr() + 1.0)
}

pub fn classify_zero(field: &PlanarHarmonicField, z: Complex64) -> (f64, Orientation) {
    let jac = field.jacobian(z);
    let delta = singular_threshold(field, z);
    let orientation = if jac > delta {
        Orientation::Preserving
    } else if jac < -delta {
        Orientation::Reversing
    } else {
        Orientation::Singular
    };
    (jac, orientation)
}

/// Partition refined zeros into (preserving, reversing, singular) counts.
pub fn classify(field: &PlanarHarmonicField, zeros: &[Zero]) -> (usize, usize, usize) {
    let mut counts = (0, 0, 0);
    for z in zeros {
        match classify_zero(field, z.location).1 {
            Orientation::Preserving => counts.0 += 1,
            Orientation::Reversing => counts.1 += 1,
            Orientation::Singular => counts.2 += 1,
        }
    }
    counts
}

/// One Newton step on the real 2-system `(Re F, Im F)`.
///
/// With `A = F_z = p'(z)` and `B = F_zbar = conj(q'(z))` the correction
/// solves `A d + B conj(d) = -F`, i.e.
/// `d = (-conj(A) F + B conj(F)) / (|A|^2 - |B|^2)`.
pub(crate) fn newton_step(
    field: &PlanarHarmonicField,
    dp: &ComplexUnivariate,
    dq: &ComplexUnivariate,
    z: Complex64,
) -> Option<Complex64> {
    if let Some(pf) = &field.product {
        // With p' = A + B and q' = A - B the generic correction collapses
        // to d = -(i v conj(A) + u conj(B)) / (2 Re(A conj B)) for
        // F = u + i v, which is free of the cancellations that make the
        // coefficient form useless near the origin.
        let fv = pf.eval(z);
        let (a, b) = pf.split_derivatives(z);
        let det = 2.0 * (a * b.conj()).re;
        if det.abs() < 1e-300 {
            return None;
        }
        let d = -(Complex64::i() * fv.im * a.conj() + fv.re * b.conj()) / det;
        return if d.re.is_finite() && d.im.is_finite() {
            Some(d)
        } else {
            None
        };
    }
    let fv = field.eval_field(z);
    let a = dp.horner(z);
    let b = dq.horner(z).conj();
    let det = a.norm_sqr() - b.norm_sqr();
    if det.abs() < 1e-300 {
        return None;
    }
    let d = (-a.conj() * fv + b * fv.conj()) / det;
    if d.re.is_finite() && d.im.is_finite() {
        Some(d)
    } else {
        None
    }
}

/// Pointwise acceptance threshold: a multiple of the Horner roundoff bound
/// for `|p(z)| + |q(z)|` at this specific point.
///
/// A global `tol * coeff_scale` threshold is far too lax for fields with
/// large coefficients: it accepts points that merely come close to the
/// zero set. The per-point bound tracks what "numerically zero" actually
/// means at `z`.
pub(crate) fn residual_floor(field: &PlanarHarmonicField, z: Complex64) -> f64 {
    if let Some(pf) = &field.product {
        return pf.eval_error(z);
    }
    let (_, ep) = field.p.eval_with_error(z);
    let (_, eq) = field.q.eval_with_error(z);
    ep + eq + f64::MIN_POSITIVE
}

/// Refine a candidate on the harmonic system; `None` when it diverges or
/// stalls above the acceptance threshold (`tol_floor_multiple` times the
/// pointwise roundoff floor).
fn refine_candidate(
    field: &PlanarHarmonicField,
    dp: &ComplexUnivariate,
    dq: &ComplexUnivariate,
    start: Complex64,
    tol_floor_multiple: f64,
    max_steps: usize,
) -> Option<Complex64> {
    let mut z = start;
    let mut best = z;
    let mut best_residual = field.eval_field(z).norm();
    for _ in 0..max_steps {
        let d = newton_step(field, dp, dq, z)?;
        z += d;
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1e12 {
            break;
        }
        let residual = field.eval_field(z).norm();
        if residual < best_residual {
            best = z;
            best_residual = residual;
        }
        // converged to machine precision in the step size
        if d.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    if best_residual <= tol_floor_multiple * residual_floor(field, best) {
        Some(best)
    } else {
        None
    }
}

/// Build a classified [`Zero`] record at a refined location.
pub(crate) fn make_zero(field: &PlanarHarmonicField, z: Complex64) -> Zero {
    let (jac, orientation) = classify_zero(field, z);
    Zero {
        location: z,
        jacobian: jac,
        orientation,
        residual: field.eval_field(z).norm(),
        refined: true,
    }
}

/// Recompute the counts and bound table after the zero list changed.
pub(crate) fn recount(field: &PlanarHarmonicField, report: &mut SolveReport) {
    report.zeros.sort_by(|a, b| {
        a.location
            .re
            .partial_cmp(&b.location.re)
            .unwrap()
            .then(a.location.im.partial_cmp(&b.location.im).unwrap())
    });
    let (n_plus, n_minus, n_singular) = classify(field, &report.zeros);
    report.n_f = report.zeros.len();
    report.n_plus = n_plus;
    report.n_minus = n_minus;
    report.n_singular = n_singular;
    report.bounds = BoundTable::compute(
        report.analytic_degree,
        report.anti_degree,
        report.n_f,
        n_minus,
    );
}

/// Cauchy-type radius containing every zero of the field.
///
/// With `n = deg p > 0`, any zero satisfies
/// `|p_n| r^n <= sum_{k<n} |p_k| r^k + sum_k |q_k| r^k`,
/// so all zeros lie within the unique positive root of
/// `G(r) = |p_n| r^n - sum (...) r^k`, found here by doubling + bisection.
/// Requires `deg p > deg q`; returns a harmless overestimate otherwise.
pub fn zero_radius_bound(field: &PlanarHarmonicField) -> f64 {
    let n = field.analytic_degree();
    let lead = field.p.leading().norm();
    let mut lower = alloc::vec![0.0f64; n];
    for k in 0..n {
        lower[k] += field.p.coeff(k).norm();
    }
    for (k, c) in field.q.coeffs().iter().enumerate() {
        if k < n {
            lower[k] += c.norm();
        } else {
            // deg q >= deg p: no coercivity from p's leading term alone
            return f64::INFINITY;
        }
    }
    let g = |r: f64| -> f64 {
        let mut acc = 0.0;
        for &c in lower.iter().rev() {
            acc = acc * r + c;
        }
        lead * r.powi(n as i32) - acc
    };
    let mut hi = 1.0f64;
    while g(hi) <= 0.0 && hi < 1e150 {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // small safety margin over the bisected bound
    hi * 1.01 + 0.01
}

/// Complete candidate set for product-form fields `F = 2 Re(z^n) + 2i Im f`.
///
/// `Re(z^n) = 0` exactly on the `2n` rays `arg z = (2k+1) pi / (2n)`, so
/// every zero lies on one of them, where `Im f(t e^{i theta})` is a real
/// polynomial in the radius `t`. Root-finding those `2n` univariate
/// polynomials therefore yields every zero, including the near-origin ones
/// that no two-dimensional scan can afford to resolve.
fn ray_candidates(field: &PlanarHarmonicField) -> Vec<Complex64> {
    let n = field.analytic_degree();
    // f = p - z^n
    let mut fc = field.p.coeffs().to_vec();
    fc[n] -= Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for k in 0..2 * n {
        let theta = (2 * k + 1) as f64 * core::f64::consts::PI / (2.0 * n as f64);
        let e = Complex64::from_polar(1.0, theta);
        let mut rot = Complex64::new(1.0, 0.0);
        let mut g = Vec::with_capacity(n + 1);
        for c in &fc {
            g.push(Complex64::new((c * rot).im, 0.0));
            rot *= e;
        }
        let g = ComplexUnivariate::new(g).trim_trailing(1e-14);
        let Some(d) = g.degree() else { continue };
        if d == 0 {
            continue;
        }
        if let Ok(found) = roots::all_roots(&g, 1e-12) {
            for t in found.roots {
                if t.re > 0.0 && t.im.abs() < 1e-6 * (1.0 + t.re) {
                    out.push(t.re * e);
                }
            }
        }
    }
    out
}

/// Locate, refine, deduplicate, and classify every zero of the field.
///
/// Pipeline: eliminate the conjugate variable (Sylvester resultant), find
/// the roots of `R(z)`, Newton-refine each candidate on `(Re F, Im F)`,
/// accept by residual, merge duplicates, classify by Jacobian sign.
pub fn solve(field: &PlanarHarmonicField, opts: &SolveOptions) -> Result<SolveReport, PlanarError> {
    let n = field.analytic_degree();
    let m = field.anti_degree();
    if n == 0 && m == 0 {
        return Err(PlanarError::DegenerateField);
    }

    let mut candidates: Vec<Complex64> = if m == 0 {
        // F = p(z) + conj(q0): roots of the analytic polynomial directly
        let shifted = field
            .p
            .add(&ComplexUnivariate::constant(field.q.coeff(0).conj()));
        match shifted.degree() {
            Some(d) if d >= 1 => roots::all_roots(&shifted, 1e-12)
                .map_err(|_| PlanarError::DegenerateField)?
                .roots,
            _ => {
                // nonzero constant has no zeros; zero constant is a plane of zeros
                if shifted.is_zero() {
                    return Err(PlanarError::NonIsolatedZeroSet);
                }
                Vec::new()
            }
        }
    } else if n == 0 {
        // F = p0 + conj(q(z)): zeros where q(z) = -conj(p0)
        let shifted = field
            .q
            .add(&ComplexUnivariate::constant(field.p.coeff(0).conj()));
        roots::all_roots(&shifted, 1e-12)
            .map_err(|_| PlanarError::DegenerateField)?
            .roots
    } else {
        let (a, b) = elim::build_conjugate_system(&field.p, &field.q);
        let resultant = match elim::resultant_w(&a, &b) {
            Ok(r) => r,
            Err(ElimError::NonIsolatedZeroSet) => return Err(PlanarError::NonIsolatedZeroSet),
            Err(ElimError::DegenerateElimination) => unreachable!("m >= 1 and n >= 1"),
        };
        let trimmed = resultant.trim_trailing(1e-12);
        match trimmed.degree() {
            Some(d) if d >= 1 => roots::all_roots(&trimmed, 1e-12)
                .map_err(|_| PlanarError::DegenerateField)?
                .roots,
            _ => Vec::new(),
        }
    };

    if n >= 1 && m >= 1 {
        // The interpolated resultant loses coefficients whose magnitude sits
        // below the interpolation noise floor (its coefficients can span far
        // more than 16 orders of magnitude), silently dropping candidates.
        // A stabilized sign-change scan over the zero-radius bound recovers
        // anything missing; both candidate sets feed the same refinement.
        let half_width = zero_radius_bound(field);
        let start_res = if n.max(m) <= 8 { 64 } else { 256 };
        candidates.extend(certify::grid_oracle_stabilized(
            field,
            certify::Rect::square(Complex64::ZERO, half_width),
            start_res,
        ));
    }

    if field.product.is_some() {
        candidates.extend(ray_candidates(field));
    }

    let dp = field.p.derivative();
    let dq = field.q.derivative();
    let mut diagnostics = SolveDiagnostics::default();
    let mut refined: Vec<Complex64> = Vec::new();
    for cand in candidates {
        match refine_candidate(field, &dp, &dq, cand, opts.tol_accept, opts.max_newton_steps) {
            Some(z) => refined.push(z),
            None => diagnostics.spurious_candidates += 1,
        }
    }

    // deterministic dedup: sort by (re, im), merge within the merge radius
    refined.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let mut unique: Vec<Complex64> = Vec::new();
    for z in refined {
        let dup = unique
            .iter()
            .any(|u| (u - z).norm() <= opts.merge_radius * u.norm().max(1.0));
        if dup {
            diagnostics.merged_duplicates += 1;
        } else {
            unique.push(z);
        }
    }

    let zeros: Vec<Zero> = unique
        .into_iter()
        .map(|z| {
            let (jac, orientation) = classify_zero(field, z);
            Zero {
                location: z,
                jacobian: jac,
                orientation,
                residual: field.eval_field(z).norm(),
                refined: true,
            }
        })
        .collect();

    let (n_plus, n_minus, n_singular) = classify(field, &zeros);
    let n_f = zeros.len();
    // Wilmshurst's theorem is a hard invariant of the solver output.
    if n > m {
        assert!(
            n_f <= n * n,
            "solver bug: found {n_f} zeros with n = {n}, above the n^2 bound"
        );
    }
    let bounds = BoundTable::compute(n, m, n_f, n_minus);

    Ok(SolveReport {
        zeros,
        n_f,
        n_plus,
        n_minus,
        n_singular,
        winding_at_infinity: None,
        bounds,
        certified: false,
        diagnostics,
        analytic_degree: n,
        anti_degree: m,
    })
}
