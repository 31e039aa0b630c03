//! Harmonic vector fields in dimension `d >= 3`.
//!
//! Leading/lower decomposition, sampled coercivity on the unit sphere, the
//! Milnor bound on connected components, and the explicit 3-D example whose
//! zero set contains four full circles (codimension two, not zero).

use crate::poly::{PolyError, RealMultivariate};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperdimError {
    /// A component failed the exact harmonicity check.
    NotHarmonic { component: usize },
    /// The public API caps the dimension at 4.
    DimensionTooLarge,
    /// The sampled minimum of the leading part on the sphere is ~0.
    LeadingPartVanishes,
}

impl fmt::Display for HyperdimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperdimError::NotHarmonic { component } => {
                write!(f, "component {component} is not harmonic")
            }
            HyperdimError::DimensionTooLarge => write!(f, "dimension capped at 4"),
            HyperdimError::LeadingPartVanishes => {
                write!(f, "leading part vanishes on the unit sphere")
            }
        }
    }
}

impl core::error::Error for HyperdimError {}

/// A `d`-component vector field with harmonic polynomial components.
#[derive(Debug, Clone)]
pub struct HarmonicFieldND {
    dimension: usize,
    components: Vec<RealMultivariate>,
}

impl HarmonicFieldND {
    pub fn new(components: Vec<RealMultivariate>) -> Result<Self, HyperdimError> {
        let dimension = components.first().map(|c| c.dim()).unwrap_or(0);
        if dimension > 4 {
            return Err(HyperdimError::DimensionTooLarge);
        }
        for (k, comp) in components.iter().enumerate() {
            if comp.dim() != dimension {
                return Err(HyperdimError::NotHarmonic { component: k });
            }
            if !comp.is_harmonic() {
                return Err(HyperdimError::NotHarmonic { component: k });
            }
        }
        Ok(Self {
            dimension,
            components,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn components(&self) -> &[RealMultivariate] {
        &self.components
    }

    /// Maximum component degree.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    /// Top-degree homogeneous part of every component (degree = the field
    /// degree; components of lower degree contribute nothing).
    pub fn leading_part(&self) -> Vec<RealMultivariate> {
        let n = self.degree();
        self.components
            .iter()
            .map(|c| {
                if c.degree() == n {
                    c.leading_part()
                } else {
                    RealMultivariate::zero(self.dimension)
                }
            })
            .collect()
    }

    pub fn lower_part(&self) -> Vec<RealMultivariate> {
        self.components
            .iter()
            .zip(self.leading_part())
            .map(|(c, top)| c.sub(&top))
            .collect()
    }

    pub fn eval_nd(&self, x: &[f64]) -> Result<Vec<f64>, PolyError> {
        self.components.iter().map(|c| c.eval_multi(x)).collect()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn eval_norm(components: &[RealMultivariate], x: &[f64]) -> f64 {
    norm(
        &components
            .iter()
            .map(|c| c.eval_multi(x).unwrap_or(f64::NAN))
            .collect::<Vec<f64>>(),
    )
}

/// Near-uniform points on `S^2` (Fibonacci lattice). For `d != 3` a
/// deterministic low-discrepancy fallback on the sphere is used.
fn sphere_samples(d: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    if d == 3 {
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        for k in 0..count {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = 2.0 * PI * (k as f64 / golden).fract();
            out.push(vec![r * phi.cos(), r * phi.sin(), z]);
        }
    } else {
        // additive-recurrence angles mapped through coordinates
        let mut state = 0.5f64;
        for _ in 0..count {
            let mut x = Vec::with_capacity(d);
            for i in 0..d {
                state = (state + (i as f64 + 2.0).sqrt()).fract();
                x.push(2.0 * state - 1.0);
            }
            let n = norm(&x);
            if n > 1e-9 {
                for xi in &mut x {
                    *xi /= n;
                }
                out.push(x);
            }
        }
    }
    out
}

/// Sampled minimum of `|F_n|` over the unit sphere, polished by local
/// coordinate descent from the 20 smallest samples. A non-rigorous lower
/// estimate.
pub fn min_leading_on_sphere(field: &HarmonicFieldND, samples: usize) -> f64 {
    assert!(samples >= 10_000, "need at least 1e4 samples");
    let leading = field.leading_part();
    let pts = sphere_samples(field.dimension, samples);
    let mut scored: Vec<(f64, &Vec<f64>)> = pts
        .iter()
        .map(|x| (eval_norm(&leading, x), x))
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = scored.first().map(|s| s.0).unwrap_or(f64::INFINITY);
    for (_, x) in scored.iter().take(20) {
        best = best.min(descend_on_sphere(&leading, x));
    }
    best
}

/// Coordinate descent of `|F_n|` constrained to the sphere.
fn descend_on_sphere(components: &[RealMultivariate], start: &[f64]) -> f64 {
    let d = start.len();
    let mut x = start.to_vec();
    let mut value = eval_norm(components, &x);
    let mut step = 0.05f64;
    while step > 1e-7 {
        let mut improved = false;
        for i in 0..d {
            for dir in [-1.0, 1.0] {
                let mut y = x.clone();
                y[i] += dir * step;
                let n = norm(&y);
                if n < 1e-12 {
                    continue;
                }
                for yi in &mut y {
                    *yi /= n;
                }
                let v = eval_norm(components, &y);
                if v < value {
                    value = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    value
}

/// `R = 1.25 max(1, max_sphere |F_L| / min_sphere |F_n|)`; all zeros of the
/// field lie inside the ball of this radius.
pub fn coercive_radius_nd(field: &HarmonicFieldND) -> Result<f64, HyperdimError> {
    let samples = 20_000;
    let min_leading = min_leading_on_sphere(field, samples);
    if min_leading < 1e-6 {
        return Err(HyperdimError::LeadingPartVanishes);
    }
    let lower = field.lower_part();
    let max_lower = sphere_samples(field.dimension, samples)
        .iter()
        .map(|x| eval_norm(&lower, x))
        .fold(0.0, f64::max);
    Ok(1.25 * (max_lower / min_leading).max(1.0))
}

/// Milnor's bound `n (2n-1)^{d-1}` on the number of connected components of
/// the zero set.
pub fn milnor_bound(n: u64, d: u32) -> u64 {
    assert!(n >= 1 && d >= 1);
    n * (2 * n - 1).pow(d - 1)
}

/// The explicit 3-D example:
/// `u = xy (6z^2 - x^2 - y^2)`,
/// `v = (x^2 - y^2)(6z^2 - x^2 - y^2)`,
/// `w = 35 (z-1)^4 - 30 (z-1)^2 rho^2 + 3 rho^4` with
/// `rho^2 = x^2 + y^2 + (z-1)^2`.
pub fn build_example3d() -> HarmonicFieldND {
    let x = RealMultivariate::var(3, 0);
    let y = RealMultivariate::var(3, 1);
    let z = RealMultivariate::var(3, 2);
    let cone = z
        .mul(&z)
        .scale(6.0)
        .sub(&x.mul(&x))
        .sub(&y.mul(&y));
    let u = x.mul(&y).mul(&cone);
    let v = x.mul(&x).sub(&y.mul(&y)).mul(&cone);
    let zs = z.sub(&RealMultivariate::constant(3, 1.0));
    let zs2 = zs.mul(&zs);
    let rho2 = x.mul(&x).add(&y.mul(&y)).add(&zs2);
    let w = zs2
        .mul(&zs2)
        .scale(35.0)
        .sub(&zs2.mul(&rho2).scale(30.0))
        .add(&rho2.mul(&rho2).scale(3.0));
    HarmonicFieldND::new(vec![u, v, w]).expect("example components are harmonic")
}

/// One circle of the example's zero set: `{x^2 + y^2 = 6 height^2, z = height}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleRecord {
    pub height: f64,
    pub radius: f64,
}

/// The four circles where the cone `{u = v = 0}` meets the two cones of
/// `{w = 0}`.
///
/// On the common cone `x^2 + y^2 = 6z^2` the `w = 0` condition reduces to
/// `6z^2 = k (z-1)^2` with `k = (1 - t^2)/t^2` at the two Legendre-quartic
/// zeros `t^2 = (15 +/- 2 sqrt(30))/35`; each `k` contributes two heights.
pub fn circle_zero_sets() -> Vec<CircleRecord> {
    let s30 = 30.0f64.sqrt();
    let mut circles = Vec::with_capacity(4);
    for t2 in [(15.0 + 2.0 * s30) / 35.0, (15.0 - 2.0 * s30) / 35.0] {
        let k = (1.0 - t2) / t2;
        // (6 - k) z^2 + 2k z - k = 0, solved stably
        let a = 6.0 - k;
        let b = 2.0 * k;
        let c = -k;
        let disc = (b * b - 4.0 * a * c).sqrt();
        let q = -0.5 * (b + b.signum() * disc);
        for height in [q / a, c / q] {
            let height = polish_height(height);
            circles.push(CircleRecord {
                height,
                radius: 6.0f64.sqrt() * height.abs(),
            });
        }
    }
    circles.sort_by(|p, r| p.height.partial_cmp(&r.height).unwrap());
    circles
}

/// A couple of Newton steps on `w` restricted to the cone, tightening the
/// closed-form height against floating error.
fn polish_height(h0: f64) -> f64 {
    let w_on_cone = |h: f64| {
        let rho2 = 6.0 * h * h + (h - 1.0) * (h - 1.0);
        35.0 * (h - 1.0).powi(4) - 30.0 * (h - 1.0).powi(2) * rho2 + 3.0 * rho2 * rho2
    };
    let mut h = h0;
    for _ in 0..3 {
        let dh = 1e-7 * h.abs().max(1e-3);
        let deriv = (w_on_cone(h + dh) - w_on_cone(h - dh)) / (2.0 * dh);
        if deriv.abs() < 1e-300 {
            break;
        }
        h -= w_on_cone(h) / deriv;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_components_are_harmonic() {
        let field = build_example3d();
        for comp in field.components() {
            assert!(comp.laplacian().is_zero(), "laplacian must vanish exactly");
        }
        assert_eq!(field.degree(), 4);
        for comp in field.components() {
            assert_eq!(comp.degree(), 4);
        }
    }

    #[test]
    fn example_leading_part_of_w() {
        let field = build_example3d();
        let leading = field.leading_part();
        // w4 = 35 z^4 - 30 z^2 rho^2 + 3 rho^4 with rho^2 = x^2+y^2+z^2
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
        assert_eq!(leading[2], w4);
    }

    #[test]
    fn example_eval_points() {
        let field = build_example3d();
        // (0,0,1) is the shared cone vertex of {w = 0}
        assert_eq!(field.eval_nd(&[0.0, 0.0, 1.0]).unwrap(), alloc::vec![0.0, 0.0, 0.0]);
        // at the origin: u = v = 0, w = 35 - 30 + 3 = 8
        assert_eq!(field.eval_nd(&[0.0, 0.0, 0.0]).unwrap(), alloc::vec![0.0, 0.0, 8.0]);
    }

    #[test]
    fn zero_field_evaluates_to_zero_vector() {
        let zero =
            HarmonicFieldND::new(alloc::vec![RealMultivariate::zero(3), RealMultivariate::zero(3)])
                .unwrap();
        assert_eq!(zero.eval_nd(&[1.0, 2.0, 3.0]).unwrap(), alloc::vec![0.0, 0.0]);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let field = build_example3d();
        assert!(field.eval_nd(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn non_harmonic_component_rejected() {
        let x = RealMultivariate::var(3, 0);
        let x2 = x.mul(&x);
        assert!(matches!(
            HarmonicFieldND::new(alloc::vec![x2]),
            Err(HyperdimError::NotHarmonic { component: 0 })
        ));
    }

    #[test]
    fn milnor_bound_values() {
        assert_eq!(milnor_bound(4, 3), 196);
        for n in 1..10 {
            assert_eq!(milnor_bound(n, 1), n);
        }
        for d in 1..5 {
            assert_eq!(milnor_bound(1, d), 1);
        }
    }

    #[test]
    fn coercive_radius_of_homogeneous_field() {
        // components of a homogeneous harmonic field: F_L = 0
        let x = RealMultivariate::var(3, 0);
        let y = RealMultivariate::var(3, 1);
        let z = RealMultivariate::var(3, 2);
        let field = HarmonicFieldND::new(alloc::vec![x, y, z]).unwrap();
        assert!((coercive_radius_nd(&field).unwrap() - 1.25).abs() < 1e-9);
    }

    #[test]
    fn legendre_zero_separation() {
        // zeros of P4 (t^2 = (15 +/- 2 sqrt 30)/35) vs the P_{4,2} zero
        // t^2 = 1/7: pairwise gaps above 0.02
        let s30 = 30.0f64.sqrt();
        let p4: alloc::vec::Vec<f64> = [(15.0 + 2.0 * s30) / 35.0, (15.0 - 2.0 * s30) / 35.0]
            .iter()
            .map(|t2| t2.sqrt())
            .collect();
        let p42 = (1.0f64 / 7.0).sqrt();
        for t in &p4 {
            assert!((t - p42).abs() > 0.02);
        }
        assert!((p4[0] - p4[1]).abs() > 0.02);
    }

    #[test]
    fn w4_nonvanishing_on_u_v_nodal_intersections() {
        let field = build_example3d();
        let w4 = &field.leading_part()[2];
        // poles
        assert_eq!(w4.eval_multi(&[0.0, 0.0, 1.0]).unwrap(), 8.0);
        // horizontal nodal circle of u and v: cos(theta) = 1/sqrt(7)
        let ct = (1.0f64 / 7.0).sqrt();
        let st = (1.0 - ct * ct).sqrt();
        let val = w4.eval_multi(&[st, 0.0, ct]).unwrap();
        assert!((val / 8.0 + 0.0714).abs() < 1e-3, "got {val}");
        assert!(val.abs() > 1e-3);
    }

    #[test]
    fn circle_heights_match_quadratic_oracle() {
        let circles = circle_zero_sets();
        assert_eq!(circles.len(), 4);
        let expected = [
            -0.317541233473,
            0.194205026286,
            0.530355137333,
            8.735838212711,
        ];
        for (c, e) in circles.iter().zip(expected) {
            assert!((c.height - e).abs() < 1e-9, "height {} vs {e}", c.height);
            assert!((c.radius - 6.0f64.sqrt() * c.height.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn circles_are_zeros_of_the_field() {
        let field = build_example3d();
        for circle in circle_zero_sets() {
            for k in 0..100 {
                let phi = 2.0 * PI * k as f64 / 100.0;
                let x = circle.radius * phi.cos();
                let y = circle.radius * phi.sin();
                let v = field.eval_nd(&[x, y, circle.height]).unwrap();
                // u and v share the cone factor: exactly zero up to rounding
                let scale = (1.0 + circle.height.abs()).powi(4);
                assert!(norm(&v) < 1e-9 * scale.max(1.0), "residual {} at {phi}", norm(&v));
            }
        }
    }
}
