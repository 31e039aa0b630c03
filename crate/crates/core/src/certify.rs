//! Independent verification of solver output.
//!
//! Winding numbers along contours via the argument principle for harmonic
//! functions, a coercive radius confining all zeros, recursive subdivision
//! certification of per-zero orientations, and a brute-force grid oracle.
//! Windings are computed from field evaluations only; solver-reported
//! locations are used solely to choose box geometry.

use crate::planar::{Orientation, PlanarHarmonicField, SolveReport, Zero};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyError {
    /// The contour passes too close to a zero for the phase to be tracked.
    ZeroOnContour,
    /// The leading homogeneous part vanishes somewhere on the unit circle.
    LeadingPartVanishes,
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::ZeroOnContour => write!(f, "zero on or too near the contour"),
            CertifyError::LeadingPartVanishes => {
                write!(f, "leading part vanishes on the unit circle")
            }
        }
    }
}

impl core::error::Error for CertifyError {}

/// Axis-aligned rectangle given by two opposite corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub lo: Complex64,
    pub hi: Complex64,
}

impl Rect {
    pub fn new(lo: Complex64, hi: Complex64) -> Self {
        assert!(lo.re < hi.re && lo.im < hi.im, "empty rectangle");
        Self { lo, hi }
    }

    pub fn square(center: Complex64, half_width: f64) -> Self {
        let d = Complex64::new(half_width, half_width);
        Self::new(center - d, center + d)
    }

    pub fn width(&self) -> f64 {
        self.hi.re - self.lo.re
    }

    pub fn height(&self) -> f64 {
        self.hi.im - self.lo.im
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.lo.re && z.re <= self.hi.re && z.im >= self.lo.im && z.im <= self.hi.im
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Contour {
    Circle { center: Complex64, radius: f64 },
    Rectangle(Rect),
}

impl Contour {
    /// Point at parameter `t` in `[0, 1)`, counterclockwise.
    fn point(&self, t: f64) -> Complex64 {
        match *self {
            Contour::Circle { center, radius } => {
                center + Complex64::from_polar(radius, 2.0 * PI * t)
            }
            Contour::Rectangle(r) => {
                let (w, h) = (r.width(), r.height());
                let perimeter = 2.0 * (w + h);
                let mut s = t * perimeter;
                if s < w {
                    return Complex64::new(r.lo.re + s, r.lo.im);
                }
                s -= w;
                if s < h {
                    return Complex64::new(r.hi.re, r.lo.im + s);
                }
                s -= h;
                if s < w {
                    return Complex64::new(r.hi.re - s, r.hi.im);
                }
                s -= w;
                Complex64::new(r.lo.re, r.hi.im - s)
            }
        }
    }
}

const BASE_CONTOUR_SAMPLES: usize = 256;
const MAX_BISECTION_DEPTH: usize = 48;

/// Argument change of `F` over the contour arc `(t0, t1)` with endpoint
/// values `v0`, `v1`, bisecting recursively until each piece turns by less
/// than pi/2. Bisection (rather than globally doubling the sample count)
/// matters because these fields can flip phase by nearly pi over contour
/// arcs as short as 1e-7 of the perimeter wherever one harmonic component
/// crosses zero while the other is small.
fn arg_change(
    field: &PlanarHarmonicField,
    contour: &Contour,
    scale: Complex64,
    (t0, v0): (f64, Complex64),
    (t1, v1): (f64, Complex64),
    floor: f64,
    depth: usize,
) -> Result<f64, CertifyError> {
    let d = (v1 / v0).arg();
    if d.abs() < PI / 2.0 {
        return Ok(d);
    }
    if depth >= MAX_BISECTION_DEPTH {
        return Err(CertifyError::ZeroOnContour);
    }
    let tm = 0.5 * (t0 + t1);
    let raw = field.eval_field(contour.point(tm));
    let vm = Complex64::new(raw.re * scale.re, raw.im * scale.im);
    if !vm.norm().is_finite() || vm.norm() < floor {
        return Err(CertifyError::ZeroOnContour);
    }
    Ok(
        arg_change(field, contour, scale, (t0, v0), (tm, vm), floor, depth + 1)?
            + arg_change(field, contour, scale, (tm, vm), (t1, v1), floor, depth + 1)?,
    )
}

/// Winding number of `F` along the contour: total argument change over 2 pi.
///
/// The two components are first rescaled by their maxima over the contour.
/// A positive diagonal scaling is a homotopy of nonvanishing maps, so the
/// winding is unchanged, while the phase tracking stops depending on the
/// (often astronomical) magnitude ratio between `Re F` and `Im F`.
pub fn winding(field: &PlanarHarmonicField, contour: &Contour) -> Result<i64, CertifyError> {
    let samples = BASE_CONTOUR_SAMPLES;
    let raw: Vec<Complex64> = (0..samples)
        .map(|k| field.eval_field(contour.point(k as f64 / samples as f64)))
        .collect();
    let u_max = raw.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let v_max = raw.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if u_max == 0.0 || v_max == 0.0 || !u_max.is_finite() || !v_max.is_finite() {
        return Err(CertifyError::ZeroOnContour);
    }
    let scale = Complex64::new(1.0 / u_max, 1.0 / v_max);
    let values: Vec<Complex64> = raw
        .iter()
        .map(|v| Complex64::new(v.re * scale.re, v.im * scale.im))
        .collect();
    let floor = 1e-12;
    if values.iter().any(|v| v.norm() < floor) {
        return Err(CertifyError::ZeroOnContour);
    }
    let mut total = 0.0f64;
    for k in 0..samples {
        let t0 = k as f64 / samples as f64;
        let t1 = (k + 1) as f64 / samples as f64;
        total += arg_change(
            field,
            contour,
            scale,
            (t0, values[k]),
            (t1, values[(k + 1) % samples]),
            floor,
            0,
        )?;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.25 {
        return Err(CertifyError::ZeroOnContour);
    }
    Ok(rounded as i64)
}

const SPHERE_SAMPLES: usize = 4096;

/// Radius beyond which `|F| > 0` is guaranteed by the coercivity inequality
/// `|F(x)| >= |F_n(x)| - |F_L(x)|`:
/// `R = 1.25 max(1, max_circle |F_L| / min_circle |F_n|)`.
pub fn coercive_radius(field: &PlanarHarmonicField) -> Result<f64, CertifyError> {
    let n = field.analytic_degree().max(field.anti_degree());
    let pn = field.p().coeff(n);
    let qn = field.q().coeff(n);
    let mut min_leading = f64::INFINITY;
    let mut max_lower = 0.0f64;
    for k in 0..SPHERE_SAMPLES {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / SPHERE_SAMPLES as f64);
        let zn = z.powu(n as u32);
        let leading = pn * zn + (qn * zn).conj();
        min_leading = min_leading.min(leading.norm());
        let lower = field.eval_field(z) - leading;
        max_lower = max_lower.max(lower.norm());
    }
    if min_leading < 1e-9 {
        return Err(CertifyError::LeadingPartVanishes);
    }
    Ok(1.25 * (max_lower / min_leading).max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxStatus {
    Consistent,
    Inconsistent,
    BoundaryZero,
}

#[derive(Debug, Clone)]
pub struct CertBox {
    pub rect: Rect,
    pub winding: Option<i64>,
    /// (N+, N-) claimed by the solver inside this box.
    pub zeros_inside: (usize, usize),
    pub status: BoxStatus,
}

/// Summary of a subdivision certification run.
#[derive(Debug, Clone)]
pub struct Certification {
    pub boxes: Vec<CertBox>,
    pub winding_at_infinity: Option<i64>,
    pub all_consistent: bool,
    pub boundary_incomplete: usize,
}

impl Certification {
    pub fn consistent_fraction(&self) -> f64 {
        if self.boxes.is_empty() {
            return 1.0;
        }
        let ok = self
            .boxes
            .iter()
            .filter(|b| b.status == BoxStatus::Consistent)
            .count();
        ok as f64 / self.boxes.len() as f64
    }
}

/// Recursively split `window` until each box holds at most one reported
/// zero, then check each box winding against the zero's orientation.
pub fn subdivision_certify(
    field: &PlanarHarmonicField,
    window: Rect,
    report: &SolveReport,
    max_depth: usize,
) -> Vec<CertBox> {
    let zeros: Vec<&Zero> = report
        .zeros
        .iter()
        .filter(|z| window.contains(z.location))
        .collect();
    let mut boxes = Vec::new();
    subdivide(field, window, &zeros, max_depth, &mut boxes);
    boxes
}

fn subdivide(
    field: &PlanarHarmonicField,
    rect: Rect,
    zeros: &[&Zero],
    depth: usize,
    out: &mut Vec<CertBox>,
) {
    if zeros.len() <= 1 || depth == 0 {
        out.push(certify_leaf(field, rect, zeros));
        return;
    }
    let vertical = rect.width() >= rect.height();
    // Cut at the widest gap between consecutive zero coordinates within the
    // middle half of the sorted list: the cut then sits as far as possible
    // from every zero (zeros of these fields cluster near lines, where a
    // plain midpoint cut would graze them), and both halves keep at least a
    // quarter of the zeros, bounding the recursion depth logarithmically.
    let mut coords: Vec<f64> = zeros
        .iter()
        .map(|z| {
            if vertical {
                z.location.re
            } else {
                z.location.im
            }
        })
        .collect();
    coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = coords.len();
    let (from, to) = if k >= 4 { (k / 4, k - k / 4) } else { (1, k) };
    let mut cut = f64::NAN;
    let mut best_gap = 0.0;
    for i in from..to {
        let gap = coords[i] - coords[i - 1];
        if gap > best_gap {
            best_gap = gap;
            cut = 0.5 * (coords[i] + coords[i - 1]);
        }
    }
    if !cut.is_finite() || best_gap == 0.0 {
        // all central coordinates coincide; fall back to the box midpoint
        cut = if vertical {
            0.5 * (rect.lo.re + rect.hi.re)
        } else {
            0.5 * (rect.lo.im + rect.hi.im)
        };
    }
    let (r1, r2) = if vertical {
        (
            Rect::new(rect.lo, Complex64::new(cut, rect.hi.im)),
            Rect::new(Complex64::new(cut, rect.lo.im), rect.hi),
        )
    } else {
        (
            Rect::new(rect.lo, Complex64::new(rect.hi.re, cut)),
            Rect::new(Complex64::new(rect.lo.re, cut), rect.hi),
        )
    };
    for r in [r1, r2] {
        let inside: Vec<&Zero> = zeros
            .iter()
            .filter(|z| r.contains(z.location))
            .copied()
            .collect();
        subdivide(field, r, &inside, depth - 1, out);
    }
}

fn certify_leaf(field: &PlanarHarmonicField, rect: Rect, zeros: &[&Zero]) -> CertBox {
    let zeros_inside = (
        zeros
            .iter()
            .filter(|z| z.orientation == Orientation::Preserving)
            .count(),
        zeros
            .iter()
            .filter(|z| z.orientation == Orientation::Reversing)
            .count(),
    );
    let expected = zeros_inside.0 as i64 - zeros_inside.1 as i64;
    // shrink retries when the boundary grazes a zero
    for shrink in 0..3 {
        let factor = 1.0 - shrink as f64 * 1e-3;
        let c = Complex64::new(
            0.5 * (rect.lo.re + rect.hi.re),
            0.5 * (rect.lo.im + rect.hi.im),
        );
        let half = Complex64::new(rect.width() * 0.5 * factor, rect.height() * 0.5 * factor);
        let r = Rect::new(c - half, c + half);
        if !zeros.iter().all(|z| r.contains(z.location)) {
            continue;
        }
        match winding(field, &Contour::Rectangle(r)) {
            Ok(w) => {
                let status = if w == expected {
                    BoxStatus::Consistent
                } else {
                    BoxStatus::Inconsistent
                };
                return CertBox {
                    rect,
                    winding: Some(w),
                    zeros_inside,
                    status,
                };
            }
            Err(CertifyError::ZeroOnContour) => continue,
            Err(_) => break,
        }
    }
    CertBox {
        rect,
        winding: None,
        zeros_inside,
        status: BoxStatus::BoundaryZero,
    }
}

/// Search an inconsistent box for zeros the solver missed: a fine local
/// sign-change grid feeds Newton, and anything new is classified and merged
/// into the report. Returns whether the zero list changed.
fn rescue_inconsistent(
    field: &PlanarHarmonicField,
    report: &mut SolveReport,
    boxes: &[CertBox],
) -> bool {
    let mut added = false;
    for b in boxes.iter().filter(|b| b.status != BoxStatus::Consistent) {
        // widen slightly so a zero grazing the box edge is still seen
        let c = Complex64::new(
            0.5 * (b.rect.lo.re + b.rect.hi.re),
            0.5 * (b.rect.lo.im + b.rect.hi.im),
        );
        let half = Complex64::new(b.rect.width(), b.rect.height()) * 0.55;
        let wide = Rect::new(c - half, c + half);
        for z in grid_oracle_stabilized(field, wide, 128) {
            let known = report
                .zeros
                .iter()
                .any(|u| (u.location - z).norm() <= 1e-6 * z.norm().max(1.0));
            if !known {
                report.zeros.push(crate::planar::make_zero(field, z));
                added = true;
            }
        }
    }
    if added {
        crate::planar::recount(field, report);
    }
    added
}

/// Run the full certification: winding at infinity on the coercive circle,
/// then per-zero subdivision. Sets `report.winding_at_infinity` and
/// `report.certified`.
///
/// An inconsistent box is evidence of a zero the solver missed, so the
/// certifier feeds back: each such box is re-searched at fine resolution,
/// recovered zeros are merged into the report, and the subdivision is
/// repeated (up to three rescue rounds).
pub fn certify_report(
    field: &PlanarHarmonicField,
    report: &mut SolveReport,
    max_depth: usize,
) -> Certification {
    let winding_at_infinity = coercive_radius(field).ok().and_then(|r| {
        winding(
            field,
            &Contour::Circle {
                center: Complex64::ZERO,
                radius: r * 1.0001,
            },
        )
        .ok()
    });
    let mut boxes = Vec::new();
    for round in 0..4 {
        let half_width = report
            .zeros
            .iter()
            .map(|z| z.location.re.abs().max(z.location.im.abs()))
            .fold(1.0, f64::max)
            * 1.1
            + 0.1;
        let window = Rect::square(Complex64::ZERO, half_width);
        boxes = if report.n_singular == 0 {
            subdivision_certify(field, window, report, max_depth)
        } else {
            Vec::new()
        };
        let inconsistent = boxes.iter().any(|b| b.status == BoxStatus::Inconsistent);
        if !inconsistent || round == 3 || !rescue_inconsistent(field, report, &boxes) {
            break;
        }
    }
    let boundary_incomplete = boxes
        .iter()
        .filter(|b| b.status == BoxStatus::BoundaryZero)
        .count();
    let all_consistent = report.n_singular == 0
        && boxes
            .iter()
            .all(|b| b.status == BoxStatus::Consistent);
    let box_sum: i64 = boxes.iter().filter_map(|b| b.winding).sum();
    report.winding_at_infinity = winding_at_infinity;
    report.certified = all_consistent
        && winding_at_infinity
            .is_some_and(|w| w == box_sum && w == report.n_plus as i64 - report.n_minus as i64);
    Certification {
        boxes,
        winding_at_infinity,
        all_consistent,
        boundary_incomplete,
    }
}

/// Brute-force zero finder: mark grid cells where both `Re F` and `Im F`
/// change sign, Newton from each marked cell center, deduplicate.
///
/// May miss zeros at coarse resolution; see [`grid_oracle_stabilized`].
pub fn grid_oracle(field: &PlanarHarmonicField, window: Rect, resolution: usize) -> Vec<Complex64> {
    assert!(resolution >= 16, "resolution must be at least 16");
    let nx = resolution;
    let ny = resolution;
    let dx = window.width() / nx as f64;
    let dy = window.height() / ny as f64;
    let mut re_sign = vec![0i8; (nx + 1) * (ny + 1)];
    let mut im_sign = vec![0i8; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            let z = Complex64::new(window.lo.re + i as f64 * dx, window.lo.im + j as f64 * dy);
            let v = field.eval_field(z);
            re_sign[j * (nx + 1) + i] = if v.re >= 0.0 { 1 } else { -1 };
            im_sign[j * (nx + 1) + i] = if v.im >= 0.0 { 1 } else { -1 };
        }
    }
    let dp = field.p().derivative();
    let dq = field.q().derivative();
    let mut found: Vec<Complex64> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let idx = [
                j * (nx + 1) + i,
                j * (nx + 1) + i + 1,
                (j + 1) * (nx + 1) + i,
                (j + 1) * (nx + 1) + i + 1,
            ];
            let re_flip = idx.iter().any(|&k| re_sign[k] != re_sign[idx[0]]);
            let im_flip = idx.iter().any(|&k| im_sign[k] != im_sign[idx[0]]);
            if !(re_flip && im_flip) {
                continue;
            }
            let center = Complex64::new(
                window.lo.re + (i as f64 + 0.5) * dx,
                window.lo.im + (j as f64 + 0.5) * dy,
            );
            if let Some(z) = newton_2d(field, &dp, &dq, center, 64.0, 60) {
                if window.contains(z)
                    && !found.iter().any(|u| (u - z).norm() <= 1e-6 * u.norm().max(1.0))
                {
                    found.push(z);
                }
            }
        }
    }
    found.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    found
}

/// Double the resolution until the oracle count is unchanged twice in a row.
pub fn grid_oracle_stabilized(
    field: &PlanarHarmonicField,
    window: Rect,
    start_resolution: usize,
) -> Vec<Complex64> {
    let mut res = start_resolution.max(16);
    let mut prev = grid_oracle(field, window, res);
    let mut stable = 0;
    while stable < 2 && res < 4096 {
        res *= 2;
        let next = grid_oracle(field, window, res);
        if next.len() == prev.len() {
            stable += 1;
        } else {
            stable = 0;
        }
        prev = next;
    }
    prev
}

/// Newton on the real 2-system from a cell center. Converges by step size,
/// then accepts only when the residual reaches the pointwise roundoff
/// floor (the same criterion the main solver uses).
fn newton_2d(
    field: &PlanarHarmonicField,
    dp: &crate::poly::ComplexUnivariate,
    dq: &crate::poly::ComplexUnivariate,
    start: Complex64,
    tol_floor_multiple: f64,
    max_steps: usize,
) -> Option<Complex64> {
    let mut z = start;
    let mut best = z;
    let mut best_residual = field.eval_field(z).norm();
    for _ in 0..max_steps {
        let Some(d) = crate::planar::newton_step(field, dp, dq, z) else {
            break;
        };
        z += d;
        if z.norm() > 1e9 {
            break;
        }
        let residual = field.eval_field(z).norm();
        if residual < best_residual {
            best = z;
            best_residual = residual;
        }
        if d.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    if best_residual <= tol_floor_multiple * crate::planar::residual_floor(field, best) {
        Some(best)
    } else {
        None
    }
}
