//! Level-curve tracing for the counterexample picture.
//!
//! `Gamma = {Im f = 0}` is traced by marching squares with linear edge
//! interpolation; `Gamma_0 = {Re z^n = 0}` is represented exactly as 2n rays
//! from the origin. Their transversal intersections realize the roots of
//! `conj(p) = q` for the family fields.

use crate::certify::Rect;
use crate::poly::ComplexUnivariate;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Piecewise-linear curves inside a window.
#[derive(Debug, Clone)]
pub struct LevelSetMesh {
    pub polylines: Vec<Vec<Complex64>>,
    pub window: Rect,
    pub resolution: usize,
}

impl LevelSetMesh {
    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.polylines
            .iter()
            .flat_map(|pl| pl.windows(2).map(|w| (w[0], w[1])))
    }
}

/// Trace `Im f = 0` over the window by marching squares.
///
/// Saddle cells (two opposite corners positive) are disambiguated by a
/// center sample.
pub fn trace_gamma(f: &ComplexUnivariate, window: Rect, resolution: usize) -> LevelSetMesh {
    assert!(resolution >= 32, "resolution must be at least 32");
    let n = resolution;
    let dx = window.width() / n as f64;
    let dy = window.height() / n as f64;
    let point = |i: usize, j: usize| {
        Complex64::new(window.lo.re + i as f64 * dx, window.lo.im + j as f64 * dy)
    };
    let mut values = vec![0.0f64; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            values[j * (n + 1) + i] = f.horner(point(i, j)).im;
        }
    }

    // Edge ids: horizontal edge right of grid point (i,j) and vertical edge
    // above it. Crossing points are shared bit-exactly between neighbors.
    let h_edge = |i: usize, j: usize| (j * (n + 1) + i) * 2;
    let v_edge = |i: usize, j: usize| (j * (n + 1) + i) * 2 + 1;

    let mut edge_points: BTreeMap<usize, Complex64> = BTreeMap::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();

    let cross = |id: usize,
                     pa: Complex64,
                     pb: Complex64,
                     ga: f64,
                     gb: f64,
                     edge_points: &mut BTreeMap<usize, Complex64>| {
        let t = ga / (ga - gb);
        edge_points.entry(id).or_insert(pa + (pb - pa) * t);
    };

    for j in 0..n {
        for i in 0..n {
            let g = [
                values[j * (n + 1) + i],
                values[j * (n + 1) + i + 1],
                values[(j + 1) * (n + 1) + i + 1],
                values[(j + 1) * (n + 1) + i],
            ];
            let sign = |v: f64| v > 0.0;
            let code = (sign(g[0]) as u8)
                | (sign(g[1]) as u8) << 1
                | (sign(g[2]) as u8) << 2
                | (sign(g[3]) as u8) << 3;
            if code == 0 || code == 0b1111 {
                continue;
            }
            let corners = [
                point(i, j),
                point(i + 1, j),
                point(i + 1, j + 1),
                point(i, j + 1),
            ];
            // cell edges: 0 bottom, 1 right, 2 top, 3 left
            let ids = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let ends = [(0usize, 1usize), (1, 2), (3, 2), (0, 3)];
            let mut add_seg = |ea: usize, eb: usize, edge_points: &mut BTreeMap<usize, Complex64>| {
                for &e in &[ea, eb] {
                    let (ca, cb) = ends[e];
                    cross(ids[e], corners[ca], corners[cb], g[ca], g[cb], edge_points);
                }
                segments.push((ids[ea], ids[eb]));
            };
            match code {
                0b0001 | 0b1110 => add_seg(0, 3, &mut edge_points),
                0b0010 | 0b1101 => add_seg(0, 1, &mut edge_points),
                0b0100 | 0b1011 => add_seg(1, 2, &mut edge_points),
                0b1000 | 0b0111 => add_seg(2, 3, &mut edge_points),
                0b0011 | 0b1100 => add_seg(1, 3, &mut edge_points),
                0b0110 | 0b1001 => add_seg(0, 2, &mut edge_points),
                0b0101 | 0b1010 => {
                    // saddle: resolve by the sign at the cell center
                    let center = (corners[0] + corners[2]) * 0.5;
                    let gc = f.horner(center).im > 0.0;
                    let first_positive = code == 0b0101;
                    if gc == first_positive {
                        add_seg(0, 1, &mut edge_points);
                        add_seg(2, 3, &mut edge_points);
                    } else {
                        add_seg(0, 3, &mut edge_points);
                        add_seg(1, 2, &mut edge_points);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    LevelSetMesh {
        polylines: assemble_polylines(&segments, &edge_points),
        window,
        resolution,
    }
}

/// Chain cell segments into polylines: open chains first (curves meeting
/// the window edge), then closed loops, in deterministic segment order.
fn assemble_polylines(
    segments: &[(usize, usize)],
    edge_points: &BTreeMap<usize, Complex64>,
) -> Vec<Vec<Complex64>> {
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push((s, b));
        adjacency.entry(b).or_default().push((s, a));
    }
    let mut visited = vec![false; segments.len()];
    let mut polylines = Vec::new();
    let walk = |start: usize, visited: &mut Vec<bool>| -> Option<Vec<Complex64>> {
        let mut chain = vec![start];
        let mut node = start;
        loop {
            let next = adjacency
                .get(&node)
                .and_then(|nb| nb.iter().find(|(s, _)| !visited[*s]).copied());
            match next {
                Some((s, other)) => {
                    visited[s] = true;
                    chain.push(other);
                    node = other;
                }
                None => break,
            }
        }
        if chain.len() < 2 {
            return None;
        }
        Some(chain.into_iter().map(|e| edge_points[&e]).collect())
    };
    // open chains start at odd-degree nodes
    let odd_nodes: Vec<usize> = adjacency
        .iter()
        .filter(|(_, nb)| nb.len() % 2 == 1)
        .map(|(&e, _)| e)
        .collect();
    for start in odd_nodes {
        if let Some(pl) = walk(start, &mut visited) {
            polylines.push(pl);
        }
    }
    for s in 0..segments.len() {
        if !visited[s] {
            visited[s] = true;
            let (a, b) = segments[s];
            let mut rest = walk(b, &mut visited).unwrap_or_else(|| vec![edge_points[&b]]);
            let mut pl = vec![edge_points[&a]];
            pl.append(&mut rest);
            polylines.push(pl);
        }
    }
    polylines
}

/// The 2n rays of `Re z^n = 0`, exact, clipped to the window.
pub fn gamma0_rays(n: usize, window: Rect) -> LevelSetMesh {
    assert!(n >= 1);
    let mut polylines = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        let angle = (PI / 2.0 + k as f64 * PI) / n as f64;
        let dir = Complex64::from_polar(1.0, angle);
        // largest s with s*dir inside the window (origin assumed inside)
        let mut s = f64::INFINITY;
        if dir.re > 1e-15 {
            s = s.min(window.hi.re / dir.re);
        } else if dir.re < -1e-15 {
            s = s.min(window.lo.re / dir.re);
        }
        if dir.im > 1e-15 {
            s = s.min(window.hi.im / dir.im);
        } else if dir.im < -1e-15 {
            s = s.min(window.lo.im / dir.im);
        }
        if s.is_finite() && s > 0.0 {
            polylines.push(vec![Complex64::ZERO, dir * s]);
        }
    }
    LevelSetMesh {
        polylines,
        window,
        resolution: 0,
    }
}

/// Count transversal crossings between two meshes.
///
/// Crossing points closer than `1e-9` are merged (shared endpoints count
/// once); near-parallel crossings (angle below `1e-3` rad) are flagged as
/// tangential and not counted.
pub fn count_intersections(mesh_a: &LevelSetMesh, mesh_b: &LevelSetMesh) -> IntersectionCount {
    let mut points: Vec<Complex64> = Vec::new();
    let mut tangential = 0usize;
    for (p1, p2) in mesh_a.segments() {
        for (q1, q2) in mesh_b.segments() {
            let d1 = p2 - p1;
            let d2 = q2 - q1;
            let denom = d1.re * d2.im - d1.im * d2.re;
            let scale = d1.norm() * d2.norm();
            if scale == 0.0 {
                continue;
            }
            let rhs = q1 - p1;
            let t = (rhs.re * d2.im - rhs.im * d2.re) / denom;
            let u = (rhs.re * d1.im - rhs.im * d1.re) / denom;
            let eps = 1e-12;
            if !(denom.is_finite() && (-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&u)) {
                continue;
            }
            if denom.abs() < 1e-3 * scale {
                tangential += 1;
                continue;
            }
            points.push(p1 + d1 * t);
        }
    }
    let mut merged: Vec<Complex64> = Vec::new();
    for p in points {
        if !merged.iter().any(|m| (m - p).norm() <= 1e-9) {
            merged.push(p);
        }
    }
    IntersectionCount {
        count: merged.len(),
        tangential_flagged: tangential,
        points: merged,
    }
}

#[derive(Debug, Clone)]
pub struct IntersectionCount {
    pub count: usize,
    /// Near-parallel crossings excluded from the count; a nonzero value
    /// calls for resolution doubling.
    pub tangential_flagged: usize,
    pub points: Vec<Complex64>,
}
