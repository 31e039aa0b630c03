//! Implementations behind the CLI subcommands.

use crate::dto::*;
use harmonic_valence::certify::{self, Certification, Rect};
use harmonic_valence::ensemble::{self, EnsembleSpec};
use harmonic_valence::family::{self, Regularity};
use harmonic_valence::hyperdim;
use harmonic_valence::levelset;
use harmonic_valence::planar::{solve, PlanarError, PlanarHarmonicField, SolveOptions, SolveReport};
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// Subdivision depth used by every certification run.
const CERT_MAX_DEPTH: usize = 40;

/// Default ε sweep for the counterexample family: `a = 1 + εi`.
pub const DEFAULT_EPS_SWEEP: [f64; 4] = [0.005, 0.01, 0.02, 0.04];

#[derive(Debug)]
pub enum CliError {
    /// Malformed input file or invalid parameters (exit code 2).
    Input(String),
    /// The instance has a non-isolated zero set (exit code 3).
    Degenerate(String),
    /// Every sweep point was irregular (exit code 4).
    NoRegularInstance(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Degenerate(msg) => write!(f, "degenerate instance: {msg}"),
            CliError::NoRegularInstance(msg) => write!(f, "no regular instance: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NoRegularInstance(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Write to the path, or stdout when no path is given.
fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn solve_and_certify(
    field: &PlanarHarmonicField,
) -> Result<(SolveReport, Certification), CliError> {
    let mut report = solve(field, &SolveOptions::default()).map_err(|e| match e {
        PlanarError::NonIsolatedZeroSet => CliError::Degenerate("NonIsolatedZeroSet".into()),
        PlanarError::DegenerateField => CliError::Input("both parts are constant".into()),
    })?;
    let cert = certify::certify_report(field, &mut report, CERT_MAX_DEPTH);
    Ok((report, cert))
}

/// `solve`: read `{p, q}` from a JSON file, locate and certify all zeros.
pub fn cmd_solve(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let parsed: SolveInputDto = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let p = parsed.p.to_poly().map_err(CliError::Input)?;
    let q = parsed
        .q
        .map(|q| q.to_poly())
        .transpose()
        .map_err(CliError::Input)?
        .unwrap_or_else(harmonic_valence::poly::ComplexUnivariate::zero);
    if p.is_zero() {
        return Err(CliError::Input("p must not be identically zero".into()));
    }
    let field = PlanarHarmonicField::new(p, q);
    let (report, cert) = solve_and_certify(&field)?;
    let meta = MetaDto::new("solve").param("input", input.display().to_string());
    let dto = SolveReportDto::new(meta, &report, &cert);
    emit(output, &to_json(&dto)?)
}

pub enum FamilyFormat {
    Json,
    Csv,
}

struct SweepPoint {
    eps: f64,
    instance: family::FamilyInstance,
    regular: bool,
    report: Option<SolveReport>,
}

/// `family`: sweep `a = 1 + εi`, keep the regular instance with the most
/// zeros, and certify it.
pub fn cmd_family(
    n: usize,
    eps_sweep: &[f64],
    format: FamilyFormat,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if n < 4 {
        return Err(CliError::Input("family requires n >= 4".into()));
    }
    if eps_sweep.is_empty() {
        return Err(CliError::Input("empty eps sweep".into()));
    }
    let points: Vec<Result<SweepPoint, CliError>> = eps_sweep
        .par_iter()
        .map(|&eps| {
            let a = Complex64::new(1.0, eps);
            let instance = family::build(n, a)
                .map_err(|e| CliError::Input(format!("family build failed: {e}")))?;
            let regular = family::check_regularity(&instance) == Regularity::Regular;
            let report = if regular {
                Some(
                    solve(&instance.field(), &SolveOptions::default()).map_err(|e| {
                        CliError::Degenerate(format!("solve failed at eps={eps}: {e}"))
                    })?,
                )
            } else {
                None
            };
            Ok(SweepPoint {
                eps,
                instance,
                regular,
                report,
            })
        })
        .collect();
    let points = points.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<FamilySweepRowDto> = points
        .iter()
        .map(|pt| FamilySweepRowDto {
            n,
            m: pt.instance.m(),
            eps: pt.eps,
            n_f: pt.report.as_ref().map_or(0, |r| r.n_f),
            n_plus: pt.report.as_ref().map_or(0, |r| r.n_plus),
            n_minus: pt.report.as_ref().map_or(0, |r| r.n_minus),
            predicted_lower: pt.instance.predicted_lower,
            conjectured_max: pt.instance.conjectured_max,
            violated: pt
                .report
                .as_ref()
                .is_some_and(|r| r.n_f as i64 > pt.instance.conjectured_max),
            regular: pt.regular,
        })
        .collect();
    // prefer instances whose zeros all classify cleanly: a singular zero
    // breaks the argument-principle bookkeeping (N+ - N- = n)
    let best = points
        .iter()
        .filter(|pt| pt.regular)
        .max_by_key(|pt| {
            pt.report
                .as_ref()
                .map_or((false, 0), |r| (r.n_singular == 0, r.n_f))
        })
        .ok_or_else(|| {
            CliError::NoRegularInstance(format!("all {} sweep points irregular", eps_sweep.len()))
        })?;
    let mut report = best.report.clone().expect("regular points were solved");
    let cert = certify::certify_report(&best.instance.field(), &mut report, CERT_MAX_DEPTH);
    let meta = MetaDto::new("family")
        .param("n", n as u64)
        .param("eps_sweep", eps_sweep.to_vec());
    let dto = FamilyReportDto {
        meta,
        n,
        m: best.instance.m(),
        eps: best.eps,
        a_re: best.instance.a.re,
        a_im: best.instance.a.im,
        delta_arg: best.instance.delta_arg,
        k_bound: best.instance.k_bound,
        predicted_lower: best.instance.predicted_lower,
        conjectured_max: best.instance.conjectured_max,
        implied_total_bound: best.instance.implied_total_bound,
        violated: report.n_f as i64 > best.instance.conjectured_max,
        sweep: rows,
        solve: SolveReportDto::new(MetaDto::new("family.solve"), &report, &cert),
    };
    match format {
        FamilyFormat::Json => emit(output, &to_json(&dto)?),
        FamilyFormat::Csv => {
            let mut text = String::new();
            text.push_str(&format!(
                "# version={} command=family n={n} eps_sweep={:?}\n",
                env!("CARGO_PKG_VERSION"),
                eps_sweep
            ));
            text.push_str(
                "n,m,eps,N_F,N_plus,N_minus,predicted_lower,conjectured_max,violated\n",
            );
            for r in &dto.sweep {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    r.m,
                    r.eps,
                    r.n_f,
                    r.n_plus,
                    r.n_minus,
                    r.predicted_lower,
                    r.conjectured_max,
                    r.violated
                ));
            }
            emit(output, &text)
        }
    }
}

fn mesh_points(mesh: &levelset::LevelSetMesh) -> Vec<Vec<PointDto>> {
    mesh.polylines
        .iter()
        .map(|pl| pl.iter().map(|z| PointDto { re: z.re, im: z.im }).collect())
        .collect()
}

/// `levelset`: trace Γ (= `{Im f = 0}`) for a family instance, intersect
/// with the rays Γ₀ (= `{Re z^n = 0}`), and dump plotter-ready data.
pub fn cmd_levelset(
    n: usize,
    eps: f64,
    window_half_width: f64,
    resolution: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if n < 4 {
        return Err(CliError::Input("levelset requires n >= 4".into()));
    }
    if resolution < 32 {
        return Err(CliError::Input("resolution must be at least 32".into()));
    }
    if !(window_half_width > 0.0) {
        return Err(CliError::Input("window half-width must be positive".into()));
    }
    let instance = family::build(n, Complex64::new(1.0, eps))
        .map_err(|e| CliError::Input(format!("family build failed: {e}")))?;
    let window = Rect::square(Complex64::ZERO, window_half_width);
    let gamma = levelset::trace_gamma(&instance.f, window, resolution);
    let gamma0 = levelset::gamma0_rays(n, window);
    let hits = levelset::count_intersections(&gamma, &gamma0);
    let meta = MetaDto::new("levelset")
        .param("n", n as u64)
        .param("eps", eps)
        .param("window", window_half_width)
        .param("res", resolution as u64);
    let dto = LevelSetFigureDto {
        meta,
        gamma: mesh_points(&gamma),
        gamma0: mesh_points(&gamma0),
        intersections: hits
            .points
            .iter()
            .map(|z| PointDto { re: z.re, im: z.im })
            .collect(),
        intersection_count: hits.count,
        tangential_flagged: hits.tangential_flagged,
    };
    emit(output, &to_json(&dto)?)
}

/// `example3d`: verify the three-dimensional field whose zero set contains
/// four circles, and report the sampled coercivity data.
pub fn cmd_example3d(output: Option<&Path>) -> Result<(), CliError> {
    let field = hyperdim::build_example3d();
    let min_f4 = hyperdim::min_leading_on_sphere(&field, 20_000);
    let radius = hyperdim::coercive_radius_nd(&field)
        .map_err(|e| CliError::Degenerate(e.to_string()))?;
    let circles = hyperdim::circle_zero_sets()
        .into_iter()
        .map(|c| {
            let max_residual = (0..100)
                .map(|k| {
                    let phi = 2.0 * std::f64::consts::PI * k as f64 / 100.0;
                    let v = field
                        .eval_nd(&[c.radius * phi.cos(), c.radius * phi.sin(), c.height])
                        .expect("dimension matches");
                    v.iter().map(|t| t * t).sum::<f64>().sqrt()
                })
                .fold(0.0, f64::max);
            CircleDto {
                z: c.height,
                r: c.radius,
                max_residual,
            }
        })
        .collect();
    let dto = Example3dReportDto {
        meta: MetaDto::new("example3d"),
        min_f4_on_sphere: min_f4,
        coercive_radius: radius,
        circles,
        milnor_bound: hyperdim::milnor_bound(4, 3),
    };
    emit(output, &to_json(&dto)?)
}

pub enum RandomFormat {
    Json,
    Csv,
}

/// `random`: Monte Carlo zero-count statistics over the truncated random
/// harmonic ensemble.
pub fn cmd_random(
    n: usize,
    trials: usize,
    seed: u64,
    format: RandomFormat,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Input("trials must be positive".into()));
    }
    let spec = EnsembleSpec { n, seed, trials };
    let result = ensemble::expected_zeros(&spec).map_err(|e| match e {
        ensemble::EnsembleError::DegreeZero => CliError::Input("degree must be at least 1".into()),
        ensemble::EnsembleError::AllTrialsDiscarded => {
            CliError::Degenerate("every trial was discarded".into())
        }
    })?;
    match format {
        RandomFormat::Json => {
            let mut meta = MetaDto::new("random")
                .param("n", n as u64)
                .param("trials", trials as u64);
            meta.seed = Some(seed);
            let dto = EnsembleSummaryDto {
                meta,
                mean: result.mean,
                std_error: result.std_error,
                kept: result.counts.len(),
                discarded: result.discarded,
                warning: result.warning.clone(),
                trials: result
                    .counts
                    .iter()
                    .map(|c| TrialDto {
                        trial: c.trial,
                        n_f: c.n_f,
                        n_plus: c.n_plus,
                        n_minus: c.n_minus,
                    })
                    .collect(),
            };
            emit(output, &to_json(&dto)?)
        }
        RandomFormat::Csv => {
            let mut text = format!(
                "# version={} command=random n={n} trials={trials} seed={seed}\n",
                env!("CARGO_PKG_VERSION")
            );
            text.push_str("trial,N_F,N_plus,N_minus\n");
            for c in &result.counts {
                text.push_str(&format!("{},{},{},{}\n", c.trial, c.n_f, c.n_plus, c.n_minus));
            }
            emit(output, &text)
        }
    }
}

/// `bounds`: the closed-form bound table for degrees `(n, m)`.
pub fn cmd_bounds(n: usize, m: usize, output: Option<&Path>) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    if m >= n {
        return Err(CliError::Input(
            "bounds assume n > m (analytic part dominates)".into(),
        ));
    }
    let table = harmonic_valence::planar::BoundTable::compute(n, m, 0, 0);
    let dto = BoundsReportDto {
        meta: MetaDto::new("bounds")
            .param("n", n as u64)
            .param("m", m as u64),
        n,
        m,
        bezout: table.bezout,
        wilmshurst_theorem: table.wilmshurst_theorem,
        wilmshurst_applicable: table.wilmshurst_applicable,
        conjecture_wilmshurst: table.conjecture_wilmshurst,
        conjecture_new_nminus: table.conjecture_new_nminus,
        conjecture_new_total: table.conjecture_new_total,
    };
    emit(output, &to_json(&dto)?)
}

/// Resolve the `--output` option relative to the current directory.
pub fn output_path(path: &Option<PathBuf>) -> Option<&Path> {
    path.as_deref()
}
