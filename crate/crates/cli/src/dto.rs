//! Serde-facing data types: file schemas for inputs and reports.
//!
//! Every report carries a `meta` block (version, command, parameters, seed
//! where applicable) so any output file can be reproduced from itself.

use harmonic_valence::certify::Certification;
use harmonic_valence::planar::{BoundTable, SolveReport};
use harmonic_valence::poly::ComplexUnivariate;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Dense complex polynomial, ascending powers, split into real and
/// imaginary coefficient arrays. `im` may be omitted for real input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialDto {
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl PolynomialDto {
    pub fn to_poly(&self) -> Result<ComplexUnivariate, String> {
        if !self.im.is_empty() && self.im.len() != self.re.len() {
            return Err(format!(
                "re has {} coefficients but im has {}",
                self.re.len(),
                self.im.len()
            ));
        }
        let coeffs = self
            .re
            .iter()
            .enumerate()
            .map(|(k, &re)| {
                let im = self.im.get(k).copied().unwrap_or(0.0);
                if !re.is_finite() || !im.is_finite() {
                    Err(format!("coefficient {k} is not finite"))
                } else {
                    Ok(Complex64::new(re, im))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ComplexUnivariate::new(coeffs))
    }

    pub fn from_poly(p: &ComplexUnivariate) -> Self {
        PolynomialDto {
            re: p.coeffs().iter().map(|c| c.re).collect(),
            im: p.coeffs().iter().map(|c| c.im).collect(),
        }
    }
}

/// Input file for `solve`: the two analytic parts of `F = p + conj(q)`.
#[derive(Debug, Clone, Deserialize)]
pub struct SolveInputDto {
    pub p: PolynomialDto,
    #[serde(default)]
    pub q: Option<PolynomialDto>,
}

/// Reproducibility header attached to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct MetaDto {
    pub version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MetaDto {
    pub fn new(command: &str) -> Self {
        MetaDto {
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroDto {
    pub re: f64,
    pub im: f64,
    pub jac: f64,
    pub class: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountsDto {
    pub n_f: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_singular: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsDto {
    pub bezout: u64,
    pub wilmshurst_theorem: u64,
    pub wilmshurst_applicable: bool,
    pub conjecture_wilmshurst: u64,
    pub conjecture_new_nminus: u64,
    pub conjecture_new_total: u64,
    pub bezout_satisfied: bool,
    pub wilmshurst_theorem_satisfied: bool,
    pub conjecture_wilmshurst_satisfied: bool,
    pub conjecture_new_nminus_satisfied: bool,
    pub conjecture_new_total_satisfied: bool,
}

impl From<&BoundTable> for BoundsDto {
    fn from(b: &BoundTable) -> Self {
        BoundsDto {
            bezout: b.bezout,
            wilmshurst_theorem: b.wilmshurst_theorem,
            wilmshurst_applicable: b.wilmshurst_applicable,
            conjecture_wilmshurst: b.conjecture_wilmshurst,
            conjecture_new_nminus: b.conjecture_new_nminus,
            conjecture_new_total: b.conjecture_new_total,
            bezout_satisfied: b.bezout_satisfied,
            wilmshurst_theorem_satisfied: b.wilmshurst_theorem_satisfied,
            conjecture_wilmshurst_satisfied: b.conjecture_wilmshurst_satisfied,
            conjecture_new_nminus_satisfied: b.conjecture_new_nminus_satisfied,
            conjecture_new_total_satisfied: b.conjecture_new_total_satisfied,
        }
    }
}

/// Subdivision-certifier summary appended to solve reports.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationDto {
    pub winding_infinity: Option<i64>,
    /// Fraction of boxes whose winding matched the claimed zero content.
    pub boxes_consistent: f64,
    /// Boxes abandoned after repeated boundary-zero retries.
    pub boundary_incomplete: usize,
}

impl From<&Certification> for CertificationDto {
    fn from(c: &Certification) -> Self {
        CertificationDto {
            winding_infinity: c.winding_at_infinity,
            boxes_consistent: c.consistent_fraction(),
            boundary_incomplete: c.boundary_incomplete,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReportDto {
    pub meta: MetaDto,
    pub n: usize,
    pub m: usize,
    pub zeros: Vec<ZeroDto>,
    pub counts: CountsDto,
    pub bounds: BoundsDto,
    pub certified: bool,
    pub certification: CertificationDto,
}

impl SolveReportDto {
    pub fn new(meta: MetaDto, report: &SolveReport, cert: &Certification) -> Self {
        SolveReportDto {
            meta,
            n: report.analytic_degree,
            m: report.anti_degree,
            zeros: report
                .zeros
                .iter()
                .map(|z| ZeroDto {
                    re: z.location.re,
                    im: z.location.im,
                    jac: z.jacobian,
                    class: z.orientation.as_str(),
                    residual: z.residual,
                })
                .collect(),
            counts: CountsDto {
                n_f: report.n_f,
                n_plus: report.n_plus,
                n_minus: report.n_minus,
                n_singular: report.n_singular,
            },
            bounds: BoundsDto::from(&report.bounds),
            certified: report.certified,
            certification: CertificationDto::from(cert),
        }
    }
}

/// One row of the family ε sweep.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySweepRowDto {
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub n_f: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub predicted_lower: i64,
    pub conjectured_max: i64,
    pub violated: bool,
    pub regular: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReportDto {
    pub meta: MetaDto,
    pub n: usize,
    pub m: usize,
    /// Best regular sweep point (maximal zero count).
    pub eps: f64,
    pub a_re: f64,
    pub a_im: f64,
    pub delta_arg: f64,
    pub k_bound: i64,
    pub predicted_lower: i64,
    pub conjectured_max: i64,
    pub implied_total_bound: i64,
    pub violated: bool,
    pub sweep: Vec<FamilySweepRowDto>,
    pub solve: SolveReportDto,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointDto {
    pub re: f64,
    pub im: f64,
}

/// Figure data: the level set Γ (`Im f = 0`), the rays Γ₀
/// (`Re z^n = 0`), and their crossing points.
#[derive(Debug, Clone, Serialize)]
pub struct LevelSetFigureDto {
    pub meta: MetaDto,
    pub gamma: Vec<Vec<PointDto>>,
    pub gamma0: Vec<Vec<PointDto>>,
    pub intersections: Vec<PointDto>,
    pub intersection_count: usize,
    pub tangential_flagged: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleDto {
    /// Height of the circle's plane.
    pub z: f64,
    pub r: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Example3dReportDto {
    pub meta: MetaDto,
    pub min_f4_on_sphere: f64,
    pub coercive_radius: f64,
    pub circles: Vec<CircleDto>,
    pub milnor_bound: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialDto {
    pub trial: usize,
    pub n_f: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummaryDto {
    pub meta: MetaDto,
    pub mean: f64,
    pub std_error: f64,
    pub kept: usize,
    pub discarded: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub trials: Vec<TrialDto>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReportDto {
    pub meta: MetaDto,
    pub n: usize,
    pub m: usize,
    pub bezout: u64,
    pub wilmshurst_theorem: u64,
    pub wilmshurst_applicable: bool,
    pub conjecture_wilmshurst: u64,
    pub conjecture_new_nminus: u64,
    pub conjecture_new_total: u64,
}
