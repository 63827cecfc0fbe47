//! Command pipeline with machine-readable reports.
//!
//! JSON goes to stdout, per-sample CSV to a file path. Field order is fixed
//! by the output structs and floats are printed with 17 significant digits,
//! so identical runs produce byte-identical documents.

use std::io;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::expectation::expected_critical_points_with_grid;
use crate::knot::curve_length;
use crate::monte_carlo::{mc_expectation, McConfig, McReport};
use crate::parse::{FamilySpec, KnotSpec};
use crate::quadrature::QuadConfig;
use crate::veronese::{total_curvature, veronese_immersion, VeroneseChart};
use crate::{closed_forms, Error};

/// JSON formatter printing every float with 17 significant digits.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with fixed field order and reproducible float text.
pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serialized JSON is UTF-8")
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectOutput {
    pub mu: f64,
    pub grid_points: usize,
    pub converged: bool,
    pub qtol: f64,
    pub knot: String,
    pub family: String,
}

#[derive(Clone, Debug)]
pub struct ExpectParams {
    pub knot: KnotSpec,
    pub family: FamilySpec,
    pub qtol: f64,
    pub validation_grid: usize,
}

impl ExpectParams {
    pub fn new(knot: KnotSpec, family: FamilySpec) -> Self {
        ExpectParams {
            knot,
            family,
            qtol: 1e-10,
            validation_grid: 4096,
        }
    }
}

pub fn run_expect(params: &ExpectParams) -> Result<ExpectOutput> {
    let knot = params.knot.build()?;
    let family = params.family.build()?;
    let report = expected_critical_points_with_grid(
        &family,
        &knot,
        &QuadConfig::with_qtol(params.qtol),
        params.validation_grid,
    )?;
    Ok(ExpectOutput {
        mu: report.mu,
        grid_points: report.grid_points,
        converged: report.converged,
        qtol: report.qtol,
        knot: params.knot.describe(),
        family: params.family.describe(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TauOutput {
    pub tau: f64,
    pub tau_over_pi: f64,
    pub length: f64,
    pub knot: String,
    pub veronese_ell: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct TauParams {
    pub knot: KnotSpec,
    pub veronese_ell: Option<u32>,
    pub qtol: f64,
}

pub fn run_tau(params: &TauParams) -> Result<TauOutput> {
    let source = params.knot.build()?;
    let curve = match params.veronese_ell {
        Some(ell) => {
            let chart = VeroneseChart::new(source.dim(), ell)?;
            veronese_immersion(&chart, &source)?
        }
        None => source,
    };
    let cfg = QuadConfig::with_qtol(params.qtol);
    let tau = total_curvature(&curve, &cfg)?;
    let length = curve_length(&curve, &cfg)?;
    Ok(TauOutput {
        tau,
        tau_over_pi: tau / std::f64::consts::PI,
        length,
        knot: params.knot.describe(),
        veronese_ell: params.veronese_ell,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormOutput {
    pub mu: f64,
    pub knot: String,
    pub family: String,
}

/// Closed-form expectations exist for the unit circle only: 2√(3ℓ−2) for
/// planar degree-ℓ forms and 2√(Σk⁴/Σk²) for trigonometric polynomials.
pub fn run_closed_form(family: &FamilySpec) -> Result<ClosedFormOutput> {
    let mu = match family {
        FamilySpec::Veronese { n: 2, ell } => closed_forms::circle_veronese_expectation(*ell)?,
        FamilySpec::Veronese { n, .. } => {
            return Err(Error::InvalidSpec(format!(
                "no closed form for veronese families with n={n}; only n=2 on the unit circle"
            )))
        }
        FamilySpec::Trig { n } => closed_forms::trig_expectation(*n)?,
    };
    Ok(ClosedFormOutput {
        mu,
        knot: "circle".to_string(),
        family: family.describe(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct McOutput {
    pub mean: f64,
    pub standard_error: f64,
    pub effective_samples: usize,
    pub discarded: usize,
    pub seed: u64,
    pub scan_grid: usize,
    pub knot: String,
    pub family: String,
}

#[derive(Clone, Debug)]
pub struct McParams {
    pub knot: KnotSpec,
    pub family: FamilySpec,
    pub config: McConfig,
}

pub fn run_mc(params: &McParams) -> Result<(McOutput, McReport)> {
    let knot = params.knot.build()?;
    let family = params.family.build()?;
    let report = mc_expectation(&family, &knot, &params.config)?;
    let output = McOutput {
        mean: report.mean,
        standard_error: report.standard_error,
        effective_samples: report.effective_samples,
        discarded: report.discarded,
        seed: report.seed,
        scan_grid: report.scan_grid,
        knot: params.knot.describe(),
        family: params.family.describe(),
    };
    Ok((output, report))
}

/// One CSV row per accepted sample.
pub fn samples_csv(report: &McReport) -> String {
    let mut out = String::with_capacity(32 * (report.records.len() + 1));
    out.push_str("index,seed,count,discarded_attempts\n");
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.index, r.seed, r.count, r.discarded_attempts
        ));
    }
    out
}

pub fn write_samples_csv(report: &McReport, path: &Path) -> Result<()> {
    std::fs::write(path, samples_csv(report))?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareOutput {
    pub formula: ExpectOutput,
    pub mc: McOutput,
    /// |mc mean − formula| / SE; `null` when the counts have zero spread but
    /// disagree with the formula (0/0 resolves to an exact-match z of 0).
    pub z: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct CompareParams {
    pub knot: KnotSpec,
    pub family: FamilySpec,
    pub qtol: f64,
    pub validation_grid: usize,
    pub config: McConfig,
}

/// z-score of the Monte Carlo mean against the formula value. An exact match
/// is z = 0 even when the standard error vanishes; a mismatch with zero
/// standard error is undefined (`None`) and treated as a failure.
pub fn z_score(formula: f64, mean: f64, standard_error: f64) -> Option<f64> {
    let diff = (mean - formula).abs();
    if diff <= 1e-12 * formula.abs().max(1.0) {
        return Some(0.0);
    }
    if standard_error == 0.0 {
        return None;
    }
    Some(diff / standard_error)
}

pub fn run_compare(params: &CompareParams) -> Result<(CompareOutput, McReport)> {
    let formula = run_expect(&ExpectParams {
        knot: params.knot.clone(),
        family: params.family.clone(),
        qtol: params.qtol,
        validation_grid: params.validation_grid,
    })?;
    let (mc, report) = run_mc(&McParams {
        knot: params.knot.clone(),
        family: params.family.clone(),
        config: params.config.clone(),
    })?;
    let z = z_score(formula.mu, mc.mean, mc.standard_error);
    let pass = matches!(z, Some(z) if z <= 3.0);
    Ok((
        CompareOutput {
            formula,
            mc,
            z,
            pass,
        },
        report,
    ))
}
