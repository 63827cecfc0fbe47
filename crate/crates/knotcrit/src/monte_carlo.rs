//! Monte Carlo estimate of the expected critical point count: draw uniform
//! points on the family's unit sphere and count critical points of each
//! sampled function along the curve by sign-change scanning plus bisection.
//!
//! Reproducibility contract: every sample's RNG is seeded from (master seed,
//! sample index, attempt), and aggregation runs in index order, so reports
//! are bit-identical across runs and across any number of workers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{check_nondegeneracy, FunctionFamily, RestrictedBasis};
use crate::knot::{self, Knot};

/// Node values with magnitude below this count as exact zeros and trigger
/// the deterministic half-step node perturbation.
const GRID_ZERO_TOL: f64 = 1e-14;

/// Non-Morse samples are redrawn at most this many times.
const MAX_ATTEMPTS: u32 = 3;

#[derive(Clone, Debug)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Scan grid for sign changes; derived from the family when `None`.
    pub scan_grid: Option<usize>,
    /// Bracket width at which bisection stops early.
    pub bisection_tol: f64,
    pub max_bisection_iters: usize,
    /// A root with |h'(root)| at or below this fraction of max |h'| flags the
    /// sample as non-Morse.
    pub morse_rel_tol: f64,
    /// Grid for the up-front admissibility scan.
    pub validation_grid: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 10_000,
            seed: 42,
            scan_grid: None,
            bisection_tol: 1e-13,
            max_bisection_iters: 40,
            morse_rel_tol: 1e-8,
            validation_grid: 4096,
        }
    }
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample seed from (master seed, sample index, redraw attempt).
pub fn derive_seed(master: u64, index: u64, attempt: u32) -> u64 {
    mix64(
        master
            .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add(u64::from(attempt).wrapping_mul(0xD1B5_4A32_D192_ED03)),
    )
}

/// Uniform point on the unit sphere of R^n: a standard-normal vector
/// normalized to unit length, redrawn in the (practically impossible) case
/// of a near-zero norm.
pub fn sample_unit_sphere<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    assert!(dim >= 1);
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = knot::norm(&v);
        if n >= 1e-8 {
            for x in &mut v {
                *x /= n;
            }
            return v;
        }
    }
}

/// Outcome of counting the critical points of one sampled function.
#[derive(Clone, Debug)]
pub struct CriticalPoints {
    /// Number of sign changes of h(t) = c·g'(t) over one period.
    pub count: usize,
    /// Root locations in [0, period).
    pub roots: Vec<f64>,
    /// False when some root failed the second-derivative test (or the scan
    /// found no sign change at all); such samples are discarded and redrawn.
    pub morse: bool,
}

struct ScanParams {
    grid: usize,
    bisection_tol: f64,
    max_bisection_iters: usize,
    morse_rel_tol: f64,
}

impl ScanParams {
    fn from_config(cfg: &McConfig, grid: usize) -> ScanParams {
        ScanParams {
            grid,
            bisection_tol: cfg.bisection_tol,
            max_bisection_iters: cfg.max_bisection_iters,
            morse_rel_tol: cfg.morse_rel_tol,
        }
    }
}

fn count_roots(
    basis: &RestrictedBasis,
    period: f64,
    coeffs: &[f64],
    params: &ScanParams,
) -> CriticalPoints {
    let h = |t: f64| knot::dot(coeffs, &basis.derivatives(t));
    let hp = |t: f64| knot::dot(coeffs, &basis.second_derivatives(t));

    let grid = params.grid;
    let step = period / grid as f64;
    let mut nodes = Vec::with_capacity(grid + 1);
    let mut values = Vec::with_capacity(grid + 1);
    let mut hp_max: f64 = 0.0;
    for i in 0..grid {
        let mut t = i as f64 * step;
        let mut v = h(t);
        if v.abs() < GRID_ZERO_TOL {
            // deterministic tie-break: move the node half a step
            t += 0.5 * step;
            v = h(t);
            if v.abs() < GRID_ZERO_TOL {
                return CriticalPoints {
                    count: 0,
                    roots: Vec::new(),
                    morse: false,
                };
            }
        }
        hp_max = hp_max.max(hp(t).abs());
        nodes.push(t);
        values.push(v);
    }
    nodes.push(nodes[0] + period);
    values.push(values[0]);

    let mut roots = Vec::new();
    let mut morse = true;
    for i in 0..grid {
        let (v0, v1) = (values[i], values[i + 1]);
        if (v0 > 0.0) == (v1 > 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (nodes[i], nodes[i + 1]);
        let lo_positive = v0 > 0.0;
        for _ in 0..params.max_bisection_iters {
            if hi - lo < params.bisection_tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let vm = h(mid);
            if vm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (vm > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut root = 0.5 * (lo + hi);
        if root >= period {
            root -= period;
        }
        if hp(root).abs() <= params.morse_rel_tol * hp_max {
            morse = false;
        }
        roots.push(root);
    }

    // A periodic derivative with no sign change is numerically degenerate.
    if roots.is_empty() {
        morse = false;
    }
    CriticalPoints {
        count: roots.len(),
        roots,
        morse,
    }
}

fn resolve_scan_grid(family: &FunctionFamily, knot: &Knot, cfg: &McConfig) -> Result<usize> {
    let hint = family.oscillation_degree(knot);
    match cfg.scan_grid {
        Some(grid) => {
            if grid < 16 {
                return Err(Error::InvalidSpec(format!(
                    "scan grid must be at least 16, got {grid}"
                )));
            }
            if let Some(d) = hint {
                let floor = 8 * d as usize;
                if grid < floor {
                    return Err(Error::InvalidSpec(format!(
                        "scan grid {grid} is below 8x the family oscillation degree ({floor})"
                    )));
                }
            }
            Ok(grid)
        }
        // h(t) is a trigonometric polynomial of degree ≤ D in the closed-form
        // cases, so 64 nodes per degree bracket every simple zero.
        None => Ok(hint.map_or(4096, |d| 64 * d as usize)),
    }
}

/// Count the critical points on the curve of the function with the given
/// unit coefficient vector.
pub fn count_critical_points(
    family: &FunctionFamily,
    knot: &Knot,
    coeffs: &[f64],
    cfg: &McConfig,
) -> Result<CriticalPoints> {
    if coeffs.len() != family.dim() {
        return Err(Error::InvalidSpec(format!(
            "coefficient vector has length {}, family dimension is {}",
            coeffs.len(),
            family.dim()
        )));
    }
    if (knot::norm(coeffs) - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidSpec(
            "coefficient vector must have unit norm".into(),
        ));
    }
    let grid = resolve_scan_grid(family, knot, cfg)?;
    let basis = family.restrict(knot)?;
    Ok(count_roots(
        &basis,
        knot.period(),
        coeffs,
        &ScanParams::from_config(cfg, grid),
    ))
}

/// One accepted Monte Carlo sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub index: usize,
    pub seed: u64,
    pub count: usize,
    pub discarded_attempts: u32,
}

/// Monte Carlo summary. `mean` is the average of the per-sample counts over
/// the effective samples; `standard_error` is their sample standard
/// deviation divided by √effective.
#[derive(Clone, Debug)]
pub struct McReport {
    pub mean: f64,
    pub standard_error: f64,
    pub records: Vec<SampleRecord>,
    pub discarded: usize,
    pub effective_samples: usize,
    pub seed: u64,
    pub scan_grid: usize,
}

enum SampleOutcome {
    Accepted(SampleRecord),
    Exhausted { discarded_attempts: u32 },
}

pub fn mc_expectation(
    family: &FunctionFamily,
    knot: &Knot,
    cfg: &McConfig,
) -> Result<McReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidSpec("sample count must be ≥ 1".into()));
    }
    let report = check_nondegeneracy(family, knot, cfg.validation_grid)?;
    if !report.is_admissible() {
        return Err(Error::DegenerateFamily {
            min: report.min,
            argmin: report.argmin,
            threshold: report.threshold(),
        });
    }

    let grid = resolve_scan_grid(family, knot, cfg)?;
    let basis = family.restrict(knot)?;
    let params = ScanParams::from_config(cfg, grid);
    let dim = family.dim();
    let period = knot.period();

    let outcomes: Vec<SampleOutcome> = (0..cfg.samples)
        .into_par_iter()
        .map(|index| {
            for attempt in 0..MAX_ATTEMPTS {
                let seed = derive_seed(cfg.seed, index as u64, attempt);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs = sample_unit_sphere(dim, &mut rng);
                let result = count_roots(&basis, period, &coeffs, &params);
                if result.morse {
                    return SampleOutcome::Accepted(SampleRecord {
                        index,
                        seed,
                        count: result.count,
                        discarded_attempts: attempt,
                    });
                }
            }
            SampleOutcome::Exhausted {
                discarded_attempts: MAX_ATTEMPTS,
            }
        })
        .collect();

    let mut records = Vec::with_capacity(cfg.samples);
    let mut discarded: usize = 0;
    for outcome in outcomes {
        match outcome {
            SampleOutcome::Accepted(rec) => {
                discarded += rec.discarded_attempts as usize;
                records.push(rec);
            }
            SampleOutcome::Exhausted { discarded_attempts } => {
                discarded += discarded_attempts as usize;
            }
        }
    }

    let effective = records.len();
    let total_draws = effective + discarded;
    let rate = discarded as f64 / total_draws as f64;
    if rate > 0.01 || effective == 0 {
        return Err(Error::ExcessiveDiscards {
            rate_percent: 100.0 * rate,
        });
    }

    // Counts are small integers; exact integer sums keep the aggregation
    // independent of scheduling.
    let sum: u64 = records.iter().map(|r| r.count as u64).sum();
    let sum_sq: u128 = records.iter().map(|r| (r.count as u128).pow(2)).sum();
    let n = effective as f64;
    let mean = sum as f64 / n;
    let standard_error = if effective > 1 {
        let var = (sum_sq as f64 - (sum as f64) * (sum as f64) / n) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    } else {
        0.0
    };

    Ok(McReport {
        mean,
        standard_error,
        records,
        discarded,
        effective_samples: effective,
        seed: cfg.seed,
        scan_grid: grid,
    })
}
