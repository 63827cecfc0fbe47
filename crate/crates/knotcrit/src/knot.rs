//! Smooth closed parametric curves in R^n with exact derivatives.
//!
//! A [`Knot`] carries position, velocity and acceleration evaluators over one
//! period. All built-in constructors produce exact analytic derivatives;
//! finite differences appear only in tests as cross-checks. Curves are never
//! reparametrized by arclength: every downstream integral is invariant under
//! reparametrization, so everything is computed in the native parameter.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadConfig};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Speeds below this fail the immersion check.
pub const DEFAULT_IMMERSION_TOL: f64 = 1e-9;
/// Default grid for immersion / degeneracy scans.
pub const DEFAULT_VALIDATION_GRID: usize = 4096;

type Evaluator = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// What the image of the curve is known to be, when anything is known.
///
/// Intrinsic circle families need to know that the image is the standard
/// unit circle; scan-grid heuristics only need to know it is some circle.
#[derive(Clone, Debug, PartialEq)]
pub enum KnotShape {
    General,
    Circle { center: [f64; 2], radius: f64 },
}

impl KnotShape {
    pub fn is_unit_circle(&self) -> bool {
        matches!(self, KnotShape::Circle { center: [x, y], radius }
                 if *x == 0.0 && *y == 0.0 && *radius == 1.0)
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, KnotShape::Circle { .. })
    }
}

/// A smooth closed curve t ↦ x(t) ∈ R^n over one period.
#[derive(Clone)]
pub struct Knot {
    dim: usize,
    period: f64,
    shape: KnotShape,
    pos: Evaluator,
    vel: Evaluator,
    acc: Evaluator,
}

impl std::fmt::Debug for Knot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Knot")
            .field("dim", &self.dim)
            .field("period", &self.period)
            .field("shape", &self.shape)
            .finish()
    }
}

impl Knot {
    /// Build a curve from raw evaluators. The evaluators must be T-periodic
    /// and return exact first and second derivatives.
    pub fn new<P, V, A>(dim: usize, period: f64, pos: P, vel: V, acc: A) -> Knot
    where
        P: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        V: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        A: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Knot {
            dim,
            period,
            shape: KnotShape::General,
            pos: Arc::new(pos),
            vel: Arc::new(vel),
            acc: Arc::new(acc),
        }
    }

    pub(crate) fn with_shape(mut self, shape: KnotShape) -> Knot {
        self.shape = shape;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn shape(&self) -> &KnotShape {
        &self.shape
    }

    pub fn position(&self, t: f64) -> Vec<f64> {
        (self.pos)(t)
    }

    pub fn velocity(&self, t: f64) -> Vec<f64> {
        (self.vel)(t)
    }

    pub fn acceleration(&self, t: f64) -> Vec<f64> {
        (self.acc)(t)
    }

    /// Image of the curve under a linear map given as a row-major square matrix.
    pub fn transformed(&self, matrix: &[Vec<f64>]) -> Result<Knot> {
        let n = self.dim;
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpec(format!(
                "transform must be a {n}x{n} matrix"
            )));
        }
        let m: Arc<Vec<Vec<f64>>> = Arc::new(matrix.to_vec());
        let apply = move |m: &[Vec<f64>], v: &[f64]| -> Vec<f64> {
            m.iter().map(|row| dot(row, v)).collect()
        };
        let (p, v, a) = (self.pos.clone(), self.vel.clone(), self.acc.clone());
        let (m1, m2, m3) = (m.clone(), m.clone(), m);
        Ok(Knot {
            dim: n,
            period: self.period,
            shape: KnotShape::General,
            pos: Arc::new(move |t| apply(&m1, &p(t))),
            vel: Arc::new(move |t| apply(&m2, &v(t))),
            acc: Arc::new(move |t| apply(&m3, &a(t))),
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// One Fourier term `a·cos(k t) + b·sin(k t)` of a coordinate series.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Harmonic {
    pub k: u32,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

/// A closed curve given per coordinate as a finite trigonometric series with
/// period 2π. This is the on-disk curve format:
/// `{"dim": n, "coords": [[{"k":0,"a":3.0,"b":0.0}, ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierKnotSpec {
    pub dim: usize,
    pub coords: Vec<Vec<Harmonic>>,
}

impl FourierKnotSpec {
    pub fn from_json(text: &str) -> Result<FourierKnotSpec> {
        let spec: FourierKnotSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("curve dimension must be positive".into()));
        }
        if self.coords.len() != self.dim {
            return Err(Error::InvalidSpec(format!(
                "expected {} coordinate series, found {}",
                self.dim,
                self.coords.len()
            )));
        }
        for (i, series) in self.coords.iter().enumerate() {
            if series.is_empty() {
                return Err(Error::InvalidSpec(format!(
                    "coordinate {i} has an empty series"
                )));
            }
            for h in series {
                if !h.a.is_finite() || !h.b.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "coordinate {i} has a non-finite coefficient"
                    )));
                }
            }
            if series.iter().all(|h| h.a == 0.0 && h.b == 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "coordinate {i} has no nonzero coefficient"
                )));
            }
        }
        Ok(())
    }
}

/// Curve whose coordinates are the given trigonometric series; derivatives
/// are the exact termwise derivatives, period 2π.
pub fn knot_from_fourier(spec: &FourierKnotSpec) -> Result<Knot> {
    spec.validate()?;
    let coords = Arc::new(spec.coords.clone());
    let dim = spec.dim;

    // order: 0 = value, 1 = dt, 2 = dt²
    fn eval(coords: &[Vec<Harmonic>], t: f64, order: u32) -> Vec<f64> {
        coords
            .iter()
            .map(|series| {
                series
                    .iter()
                    .map(|h| {
                        let k = f64::from(h.k);
                        let (c, s) = ((k * t).cos(), (k * t).sin());
                        match order {
                            0 => h.a * c + h.b * s,
                            1 => k * (-h.a * s + h.b * c),
                            _ => k * k * (-h.a * c - h.b * s),
                        }
                    })
                    .sum()
            })
            .collect()
    }

    let (c0, c1, c2) = (coords.clone(), coords.clone(), coords);
    Ok(Knot::new(
        dim,
        TWO_PI,
        move |t| eval(&c0, t, 0),
        move |t| eval(&c1, t, 1),
        move |t| eval(&c2, t, 2),
    ))
}

/// Circle θ ↦ center + r·(cos θ, sin θ) in R², period 2π.
pub fn builtin_circle(center: [f64; 2], radius: f64) -> Result<Knot> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "circle radius must be positive and finite, got {radius}"
        )));
    }
    if !center[0].is_finite() || !center[1].is_finite() {
        return Err(Error::InvalidSpec("circle center must be finite".into()));
    }
    let [cx, cy] = center;
    Ok(Knot::new(
        2,
        TWO_PI,
        move |t| vec![cx + radius * t.cos(), cy + radius * t.sin()],
        move |t| vec![-radius * t.sin(), radius * t.cos()],
        move |t| vec![-radius * t.cos(), -radius * t.sin()],
    )
    .with_shape(KnotShape::Circle { center, radius }))
}

/// The (2,3) torus knot ((2+cos 3t)cos 2t, (2+cos 3t)sin 2t, sin 3t),
/// expanded into exact harmonics.
pub fn trefoil() -> Knot {
    // (2+cos 3t)cos 2t = 2cos 2t + ½cos t + ½cos 5t
    // (2+cos 3t)sin 2t = 2sin 2t − ½sin t + ½sin 5t
    let spec = FourierKnotSpec {
        dim: 3,
        coords: vec![
            vec![
                Harmonic { k: 2, a: 2.0, b: 0.0 },
                Harmonic { k: 1, a: 0.5, b: 0.0 },
                Harmonic { k: 5, a: 0.5, b: 0.0 },
            ],
            vec![
                Harmonic { k: 2, a: 0.0, b: 2.0 },
                Harmonic { k: 1, a: 0.0, b: -0.5 },
                Harmonic { k: 5, a: 0.0, b: 0.5 },
            ],
            vec![Harmonic { k: 3, a: 0.0, b: 1.0 }],
        ],
    };
    knot_from_fourier(&spec).expect("trefoil spec is valid")
}

/// Axis-aligned ellipse (a cos t, b sin t).
pub fn ellipse(a: f64, b: f64) -> Result<Knot> {
    if !a.is_finite() || !b.is_finite() || a <= 0.0 || b <= 0.0 {
        return Err(Error::InvalidSpec(format!(
            "ellipse semi-axes must be positive and finite, got {a}, {b}"
        )));
    }
    let spec = FourierKnotSpec {
        dim: 2,
        coords: vec![
            vec![Harmonic { k: 1, a, b: 0.0 }],
            vec![Harmonic { k: 1, a: 0.0, b }],
        ],
    };
    let knot = knot_from_fourier(&spec)?;
    Ok(if a == b {
        knot.with_shape(KnotShape::Circle {
            center: [0.0, 0.0],
            radius: a,
        })
    } else {
        knot
    })
}

/// Minimum-speed scan over a uniform grid. Report only; callers compare
/// against their own tolerance.
#[derive(Clone, Copy, Debug)]
pub struct SpeedReport {
    pub min_speed: f64,
    pub argmin: f64,
    pub grid_size: usize,
}

pub fn validate_immersion(knot: &Knot, grid_size: usize) -> Result<SpeedReport> {
    if grid_size < 16 {
        return Err(Error::InvalidSpec(format!(
            "immersion scan grid must be at least 16, got {grid_size}"
        )));
    }
    let (min_speed, argmin, _) =
        quadrature::grid_scan(|t| norm(&knot.velocity(t)), 0.0, knot.period(), grid_size);
    Ok(SpeedReport {
        min_speed,
        argmin,
        grid_size,
    })
}

pub(crate) fn require_immersed(knot: &Knot) -> Result<()> {
    let report = validate_immersion(knot, DEFAULT_VALIDATION_GRID)?;
    if report.min_speed <= DEFAULT_IMMERSION_TOL {
        return Err(Error::NotImmersed {
            min: report.min_speed,
            argmin: report.argmin,
        });
    }
    Ok(())
}

/// Arc length ∫|x'(t)| dt over one period.
pub fn curve_length(knot: &Knot, cfg: &QuadConfig) -> Result<f64> {
    require_immersed(knot)?;
    let r = quadrature::integrate_periodic(
        |t| Ok(norm(&knot.velocity(t))),
        0.0,
        knot.period(),
        cfg,
    )?;
    Ok(r.value)
}
