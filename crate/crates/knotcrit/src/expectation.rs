//! The unit map ν from a curve into the family's coefficient sphere, and the
//! expected critical point count μ = (1/π)∮|ν′|.
//!
//! For an admissible pair (family, curve), the derivative coefficient vector
//! w(t) = g'(t) never vanishes; its normalization ν = w/|w| is the direction
//! in coefficient space whose orthogonal hyperplane consists of the functions
//! with a critical point at x(t). The mean number of critical points of a
//! uniformly random unit-norm function in the family is (1/π)∮|ν′(t)| dt,
//! which is invariant under reparametrization, so everything is evaluated in
//! the native curve parameter.

use crate::error::{Error, Result};
use crate::family::{check_nondegeneracy, FunctionFamily, RestrictedBasis};
use crate::knot::{self, Knot, DEFAULT_VALIDATION_GRID};
use crate::quadrature::{integrate_periodic, QuadConfig};

/// Node cap for the μ integral; |ν′| can have isolated kinks where it
/// vanishes, which slows trapezoid convergence without breaking it.
const MU_MAX_GRID: usize = 1 << 22;

/// The map t ↦ ν(t) on the unit sphere of the family, with its exact
/// t-derivative. Construction runs the admissibility scan and fixes the
/// degeneracy floor used by all pointwise evaluations.
pub struct GaussMap {
    basis: RestrictedBasis,
    period: f64,
    floor: f64,
}

impl GaussMap {
    pub fn new(family: &FunctionFamily, knot: &Knot) -> Result<GaussMap> {
        GaussMap::with_validation_grid(family, knot, DEFAULT_VALIDATION_GRID)
    }

    pub fn with_validation_grid(
        family: &FunctionFamily,
        knot: &Knot,
        grid: usize,
    ) -> Result<GaussMap> {
        let report = check_nondegeneracy(family, knot, grid)?;
        if !report.is_admissible() {
            return Err(Error::DegenerateFamily {
                min: report.min,
                argmin: report.argmin,
                threshold: report.threshold(),
            });
        }
        Ok(GaussMap {
            basis: family.restrict(knot)?,
            period: knot.period(),
            floor: report.threshold(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// The derivative coefficient vector w(t) = g'(t): pairing it with a
    /// coefficient vector c gives the t-derivative of the corresponding
    /// function along the curve.
    pub fn derivative_vector(&self, t: f64) -> Result<Vec<f64>> {
        let w = self.basis.derivatives(t);
        let nw = knot::norm(&w);
        if nw <= self.floor {
            return Err(Error::DegeneratePoint {
                t,
                value: nw,
                floor: self.floor,
            });
        }
        Ok(w)
    }

    /// ν(t): the unit direction of the derivative vector.
    pub fn direction(&self, t: f64) -> Result<Vec<f64>> {
        let mut w = self.derivative_vector(t)?;
        let nw = knot::norm(&w);
        for x in &mut w {
            *x /= nw;
        }
        Ok(w)
    }

    /// ν′(t), by the quotient rule: (w′ − (w·w′/|w|²)w)/|w|.
    pub fn direction_derivative(&self, t: f64) -> Result<Vec<f64>> {
        let w = self.derivative_vector(t)?;
        let wp = self.basis.second_derivatives(t);
        let w2 = knot::dot(&w, &w);
        let proj = knot::dot(&w, &wp) / w2;
        let nw = w2.sqrt();
        Ok(w
            .iter()
            .zip(&wp)
            .map(|(wi, wpi)| (wpi - proj * wi) / nw)
            .collect())
    }

    /// |ν′(t)|, the integrand of the expectation formula.
    pub fn speed(&self, t: f64) -> Result<f64> {
        Ok(knot::norm(&self.direction_derivative(t)?))
    }
}

/// Result of the expectation integral.
#[derive(Clone, Copy, Debug)]
pub struct ExpectationReport {
    pub mu: f64,
    pub grid_points: usize,
    pub converged: bool,
    pub qtol: f64,
}

/// Expected number of critical points of a uniformly random unit-norm
/// function from the family, restricted to the curve: (1/π)∮|ν′(t)| dt.
pub fn expected_critical_points(
    family: &FunctionFamily,
    knot: &Knot,
    cfg: &QuadConfig,
) -> Result<ExpectationReport> {
    expected_critical_points_with_grid(family, knot, cfg, DEFAULT_VALIDATION_GRID)
}

pub fn expected_critical_points_with_grid(
    family: &FunctionFamily,
    knot: &Knot,
    cfg: &QuadConfig,
    validation_grid: usize,
) -> Result<ExpectationReport> {
    let map = GaussMap::with_validation_grid(family, knot, validation_grid)?;
    let cfg = cfg.clone().raise_max_grid(MU_MAX_GRID);
    let quad = integrate_periodic(|t| map.speed(t), 0.0, knot.period(), &cfg)?;
    Ok(ExpectationReport {
        mu: quad.value / std::f64::consts::PI,
        grid_points: quad.grid_points,
        converged: true,
        qtol: cfg.qtol,
    })
}
