//! Finite-dimensional families of smooth functions with an orthonormal basis,
//! and their restriction to a curve as value/derivative evaluators.
//!
//! Built-ins: weighted degree-ℓ monomials on R^n (orthonormal under the
//! Bombieri-type inner product) and trigonometric polynomials of degree ≤ n
//! on the unit circle (orthonormal under the averaged L² product). Custom
//! families supply raw basis functions plus a Gram matrix and are
//! orthonormalized eagerly through its Cholesky factor, so downstream code
//! always sees orthonormal coordinates and the uniform sphere measure.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::knot::{self, Knot};
use crate::quadrature;
use crate::veronese::VeroneseChart;

/// Admissibility threshold, relative to the largest |w(t)| on the scan grid.
pub const DEFAULT_NONDEG_REL_TOL: f64 = 1e-8;

/// Largest supported trigonometric degree (the basis has 2n+1 elements).
const MAX_TRIG_DEGREE: u32 = 100_000;

/// A smooth scalar function on R^n with exact first and second derivatives,
/// for assembling custom families.
pub trait SmoothFunction: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Row-major n×n second-derivative matrix.
    fn hessian(&self, x: &[f64]) -> Vec<f64>;
}

enum FamilyKind {
    Homogeneous {
        chart: Arc<VeroneseChart>,
    },
    Trig {
        degree: u32,
    },
    Custom {
        ambient_dim: usize,
        functions: Arc<Vec<Box<dyn SmoothFunction>>>,
        /// Inverse lower Cholesky factor of the Gram matrix; maps raw basis
        /// coordinates to orthonormal ones.
        mix: Arc<DMatrix<f64>>,
    },
}

/// A family V of smooth functions with a fixed orthonormal basis of size N.
pub struct FunctionFamily {
    dim: usize,
    kind: FamilyKind,
}

/// Weighted monomial basis √(ℓ!/∏αᵢ!)·x^α of the degree-ℓ forms on R^n.
pub fn homogeneous_family(n: usize, ell: u32) -> Result<FunctionFamily> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!(
            "homogeneous families need ambient dimension ≥ 2, got {n}"
        )));
    }
    if ell < 1 {
        return Err(Error::InvalidSpec("degree must be ≥ 1".into()));
    }
    let chart = Arc::new(VeroneseChart::new(n, ell)?);
    Ok(FunctionFamily {
        dim: chart.dim(),
        kind: FamilyKind::Homogeneous { chart },
    })
}

/// Orthonormal trigonometric basis 1, √2·cos kθ, √2·sin kθ (k = 1..n) on the
/// standard unit circle.
pub fn trig_family(n: u32) -> Result<FunctionFamily> {
    if n < 1 {
        return Err(Error::InvalidSpec("trig degree must be ≥ 1".into()));
    }
    if n > MAX_TRIG_DEGREE {
        return Err(Error::InvalidSpec(format!(
            "trig degree exceeds the supported maximum {MAX_TRIG_DEGREE}"
        )));
    }
    Ok(FunctionFamily {
        dim: 2 * n as usize + 1,
        kind: FamilyKind::Trig { degree: n },
    })
}

/// Family spanned by arbitrary smooth functions with the given Gram matrix
/// (inner products of the raw basis). The Gram matrix must be symmetric
/// positive definite; the basis is replaced by its triangular-factor
/// orthonormalization.
pub fn custom_family(
    ambient_dim: usize,
    functions: Vec<Box<dyn SmoothFunction>>,
    gram: &[Vec<f64>],
) -> Result<FunctionFamily> {
    let n = functions.len();
    if n == 0 {
        return Err(Error::InvalidSpec("custom family needs at least one function".into()));
    }
    if gram.len() != n || gram.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidSpec(format!("gram matrix must be {n}x{n}")));
    }
    let g = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
    let asym = (&g - g.transpose()).abs().max();
    if asym > 1e-12 * g.abs().max().max(f64::MIN_POSITIVE) {
        return Err(Error::GramNotSpd(format!(
            "asymmetry {asym:.3e} exceeds tolerance"
        )));
    }
    let eigen = g.clone().symmetric_eigen();
    let min_eig = eigen.eigenvalues.min();
    let max_eig = eigen.eigenvalues.max();
    let definite = max_eig > 0.0 && min_eig > 1e-10 * max_eig;
    if !definite {
        return Err(Error::GramNotSpd(format!(
            "eigenvalue range [{min_eig:.3e}, {max_eig:.3e}]"
        )));
    }
    let chol = g
        .cholesky()
        .ok_or_else(|| Error::GramNotSpd("Cholesky factorization failed".into()))?;
    let mix = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::GramNotSpd("triangular factor is singular".into()))?;
    Ok(FunctionFamily {
        dim: n,
        kind: FamilyKind::Custom {
            ambient_dim,
            functions: Arc::new(functions),
            mix: Arc::new(mix),
        },
    })
}

impl FunctionFamily {
    /// Number of basis functions N.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Human-readable spec string used by reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            FamilyKind::Homogeneous { chart } => format!(
                "veronese:n={},ell={}",
                chart.ambient_dim(),
                chart.degree()
            ),
            FamilyKind::Trig { degree } => format!("trig:n={degree}"),
            FamilyKind::Custom { .. } => format!("custom:dim={}", self.dim),
        }
    }

    /// Highest zero count of w(t)·c on a circle is 2D with D the family's
    /// oscillation degree, when that is known. Drives scan-grid defaults.
    pub fn oscillation_degree(&self, knot: &Knot) -> Option<u32> {
        match &self.kind {
            FamilyKind::Homogeneous { chart } if knot.shape().is_circle() => Some(chart.degree()),
            FamilyKind::Trig { degree } => Some(*degree),
            _ => None,
        }
    }

    /// Evaluators for g(t) = (vᵢ(x(t)))ᵢ and its first two t-derivatives.
    pub fn restrict(&self, knot: &Knot) -> Result<RestrictedBasis> {
        match &self.kind {
            FamilyKind::Homogeneous { chart } => {
                if knot.dim() != chart.ambient_dim() {
                    return Err(Error::InvalidSpec(format!(
                        "family on R^{} cannot restrict to a curve in R^{}",
                        chart.ambient_dim(),
                        knot.dim()
                    )));
                }
                let (c0, c1, c2) = (chart.clone(), chart.clone(), chart.clone());
                let (k0, k1, k2) = (knot.clone(), knot.clone(), knot.clone());
                Ok(RestrictedBasis {
                    dim: self.dim,
                    values: Arc::new(move |t| c0.eval(&k0.position(t)).expect("dims checked")),
                    derivatives: Arc::new(move |t| {
                        c1.directional(&k1.position(t), &k1.velocity(t))
                            .expect("dims checked")
                    }),
                    second_derivatives: Arc::new(move |t| {
                        c2.curve_second_derivative(
                            &k2.position(t),
                            &k2.velocity(t),
                            &k2.acceleration(t),
                        )
                        .expect("dims checked")
                    }),
                })
            }
            FamilyKind::Trig { degree } => {
                if !knot.shape().is_unit_circle() {
                    return Err(Error::NotUnitCircle);
                }
                let n = *degree;
                let (k0, k1, k2) = (knot.clone(), knot.clone(), knot.clone());
                Ok(RestrictedBasis {
                    dim: self.dim,
                    values: Arc::new(move |t| trig_eval(&k0, n, t, 0)),
                    derivatives: Arc::new(move |t| trig_eval(&k1, n, t, 1)),
                    second_derivatives: Arc::new(move |t| trig_eval(&k2, n, t, 2)),
                })
            }
            FamilyKind::Custom {
                ambient_dim,
                functions,
                mix,
            } => {
                if knot.dim() != *ambient_dim {
                    return Err(Error::InvalidSpec(format!(
                        "family on R^{} cannot restrict to a curve in R^{}",
                        ambient_dim,
                        knot.dim()
                    )));
                }
                let dim = self.dim;
                let mk = |order: u32| -> Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync> {
                    let fns = functions.clone();
                    let mix = mix.clone();
                    let k = knot.clone();
                    Arc::new(move |t| {
                        let x = k.position(t);
                        let raw: Vec<f64> = match order {
                            0 => fns.iter().map(|f| f.value(&x)).collect(),
                            1 => {
                                let v = k.velocity(t);
                                fns.iter().map(|f| knot::dot(&f.gradient(&x), &v)).collect()
                            }
                            _ => {
                                let v = k.velocity(t);
                                let a = k.acceleration(t);
                                fns.iter()
                                    .map(|f| {
                                        let h = f.hessian(&x);
                                        let n = x.len();
                                        let mut quad = 0.0;
                                        for i in 0..n {
                                            for j in 0..n {
                                                quad += v[i] * h[i * n + j] * v[j];
                                            }
                                        }
                                        quad + knot::dot(&f.gradient(&x), &a)
                                    })
                                    .collect()
                            }
                        };
                        // orthonormal coordinates: w = L⁻¹ v, applied to each
                        // derivative order by linearity
                        (0..dim)
                            .map(|i| (0..dim).map(|j| mix[(i, j)] * raw[j]).sum())
                            .collect()
                    })
                };
                Ok(RestrictedBasis {
                    dim,
                    values: mk(0),
                    derivatives: mk(1),
                    second_derivatives: mk(2),
                })
            }
        }
    }
}

/// Basis order: 1, √2·cos θ, √2·sin θ, √2·cos 2θ, √2·sin 2θ, …
///
/// cos kθ and sin kθ are taken as the real and imaginary parts of
/// (x + iy)^k at the curve point, so any parametrization of the unit circle
/// works and derivatives follow from the complex chain rule.
fn trig_eval(knot: &Knot, degree: u32, t: f64, order: u32) -> Vec<f64> {
    let sqrt2 = std::f64::consts::SQRT_2;
    let p = knot.position(t);
    let (zx, zy) = (p[0], p[1]);
    let mut out = Vec::with_capacity(2 * degree as usize + 1);

    match order {
        0 => {
            // z^k by recurrence
            out.push(1.0);
            let (mut re, mut im) = (1.0, 0.0);
            for _ in 0..degree {
                let (nre, nim) = (re * zx - im * zy, re * zy + im * zx);
                re = nre;
                im = nim;
                out.push(sqrt2 * re);
                out.push(sqrt2 * im);
            }
        }
        1 => {
            // d/dt z^k = k z^{k-1} ż
            let v = knot.velocity(t);
            let (dx, dy) = (v[0], v[1]);
            out.push(0.0);
            let (mut re, mut im) = (1.0, 0.0); // z^{k-1}
            for k in 1..=degree {
                let kf = f64::from(k);
                let (dre, dim_) = (re * dx - im * dy, re * dy + im * dx);
                out.push(sqrt2 * kf * dre);
                out.push(sqrt2 * kf * dim_);
                let (nre, nim) = (re * zx - im * zy, re * zy + im * zx);
                re = nre;
                im = nim;
            }
        }
        _ => {
            // d²/dt² z^k = k(k-1) z^{k-2} ż² + k z^{k-1} z̈
            let v = knot.velocity(t);
            let a = knot.acceleration(t);
            let (dx, dy) = (v[0], v[1]);
            let (ax, ay) = (a[0], a[1]);
            let (d2x, d2y) = (dx * dx - dy * dy, 2.0 * dx * dy); // ż²
            out.push(0.0);
            let (mut re1, mut im1) = (1.0, 0.0); // z^{k-1}
            let (mut re2, mut im2) = (0.0, 0.0); // z^{k-2}, defined for k ≥ 2
            for k in 1..=degree {
                let kf = f64::from(k);
                let mut acc_re = kf * (re1 * ax - im1 * ay);
                let mut acc_im = kf * (re1 * ay + im1 * ax);
                if k >= 2 {
                    let c = kf * (kf - 1.0);
                    acc_re += c * (re2 * d2x - im2 * d2y);
                    acc_im += c * (re2 * d2y + im2 * d2x);
                }
                out.push(sqrt2 * acc_re);
                out.push(sqrt2 * acc_im);
                re2 = re1;
                im2 = im1;
                let (nre, nim) = (re1 * zx - im1 * zy, re1 * zy + im1 * zx);
                re1 = nre;
                im1 = nim;
            }
        }
    }
    out
}

/// The restriction of a family's basis to a curve: g, g', g'' as functions of
/// the curve parameter. Immutable and safe to evaluate concurrently.
pub struct RestrictedBasis {
    dim: usize,
    values: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
    derivatives: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
    second_derivatives: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
}

impl RestrictedBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        (self.values)(t)
    }

    pub fn derivatives(&self, t: f64) -> Vec<f64> {
        (self.derivatives)(t)
    }

    pub fn second_derivatives(&self, t: f64) -> Vec<f64> {
        (self.second_derivatives)(t)
    }
}

impl Clone for RestrictedBasis {
    fn clone(&self) -> Self {
        RestrictedBasis {
            dim: self.dim,
            values: self.values.clone(),
            derivatives: self.derivatives.clone(),
            second_derivatives: self.second_derivatives.clone(),
        }
    }
}

/// Grid scan of |g'(t)| used to decide whether the pair (family, curve) is
/// admissible.
#[derive(Clone, Copy, Debug)]
pub struct NondegeneracyReport {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub grid_size: usize,
}

impl NondegeneracyReport {
    pub fn is_admissible(&self) -> bool {
        self.min > DEFAULT_NONDEG_REL_TOL * self.max && self.max > 0.0
    }

    pub fn threshold(&self) -> f64 {
        DEFAULT_NONDEG_REL_TOL * self.max
    }
}

pub fn check_nondegeneracy(
    family: &FunctionFamily,
    knot: &Knot,
    grid_size: usize,
) -> Result<NondegeneracyReport> {
    if grid_size < 64 {
        return Err(Error::InvalidSpec(format!(
            "nondegeneracy scan grid must be at least 64, got {grid_size}"
        )));
    }
    let basis = family.restrict(knot)?;
    let (min, argmin, max) = quadrature::grid_scan(
        |t| knot::norm(&basis.derivatives(t)),
        0.0,
        knot.period(),
        grid_size,
    );
    Ok(NondegeneracyReport {
        min,
        argmin,
        max,
        grid_size,
    })
}
