//! Critical point statistics of random smooth functions on closed curves.
//!
//! Given a closed immersed curve K ⊂ R^n and a finite-dimensional family of
//! smooth functions with an orthonormal basis, the expected number of
//! critical points of the restriction to K of a uniformly random unit-norm
//! function from the family equals (1/π)∮|ν′(t)| dt, where ν is the unit
//! direction of the derivative coefficient vector along the curve. For the
//! degree-ℓ form families this integral is the total curvature of the
//! degree-ℓ Veronese immersion of K (divided by π), which gives closed forms
//! on the unit circle: 2√(3ℓ−2) for forms and 2√(Σk⁴/Σk²) for trigonometric
//! polynomials of degree ≤ n.
//!
//! The crate computes the expectation three ways and cross-checks them:
//!
//! * the unit-map integral ([`expectation`]),
//! * total curvature of the associated immersion ([`veronese`]),
//! * direct Monte Carlo critical point counting ([`monte_carlo`]).

pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod expectation;
pub mod family;
pub mod knot;
pub mod monte_carlo;
pub mod parse;
pub mod quadrature;
pub mod veronese;

pub use error::{Error, Result};
pub use expectation::{expected_critical_points, ExpectationReport, GaussMap};
pub use family::{
    check_nondegeneracy, custom_family, homogeneous_family, trig_family, FunctionFamily,
    RestrictedBasis, SmoothFunction,
};
pub use knot::{
    builtin_circle, curve_length, ellipse, knot_from_fourier, trefoil, validate_immersion,
    FourierKnotSpec, Harmonic, Knot, KnotShape,
};
pub use monte_carlo::{
    count_critical_points, mc_expectation, sample_unit_sphere, McConfig, McReport,
};
pub use quadrature::{integrate_periodic, QuadConfig, QuadResult};
pub use veronese::{sym_dim, total_curvature, veronese_immersion, MultiIndex, VeroneseChart};
