//! Cross-module integration: custom families against built-ins, and the
//! Fourier-file route against builtin curves.

use knotcrit::expectation::expected_critical_points;
use knotcrit::knot::{builtin_circle, knot_from_fourier, trefoil, FourierKnotSpec, Harmonic};
use knotcrit::monte_carlo::{mc_expectation, McConfig};
use knotcrit::quadrature::QuadConfig;
use knotcrit::{custom_family, homogeneous_family, SmoothFunction};

struct Monomial2 {
    exps: [u32; 2],
}

impl SmoothFunction for Monomial2 {
    fn value(&self, x: &[f64]) -> f64 {
        x[0].powi(self.exps[0] as i32) * x[1].powi(self.exps[1] as i32)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let [a, b] = self.exps;
        let part = |e: u32, i: usize| {
            if e == 0 {
                0.0
            } else {
                f64::from(e)
                    * x[i].powi(e as i32 - 1)
                    * x[1 - i].powi(self.exps[1 - i] as i32)
            }
        };
        vec![part(a, 0), part(b, 1)]
    }
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let [a, b] = self.exps;
        let pow = |base: f64, e: i32| base.powi(e.max(0));
        let xx = if a >= 2 {
            f64::from(a * (a - 1)) * pow(x[0], a as i32 - 2) * pow(x[1], b as i32)
        } else {
            0.0
        };
        let yy = if b >= 2 {
            f64::from(b * (b - 1)) * pow(x[0], a as i32) * pow(x[1], b as i32 - 2)
        } else {
            0.0
        };
        let xy = if a >= 1 && b >= 1 {
            f64::from(a * b) * pow(x[0], a as i32 - 1) * pow(x[1], b as i32 - 1)
        } else {
            0.0
        };
        vec![xx, xy, xy, yy]
    }
}

#[test]
fn custom_quadratic_family_reproduces_builtin_expectation() {
    // Raw monomials y², xy, x² with their Bombieri Gram matrix
    // (diag 1, 1/2, 1) span the same space as the built-in degree-2 family,
    // so the expectation must match.
    let functions: Vec<Box<dyn SmoothFunction>> = vec![
        Box::new(Monomial2 { exps: [0, 2] }),
        Box::new(Monomial2 { exps: [1, 1] }),
        Box::new(Monomial2 { exps: [2, 0] }),
    ];
    let gram = vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.5, 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let custom = custom_family(2, functions, &gram).unwrap();
    let builtin = homogeneous_family(2, 2).unwrap();
    let knot = builtin_circle([3.0, 0.0], 1.0).unwrap();
    let cfg = QuadConfig::default();
    let mu_custom = expected_critical_points(&custom, &knot, &cfg).unwrap().mu;
    let mu_builtin = expected_critical_points(&builtin, &knot, &cfg).unwrap().mu;
    assert!(
        (mu_custom - mu_builtin).abs() < 1e-9,
        "{mu_custom} vs {mu_builtin}"
    );
}

#[test]
fn gram_scaling_leaves_expectation_unchanged() {
    let mk = || -> Vec<Box<dyn SmoothFunction>> {
        vec![
            Box::new(Monomial2 { exps: [0, 2] }),
            Box::new(Monomial2 { exps: [1, 1] }),
            Box::new(Monomial2 { exps: [2, 0] }),
        ]
    };
    let gram = vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.5, 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let scaled: Vec<Vec<f64>> = gram
        .iter()
        .map(|row| row.iter().map(|v| 4.0 * v).collect())
        .collect();
    let knot = builtin_circle([3.0, 0.0], 1.0).unwrap();
    let cfg = QuadConfig::default();
    let a = expected_critical_points(&custom_family(2, mk(), &gram).unwrap(), &knot, &cfg)
        .unwrap()
        .mu;
    let b = expected_critical_points(&custom_family(2, mk(), &scaled).unwrap(), &knot, &cfg)
        .unwrap()
        .mu;
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn fourier_trefoil_matches_builtin_in_expectation() {
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
    let from_spec = knot_from_fourier(&spec).unwrap();
    let builtin = trefoil();
    let fam = homogeneous_family(3, 1).unwrap();
    let cfg = QuadConfig::default();
    let a = expected_critical_points(&fam, &from_spec, &cfg).unwrap().mu;
    let b = expected_critical_points(&fam, &builtin, &cfg).unwrap().mu;
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn monte_carlo_tracks_formula_on_trefoil() {
    // General-curve path (4096-node scan grid): degree-1 family on the
    // trefoil, checked against the quadrature route at 3 standard errors.
    let knot = trefoil();
    let fam = homogeneous_family(3, 1).unwrap();
    let mu = expected_critical_points(&fam, &knot, &QuadConfig::default())
        .unwrap()
        .mu;
    let report = mc_expectation(
        &fam,
        &knot,
        &McConfig {
            samples: 3000,
            seed: 11,
            ..McConfig::default()
        },
    )
    .unwrap();
    assert!(
        (report.mean - mu).abs() <= 3.0 * report.standard_error,
        "mean {} mu {mu} se {}",
        report.mean,
        report.standard_error
    );
}
