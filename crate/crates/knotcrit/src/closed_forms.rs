//! Exact reference values: sphere and ball constants, two Bernoulli
//! polynomials, the closed-form expectations on the unit circle, and the
//! absolute-moment sphere integral used to pin the 1/π normalization.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::knot::TWO_PI;
use crate::monte_carlo::sample_unit_sphere;
use crate::quadrature::{integrate_periodic, QuadConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Volume of the unit ball in R^m: Γ(1/2)^m / Γ(1+m/2), via log-Gamma.
pub fn ball_volume(m: u32) -> f64 {
    let m = f64::from(m);
    (0.5 * m * std::f64::consts::PI.ln() - ln_gamma(1.0 + 0.5 * m)).exp()
}

/// Area of the unit sphere S^n ⊂ R^{n+1}: σ_n = (n+1)·ω_{n+1}.
pub fn sphere_area(n: u32) -> f64 {
    f64::from(n + 1) * ball_volume(n + 1)
}

/// β₃(x) = x³ − (3/2)x² + (1/2)x and β₅(x) = x⁵ − (5/2)x⁴ + (5/3)x³ − (1/6)x,
/// the only Bernoulli polynomials needed here. They evaluate the power sums
/// Σ_{j≤n} j^{k−1} = β_k(n+1)/k.
pub fn bernoulli_poly(k: u32, x: f64) -> Result<f64> {
    match k {
        3 => Ok(((x - 1.5) * x + 0.5) * x),
        5 => Ok(((((x - 2.5) * x) + 5.0 / 3.0) * x * x - 1.0 / 6.0) * x),
        _ => Err(Error::InvalidSpec(format!(
            "only Bernoulli polynomials β₃ and β₅ are implemented, got k={k}"
        ))),
    }
}

/// Expected critical point count of a random degree-ℓ form on the unit
/// circle: 2√(3ℓ−2).
pub fn circle_veronese_expectation(ell: u32) -> Result<f64> {
    if ell < 1 {
        return Err(Error::InvalidSpec("degree must be ≥ 1".into()));
    }
    Ok(2.0 * f64::from(3 * ell - 2).sqrt())
}

/// Largest trig degree accepted; keeps the power sums exact in u128.
const MAX_TRIG_N: u32 = 1_000_000;

/// Expected critical point count of a random trigonometric polynomial of
/// degree ≤ n on the unit circle: 2√(3β₅(n+1)/(5β₃(n+1))) = 2√(Σk⁴/Σk²).
pub fn trig_expectation(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidSpec("trig degree must be ≥ 1".into()));
    }
    if n > MAX_TRIG_N {
        return Err(Error::InvalidSpec(format!(
            "trig degree exceeds the supported maximum {MAX_TRIG_N}"
        )));
    }
    let x = f64::from(n) + 1.0;
    let bern = 2.0 * (3.0 * bernoulli_poly(5, x)? / (5.0 * bernoulli_poly(3, x)?)).sqrt();

    // Independent power-sum route; the two expressions must agree.
    let mut s2: u128 = 0;
    let mut s4: u128 = 0;
    for k in 1..=u128::from(n) {
        s2 += k * k;
        s4 += k * k * k * k;
    }
    let sums = 2.0 * (s4 as f64 / s2 as f64).sqrt();
    assert!(
        (bern - sums).abs() <= 1e-12 * sums,
        "Bernoulli and power-sum forms disagree at n={n}: {bern} vs {sums}"
    );
    Ok(bern)
}

/// Measured vs reference value of ∫_{S^m}|⟨v₀, w⟩| dS = 2·ω_m·|v₀|.
#[derive(Clone, Copy, Debug)]
pub struct MomentCheck {
    pub measured: f64,
    pub reference: f64,
}

#[derive(Clone, Debug)]
pub struct MomentCheckConfig {
    /// Tolerance for the m = 1 quadrature (the integrand has kinks, so this
    /// should stay well above machine precision).
    pub qtol: f64,
    /// Latitude × longitude nodes for the m = 2 product grid.
    pub sphere_grid: (usize, usize),
    /// Sample count for the m > 2 Monte Carlo route.
    pub mc_samples: usize,
    pub mc_seed: u64,
}

impl Default for MomentCheckConfig {
    fn default() -> Self {
        MomentCheckConfig {
            qtol: 1e-8,
            sphere_grid: (4096, 8192),
            mc_samples: 200_000,
            mc_seed: 42,
        }
    }
}

/// Integrate |⟨v₀, w⟩| over the unit sphere S^m ⊂ R^{m+1} and compare with
/// 2·ω_m·|v₀|. Product quadrature for m ≤ 2, Monte Carlo above.
///
/// The fixed non-axis direction of v₀ keeps the measurement honest: nothing
/// in the numerical route exploits rotation invariance.
pub fn absolute_moment_check(m: u32, v0_len: f64, cfg: &MomentCheckConfig) -> Result<MomentCheck> {
    if m < 1 {
        return Err(Error::InvalidSpec("sphere dimension must be ≥ 1".into()));
    }
    if !v0_len.is_finite() || v0_len < 0.0 {
        return Err(Error::InvalidSpec("|v₀| must be finite and nonnegative".into()));
    }
    let reference = 2.0 * ball_volume(m) * v0_len;

    let measured = match m {
        1 => {
            let phase = 0.37;
            let quad = integrate_periodic(
                |t| Ok(v0_len * (t - phase).cos().abs()),
                0.0,
                TWO_PI,
                &QuadConfig {
                    qtol: cfg.qtol,
                    initial_grid: 256,
                    max_grid: 1 << 23,
                },
            )?;
            quad.value
        }
        2 => {
            let v0 = [0.36 * v0_len, 0.48 * v0_len, 0.8 * v0_len];
            let (n_phi, n_theta) = cfg.sphere_grid;
            let d_phi = std::f64::consts::PI / n_phi as f64;
            let d_theta = TWO_PI / n_theta as f64;
            let longitude: Vec<(f64, f64)> = (0..n_theta)
                .map(|j| (j as f64 * d_theta).sin_cos())
                .collect();
            let mut acc = 0.0;
            // trapezoid in latitude (endpoint weights vanish with sin φ),
            // periodic trapezoid in longitude
            for i in 0..=n_phi {
                let phi = i as f64 * d_phi;
                let (sp, cp) = phi.sin_cos();
                let weight = if i == 0 || i == n_phi { 0.5 } else { 1.0 };
                let mut row = 0.0;
                for &(st, ct) in &longitude {
                    row += (v0[0] * sp * ct + v0[1] * sp * st + v0[2] * cp).abs();
                }
                acc += weight * row * sp;
            }
            acc * d_phi * d_theta
        }
        _ => {
            let dim = m as usize + 1;
            let mut v0 = vec![0.0; dim];
            // normalized (1, 2, …) direction scaled to |v₀|
            let raw: Vec<f64> = (1..=dim).map(|i| i as f64).collect();
            let raw_norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            for (slot, r) in v0.iter_mut().zip(&raw) {
                *slot = v0_len * r / raw_norm;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.mc_seed);
            let mut acc = 0.0;
            for _ in 0..cfg.mc_samples {
                let w = sample_unit_sphere(dim, &mut rng);
                acc += crate::knot::dot(&v0, &w).abs();
            }
            sphere_area(m) * acc / cfg.mc_samples as f64
        }
    };

    Ok(MomentCheck {
        measured,
        reference,
    })
}
