//! Degree-ℓ Veronese maps in orthonormal monomial coordinates, Veronese
//! immersions of curves, and total curvature.
//!
//! The chart coordinates are the weighted monomials √(ℓ!/∏αᵢ!)·x^α over all
//! exponent tuples |α| = ℓ. In these coordinates the map is an isometry onto
//! its image in the Bombieri sense: |𝒱(x)| = |x|^ℓ, and pairing with a
//! coefficient vector recovers polynomial evaluation.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::knot::{self, Knot};
use crate::quadrature::{self, QuadConfig};

/// Largest chart dimension we are willing to materialize.
const MAX_CHART_DIM: usize = 1 << 20;

/// Exponent tuple α with a fixed position in the chart enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Number of degree-ℓ monomials in n variables: C(n+ℓ−1, ℓ).
pub fn sym_dim(n: usize, ell: u32) -> Result<usize> {
    if n < 1 || ell < 1 {
        return Err(Error::InvalidSpec(format!(
            "sym_dim requires n ≥ 1 and ℓ ≥ 1, got n={n}, ℓ={ell}"
        )));
    }
    let mut acc: u128 = 1;
    // C(n+ℓ−1, ℓ) multiplicatively; ℓ ≤ n+ℓ−1 always holds here.
    for i in 1..=ell as u128 {
        acc = acc
            .checked_mul(n as u128 - 1 + i)
            .ok_or_else(|| Error::InvalidSpec("family dimension overflows".into()))?
            / i;
        if acc > MAX_CHART_DIM as u128 {
            return Err(Error::InvalidSpec(format!(
                "family dimension exceeds the supported maximum {MAX_CHART_DIM}"
            )));
        }
    }
    Ok(acc as usize)
}

/// All exponent tuples with |α| = ℓ in ascending lexicographic order, so for
/// n = 2 the sequence is (0,ℓ), (1,ℓ−1), …, (ℓ,0).
pub fn multi_indices(n: usize, ell: u32) -> Result<Vec<MultiIndex>> {
    let dim = sym_dim(n, ell)?;
    let mut out = Vec::with_capacity(dim);
    let mut current = vec![0u32; n];
    fn rec(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(MultiIndex {
                exponents: current.clone(),
            });
            return;
        }
        for a in 0..=remaining {
            current[pos] = a;
            rec(current, pos + 1, remaining - a, out);
        }
    }
    rec(&mut current, 0, ell, &mut out);
    debug_assert_eq!(out.len(), dim);
    Ok(out)
}

/// Multinomial ℓ!/∏αᵢ!, exact while it fits in u128, else via log-Gamma.
fn multinomial_sqrt(exponents: &[u32]) -> Result<f64> {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    let mut exact = true;
    'outer: for &e in exponents {
        for j in 1..=e as u128 {
            total += 1;
            match acc.checked_mul(total) {
                Some(v) => acc = v / j,
                None => {
                    exact = false;
                    break 'outer;
                }
            }
        }
    }
    if exact {
        return Ok((acc as f64).sqrt());
    }
    let ell: f64 = exponents.iter().map(|&e| f64::from(e)).sum();
    let mut log = statrs::function::gamma::ln_gamma(ell + 1.0);
    for &e in exponents {
        log -= statrs::function::gamma::ln_gamma(f64::from(e) + 1.0);
    }
    let value = (0.5 * log).exp();
    if !value.is_finite() {
        return Err(Error::InvalidSpec(
            "monomial coefficient overflows f64".into(),
        ));
    }
    Ok(value)
}

/// The degree-ℓ chart on R^n: ordered multi-indices plus their coefficients.
#[derive(Clone, Debug)]
pub struct VeroneseChart {
    n: usize,
    ell: u32,
    indices: Vec<MultiIndex>,
    coeffs: Vec<f64>,
}

impl VeroneseChart {
    pub fn new(n: usize, ell: u32) -> Result<VeroneseChart> {
        if n < 1 {
            return Err(Error::InvalidSpec("ambient dimension must be ≥ 1".into()));
        }
        let indices = multi_indices(n, ell)?;
        let coeffs = indices
            .iter()
            .map(|idx| multinomial_sqrt(idx.exponents()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(VeroneseChart {
            n,
            ell,
            indices,
            coeffs,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.ell
    }

    /// Chart dimension C(n+ℓ−1, ℓ).
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::InvalidSpec(format!(
                "expected a vector of dimension {}, got {}",
                self.n,
                x.len()
            )));
        }
        Ok(())
    }

    /// Coordinates √(ℓ!/∏αᵢ!)·x^α in chart order.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self
            .indices
            .iter()
            .zip(&self.coeffs)
            .map(|(idx, &c)| c * monomial(x, idx.exponents()))
            .collect())
    }

    /// Derivative at 0 of s ↦ eval(x + s·u), via exact monomial gradients.
    pub fn directional(&self, x: &[f64], u: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        self.check_dim(u)?;
        Ok(self
            .indices
            .iter()
            .zip(&self.coeffs)
            .map(|(idx, &c)| {
                let alpha = idx.exponents();
                let mut acc = 0.0;
                for i in 0..self.n {
                    if alpha[i] > 0 && u[i] != 0.0 {
                        acc += f64::from(alpha[i]) * u[i] * monomial_minus(x, alpha, i, usize::MAX);
                    }
                }
                c * acc
            })
            .collect())
    }

    /// Second t-derivative of t ↦ eval(x(t)) given u = x'(t) and w = x''(t).
    pub fn curve_second_derivative(&self, x: &[f64], u: &[f64], w: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        self.check_dim(u)?;
        self.check_dim(w)?;
        Ok(self
            .indices
            .iter()
            .zip(&self.coeffs)
            .map(|(idx, &c)| {
                let alpha = idx.exponents();
                let mut acc = 0.0;
                for i in 0..self.n {
                    if alpha[i] == 0 {
                        continue;
                    }
                    let ai = f64::from(alpha[i]);
                    if w[i] != 0.0 {
                        acc += ai * w[i] * monomial_minus(x, alpha, i, usize::MAX);
                    }
                    if u[i] == 0.0 {
                        continue;
                    }
                    for j in 0..self.n {
                        let adj = alpha[j] - u32::from(j == i);
                        if adj > 0 && u[j] != 0.0 {
                            acc += ai * f64::from(adj) * u[i] * u[j] * monomial_minus(x, alpha, i, j);
                        }
                    }
                }
                c * acc
            })
            .collect())
    }
}

fn monomial(x: &[f64], alpha: &[u32]) -> f64 {
    x.iter()
        .zip(alpha)
        .map(|(&xi, &e)| xi.powi(e as i32))
        .product()
}

/// x^α with the exponent lowered by one at `skip1` (and at `skip2` too when
/// it is a valid position). Exponents never go negative at call sites.
fn monomial_minus(x: &[f64], alpha: &[u32], skip1: usize, skip2: usize) -> f64 {
    let mut acc = 1.0;
    for (i, (&xi, &e)) in x.iter().zip(alpha).enumerate() {
        let mut e = e;
        if i == skip1 {
            e -= 1;
        }
        if i == skip2 {
            e -= 1;
        }
        if e > 0 {
            acc *= xi.powi(e as i32);
        }
    }
    acc
}

/// The curve t ↦ 𝒱_ℓ(x(t)) as a first-class `Knot` in the chart space, with
/// exact velocity ℓ𝒱(x',x,…,x) and the corresponding second derivative.
///
/// For ℓ ≥ 2 this is an immersion only when the source curve avoids the
/// origin, which is checked on a scan grid up front.
pub fn veronese_immersion(chart: &VeroneseChart, source: &Knot) -> Result<Knot> {
    if source.dim() != chart.ambient_dim() {
        return Err(Error::InvalidSpec(format!(
            "curve lives in R^{} but the chart expects R^{}",
            source.dim(),
            chart.ambient_dim()
        )));
    }
    if chart.degree() >= 2 {
        let (min, argmin, max) = quadrature::grid_scan(
            |t| knot::norm(&source.position(t)),
            0.0,
            source.period(),
            knot::DEFAULT_VALIDATION_GRID,
        );
        if min <= 1e-8 * max.max(f64::MIN_POSITIVE) {
            return Err(Error::OriginOnCurve { min, argmin });
        }
    }

    let chart = Arc::new(chart.clone());
    let (c0, c1, c2) = (chart.clone(), chart.clone(), chart);
    let (k0, k1, k2) = (source.clone(), source.clone(), source.clone());
    Ok(Knot::new(
        c0.dim(),
        source.period(),
        move |t| c0.eval(&k0.position(t)).expect("dims checked"),
        move |t| {
            c1.directional(&k1.position(t), &k1.velocity(t))
                .expect("dims checked")
        },
        move |t| {
            c2.curve_second_derivative(&k2.position(t), &k2.velocity(t), &k2.acceleration(t))
                .expect("dims checked")
        },
    ))
}

/// Total curvature ∮|T'(t)| dt of the unit tangent T = x'/|x'|.
///
/// The integrand is computed analytically from velocity and acceleration:
/// |T'| = √(|x''|²|x'|² − (x'·x'')²)/|x'|².
pub fn total_curvature(knot: &Knot, cfg: &QuadConfig) -> Result<f64> {
    knot::require_immersed(knot)?;
    let r = quadrature::integrate_periodic(
        |t| {
            let v = knot.velocity(t);
            let a = knot.acceleration(t);
            let v2 = knot::dot(&v, &v);
            let a2 = knot::dot(&a, &a);
            let va = knot::dot(&v, &a);
            Ok((a2 * v2 - va * va).max(0.0).sqrt() / v2)
        },
        0.0,
        knot.period(),
        cfg,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{builtin_circle, curve_length, trefoil, validate_immersion, TWO_PI};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sym_dim_values() {
        for ell in 1..10 {
            assert_eq!(sym_dim(2, ell).unwrap(), ell as usize + 1);
        }
        assert_eq!(sym_dim(3, 2).unwrap(), 6);
        assert_eq!(sym_dim(3, 5).unwrap(), 21);
        assert!(sym_dim(0, 1).is_err());
        assert!(sym_dim(2, 0).is_err());
        assert!(sym_dim(64, 64).is_err()); // beyond the chart cap
    }

    #[test]
    fn index_order_matches_planar_convention() {
        // (x₂², √2·x₁x₂, x₁²) for n = 2, ℓ = 2.
        let chart = VeroneseChart::new(2, 2).unwrap();
        let exps: Vec<&[u32]> = chart.indices().iter().map(|i| i.exponents()).collect();
        assert_eq!(exps, vec![&[0, 2][..], &[1, 1][..], &[2, 0][..]]);
        assert!((chart.coefficients()[1] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(chart.coefficients()[0], 1.0);

        let v = chart.eval(&[0.0, 1.0]).unwrap();
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn planar_chart_on_circle() {
        let chart = VeroneseChart::new(2, 2).unwrap();
        for i in 0..32 {
            let th = TWO_PI * i as f64 / 32.0;
            let v = chart.eval(&[th.cos(), th.sin()]).unwrap();
            let norm2: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm2 - 1.0).abs() < 1e-12);
            assert!((v[0] + v[2] - 1.0).abs() < 1e-12); // image lies in x+z = 1
        }
    }

    proptest! {
        #[test]
        fn eval_norm_is_power_of_input_norm(
            coords in proptest::collection::vec(-2.0f64..2.0, 2..4),
            ell in 1u32..6,
        ) {
            let chart = VeroneseChart::new(coords.len(), ell).unwrap();
            let v = chart.eval(&coords).unwrap();
            let lhs: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let rhs = coords.iter().map(|x| x * x).sum::<f64>().sqrt().powi(ell as i32);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn directional_is_identity_for_degree_one() {
        let chart = VeroneseChart::new(3, 1).unwrap();
        let d = chart
            .directional(&[0.3, -0.2, 0.9], &[1.0, 2.0, 3.0])
            .unwrap();
        // degree-1 chart order is (x₃, x₂, x₁)
        assert_eq!(d, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn directional_at_circle_base_point() {
        for ell in 1..8u32 {
            let chart = VeroneseChart::new(2, ell).unwrap();
            let d = chart.directional(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
            for (idx, (mi, &val)) in chart.indices().iter().zip(&d).enumerate() {
                if mi.exponents() == [ell - 1, 1] {
                    assert!((val - f64::from(ell).sqrt()).abs() < 1e-12, "ℓ={ell}");
                    assert_eq!(idx, ell as usize - 1);
                } else {
                    assert!(val.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn directional_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(3);
        for (n, ell) in [(2usize, 3u32), (3, 2), (3, 4)] {
            let chart = VeroneseChart::new(n, ell).unwrap();
            for _ in 0..20 {
                let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
                let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
                let d = chart.directional(&x, &u).unwrap();
                let h = 1e-6;
                let xp: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + h * b).collect();
                let xm: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a - h * b).collect();
                let fd: Vec<f64> = chart
                    .eval(&xp)
                    .unwrap()
                    .iter()
                    .zip(chart.eval(&xm).unwrap())
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect();
                for (a, b) in d.iter().zip(&fd) {
                    assert!((a - b).abs() < 1e-7, "n={n} ℓ={ell}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        let chart = VeroneseChart::new(3, 3).unwrap();
        let k = trefoil();
        let h = 1e-5;
        for i in 0..16 {
            let t = TWO_PI * i as f64 / 16.0 + 0.01;
            let exact = chart
                .curve_second_derivative(&k.position(t), &k.velocity(t), &k.acceleration(t))
                .unwrap();
            let vp = chart.directional(&k.position(t + h), &k.velocity(t + h)).unwrap();
            let vm = chart.directional(&k.position(t - h), &k.velocity(t - h)).unwrap();
            for (a, (p, m)) in exact.iter().zip(vp.iter().zip(&vm)) {
                let fd = (p - m) / (2.0 * h);
                assert!((a - fd).abs() < 1e-5, "{a} vs {fd}");
            }
        }
    }

    #[test]
    fn circle_immersion_constant_speed_and_double_cover() {
        let chart = VeroneseChart::new(2, 2).unwrap();
        let circle = builtin_circle([0.0, 0.0], 1.0).unwrap();
        let immersed = veronese_immersion(&chart, &circle).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let t = rng.random::<f64>() * TWO_PI;
            let speed = knot::norm(&immersed.velocity(t));
            assert!((speed - 2f64.sqrt()).abs() < 1e-10);

            // double cover: V(t+π) = V(t)
            let a = immersed.position(t);
            let b = immersed.position(t + std::f64::consts::PI);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }

            // image is a circle of radius 1/√2 centered at (1/2, 0, 1/2)
            let d2 = (a[0] - 0.5).powi(2) + a[1].powi(2) + (a[2] - 0.5).powi(2);
            assert!((d2 - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_immersion_speed_is_sqrt_ell() {
        let circle = builtin_circle([0.0, 0.0], 1.0).unwrap();
        let chart = VeroneseChart::new(2, 4).unwrap();
        let immersed = veronese_immersion(&chart, &circle).unwrap();
        let report = validate_immersion(&immersed, 1024).unwrap();
        assert!((report.min_speed - 2.0).abs() < 1e-10);
    }

    #[test]
    fn circle_immersion_length() {
        let circle = builtin_circle([0.0, 0.0], 1.0).unwrap();
        let chart = VeroneseChart::new(2, 3).unwrap();
        let immersed = veronese_immersion(&chart, &circle).unwrap();
        let len = curve_length(&immersed, &QuadConfig::default()).unwrap();
        assert!((len - TWO_PI * 3f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn immersion_rejects_curve_through_origin() {
        let chart = VeroneseChart::new(2, 2).unwrap();
        let k = builtin_circle([1.0, 0.0], 1.0).unwrap();
        match veronese_immersion(&chart, &k) {
            Err(Error::OriginOnCurve { .. }) => {}
            other => panic!("expected OriginOnCurve, got {other:?}"),
        }
    }

    #[test]
    fn total_curvature_of_circle() {
        let k = builtin_circle([2.0, -1.0], 3.0).unwrap();
        let tau = total_curvature(&k, &QuadConfig::default()).unwrap();
        assert!((tau - TWO_PI).abs() < 1e-10);
    }

    #[test]
    fn circle_immersion_curvature_closed_form() {
        let circle = builtin_circle([0.0, 0.0], 1.0).unwrap();
        let cfg = QuadConfig::default();
        for ell in [1u32, 2, 5] {
            let chart = VeroneseChart::new(2, ell).unwrap();
            let immersed = veronese_immersion(&chart, &circle).unwrap();
            let tau = total_curvature(&immersed, &cfg).unwrap();
            let expected = 2.0 * f64::from(3 * ell - 2).sqrt();
            assert!(
                (tau / std::f64::consts::PI - expected).abs() < 1e-8,
                "ℓ={ell}: {} vs {expected}",
                tau / std::f64::consts::PI
            );
        }
    }

    #[test]
    fn offset_circle_immersion_curvature() {
        // Frozen from two independent high-precision evaluations of this
        // geometry (curvature integral and the unit-map route).
        let circle = builtin_circle([3.0, 0.0], 1.0).unwrap();
        let chart = VeroneseChart::new(2, 2).unwrap();
        let immersed = veronese_immersion(&chart, &circle).unwrap();
        let tau = total_curvature(&immersed, &QuadConfig::default()).unwrap();
        assert!((tau / std::f64::consts::PI - 2.065930048230).abs() < 1e-8);
    }

    #[test]
    fn theta_second_derivative_norm_identity() {
        // |V''(θ)|² = 3ℓ² − 2ℓ on the unit circle.
        let circle = builtin_circle([0.0, 0.0], 1.0).unwrap();
        for ell in 1..=8u32 {
            let chart = VeroneseChart::new(2, ell).unwrap();
            let immersed = veronese_immersion(&chart, &circle).unwrap();
            for i in 0..20 {
                let t = TWO_PI * i as f64 / 20.0;
                let a = immersed.acceleration(t);
                let norm2 = knot::dot(&a, &a);
                let expected = f64::from(3 * ell * ell - 2 * ell);
                assert!((norm2 - expected).abs() < 1e-9, "ℓ={ell}: {norm2}");
            }
        }
    }

    #[test]
    fn fenchel_lower_bound() {
        let cfg = QuadConfig::default();
        let circle = builtin_circle([0.0, 0.0], 1.0).unwrap();
        let chart = VeroneseChart::new(2, 3).unwrap();
        let curves = [
            builtin_circle([3.0, 0.0], 1.0).unwrap(),
            trefoil(),
            crate::knot::ellipse(2.0, 1.0).unwrap(),
            veronese_immersion(&chart, &circle).unwrap(),
        ];
        for k in &curves {
            let tau = total_curvature(k, &cfg).unwrap();
            assert!(tau >= TWO_PI - 1e-6, "tau = {tau}");
        }
    }

    #[test]
    fn rotation_equivariance_of_curvature() {
        let circle = builtin_circle([3.0, 0.0], 1.0).unwrap();
        let (c, s) = (1.1f64.cos(), 1.1f64.sin());
        let rotated = circle
            .transformed(&[vec![c, -s], vec![s, c]])
            .unwrap();
        let chart = VeroneseChart::new(2, 2).unwrap();
        let cfg = QuadConfig::default();
        let a = total_curvature(&veronese_immersion(&chart, &circle).unwrap(), &cfg).unwrap();
        let b = total_curvature(&veronese_immersion(&chart, &rotated).unwrap(), &cfg).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}
