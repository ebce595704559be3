//! Unit-power max-min multicast direction for one decoding group.
//!
//! Maximizes `min_n |g_n^H u|^2 / d_n` over unit vectors `u` by gradient
//! ascent on the complex sphere applied to a log-sum-exp smoothing of the
//! minimum. The smoothing temperature is tied to the current objective value
//! and sharpened over a few stages; the best point over all restarts wins.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::complex_gaussian;
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaxMinSettings {
    pub restarts: usize,
    /// Relative smoothing sharpness per stage; the temperature of a stage is
    /// `sharpness / current_objective`.
    pub stage_sharpness: Vec<f64>,
    /// Stop a stage when the iterate moves less than this.
    pub convergence_tol: f64,
    pub max_iters_per_stage: usize,
}

impl Default for MaxMinSettings {
    fn default() -> Self {
        Self {
            restarts: 32,
            stage_sharpness: vec![10.0, 100.0, 1e3, 1e4, 1e5],
            convergence_tol: 1e-8,
            max_iters_per_stage: 400,
        }
    }
}

/// Output of [`maxmin_direction`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaxMinDirection {
    /// Unit-norm direction.
    pub direction: CVector,
    /// `min_n |g_n^H u|^2 / d_n` at `direction`.
    pub gamma: f64,
    /// Every reduced channel is zero; `gamma` is 0 and `direction` arbitrary.
    pub degenerate: bool,
}

/// `min_n |g_n^H u|^2 / d_n`.
pub fn min_sinr(reduced_channels: &[CVector], denominators: &[f64], u: &CVector) -> f64 {
    reduced_channels
        .iter()
        .zip(denominators)
        .map(|(g, &d)| linalg::inner(g, u).norm_sqr() / d)
        .fold(f64::INFINITY, f64::min)
}

/// Max-min direction with [`MaxMinSettings::default`].
pub fn maxmin_direction(reduced_channels: &[CVector], denominators: &[f64], seed: u64) -> Result<MaxMinDirection> {
    maxmin_direction_with(reduced_channels, denominators, seed, &MaxMinSettings::default())
}

pub fn maxmin_direction_with(
    reduced_channels: &[CVector],
    denominators: &[f64],
    seed: u64,
    settings: &MaxMinSettings,
) -> Result<MaxMinDirection> {
    let dim = reduced_channels
        .first()
        .map(|g| g.len())
        .ok_or_else(|| Error::DimensionMismatch("decoding group is empty".into()))?;
    if dim == 0 || reduced_channels.iter().any(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch("reduced channels must share one nonzero length".into()));
    }
    if denominators.len() != reduced_channels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} reduced channels vs {} denominators",
            reduced_channels.len(),
            denominators.len()
        )));
    }
    if denominators.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
        return Err(Error::InvalidParameter("SINR denominators must be positive".into()));
    }

    // Whitened, normalized constraints c_n = g_n / sqrt(d_n s), so that
    // |c_n^H u|^2 <= 1 on the sphere.
    let scale = reduced_channels
        .iter()
        .zip(denominators)
        .map(|(g, &d)| linalg::norm_sqr(g) / d)
        .fold(0.0_f64, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        let mut e = CVector::zeros(dim);
        e[0] = Complex64::new(1.0, 0.0);
        return Ok(MaxMinDirection {
            direction: e,
            gamma: 0.0,
            degenerate: true,
        });
    }
    let constraints: Vec<CVector> = reduced_channels
        .iter()
        .zip(denominators)
        .map(|(g, &d)| g * Complex64::new(1.0 / (d * scale).sqrt(), 0.0))
        .collect();

    let finish = |u: CVector| {
        let gamma = min_sinr(reduced_channels, denominators, &u);
        MaxMinDirection {
            direction: u,
            gamma,
            degenerate: false,
        }
    };

    if dim == 1 {
        return Ok(finish(CVector::from_element(1, Complex64::new(1.0, 0.0))));
    }
    if constraints.len() == 1 {
        return Ok(finish(normalized(&constraints[0])));
    }

    let problem = Smoothed { constraints: &constraints };
    let mut best: Option<(f64, CVector)> = None;
    let mut consider = |u: CVector| {
        let v = problem.min_value(&u);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, u));
        }
    };

    // Matched filters of each member are cheap first guesses.
    for c in &constraints {
        consider(problem.ascend(normalized(c), settings));
    }
    for r in 0..settings.restarts {
        let mut rng = seed::rng(seed, &[r as u64]);
        let start = CVector::from_fn(dim, |_, _| complex_gaussian(&mut rng));
        consider(problem.ascend(normalized(&start), settings));
    }
    let (_, u) = best.expect("at least one start");
    Ok(finish(u))
}

fn normalized(v: &CVector) -> CVector {
    let n = v.norm();
    if n > 0.0 {
        v / Complex64::new(n, 0.0)
    } else {
        let mut e = CVector::zeros(v.len());
        e[0] = Complex64::new(1.0, 0.0);
        e
    }
}

struct Smoothed<'a> {
    constraints: &'a [CVector],
}

impl Smoothed<'_> {
    fn values(&self, u: &CVector) -> Vec<f64> {
        self.constraints.iter().map(|c| linalg::inner(c, u).norm_sqr()).collect()
    }

    fn min_value(&self, u: &CVector) -> f64 {
        self.values(u).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `-(1/t) log sum exp(-t a_n)` and the softmin weights.
    fn smoothed(&self, u: &CVector, t: f64) -> (f64, Vec<f64>) {
        let a = self.values(u);
        let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
        let mut w: Vec<f64> = a.iter().map(|&x| (-t * (x - lo)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= z);
        (lo - z.ln() / t, w)
    }

    /// Riemannian gradient of the smoothed objective (up to a factor 2).
    fn gradient(&self, u: &CVector, weights: &[f64]) -> CVector {
        let mut g = CVector::zeros(u.len());
        for (c, &w) in self.constraints.iter().zip(weights) {
            g += c * (linalg::inner(c, u) * w);
        }
        let radial = linalg::inner(u, &g).re;
        g - u * Complex64::new(radial, 0.0)
    }

    fn ascend(&self, mut u: CVector, settings: &MaxMinSettings) -> CVector {
        let mut best_u = u.clone();
        let mut best_v = self.min_value(&u);
        let mut step: f64 = 1.0;
        for &sharpness in &settings.stage_sharpness {
            let t = sharpness / best_v.max(1e-12);
            let (mut f, mut w) = self.smoothed(&u, t);
            for _ in 0..settings.max_iters_per_stage {
                let grad = self.gradient(&u, &w);
                let slope = grad.norm_squared();
                if slope == 0.0 {
                    break;
                }
                // Armijo backtracking along the retracted gradient path.
                let mut eta = (step * 2.0).min(1e3);
                let accepted = loop {
                    let cand = normalized(&(&u + &grad * Complex64::new(eta, 0.0)));
                    let (fc, wc) = self.smoothed(&cand, t);
                    if fc >= f + 1e-4 * eta * slope {
                        break Some((cand, fc, wc));
                    }
                    eta *= 0.5;
                    if eta < 1e-14 {
                        break None;
                    }
                };
                let Some((cand, fc, wc)) = accepted else { break };
                step = eta;
                let moved = (&cand - &u).norm();
                u = cand;
                f = fc;
                w = wc;
                let v = self.min_value(&u);
                if v > best_v {
                    best_v = v;
                    best_u = u.clone();
                }
                if moved < settings.convergence_tol {
                    break;
                }
            }
            u = best_u.clone();
        }
        best_u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
        CVector::from_fn(dim, |_, _| complex_gaussian(rng))
    }

    #[test]
    fn singleton_group_is_matched_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_vec(&mut rng, 3);
        let out = maxmin_direction(std::slice::from_ref(&g), &[2.0], 0).unwrap();
        assert!(!out.degenerate);
        assert_relative_eq!(out.direction.norm(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(out.gamma, g.norm_squared() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn duplicate_constraint_matches_singleton() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_vec(&mut rng, 3);
        let out = maxmin_direction(&[g.clone(), g.clone()], &[1.5, 1.5], 3).unwrap();
        assert_relative_eq!(out.gamma, g.norm_squared() / 1.5, max_relative = 1e-9);
    }

    #[test]
    fn one_dimensional_reduction() {
        let g = vec![
            CVector::from_element(1, Complex64::new(3.0, 4.0)),
            CVector::from_element(1, Complex64::new(1.0, 0.0)),
        ];
        let out = maxmin_direction(&g, &[1.0, 0.5], 0).unwrap();
        assert_relative_eq!(out.gamma, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_channels_are_degenerate() {
        let out = maxmin_direction(&[CVector::zeros(2), CVector::zeros(2)], &[1.0, 1.0], 0).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.gamma, 0.0);
        assert_relative_eq!(out.direction.norm(), 1.0);
    }

    #[test]
    fn orthogonal_pair_splits_evenly() {
        // max_u min(|u_1|^2, |u_2|^2) = 1/2.
        let e1 = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let e2 = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let out = maxmin_direction(&[e1, e2], &[1.0, 1.0], 5).unwrap();
        assert_relative_eq!(out.gamma, 0.5, max_relative = 1e-6);
    }

    #[test]
    fn gamma_is_self_consistent_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g: Vec<CVector> = (0..4).map(|_| random_vec(&mut rng, 3)).collect();
        let d = [1.0, 2.0, 0.5, 1.2];
        let a = maxmin_direction(&g, &d, 77).unwrap();
        let b = maxmin_direction(&g, &d, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.gamma, min_sinr(&g, &d, &a.direction));
        assert_relative_eq!(a.direction.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn beats_dense_sampling_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for _ in 0..5 {
            let g: Vec<CVector> = (0..3).map(|_| random_vec(&mut rng, 2)).collect();
            let d = [1.0; 3];
            let sol = maxmin_direction(&g, &d, 1).unwrap();
            let sampled = (0..20_000)
                .map(|_| {
                    let u = normalized(&random_vec(&mut rng, 2));
                    min_sinr(&g, &d, &u)
                })
                .fold(0.0, f64::max);
            assert!(sol.gamma >= 0.999 * sampled, "{} vs {}", sol.gamma, sampled);
        }
    }

    #[test]
    fn input_validation() {
        assert!(maxmin_direction(&[], &[], 0).is_err());
        let g = CVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(maxmin_direction(std::slice::from_ref(&g), &[0.0], 0).is_err());
        assert!(maxmin_direction(std::slice::from_ref(&g), &[1.0, 1.0], 0).is_err());
    }
}
