//! Distances between outcome distributions (δ_p) and between observables
//! (d_p), with exact evaluators where the optimisation collapses and a
//! certified-lower-bound heuristic elsewhere.
//!
//! For probability vectors, δ_p(μ, ν) = ‖μ − ν‖_p. For observables, the
//! distance is the worst case over states of the distance between the
//! induced Born distributions:
//!
//! ```text
//! d_p(E, F) = sup_ρ δ_p(E^ρ, F^ρ).
//! ```
//!
//! Two regimes admit closed forms:
//!
//! - **p = ∞**: the sup and the outcome max commute, so
//!   d_∞(E, F) = max_ω ‖E(ω) − F(ω)‖ (spectral norm), with the top
//!   eigenprojector of the maximising difference as witness state.
//! - **two outcomes, any p**: the two probability deviations are exact
//!   negatives of each other, so δ_p collapses to 2^{1/p}·|tr ρΔ| with
//!   Δ = E(ω₁) − F(ω₁), and the sup is again a spectral norm.
//!
//! Outside these regimes [`d_p_heuristic`] runs projected gradient ascent
//! over pure states from random restarts. Its result is a certified *lower*
//! bound — the best Born-distribution distance actually witnessed — and is
//! flagged `exact: false` so callers cannot mistake it for ground truth.
//!
//! Two structural checks back the uncertainty-region machinery: joint
//! convexity of δ_p and invariance of δ_p under outcome permutations. Both
//! sample randomly and report violations instead of assuming the algebra.

use serde::{Deserialize, Serialize};

use crate::error::{CovmurError, Result};
use crate::linalg::{DensityOperator, HermitianOperator};
use crate::observables::Observable;
use crate::sample;
use crate::symmetry::OutcomeAction;
use crate::tol;

/// The exponent of a p-norm, p ∈ [1, ∞].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PNorm {
    /// Finite exponent p ≥ 1.
    Finite(f64),
    /// The max norm.
    Infinity,
}

impl PNorm {
    /// Finite exponent; must satisfy p ≥ 1.
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(CovmurError::Domain(format!(
                "p-norm exponent must satisfy p ≥ 1, got {p}"
            )));
        }
        Ok(PNorm::Finite(p))
    }

    /// The distance cap 2^{1/p} (equal to 1 at p = ∞).
    pub fn two_pow_inv(self) -> f64 {
        match self {
            PNorm::Finite(p) => 2.0_f64.powf(1.0 / p),
            PNorm::Infinity => 1.0,
        }
    }
}

impl std::fmt::Display for PNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = CovmurError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| CovmurError::Parse(format!("invalid p-norm '{s}'")))?;
                PNorm::finite(p)
            }
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PNorm::Finite(p) => ser.serialize_f64(*p),
            PNorm::Infinity => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PNorm {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(de)? {
            Repr::Num(p) => PNorm::finite(p).map_err(serde::de::Error::custom),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// p-norm of a difference vector, without input validation.
fn delta_p_raw(mu: &[f64], nu: &[f64], p: PNorm) -> f64 {
    match p {
        PNorm::Infinity => mu
            .iter()
            .zip(nu)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
        PNorm::Finite(p) => mu
            .iter()
            .zip(nu)
            .map(|(a, b)| (a - b).abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// Distribution distance δ_p(μ, ν) = ‖μ − ν‖_p.
///
/// Inputs must be equal-length probability vectors: entries ≥ 0 (up to
/// rounding) and sums within 1e−8 of 1.
pub fn delta_p(mu: &[f64], nu: &[f64], p: PNorm) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(CovmurError::DimensionMismatch {
            expected: mu.len(),
            got: nu.len(),
        });
    }
    for v in [mu, nu] {
        if v.iter().any(|&x| x < -1e-12) {
            return Err(CovmurError::Domain(
                "probability vector has a negative entry".into(),
            ));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > 1e-8 {
            return Err(CovmurError::Domain(format!(
                "probability vector sums to {total}, not 1"
            )));
        }
    }
    Ok(delta_p_raw(mu, nu, p))
}

/// Result of an observable-distance evaluation.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    /// The distance (or certified lower bound when `exact` is false).
    pub value: f64,
    /// Whether `value` is the exact supremum.
    pub exact: bool,
    /// A state witnessing `value` (achieving it when exact; the best state
    /// found when not).
    pub witness: Option<DensityOperator>,
}

fn require_comparable(e: &Observable, f: &Observable) -> Result<()> {
    if e.dim() != f.dim() {
        return Err(CovmurError::DimensionMismatch {
            expected: e.dim(),
            got: f.dim(),
        });
    }
    if e.outcomes() != f.outcomes() {
        return Err(CovmurError::OutcomeMismatch);
    }
    Ok(())
}

/// Top eigenprojector of Δ by |eigenvalue|, as a pure witness state.
fn extremal_eigenstate(delta: &HermitianOperator) -> DensityOperator {
    let (eigs, vecs) = delta.eigen_pairs();
    let dim = delta.dim();
    // Eigenvalues are ascending: the extremes sit at the ends.
    let idx = if eigs[dim - 1].abs() >= eigs[0].abs() {
        dim - 1
    } else {
        0
    };
    let col: Vec<_> = (0..dim).map(|r| vecs[(r, idx)]).collect();
    DensityOperator::from_pure(&col).expect("eigenvector is a unit vector")
}

/// Exact d_∞(E, F) = max_ω ‖E(ω) − F(ω)‖, with eigenprojector witness.
pub fn d_p_exact_infty(e: &Observable, f: &Observable) -> Result<DistanceResult> {
    require_comparable(e, f)?;
    let mut best = 0.0_f64;
    let mut best_delta: Option<HermitianOperator> = None;
    for i in 0..e.outcome_count() {
        let delta = e.effect(i).sub(f.effect(i));
        let norm = delta.spectral_norm();
        if norm >= best {
            best = norm;
            best_delta = Some(delta);
        }
    }
    Ok(DistanceResult {
        value: best,
        exact: true,
        witness: best_delta.map(|d| extremal_eigenstate(&d)),
    })
}

/// Exact d_p for two-outcome observables: the Born deviations at the two
/// outcomes are exact negatives, so
/// d_p(E, F) = 2^{1/p} · ‖E(ω₁) − F(ω₁)‖ for every p ∈ [1, ∞].
pub fn d_p_exact_two_outcome(e: &Observable, f: &Observable, p: PNorm) -> Result<DistanceResult> {
    require_comparable(e, f)?;
    if e.outcome_count() != 2 {
        return Err(CovmurError::Unsupported(format!(
            "two-outcome evaluator called on {} outcomes; use the heuristic",
            e.outcome_count()
        )));
    }
    let delta = e.effect(0).sub(f.effect(0));
    Ok(DistanceResult {
        value: p.two_pow_inv() * delta.spectral_norm(),
        exact: true,
        witness: Some(extremal_eigenstate(&delta)),
    })
}

/// Born distribution of raw quadratic forms ⟨ψ|E(ω)|ψ⟩ (no clamping; the
/// ascent objective only needs differences).
fn born_raw(obs: &Observable, psi: &[crate::linalg::C64]) -> Vec<f64> {
    let dim = obs.dim();
    obs.effects()
        .iter()
        .map(|e| {
            let m = e.matrix();
            let mut acc = crate::linalg::C64::new(0.0, 0.0);
            for r in 0..dim {
                for c in 0..dim {
                    acc += psi[r].conj() * m[(r, c)] * psi[c];
                }
            }
            acc.re
        })
        .collect()
}

/// Lower-bound heuristic for d_p(E, F): projected gradient ascent on the
/// pure-state sphere from `restarts` random starts, at most `iters`
/// iterations each, numerical gradients, ascent tolerance
/// [`tol::HEURISTIC_ASCENT`].
///
/// The returned value is the best Born-distribution distance actually
/// achieved by a sampled state, hence always a valid lower bound; `exact`
/// is false. Deterministic for a fixed `seed`.
pub fn d_p_heuristic(
    e: &Observable,
    f: &Observable,
    p: PNorm,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<DistanceResult> {
    require_comparable(e, f)?;
    let dim = e.dim();
    let mut rng = sample::rng(seed);

    let objective = |params: &[f64]| -> f64 {
        let psi: Vec<crate::linalg::C64> = (0..dim)
            .map(|i| crate::linalg::C64::new(params[2 * i], params[2 * i + 1]))
            .collect();
        let norm_sq: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq <= 1e-12 {
            return 0.0;
        }
        let psi: Vec<_> = psi.iter().map(|c| c / crate::linalg::cr(norm_sq.sqrt())).collect();
        delta_p_raw(&born_raw(e, &psi), &born_raw(f, &psi), p)
    };

    let mut best_value = 0.0_f64;
    let mut best_params: Vec<f64> = {
        let psi = sample::random_pure_state(&mut rng, dim);
        psi.iter().flat_map(|c| [c.re, c.im]).collect()
    };
    best_value = best_value.max(objective(&best_params));

    for _ in 0..restarts {
        let psi = sample::random_pure_state(&mut rng, dim);
        let mut params: Vec<f64> = psi.iter().flat_map(|c| [c.re, c.im]).collect();
        let mut value = objective(&params);
        let h = 1e-6;
        let mut step = 0.5;
        for _ in 0..iters {
            // Central-difference gradient in the 2·dim real parameters.
            let mut grad = vec![0.0; params.len()];
            for k in 0..params.len() {
                let saved = params[k];
                params[k] = saved + h;
                let up = objective(&params);
                params[k] = saved - h;
                let down = objective(&params);
                params[k] = saved;
                grad[k] = (up - down) / (2.0 * h);
            }
            let gnorm: f64 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < tol::HEURISTIC_ASCENT {
                break;
            }
            // Backtracking line search along the normalised gradient.
            let mut improved = false;
            let mut trial_step = step;
            while trial_step > 1e-12 {
                let trial: Vec<f64> = params
                    .iter()
                    .zip(&grad)
                    .map(|(x, g)| x + trial_step * g / gnorm)
                    .collect();
                let trial_value = objective(&trial);
                if trial_value > value + tol::HEURISTIC_ASCENT {
                    params = trial;
                    value = trial_value;
                    improved = true;
                    break;
                }
                trial_step *= 0.5;
            }
            if !improved {
                break;
            }
            step = (trial_step * 2.0).min(0.5);
        }
        if value > best_value {
            best_value = value;
            best_params = params;
        }
    }

    let psi: Vec<crate::linalg::C64> = (0..dim)
        .map(|i| crate::linalg::C64::new(best_params[2 * i], best_params[2 * i + 1]))
        .collect();
    Ok(DistanceResult {
        value: best_value,
        exact: false,
        witness: Some(DensityOperator::from_pure(&psi)?),
    })
}

/// Default restart count for the heuristic.
pub const HEURISTIC_RESTARTS: usize = 64;
/// Default iteration cap per restart.
pub const HEURISTIC_ITERS: usize = 500;

/// Outcome of a randomised structural check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// Number of sampled configurations.
    pub trials: usize,
    /// Number of tolerance violations observed.
    pub violations: usize,
    /// Largest excess over the allowed slack (0 when none).
    pub max_excess: f64,
}

impl CheckReport {
    /// True when no violation was observed.
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

/// Sample random (λ, μ₁, μ₂, ν₁, ν₂) and test joint convexity of `delta`:
///
/// ```text
/// δ(λν₁+(1−λ)ν₂, λμ₁+(1−λ)μ₂) ≤ λ·δ(ν₁,μ₁) + (1−λ)·δ(ν₂,μ₂) + slack.
/// ```
pub fn check_joint_convexity(
    delta: impl Fn(&[f64], &[f64]) -> f64,
    n_outcomes: usize,
    trials: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = sample::rng(seed);
    let mut violations = 0;
    let mut max_excess = 0.0_f64;
    for _ in 0..trials {
        let lambda: f64 = rand::Rng::random(&mut rng);
        let mu1 = sample::random_distribution(&mut rng, n_outcomes);
        let mu2 = sample::random_distribution(&mut rng, n_outcomes);
        let nu1 = sample::random_distribution(&mut rng, n_outcomes);
        let nu2 = sample::random_distribution(&mut rng, n_outcomes);
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter()
                .zip(b)
                .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
                .collect()
        };
        let lhs = delta(&mix(&nu1, &nu2), &mix(&mu1, &mu2));
        let rhs = lambda * delta(&nu1, &mu1) + (1.0 - lambda) * delta(&nu2, &mu2);
        let excess = lhs - rhs - tol::JOINT_CONVEXITY_SLACK;
        if excess > 0.0 {
            violations += 1;
            max_excess = max_excess.max(excess);
        }
    }
    CheckReport {
        trials,
        violations,
        max_excess,
    }
}

/// Sample random distribution pairs and test invariance of `delta` under
/// every permutation of the action: δ(μ∘f_g, ν∘f_g) = δ(μ, ν) within
/// [`tol::ACTION_COMPAT`].
pub fn check_action_compatibility(
    delta: impl Fn(&[f64], &[f64]) -> f64,
    action: &OutcomeAction,
    trials: usize,
    seed: u64,
) -> CheckReport {
    let mut rng = sample::rng(seed);
    let n = action.outcomes().len();
    let mut violations = 0;
    let mut max_excess = 0.0_f64;
    for _ in 0..trials {
        let mu = sample::random_distribution(&mut rng, n);
        let nu = sample::random_distribution(&mut rng, n);
        let base = delta(&mu, &nu);
        for g in 0..action.group().order() {
            let permute = |v: &[f64]| -> Vec<f64> {
                (0..n).map(|x| v[action.apply(g, x)]).collect()
            };
            let moved = delta(&permute(&mu), &permute(&nu));
            let excess = (moved - base).abs() - tol::ACTION_COMPAT;
            if excess > 0.0 {
                violations += 1;
                max_excess = max_excess.max(excess);
            }
        }
    }
    CheckReport {
        trials,
        violations,
        max_excess,
    }
}
