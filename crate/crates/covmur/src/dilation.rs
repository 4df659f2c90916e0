//! Error dilation: starting from a realised joint measurement, increase the
//! approximation error of one margin to any requested value by mixing the
//! joint with a collapsed, trivial-margin joint.
//!
//! Collapsing axis i of a joint J onto a fixed outcome redistributes all
//! probability weight of that axis onto the chosen label while leaving
//! every other margin untouched. The path J_λ = (1−λ)·J + λ·J̃ therefore
//! sweeps the axis-i error continuously from its current value up to a cap
//! (1 for the ∞-norm against a target with a singular effect, 2^{1/p} for
//! finite p against a target with an eigenvalue-1 effect), while the other
//! margins stay constant in λ. By the intermediate value theorem every
//! error value in between is attained; [`dilate_to_error`] locates it with
//! a grid scan plus bisection, verifying the achieved value through the
//! exact metric evaluators.

use crate::error::{CovmurError, Result};
use crate::metrics::{d_p_exact_infty, d_p_exact_two_outcome, PNorm};
use crate::observables::{Observable, Outcome};

/// Intervals of the initial λ grid scan used to bracket the requested
/// error value before bisection.
const GRID_INTERVALS: usize = 32;

/// Iteration cap for the bisection stage.
const MAX_BISECTION_ITERS: usize = 200;

/// Slack for deciding "effect is singular" (∞-norm path) and "effect
/// attains probability one" (finite-p path) from eigenvalues.
const EFFECT_RANK_TOL: f64 = 1e-10;

/// Replace axis `axis` of a product joint by the deterministic outcome
/// `target`: J̃(ω₁…ωₙ) = Σ_{ω∈Ω_axis} J(…ω…) when ω_axis = target, else 0.
///
/// The axis-`axis` margin of the result is the trivial observable
/// concentrated on `target`; every other margin is unchanged (the axis sum
/// is taken before any other margin sum, so the totals per context are
/// identical).
pub fn collapse_joint(joint: &Observable, axis: usize, target: &Outcome) -> Result<Observable> {
    let factors = joint.product_factors()?;
    if axis >= factors.len() {
        return Err(CovmurError::Domain(format!(
            "collapse axis {axis} out of range for {} factors",
            factors.len()
        )));
    }
    if !factors[axis].contains(target) {
        return Err(CovmurError::OutcomeMismatch);
    }
    let outcomes = joint.outcomes().to_vec();
    let effects = outcomes
        .iter()
        .map(|o| {
            let comps = o.components().expect("product set verified");
            if &comps[axis] != target {
                return Ok(crate::linalg::HermitianOperator::zero(joint.dim()));
            }
            // Sum the joint over the collapsed axis at this context.
            let mut acc = crate::linalg::HermitianOperator::zero(joint.dim());
            for label in &factors[axis] {
                let mut sibling = comps.to_vec();
                sibling[axis] = label.clone();
                acc = acc.add(joint.effect_for(&Outcome::tuple(sibling))?);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Observable::new(outcomes, effects)
}

/// A mixing path J_λ = (1−λ)·J + λ·J̃ between a joint and its collapsed
/// version on one axis.
#[derive(Clone, Debug)]
pub struct DilationPath {
    base: Observable,
    collapsed: Observable,
    axis: usize,
}

impl DilationPath {
    /// Build the path collapsing `axis` of `joint` onto `target`.
    pub fn new(joint: Observable, axis: usize, target: &Outcome) -> Result<Self> {
        let collapsed = collapse_joint(&joint, axis, target)?;
        Ok(DilationPath {
            base: joint,
            collapsed,
            axis,
        })
    }

    /// The unmixed joint J.
    pub fn base(&self) -> &Observable {
        &self.base
    }

    /// The fully collapsed joint J̃.
    pub fn collapsed(&self) -> &Observable {
        &self.collapsed
    }

    /// The collapsed axis.
    pub fn axis(&self) -> usize {
        self.axis
    }

    /// The mixed joint J_λ (λ ∈ [0,1]).
    pub fn at(&self, lambda: f64) -> Result<Observable> {
        self.base.mix(&self.collapsed, lambda)
    }
}

/// Result of a dilation search: the mixing parameter, the mixed joint, and
/// the error value it achieves (computed by the exact evaluator on the
/// actual margin of the returned joint).
#[derive(Clone, Debug)]
pub struct DilationOutcome {
    /// Mixing parameter λ ∈ [0,1].
    pub lambda: f64,
    /// The mixed joint J_λ.
    pub joint: Observable,
    /// Exact error d_p(target, margin_axis(J_λ)).
    pub achieved: f64,
}

/// Exact distance evaluator for the norms the dilation search supports:
/// the ∞-norm for any outcome count, finite p for two-outcome targets.
fn exact_distance(target: &Observable, margin: &Observable, p: PNorm) -> Result<f64> {
    match p {
        PNorm::Infinity => Ok(d_p_exact_infty(target, margin)?.value),
        PNorm::Finite(_) => {
            if target.outcome_count() != 2 {
                return Err(CovmurError::Unsupported(format!(
                    "exact finite-p evaluation needs a two-outcome target, got {} outcomes",
                    target.outcome_count()
                )));
            }
            Ok(d_p_exact_two_outcome(target, margin, p)?.value)
        }
    }
}

/// Drive the axis-`axis` error of `joint` against `target` up to the value
/// `v` by mixing with a collapsed joint, locating λ by grid scan plus
/// bisection until the exactly-evaluated error is within `tol` of `v`.
///
/// For p = ∞ the collapse outcome is the first target outcome (in label
/// order) whose effect is singular, and errors up to 1 are reachable. For
/// finite p the collapse outcome is the first label different from the
/// first outcome whose effect attains probability one on some state, and
/// errors up to 2^{1/p} are reachable. Requests outside
/// [current error, cap] are range errors; targets violating the rank
/// preconditions are unsupported.
///
/// Margins of the returned joint on axes other than `axis` equal those of
/// the input joint.
pub fn dilate_to_error(
    target: &Observable,
    joint: &Observable,
    axis: usize,
    v: f64,
    p: PNorm,
    tol: f64,
) -> Result<DilationOutcome> {
    if !(tol > 0.0) {
        return Err(CovmurError::Domain(format!(
            "dilation tolerance must be positive, got {tol}"
        )));
    }
    let factors = joint.product_factors()?;
    if axis >= factors.len() {
        return Err(CovmurError::Domain(format!(
            "dilation axis {axis} out of range for {} factors",
            factors.len()
        )));
    }
    let margin_base = joint.margin(axis)?;
    let current = exact_distance(target, &margin_base, p)?;

    // Pick the collapse outcome per the lemma preconditions.
    let (collapse_at, cap) = match p {
        PNorm::Infinity => {
            let singular = target.outcomes().iter().enumerate().find(|(i, _)| {
                target.effect(*i).min_eigenvalue() <= EFFECT_RANK_TOL
            });
            let Some((_, omega_star)) = singular else {
                return Err(CovmurError::Unsupported(
                    "∞-norm dilation needs a target outcome with a singular effect; \
                     every effect is full rank"
                        .into(),
                ));
            };
            (omega_star.clone(), 1.0)
        }
        PNorm::Finite(_) => {
            let sharp = target.outcomes().iter().enumerate().find(|(i, _)| {
                target.effect(*i).max_eigenvalue() >= 1.0 - EFFECT_RANK_TOL
            });
            let Some((_, omega_star)) = sharp else {
                return Err(CovmurError::Unsupported(
                    "finite-p dilation needs a target outcome whose effect attains \
                     probability one; no effect has an eigenvalue-1 eigenstate"
                        .into(),
                ));
            };
            let Some(omega_tilde) = target
                .outcomes()
                .iter()
                .find(|o| *o != omega_star)
                .cloned()
            else {
                return Err(CovmurError::Unsupported(
                    "finite-p dilation needs at least two outcomes on the collapsed axis"
                        .into(),
                ));
            };
            (omega_tilde, p.two_pow_inv())
        }
    };
    if v < current - tol {
        return Err(CovmurError::Range(format!(
            "requested error {v} lies below the current error {current}"
        )));
    }
    if v > cap + tol {
        return Err(CovmurError::Range(format!(
            "requested error {v} exceeds the reachable cap {cap}"
        )));
    }

    let path = DilationPath::new(joint.clone(), axis, &collapse_at)?;
    // The axis margin is linear in λ, so search on pre-computed margins and
    // only build the full mixed joint once at the end.
    let margin_collapsed = path.collapsed().margin(axis)?;
    let phi = |lambda: f64| -> Result<f64> {
        exact_distance(target, &margin_base.mix(&margin_collapsed, lambda)?, p)
    };

    let lambda = if (v - current).abs() <= tol {
        0.0
    } else if v >= cap - tol {
        1.0
    } else {
        // Bracket v on a uniform grid (correct for any continuous φ by the
        // intermediate value theorem, monotone or not), then bisect.
        let mut bracket = None;
        let mut prev = current;
        for j in 1..=GRID_INTERVALS {
            let lam = j as f64 / GRID_INTERVALS as f64;
            let val = phi(lam)?;
            if (prev - v) * (val - v) <= 0.0 {
                bracket = Some(((j - 1) as f64 / GRID_INTERVALS as f64, lam, prev, val));
                break;
            }
            prev = val;
        }
        let Some((mut lo, mut hi, mut flo, _)) = bracket else {
            return Err(CovmurError::Range(format!(
                "no mixing parameter bracket found for error {v} (reached {prev})"
            )));
        };
        let mut found = None;
        for _ in 0..MAX_BISECTION_ITERS {
            let mid = 0.5 * (lo + hi);
            let val = phi(mid)?;
            if (val - v).abs() <= tol {
                found = Some(mid);
                break;
            }
            if (flo - v) * (val - v) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = val;
            }
        }
        let Some(lam) = found else {
            return Err(CovmurError::Range(format!(
                "bisection did not reach error {v} within {MAX_BISECTION_ITERS} iterations"
            )));
        };
        lam
    };

    let mixed = path.at(lambda)?;
    let achieved = exact_distance(target, &mixed.margin(axis)?, p)?;
    Ok(DilationOutcome {
        lambda,
        joint: mixed,
        achieved,
    })
}
