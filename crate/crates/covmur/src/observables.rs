//! Finite-outcome quantum observables (POVMs): validation, Born-rule
//! statistics, Cartesian joints and their margins, convex mixing, and
//! trivial observables.
//!
//! An [`Observable`] maps each outcome in a finite set Ω to a Hermitian
//! effect on a fixed Hilbert space. Mathematical validity — every effect
//! positive, effects summing to the identity — is *checked* by
//! [`Observable::validate`] rather than enforced at construction, so that
//! defect reports can be produced for arbitrary input data. Construction
//! enforces only structural sanity: distinct outcomes, one square effect per
//! outcome, equal dimensions.
//!
//! Joint observables over product outcome sets Ω = ∏ᵢ Ωᵢ are stored densely,
//! one effect per tuple; [`Observable::margin`] sums out all but one factor.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CovmurError, Result};
use crate::linalg::{identity, max_abs_entry, DensityOperator, HermitianOperator};
use crate::tol;

/// An outcome label: an integer, a string, or a tuple of labels (used for
/// Cartesian product outcome sets).
///
/// Serialises untagged, so JSON outcome lists read naturally:
/// `[1, -1]`, `["heads", "tails"]`, or `[[1,1,1], [1,1,-1], ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    /// Integer label.
    Int(i64),
    /// String label.
    Text(String),
    /// Product label: one component per factor set.
    Tuple(Vec<Outcome>),
}

impl Outcome {
    /// Build a product label from components.
    pub fn tuple(components: impl IntoIterator<Item = Outcome>) -> Self {
        Outcome::Tuple(components.into_iter().collect())
    }

    /// Components of a product label, or `None` for scalar labels.
    pub fn components(&self) -> Option<&[Outcome]> {
        match self {
            Outcome::Tuple(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Int(k) => write!(f, "{k}"),
            Outcome::Text(s) => write!(f, "{s}"),
            Outcome::Tuple(c) => {
                write!(f, "(")?;
                for (i, comp) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{comp}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl From<i64> for Outcome {
    fn from(k: i64) -> Self {
        Outcome::Int(k)
    }
}

impl From<&str> for Outcome {
    fn from(s: &str) -> Self {
        Outcome::Text(s.to_owned())
    }
}

/// Defect report produced by [`Observable::validate`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// Smallest eigenvalue of each effect, in outcome order.
    pub min_eigenvalues: Vec<f64>,
    /// Entrywise norm of Σ_ω E(ω) − I.
    pub normalisation_defect: f64,
    /// Tolerance the report was evaluated against.
    pub tolerance: f64,
}

impl ValidationReport {
    /// Worst positivity defect: max over effects of max(0, −λ_min).
    pub fn positivity_defect(&self) -> f64 {
        self.min_eigenvalues
            .iter()
            .map(|l| (-l).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Whether both the positivity and normalisation defects are within
    /// tolerance.
    pub fn passes(&self) -> bool {
        self.positivity_defect() <= self.tolerance && self.normalisation_defect <= self.tolerance
    }
}

/// A finite-outcome observable: one Hermitian effect per outcome label.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    outcomes: Vec<Outcome>,
    effects: Vec<HermitianOperator>,
    dim: usize,
}

impl Observable {
    /// Structural constructor. Requires a nonempty set of distinct outcomes
    /// and exactly one square effect per outcome, all of the same dimension.
    ///
    /// Deliberately does *not* require positivity or normalisation; use
    /// [`Observable::validate`] to obtain a defect report.
    pub fn new(outcomes: Vec<Outcome>, effects: Vec<HermitianOperator>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(CovmurError::InvalidObservable(
                "outcome set must be nonempty".into(),
            ));
        }
        if outcomes.len() != effects.len() {
            return Err(CovmurError::InvalidObservable(format!(
                "{} outcomes but {} effects",
                outcomes.len(),
                effects.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, o) in outcomes.iter().enumerate() {
            if let Some(j) = seen.insert(o.clone(), i) {
                return Err(CovmurError::InvalidObservable(format!(
                    "outcome {o} appears at positions {j} and {i}"
                )));
            }
        }
        let dim = effects[0].dim();
        for e in &effects {
            if e.dim() != dim {
                return Err(CovmurError::DimensionMismatch {
                    expected: dim,
                    got: e.dim(),
                });
            }
        }
        Ok(Self {
            outcomes,
            effects,
            dim,
        })
    }

    /// The trivial observable: identity effect at `target`, zero elsewhere.
    pub fn trivial(outcomes: Vec<Outcome>, target: &Outcome, dim: usize) -> Result<Self> {
        if !outcomes.contains(target) {
            return Err(CovmurError::OutcomeMismatch);
        }
        let effects = outcomes
            .iter()
            .map(|o| {
                if o == target {
                    HermitianOperator::identity(dim)
                } else {
                    HermitianOperator::zero(dim)
                }
            })
            .collect();
        Self::new(outcomes, effects)
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes |Ω|.
    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    /// Outcome labels in storage order.
    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Effects in outcome order.
    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    /// Effect for the outcome at position `i`.
    pub fn effect(&self, i: usize) -> &HermitianOperator {
        &self.effects[i]
    }

    /// Position of an outcome label, if present.
    pub fn position(&self, outcome: &Outcome) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }

    /// Effect for a given outcome label.
    pub fn effect_for(&self, outcome: &Outcome) -> Result<&HermitianOperator> {
        self.position(outcome)
            .map(|i| &self.effects[i])
            .ok_or(CovmurError::OutcomeMismatch)
    }

    /// Defect report: the smallest eigenvalue of each effect and the
    /// entrywise norm of Σ_ω E(ω) − I, judged against `tolerance`.
    pub fn validate(&self, tolerance: f64) -> ValidationReport {
        let min_eigenvalues = self.effects.iter().map(|e| e.min_eigenvalue()).collect();
        let mut sum = HermitianOperator::zero(self.dim);
        for e in &self.effects {
            sum = sum.add(e);
        }
        let normalisation_defect = max_abs_entry(&(sum.matrix() - identity(self.dim)));
        ValidationReport {
            min_eigenvalues,
            normalisation_defect,
            tolerance,
        }
    }

    /// Born-rule outcome distribution p(ω) = tr(E(ω)ρ).
    ///
    /// Rounding can push a probability slightly negative; values in
    /// [−[`tol::BORN_CLAMP`], 0) are clamped to zero, while anything more
    /// negative signals an invalid effect and is an error.
    pub fn born_distribution(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        if rho.dim() != self.dim {
            return Err(CovmurError::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        self.effects
            .iter()
            .map(|e| {
                let p = e.expectation(rho);
                if p < -tol::BORN_CLAMP {
                    Err(CovmurError::Range(format!(
                        "Born probability {p:.3e} below clamp threshold; effect is not positive"
                    )))
                } else {
                    Ok(p.max(0.0))
                }
            })
            .collect()
    }

    /// Effect-wise convex combination (1−λ)·self + λ·other.
    ///
    /// Requires identical outcome lists (same labels, same order) and equal
    /// dimension; λ must lie in [0, 1].
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.outcomes != other.outcomes {
            return Err(CovmurError::OutcomeMismatch);
        }
        if self.dim != other.dim {
            return Err(CovmurError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(CovmurError::Domain(format!(
                "mixing weight must lie in [0,1], got {lambda}"
            )));
        }
        let effects = self
            .effects
            .iter()
            .zip(&other.effects)
            .map(|(a, b)| a.scale(1.0 - lambda).add(&b.scale(lambda)))
            .collect();
        Self::new(self.outcomes.clone(), effects)
    }

    /// Norm ‖E‖ = Σ_ω ‖E(ω)‖ (sum of spectral norms).
    pub fn norm(&self) -> f64 {
        self.effects.iter().map(|e| e.spectral_norm()).sum()
    }

    /// Factor outcome sets of a Cartesian-product outcome set, in
    /// first-appearance order per axis.
    ///
    /// Fails unless every outcome is a tuple of the same arity and the
    /// outcome list is exactly the full product of the per-axis label sets
    /// (each combination appearing once).
    pub fn product_factors(&self) -> Result<Vec<Vec<Outcome>>> {
        let arity = match &self.outcomes[0] {
            Outcome::Tuple(c) if !c.is_empty() => c.len(),
            _ => {
                return Err(CovmurError::NonProductOutcomeSet);
            }
        };
        let mut factors: Vec<Vec<Outcome>> = vec![Vec::new(); arity];
        for o in &self.outcomes {
            let comps = o.components().ok_or(CovmurError::NonProductOutcomeSet)?;
            if comps.len() != arity {
                return Err(CovmurError::NonProductOutcomeSet);
            }
            for (axis, c) in comps.iter().enumerate() {
                if !factors[axis].contains(c) {
                    factors[axis].push(c.clone());
                }
            }
        }
        let expected: usize = factors.iter().map(|f| f.len()).product();
        if expected != self.outcomes.len() {
            return Err(CovmurError::NonProductOutcomeSet);
        }
        // Distinctness of outcomes (checked at construction) plus the count
        // matching ∏|Ω_i| forces every combination to appear exactly once.
        Ok(factors)
    }

    /// Margin along `axis`: F(ω*) = Σ_{ω : ω_axis = ω*} J(ω), an observable
    /// over the axis factor set.
    pub fn margin(&self, axis: usize) -> Result<Self> {
        let factors = self.product_factors()?;
        if axis >= factors.len() {
            return Err(CovmurError::Domain(format!(
                "margin axis {axis} out of range for {} factors",
                factors.len()
            )));
        }
        let labels = factors[axis].clone();
        let index: HashMap<&Outcome, usize> =
            labels.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let mut effects = vec![HermitianOperator::zero(self.dim); labels.len()];
        for (o, e) in self.outcomes.iter().zip(&self.effects) {
            let comp = &o.components().expect("product set verified")[axis];
            let slot = index[comp];
            effects[slot] = effects[slot].add(e);
        }
        Self::new(labels, effects)
    }
}
