//! Centralised numerical tolerances with rationale.
//!
//! Every threshold used by validation predicates, region sweeps, and the
//! verification suite lives here, so no module carries ad-hoc magic numbers.
//! Three regimes cover everything in this crate:
//!
//! | Regime | Basis | Typical value |
//! |--------|-------|---------------|
//! | exact algebra | f64 rounding of closed-form expressions | 1e-12 … 1e-14 |
//! | accumulated linear algebra | O(dim) eigendecompositions / group sums | 1e-9 … 1e-11 |
//! | iterative / sampled | bisection, gradient ascent, Monte-Carlo | 1e-6 … 1e-8 |

/// Max entrywise |M - M†| for a matrix accepted as Hermitian.
///
/// Group averages of Hermitian inputs stay Hermitian to machine precision;
/// 1e-12 leaves two orders of headroom over f64 rounding at desk-scale dims.
pub const HERMITICITY: f64 = 1e-12;

/// Effect positivity: smallest eigenvalue allowed to dip below zero.
///
/// Chosen so that double-precision group averages of valid effects never
/// falsely fail, while a genuinely infeasible effect (e.g. a Bloch vector of
/// length 1.0001) is still rejected by four orders of magnitude.
pub const POSITIVITY: f64 = 1e-9;

/// Density operators are built directly (not averaged), so a tighter floor.
pub const DENSITY_POSITIVITY: f64 = 1e-10;

/// |tr ρ - 1| for density operators.
pub const TRACE_ONE: f64 = 1e-12;

/// Max entrywise |Σ_ω E(ω) - I| for a normalised observable.
pub const NORMALISATION: f64 = 1e-10;

/// Max entrywise |U†U - I| for a matrix accepted as unitary.
pub const UNITARITY: f64 = 1e-10;

/// Eigendecomposition reconstruction: ‖M - VΛV†‖ ≤ this · dim.
pub const EIGEN_RECONSTRUCTION_PER_DIM: f64 = 1e-10;

/// Representation axioms (identity and homomorphism) on the Hermitian
/// matrix-unit spanning set.
pub const REPRESENTATION: f64 = 1e-10;

/// Idempotence and linearity of the group-averaging projection.
pub const PROJECTION: f64 = 1e-11;

/// A covariant observable must be a fixed point of averaging to this.
pub const FIXED_POINT: f64 = 1e-12;

/// Norm contraction of the averaging map: ‖𝒞[X]‖ ≤ ‖X‖ + slack.
pub const NORM_CONTRACTION_SLACK: f64 = 1e-12;

/// Commuting square: margin∘average vs average∘margin, entrywise.
pub const COMMUTING_SQUARE: f64 = 1e-11;

/// Error non-increase under covariantisation (exact evaluators both sides).
pub const ERROR_NON_INCREASE_SLACK: f64 = 1e-9;

/// Born probabilities this close below zero are clamped; anything lower is
/// treated as evidence of an invalid effect and reported as an error.
pub const BORN_CLAMP: f64 = 1e-10;

/// Agreement between closed-form distances and first-principles exact
/// metric evaluation (one eigendecomposition per side).
pub const METRIC_EXACT: f64 = 1e-10;

/// Joint-convexity test slack for the distribution metrics.
pub const JOINT_CONVEXITY_SLACK: f64 = 1e-10;

/// Permutation invariance of distribution metrics under outcome actions.
pub const ACTION_COMPAT: f64 = 1e-12;

/// Default convergence tolerance of the pure-state ascent heuristic.
pub const HEURISTIC_ASCENT: f64 = 1e-9;

/// |primal witness value - n(1 - dual boundary)| on the sweep grid.
pub const STRONG_DUALITY: f64 = 1e-10;

/// Sampled primal values may exceed the dual optimum by at most this.
pub const WEAK_DUALITY_SLACK: f64 = 1e-9;

/// Ellipse defining-equation residual for boundary points.
pub const ELLIPSE_RESIDUAL: f64 = 1e-9;

/// Tangency points of the boundary curves are closed-form; near-exact.
pub const TANGENCY: f64 = 1e-12;

/// Slack on the clamped ball test deciding membership in the monotone
/// closure of a covariant sphere.
pub const REGION_MEMBERSHIP_SLACK: f64 = 1e-12;

/// Relative error between numerically expanded characteristic-polynomial
/// coefficients and the factored closed form.
pub const CHAR_POLY_REL: f64 = 1e-8;

/// Shift-operator commutation relation U_k V_q = e^{2πikq/n} V_q U_k.
pub const COMMUTATION_RELATION: f64 = 1e-12;

/// | |⟨g|f_h⟩|² - 1/n | for the Fourier pair of bases.
pub const MUTUAL_UNBIASEDNESS: f64 = 1e-12;

/// Orthonormality defect of a constructed basis.
pub const ORTHONORMALITY: f64 = 1e-12;

/// Covariant margins commute with the opposite shift family to this.
pub const MARGIN_COMMUTATION: f64 = 1e-11;

/// Margins on non-collapsed axes are untouched by dilation, entrywise.
pub const MARGIN_UNCHANGED: f64 = 1e-14;

/// Default bisection tolerance when dilating to a requested error value.
pub const DILATION_DEFAULT: f64 = 1e-8;

/// Default validation tolerance used by the CLI for positivity and
/// normalisation when the caller does not override it.
pub const DEFAULT_VALIDATE: f64 = 1e-9;
