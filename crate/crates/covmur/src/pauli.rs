//! The three-Pauli case study: covariant joint approximations to three
//! mutually unbiased sharp qubit observables, their margin errors, and the
//! exact uncertainty region they trace out.
//!
//! Fix an orthonormal frame (a, b, c) in ℝ³ and take the three sharp target
//! observables along those axes. The symmetry group is ℤ₂³, acting on each
//! outcome set by sign flips and on the qubit by π-rotations about the frame
//! axes — together with the antiunitary universal-NOT composites for the
//! orientation-reversing sign patterns. Covariant joints are parametrised by
//! a single Bloch-type vector j = (j₁, j₂, j₃):
//!
//! ```text
//! J(k,l,m) = (1/8)·(I + (k·j₁·a + l·j₂·b + m·j₃·c)·σ),   k,l,m ∈ {±1},
//! ```
//!
//! positive exactly when ‖j‖ ≤ 1. Its margins are the smeared targets
//! ½(I + k·jᵢ·(axis·σ)) with errors dᵢ = 2^{1/p−1}(1−jᵢ), so the positivity
//! ball becomes a sphere of radius r = 2^{1/p−1} centred at (r, r, r) in
//! error coordinates; the full uncertainty region is the monotone closure of
//! that sphere inside the cube [0, 2^{1/p}]³.

use serde::Serialize;

use crate::error::{CovmurError, Result};
use crate::linalg::{CMat, HermitianOperator, C64};
use crate::metrics::PNorm;
use crate::observables::{Observable, Outcome};
use crate::symmetry::{
    decode_tuple, marginal_action, product_action, CovarianceTriple, FiniteGroup, OutcomeAction,
    SymmetryOp, SymmetryRepresentation,
};
use crate::tol;

/// The joint parameter j = (j₁, j₂, j₃); feasible joints have ‖j‖ ≤ 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    /// Components (j₁, j₂, j₃).
    pub components: [f64; 3],
}

impl BlochVector {
    /// Build from components.
    pub fn new(j1: f64, j2: f64, j3: f64) -> Self {
        Self {
            components: [j1, j2, j3],
        }
    }

    /// Euclidean norm ‖j‖.
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn require_feasible(&self) -> Result<()> {
        let norm = self.norm();
        if norm > 1.0 + tol::REGION_MEMBERSHIP_SLACK {
            return Err(CovmurError::InfeasibleJoint { norm });
        }
        Ok(())
    }
}

/// An orthonormal frame (a, b, c) in ℝ³, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliFrame {
    axes: [[f64; 3]; 3],
}

fn dot3(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

impl PauliFrame {
    /// Validate that a, b, c are unit length and pairwise orthogonal
    /// (within [`tol::ORTHONORMALITY`]).
    pub fn new(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Result<Self> {
        let axes = [a, b, c];
        for (i, u) in axes.iter().enumerate() {
            let defect = (dot3(u, u) - 1.0).abs();
            if defect > tol::ORTHONORMALITY {
                return Err(CovmurError::Domain(format!(
                    "frame axis {i} has unit-norm defect {defect:.3e}"
                )));
            }
            for v in axes.iter().skip(i + 1) {
                let overlap = dot3(u, v).abs();
                if overlap > tol::ORTHONORMALITY {
                    return Err(CovmurError::Domain(format!(
                        "frame axes are not orthogonal, overlap {overlap:.3e}"
                    )));
                }
            }
        }
        Ok(Self { axes })
    }

    /// The standard frame (e_x, e_y, e_z).
    pub fn standard() -> Self {
        Self {
            axes: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// The frame axes (a, b, c).
    pub fn axes(&self) -> &[[f64; 3]; 3] {
        &self.axes
    }

    /// axis·σ for one of the frame axes.
    pub fn axis_sigma(&self, axis: usize) -> HermitianOperator {
        sigma_dot(&self.axes[axis])
    }
}

/// v·σ = v_x σ_x + v_y σ_y + v_z σ_z for a vector in standard coordinates.
pub fn sigma_dot(v: &[f64; 3]) -> HermitianOperator {
    let [x, y, z] = *v;
    HermitianOperator::new(CMat::from_row_slice(2, 2, &[
        C64::new(z, 0.0),
        C64::new(x, -y),
        C64::new(x, y),
        C64::new(-z, 0.0),
    ]))
    .expect("v·σ is Hermitian for real v")
}

/// A point (d_A, d_B, d_C) in error coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UncertaintyPoint3 {
    /// Error on the first target.
    pub d_a: f64,
    /// Error on the second target.
    pub d_b: f64,
    /// Error on the third target.
    pub d_c: f64,
}

impl UncertaintyPoint3 {
    /// Build from coordinates.
    pub fn new(d_a: f64, d_b: f64, d_c: f64) -> Self {
        Self { d_a, d_b, d_c }
    }

    /// Coordinates as an array.
    pub fn coords(&self) -> [f64; 3] {
        [self.d_a, self.d_b, self.d_c]
    }
}

/// The ℤ₂ sign action on the outcome set {+1, −1}.
pub fn sign_action() -> OutcomeAction {
    OutcomeAction::new(
        FiniteGroup::cyclic(2),
        vec![Outcome::Int(1), Outcome::Int(-1)],
        vec![vec![0, 1], vec![1, 0]],
    )
    .expect("sign flip is an action")
}

/// σ_y in the computational basis (the conjugating unitary of the
/// universal-NOT operation A ↦ σ_y Ā σ_y).
fn sigma_y() -> CMat {
    CMat::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, 0.0),
    ])
}

/// The ℤ₂³ representation on the qubit for a given frame.
///
/// Encode the element (h, i, j) ∈ {±1}³ by flip bits (β_a, β_b, β_c),
/// β = 1 meaning a sign flip on that axis. Even-parity patterns are
/// rotations: conjugation by I (no flips) or by axis·σ for the unflipped
/// axis (a π-rotation about it flips the other two signs). Odd-parity
/// patterns reverse orientation and no unitary conjugation realises them;
/// composing the complementary rotation with the antiunitary universal NOT
/// (which flips all three signs) does, giving the operation
/// A ↦ (σ_y W)† Ā (σ_y W) with W the complementary rotation's unitary.
pub fn pauli_representation(frame: &PauliFrame) -> SymmetryRepresentation {
    let group = pauli_group();
    let rotation_unitary = |bits: &[usize]| -> CMat {
        match bits {
            [0, 0, 0] => crate::linalg::identity(2),
            _ => {
                let axis = bits
                    .iter()
                    .position(|&b| b == 0)
                    .expect("even nonzero patterns have exactly one unflipped axis");
                frame.axis_sigma(axis).matrix().clone()
            }
        }
    };
    let ops = (0..8)
        .map(|g| {
            let bits = decode_tuple(g, &[2, 2, 2]);
            let parity: usize = bits.iter().sum::<usize>() % 2;
            if parity == 0 {
                SymmetryOp::unitary(rotation_unitary(&bits))
            } else {
                let complement: Vec<usize> = bits.iter().map(|b| 1 - b).collect();
                SymmetryOp::antiunitary(sigma_y() * rotation_unitary(&complement))
            }
        })
        .collect();
    SymmetryRepresentation::new(group, ops)
        .expect("frame rotations and NOT composites form a representation")
}

/// The symmetry group ℤ₂³ with lexicographic bit encoding.
pub fn pauli_group() -> FiniteGroup {
    crate::symmetry::product_group(&[
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(2),
    ])
    .expect("ℤ₂³")
}

/// The product covariance triple: ℤ₂³ acting on 𝔹³ by independent sign
/// flips and on the qubit by the frame representation.
pub fn product_triple(frame: &PauliFrame) -> CovarianceTriple {
    let action = product_action(&[sign_action(), sign_action(), sign_action()])
        .expect("product of sign actions");
    CovarianceTriple::new(pauli_representation(frame), action)
        .expect("shared group by construction")
}

/// The marginal covariance triple for one axis: ℤ₂³ acting on 𝔹 through
/// the chosen slot.
pub fn marginal_triple(frame: &PauliFrame, axis: usize) -> Result<CovarianceTriple> {
    let action = marginal_action(&[sign_action(), sign_action(), sign_action()], axis)?;
    CovarianceTriple::new(pauli_representation(frame), action)
}

/// The sharp two-outcome target along a frame axis:
/// E(±1) = ½(I ± axis·σ).
pub fn sharp_target(frame: &PauliFrame, axis: usize) -> Observable {
    let s = frame.axis_sigma(axis);
    let plus = HermitianOperator::identity(2).add(&s).scale(0.5);
    let minus = HermitianOperator::identity(2).sub(&s).scale(0.5);
    Observable::new(vec![Outcome::Int(1), Outcome::Int(-1)], vec![plus, minus])
        .expect("sharp effects")
}

/// The covariant joint J(k,l,m) = (1/8)(I + (k j₁ a + l j₂ b + m j₃ c)·σ)
/// over 𝔹³ in lexicographic outcome order ((+1,+1,+1) first).
///
/// Positivity of the effects is equivalent to ‖j‖ ≤ 1; infeasible j is
/// rejected.
pub fn covariant_joint(j: &BlochVector, frame: &PauliFrame) -> Result<Observable> {
    j.require_feasible()?;
    let [j1, j2, j3] = j.components;
    let [a, b, c] = *frame.axes();
    let signs = [1.0, -1.0];
    let sign_label = |s: f64| Outcome::Int(if s > 0.0 { 1 } else { -1 });
    let mut outcomes = Vec::with_capacity(8);
    let mut effects = Vec::with_capacity(8);
    for &k in &signs {
        for &l in &signs {
            for &m in &signs {
                outcomes.push(Outcome::tuple([sign_label(k), sign_label(l), sign_label(m)]));
                let v = [
                    k * j1 * a[0] + l * j2 * b[0] + m * j3 * c[0],
                    k * j1 * a[1] + l * j2 * b[1] + m * j3 * c[1],
                    k * j1 * a[2] + l * j2 * b[2] + m * j3 * c[2],
                ];
                effects.push(
                    HermitianOperator::identity(2)
                        .add(&sigma_dot(&v))
                        .scale(0.125),
                );
            }
        }
    }
    Observable::new(outcomes, effects)
}

/// Margin errors of the covariant joint at parameter j:
/// dᵢ = 2^{1/p−1}·(1 − jᵢ).
pub fn pauli_distances(j: &BlochVector, p: PNorm) -> Result<UncertaintyPoint3> {
    j.require_feasible()?;
    let half_cap = 0.5 * p.two_pow_inv();
    let [j1, j2, j3] = j.components;
    Ok(UncertaintyPoint3::new(
        half_cap * (1.0 - j1),
        half_cap * (1.0 - j2),
        half_cap * (1.0 - j3),
    ))
}

/// Radius r = 2^{1/p−1} of the covariant sphere (half the distance cap).
pub fn sphere_radius(p: PNorm) -> f64 {
    0.5 * p.two_pow_inv()
}

/// Signed sphere residual Σᵢ(dᵢ − r)² − r² with r = 2^{1/p−1}: zero on the
/// covariant boundary, negative inside the ball, positive outside.
pub fn sphere_residual(point: &UncertaintyPoint3, p: PNorm) -> f64 {
    let r = sphere_radius(p);
    point
        .coords()
        .iter()
        .map(|d| (d - r) * (d - r))
        .sum::<f64>()
        - r * r
}

/// Membership in the full uncertainty region: the monotone closure of the
/// covariant ball within the cube [0, 2^{1/p}]³.
///
/// A point is in the closure iff some ball point lies componentwise below
/// it; clamping each coordinate down to the centre value r realises the
/// closest such candidate, so the test is `‖min(d, r) − c‖ ≤ r` plus the
/// cube bounds.
pub fn region_membership(point: &UncertaintyPoint3, p: PNorm) -> bool {
    let r = sphere_radius(p);
    let cap = p.two_pow_inv();
    let slack = tol::REGION_MEMBERSHIP_SLACK;
    if point
        .coords()
        .iter()
        .any(|&d| d < -slack || d > cap + slack)
    {
        return false;
    }
    let clamped_residual: f64 = point
        .coords()
        .iter()
        .map(|&d| {
            let w = d.min(r);
            (w - r) * (w - r)
        })
        .sum::<f64>()
        - r * r;
    clamped_residual <= slack
}

/// One verified boundary point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PauliBoundaryPoint {
    /// Error coordinates of the boundary point.
    #[serde(flatten)]
    pub point: UncertaintyPoint3,
    /// Signed sphere residual at the point (≈ 0 on the boundary).
    pub sphere_residual: f64,
}

/// A swept boundary of the three-Pauli uncertainty region.
#[derive(Clone, Debug, Serialize)]
pub struct PauliBoundary {
    /// The p-norm the sweep was run at.
    pub p: PNorm,
    /// Sphere radius r = 2^{1/p−1}.
    pub radius: f64,
    /// Verified boundary points.
    pub points: Vec<PauliBoundaryPoint>,
}

/// Sweep the covariant sphere with a `samples`×`samples` spherical grid of
/// unit vectors j.
///
/// Every emitted point is verified on the spot: the covariant joint at j is
/// constructed and validated, and the closed-form distances are checked
/// against the exact two-outcome evaluator on the joint's actual margins
/// (within [`tol::METRIC_EXACT`]).
pub fn boundary_sweep(p: PNorm, samples: usize) -> Result<PauliBoundary> {
    if samples < 8 {
        return Err(CovmurError::Domain(format!(
            "boundary sweep needs at least 8 angular samples, got {samples}"
        )));
    }
    let frame = PauliFrame::standard();
    // Landmarks first — the six sphere points tangent to the coordinate
    // planes (|j| along an axis) — then the angular grid.
    let mut directions: Vec<BlochVector> = Vec::with_capacity(6 + samples * samples);
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut c = [0.0; 3];
            c[axis] = sign;
            directions.push(BlochVector::new(c[0], c[1], c[2]));
        }
    }
    for ti in 0..samples {
        // Midpoint rule avoids the degenerate poles.
        let theta = std::f64::consts::PI * (ti as f64 + 0.5) / samples as f64;
        for pi in 0..samples {
            let phi = 2.0 * std::f64::consts::PI * pi as f64 / samples as f64;
            directions.push(BlochVector::new(
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ));
        }
    }
    let mut points = Vec::with_capacity(directions.len());
    for j in directions {
        let joint = covariant_joint(&j, &frame)?;
        let report = joint.validate(tol::DEFAULT_VALIDATE);
        if !report.passes() {
            return Err(CovmurError::InvalidObservable(format!(
                "boundary joint at ({:?}) fails validation: positivity {:.3e}, normalisation {:.3e}",
                j.components,
                report.positivity_defect(),
                report.normalisation_defect
            )));
        }
        let point = pauli_distances(&j, p)?;
        for axis in 0..3 {
            let margin = joint.margin(axis)?;
            let exact =
                crate::metrics::d_p_exact_two_outcome(&sharp_target(&frame, axis), &margin, p)?;
            let formula = point.coords()[axis];
            if (exact.value - formula).abs() > tol::METRIC_EXACT {
                return Err(CovmurError::Range(format!(
                    "margin distance {:.17} disagrees with formula {:.17} on axis {axis}",
                    exact.value, formula
                )));
            }
        }
        points.push(PauliBoundaryPoint {
            point,
            sphere_residual: sphere_residual(&point, p),
        });
    }
    Ok(PauliBoundary {
        p,
        radius: sphere_radius(p),
        points,
    })
}
