//! Self-verification suite: every module's key invariants re-checked at
//! runtime with fixed seeds, reported as named checks with the tolerance
//! used, the residual measured, and a pass/fail verdict.
//!
//! The fourier strong-duality check accepts an injectable offset on the
//! dual boundary value. Passing a nonzero offset deliberately corrupts the
//! dual optimum, and the check **must** then fail — this exercises the
//! suite's ability to detect errors rather than vacuously pass.

use serde::{Deserialize, Serialize};

use crate::dilation::{collapse_joint, dilate_to_error};
use crate::error::{CovmurError, Result};
use crate::fourier::{
    build_fourier_pair, char_poly_from_eigenvalues, covariant_margins, dual_boundary,
    dual_char_poly_coeffs, dual_z_matrix, margin_distances, primal_witness, shift_operators,
    translation_action,
};
use crate::io::SCHEMA_VERSION;
use crate::linalg::max_abs_entry;
use crate::metrics::{
    check_action_compatibility, check_joint_convexity, d_p_exact_infty, d_p_exact_two_outcome,
    d_p_heuristic, delta_p, PNorm,
};
use crate::observables::Outcome;
use crate::pauli::{
    boundary_sweep, covariant_joint, pauli_distances, product_triple, region_membership,
    sharp_target, sign_action, sphere_radius, BlochVector, PauliFrame, UncertaintyPoint3,
};
use crate::sample;
use crate::tol;

/// All recognised check scopes, in execution order.
pub const SCOPES: &[&str] = &[
    "linalg",
    "observables",
    "symmetry",
    "metrics",
    "pauli",
    "fourier",
    "dilation",
];

/// One named verification check: the tolerance it enforces, the residual
/// it measured, and whether it passed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub tolerance: f64,
    pub residual: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, tolerance: f64, residual: f64, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            tolerance,
            residual,
            passed: residual <= tolerance,
            detail: detail.into(),
        }
    }
}

/// Machine-readable result of a verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: i64,
    pub scope: String,
    /// Offset injected into the dual boundary inside the strong-duality
    /// check (0 in normal operation; nonzero values must make that check
    /// fail).
    pub dual_offset: f64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verification report serialises")
    }
}

/// Run the verification suite for one module scope or for `"all"`.
pub fn run_verification_suite(scope: &str, dual_offset: f64) -> Result<VerificationReport> {
    if scope != "all" && !SCOPES.contains(&scope) {
        return Err(CovmurError::Domain(format!(
            "unknown verification scope {scope:?}; expected all or one of {}",
            SCOPES.join(", ")
        )));
    }
    let mut checks = Vec::new();
    let want = |s: &str| scope == "all" || scope == s;
    if want("linalg") {
        checks_linalg(&mut checks)?;
    }
    if want("observables") {
        checks_observables(&mut checks)?;
    }
    if want("symmetry") {
        checks_symmetry(&mut checks)?;
    }
    if want("metrics") {
        checks_metrics(&mut checks)?;
    }
    if want("pauli") {
        checks_pauli(&mut checks)?;
    }
    if want("fourier") {
        checks_fourier(&mut checks, dual_offset)?;
    }
    if want("dilation") {
        checks_dilation(&mut checks)?;
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        scope: scope.to_string(),
        dual_offset,
        passed,
        checks,
    })
}

fn checks_linalg(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut rng = sample::rng(101);

    let mut recon = 0.0_f64;
    let mut spectrum = 0.0_f64;
    for dim in 2..=6 {
        for _ in 0..5 {
            let a = sample::random_hermitian(&mut rng, dim, 1.0);
            let (vals, vecs) = a.eigen_pairs();
            let mut rebuilt = crate::linalg::zeros(dim);
            for (i, &v) in vals.iter().enumerate() {
                let col = vecs.column(i);
                rebuilt += (&col * col.adjoint()).map(|z| z * crate::linalg::cr(v));
            }
            recon = recon.max(max_abs_entry(&(a.matrix() - &rebuilt)) / dim as f64);

            let u = sample::random_unitary(&mut rng, dim);
            let conj = a.conjugate(&u, false)?;
            let mut before = a.eigenvalues();
            let mut after = conj.eigenvalues();
            before.sort_by(f64::total_cmp);
            after.sort_by(f64::total_cmp);
            for (x, y) in before.iter().zip(&after) {
                spectrum = spectrum.max((x - y).abs());
            }
        }
    }
    out.push(CheckOutcome::new(
        "linalg/eigen-reconstruction",
        tol::EIGEN_RECONSTRUCTION_PER_DIM,
        recon,
        "V diag(λ) V† rebuilds random Hermitian matrices (residual per dim)",
    ));
    out.push(CheckOutcome::new(
        "linalg/unitary-conjugation-preserves-spectrum",
        tol::EIGEN_RECONSTRUCTION_PER_DIM,
        spectrum,
        "sorted eigenvalues unchanged under u†·u conjugation",
    ));

    let mut density = 0.0_f64;
    for dim in 2..=5 {
        for _ in 0..5 {
            let rho = sample::random_density(&mut rng, dim);
            density = density
                .max((rho.operator().trace() - 1.0).abs())
                .max((-rho.operator().min_eigenvalue()).max(0.0));
        }
    }
    out.push(CheckOutcome::new(
        "linalg/density-sampler-validity",
        tol::DENSITY_POSITIVITY,
        density,
        "sampled density operators have unit trace and nonnegative spectrum",
    ));
    Ok(())
}

fn checks_observables(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut rng = sample::rng(202);

    let mut margin_defect = 0.0_f64;
    for _ in 0..5 {
        let outcomes = sample::product_integer_outcomes(&[2, 3]);
        let joint = sample::random_observable(&mut rng, 3, outcomes);
        for axis in 0..2 {
            let m = joint.margin(axis)?;
            let report = m.validate(tol::DEFAULT_VALIDATE);
            margin_defect = margin_defect
                .max(report.positivity_defect())
                .max(report.normalisation_defect);
        }
    }
    out.push(CheckOutcome::new(
        "observables/margins-are-valid",
        tol::DEFAULT_VALIDATE,
        margin_defect,
        "margins of random 2×3 joints pass effect validation",
    ));

    let mut linearity = 0.0_f64;
    for _ in 0..5 {
        let outcomes = sample::integer_outcomes(3);
        let e = sample::random_observable(&mut rng, 2, outcomes.clone());
        let f = sample::random_observable(&mut rng, 2, outcomes);
        let rho = sample::random_density(&mut rng, 2);
        let lambda: f64 = rand::Rng::random(&mut rng);
        let mixed = e.mix(&f, lambda)?;
        let pe = e.born_distribution(&rho)?;
        let pf = f.born_distribution(&rho)?;
        let pm = mixed.born_distribution(&rho)?;
        for i in 0..pm.len() {
            linearity = linearity.max((pm[i] - ((1.0 - lambda) * pe[i] + lambda * pf[i])).abs());
        }
    }
    out.push(CheckOutcome::new(
        "observables/mixing-linear-in-born-rule",
        tol::BORN_CLAMP,
        linearity,
        "Born distribution of a λ-mixture is the λ-mixture of distributions",
    ));
    Ok(())
}

fn checks_symmetry(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut rng = sample::rng(303);
    let frame = PauliFrame::standard();
    let triple = product_triple(&frame);

    let mut projection = 0.0_f64;
    let mut covariance_defect = 0.0_f64;
    for _ in 0..3 {
        let outcomes = triple.action().outcomes().to_vec();
        let e = sample::random_observable(&mut rng, 2, outcomes);
        let c1 = triple.covariantise(&e)?;
        let c2 = triple.covariantise(&c1)?;
        for i in 0..c1.outcome_count() {
            projection = projection.max(c1.effect(i).entry_distance(c2.effect(i)));
        }
        let (_, defect) = triple.check_covariance(&c1, tol::REPRESENTATION)?;
        covariance_defect = covariance_defect.max(defect);
    }
    out.push(CheckOutcome::new(
        "symmetry/covariantisation-is-idempotent",
        tol::PROJECTION,
        projection,
        "applying the averaging map twice equals applying it once",
    ));
    out.push(CheckOutcome::new(
        "symmetry/covariantised-observables-are-covariant",
        tol::REPRESENTATION,
        covariance_defect,
        "averaged observables satisfy the covariance identity exactly",
    ));

    let joint = covariant_joint(&BlochVector::new(0.4, 0.2, -0.5), &frame)?;
    let fixed = triple.covariantise(&joint)?;
    let mut fixed_defect = 0.0_f64;
    for i in 0..joint.outcome_count() {
        fixed_defect = fixed_defect.max(joint.effect(i).entry_distance(fixed.effect(i)));
    }
    out.push(CheckOutcome::new(
        "symmetry/covariant-observables-are-fixed-points",
        tol::FIXED_POINT,
        fixed_defect,
        "already-covariant joints are unchanged by the averaging map",
    ));
    Ok(())
}

fn checks_metrics(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let ps = [
        PNorm::finite(1.0)?,
        PNorm::finite(2.0)?,
        PNorm::Infinity,
    ];

    let mut convexity = 0.0_f64;
    let mut compat = 0.0_f64;
    for (i, &p) in ps.iter().enumerate() {
        let delta = move |mu: &[f64], nu: &[f64]| delta_p(mu, nu, p).expect("equal lengths");
        let report = check_joint_convexity(delta, 4, 200, 404 + i as u64);
        convexity = convexity.max(report.max_excess);
        let report = check_action_compatibility(delta, &sign_action(), 100, 414 + i as u64);
        compat = compat.max(report.max_excess);
        let report =
            check_action_compatibility(delta, &translation_action(5), 100, 424 + i as u64);
        compat = compat.max(report.max_excess);
    }
    out.push(CheckOutcome::new(
        "metrics/delta-p-jointly-convex",
        tol::JOINT_CONVEXITY_SLACK,
        convexity,
        "δ_p((1−λ)μ₁+λμ₂, (1−λ)ν₁+λν₂) ≤ (1−λ)δ_p(μ₁,ν₁)+λδ_p(μ₂,ν₂)",
    ));
    out.push(CheckOutcome::new(
        "metrics/delta-p-permutation-invariant",
        tol::ACTION_COMPAT,
        compat,
        "relabelling outcomes by a group action leaves δ_p unchanged",
    ));

    let mut rng = sample::rng(404);
    let mut closed_form = 0.0_f64;
    let mut ascent = 0.0_f64;
    for _ in 0..4 {
        let outcomes = sample::integer_outcomes(2);
        let e = sample::random_observable(&mut rng, 2, outcomes.clone());
        let f = sample::random_observable(&mut rng, 2, outcomes);
        let two = d_p_exact_two_outcome(&e, &f, PNorm::Infinity)?;
        let sup = d_p_exact_infty(&e, &f)?;
        closed_form = closed_form.max((two.value - sup.value).abs());
        let heur = d_p_heuristic(&e, &f, PNorm::Infinity, 6, 120, 4040)?;
        ascent = ascent.max(heur.value - sup.value).max(0.0);
    }
    out.push(CheckOutcome::new(
        "metrics/two-outcome-closed-form-matches-sup",
        tol::METRIC_EXACT,
        closed_form,
        "2^{1/p}‖Δ‖ agrees with the eigenvalue-sum evaluator at p=∞",
    ));
    out.push(CheckOutcome::new(
        "metrics/heuristic-never-exceeds-exact",
        tol::HEURISTIC_ASCENT,
        ascent,
        "projected gradient ascent stays a lower bound for the true distance",
    ));
    Ok(())
}

fn checks_pauli(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let frame = PauliFrame::standard();
    let grid = [-0.9_f64, -0.3, 0.2, 0.55];

    let mut formula = 0.0_f64;
    for p in [PNorm::finite(1.0)?, PNorm::finite(2.0)?, PNorm::Infinity] {
        for &j1 in &grid {
            for &j2 in &grid {
                for &j3 in &grid {
                    let j = BlochVector::new(j1, j2, j3);
                    if j.norm() > 1.0 {
                        continue;
                    }
                    let joint = covariant_joint(&j, &frame)?;
                    let point = pauli_distances(&j, p)?;
                    for axis in 0..3 {
                        let margin = joint.margin(axis)?;
                        let target = sharp_target(&frame, axis);
                        let exact = d_p_exact_two_outcome(&margin, &target, p)?;
                        formula = formula.max((point.coords()[axis] - exact.value).abs());
                    }
                }
            }
        }
    }
    out.push(CheckOutcome::new(
        "pauli/margin-error-closed-form",
        tol::METRIC_EXACT,
        formula,
        "d_i = 2^{1/p−1}(1−j_i) matches the exact evaluator on a Bloch grid",
    ));

    let mut tangency = 0.0_f64;
    let mut membership_errors = 0usize;
    for p in [PNorm::finite(1.0)?, PNorm::finite(2.0)?, PNorm::Infinity] {
        let sweep = boundary_sweep(p, 16)?;
        let r = sphere_radius(p);
        for pt in &sweep.points {
            tangency = tangency.max(pt.sphere_residual.abs());
            let [a, b, c] = pt.point.coords();
            // Push slightly inward along the diagonal toward the sphere
            // centre (r, r, r): must stay inside the region.
            let inward = UncertaintyPoint3::new(
                a + (r - a) * 1e-6,
                b + (r - b) * 1e-6,
                c + (r - c) * 1e-6,
            );
            if !region_membership(&inward, p) {
                membership_errors += 1;
            }
            // Push outward: must leave the region. Only meaningful on the
            // lower octant (all coordinates ≤ r), where the sphere is the
            // true boundary of the monotone closure; elsewhere the swept
            // covariant point is interior to the closure.
            if [a, b, c].iter().all(|&d| d <= r + 1e-9) {
                let outward = UncertaintyPoint3::new(
                    a - (r - a) * 1e-4,
                    b - (r - b) * 1e-4,
                    c - (r - c) * 1e-4,
                );
                if region_membership(&outward, p) {
                    membership_errors += 1;
                }
            }
        }
    }
    out.push(CheckOutcome::new(
        "pauli/boundary-on-sphere",
        tol::TANGENCY,
        tangency,
        "swept boundary points satisfy the sphere equation",
    ));
    out.push(CheckOutcome::new(
        "pauli/membership-separates-boundary",
        0.0,
        membership_errors as f64,
        "points nudged inside/outside the boundary classify correctly",
    ));
    Ok(())
}

fn checks_fourier(out: &mut Vec<CheckOutcome>, dual_offset: f64) -> Result<()> {
    let mut weyl = 0.0_f64;
    for n in 2..=7 {
        let pair = build_fourier_pair(n)?;
        let ops = shift_operators(&pair);
        weyl = weyl.max(ops.weyl_defect()).max(ops.basis_shift_defect(&pair));
    }
    out.push(CheckOutcome::new(
        "fourier/weyl-commutation-relations",
        tol::COMMUTATION_RELATION,
        weyl,
        "U_k V_q = e^{2πikq/n} V_q U_k and the shift actions on both bases",
    ));

    let mut duality = 0.0_f64;
    let mut ellipse = 0.0_f64;
    for n in [2usize, 3, 5, 6] {
        let hi = 1.0 - 1.0 / n as f64;
        for i in 0..21 {
            let d_a = hi * i as f64 / 20.0;
            let d_b = dual_boundary(n, d_a)? + dual_offset;
            let dual_value = n as f64 * (1.0 - d_b);
            let witness = primal_witness(n, d_a)?;
            duality = duality.max((witness.p_value - dual_value).abs());
            ellipse = ellipse.max(crate::fourier::ellipse_residual(n, d_a, d_b).abs());
        }
    }
    out.push(CheckOutcome::new(
        "fourier/strong-duality",
        tol::STRONG_DUALITY,
        duality,
        "analytic primal witness value equals the dual optimum on a grid",
    ));
    out.push(CheckOutcome::new(
        "fourier/boundary-on-ellipse",
        tol::ELLIPSE_RESIDUAL,
        ellipse,
        "boundary points satisfy the quadratic boundary-curve equation",
    ));

    let mut rng = sample::rng(505);
    let mut margins = 0.0_f64;
    for n in 2..=5 {
        let pair = build_fourier_pair(n)?;
        for _ in 0..3 {
            let tau = sample::random_density(&mut rng, n);
            let (d_a, d_b) = margin_distances(&pair, &tau)?;
            let (c, d) = covariant_margins(&pair, &tau)?;
            let ea = d_p_exact_infty(&c, &pair.sharp_a())?;
            let eb = d_p_exact_infty(&d, &pair.sharp_b())?;
            margins = margins.max((d_a - ea.value).abs()).max((d_b - eb.value).abs());
        }
    }
    out.push(CheckOutcome::new(
        "fourier/margin-error-closed-form",
        tol::METRIC_EXACT,
        margins,
        "1−⟨0|τ|0⟩ and 1−⟨f₀|τ|f₀⟩ match the exact evaluator",
    ));

    let mut char_poly = 0.0_f64;
    for n in 2..=6 {
        for _ in 0..3 {
            let y0: f64 = rand::Rng::random_range(&mut rng, -3.0..3.0);
            let y1: f64 = rand::Rng::random_range(&mut rng, -3.0..(n as f64 + 3.0));
            let closed = dual_char_poly_coeffs(n, y0, y1);
            let numeric = char_poly_from_eigenvalues(&dual_z_matrix(n, y0, y1).eigenvalues());
            let scale = closed.iter().map(|c| c.abs()).fold(1.0, f64::max);
            for (a, b) in closed.iter().zip(&numeric) {
                char_poly = char_poly.max((a - b).abs() / scale);
            }
        }
    }
    out.push(CheckOutcome::new(
        "fourier/dual-characteristic-polynomial",
        tol::CHAR_POLY_REL,
        char_poly,
        "factored coefficients match those rebuilt from eigenvalues",
    ));
    Ok(())
}

fn checks_dilation(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let frame = PauliFrame::standard();
    let joint = covariant_joint(&BlochVector::new(1.0, 0.0, 0.0), &frame)?;
    let target = sharp_target(&frame, 0);
    let v = 0.7;
    let outcome = dilate_to_error(&target, &joint, 0, v, PNorm::Infinity, tol::DILATION_DEFAULT)?;
    out.push(CheckOutcome::new(
        "dilation/interior-value-reached",
        tol::DILATION_DEFAULT,
        (outcome.achieved - v).abs(),
        "bisection hits a requested interior error value on the mixing path",
    ));

    let mut unchanged = 0.0_f64;
    for axis in 1..3 {
        let before = joint.margin(axis)?;
        let after = outcome.joint.margin(axis)?;
        for i in 0..before.outcome_count() {
            unchanged = unchanged.max(before.effect(i).entry_distance(after.effect(i)));
        }
    }
    out.push(CheckOutcome::new(
        "dilation/other-margins-unchanged",
        tol::MARGIN_UNCHANGED,
        unchanged,
        "dilating one axis leaves the remaining margins exactly fixed",
    ));

    let collapsed = collapse_joint(&joint, 0, &Outcome::Int(1))?;
    let margin = collapsed.margin(0)?;
    let d = d_p_exact_infty(&margin, &target)?;
    out.push(CheckOutcome::new(
        "dilation/full-collapse-reaches-cap",
        tol::METRIC_EXACT,
        (d.value - 1.0).abs(),
        "the fully collapsed joint sits at the p=∞ error cap of 1",
    ));
    Ok(())
}
