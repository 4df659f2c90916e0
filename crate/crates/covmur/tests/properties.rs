//! Property-based tests: structural invariants that must hold for *every*
//! input, exercised on randomised instances. Heavier numerical properties
//! use reduced case counts to keep the suite fast.

use proptest::prelude::*;

use covmur::fourier::{build_fourier_pair, covariant_margins, margin_distances, phase_triple};
use covmur::io::RegionBoundary;
use covmur::metrics::{d_p_exact_infty, d_p_exact_two_outcome, delta_p, PNorm};
use covmur::observables::Outcome;
use covmur::pauli::{
    covariant_joint, pauli_distances, product_triple, region_membership, sharp_target,
    BlochVector, PauliFrame, UncertaintyPoint3,
};
use covmur::symmetry::{decode_tuple, encode_tuple};
use covmur::{sample, tol};

fn pnorm_strategy() -> impl Strategy<Value = PNorm> {
    prop_oneof![
        Just(PNorm::Infinity),
        (1.0f64..8.0).prop_map(|p| PNorm::finite(p).unwrap()),
    ]
}

proptest! {
    /// Margins of any valid joint are valid observables.
    #[test]
    fn margins_of_random_joints_are_valid(
        seed in any::<u64>(),
        rows in 2usize..4,
        cols in 2usize..4,
        dim in 2usize..4,
    ) {
        let mut rng = sample::rng(seed);
        let joint = sample::random_observable(
            &mut rng,
            dim,
            sample::product_integer_outcomes(&[rows, cols]),
        );
        prop_assert!(joint.validate(tol::DEFAULT_VALIDATE).passes());
        for axis in 0..2 {
            let margin = joint.margin(axis).unwrap();
            prop_assert!(margin.validate(tol::DEFAULT_VALIDATE).passes());
            prop_assert_eq!(margin.outcome_count(), if axis == 0 { rows } else { cols });
        }
    }

    /// Born distributions are affine in observable mixtures.
    #[test]
    fn born_rule_is_affine_in_mixtures(seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let mut rng = sample::rng(seed);
        let outcomes = sample::integer_outcomes(3);
        let e = sample::random_observable(&mut rng, 2, outcomes.clone());
        let f = sample::random_observable(&mut rng, 2, outcomes);
        let rho = sample::random_density(&mut rng, 2);
        let mixed = e.mix(&f, lambda).unwrap();
        let (pe, pf, pm) = (
            e.born_distribution(&rho).unwrap(),
            f.born_distribution(&rho).unwrap(),
            mixed.born_distribution(&rho).unwrap(),
        );
        for i in 0..3 {
            prop_assert!((pm[i] - ((1.0 - lambda) * pe[i] + lambda * pf[i])).abs() < 1e-12);
        }
    }

    /// Group averaging is idempotent and never increases the observable
    /// norm.
    #[test]
    fn covariantisation_idempotent_and_contractive(seed in any::<u64>()) {
        let frame = PauliFrame::standard();
        let triple = product_triple(&frame);
        let mut rng = sample::rng(seed);
        let e = sample::random_observable(&mut rng, 2, triple.action().outcomes().to_vec());
        let c1 = triple.covariantise(&e).unwrap();
        let c2 = triple.covariantise(&c1).unwrap();
        for i in 0..c1.outcome_count() {
            prop_assert!(c1.effect(i).entry_distance(c2.effect(i)) < 1e-11);
        }
        prop_assert!(c1.norm() <= e.norm() + tol::NORM_CONTRACTION_SLACK);
        prop_assert!(c1.validate(tol::DEFAULT_VALIDATE).passes());
    }

    /// Averaging commutes with taking margins (the marginal triple acts on
    /// the margin).
    #[test]
    fn covariantisation_commutes_with_margins(seed in any::<u64>(), axis in 0usize..3) {
        let frame = PauliFrame::standard();
        let triple = product_triple(&frame);
        let marginal = covmur::pauli::marginal_triple(&frame, axis).unwrap();
        let mut rng = sample::rng(seed);
        let joint = sample::random_observable(&mut rng, 2, triple.action().outcomes().to_vec());
        let left = triple.covariantise(&joint).unwrap().margin(axis).unwrap();
        let right = marginal.covariantise(&joint.margin(axis).unwrap()).unwrap();
        for i in 0..left.outcome_count() {
            prop_assert!(left.effect(i).entry_distance(right.effect(i)) < 1e-11);
        }
    }

    /// Replacing a joint by its covariant average never increases the
    /// margin error against a covariant target (two-outcome exact
    /// evaluators, every p).
    #[test]
    fn covariantisation_never_increases_error(
        seed in any::<u64>(),
        axis in 0usize..3,
        p in pnorm_strategy(),
    ) {
        let frame = PauliFrame::standard();
        let triple = product_triple(&frame);
        let target = sharp_target(&frame, axis);
        let mut rng = sample::rng(seed);
        let joint = sample::random_observable(&mut rng, 2, triple.action().outcomes().to_vec());
        let before = d_p_exact_two_outcome(&joint.margin(axis).unwrap(), &target, p)
            .unwrap()
            .value;
        let averaged = triple.covariantise(&joint).unwrap();
        let after = d_p_exact_two_outcome(&averaged.margin(axis).unwrap(), &target, p)
            .unwrap()
            .value;
        prop_assert!(after <= before + tol::ERROR_NON_INCREASE_SLACK);
    }

    /// δ_p is a [0, 2^{1/p}]-valued metric-like functional on
    /// distributions.
    #[test]
    fn delta_p_bounds_and_identity(seed in any::<u64>(), n in 2usize..6, p in pnorm_strategy()) {
        let mut rng = sample::rng(seed);
        let mu = sample::random_distribution(&mut rng, n);
        let nu = sample::random_distribution(&mut rng, n);
        let d = delta_p(&mu, &nu, p).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(d <= p.two_pow_inv() + 1e-12);
        prop_assert!(delta_p(&mu, &mu, p).unwrap() < 1e-15);
        let sym = delta_p(&nu, &mu, p).unwrap();
        prop_assert!((d - sym).abs() < 1e-12);
    }

    /// The qubit region membership test is upward closed: worsening every
    /// error coordinate keeps a point inside the region.
    #[test]
    fn region_membership_is_upward_closed(
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
        c in 0.0f64..1.0,
        da in 0.0f64..0.5,
        db in 0.0f64..0.5,
        dc in 0.0f64..0.5,
        p in pnorm_strategy(),
    ) {
        let cap = p.two_pow_inv();
        let point = UncertaintyPoint3::new(a * cap, b * cap, c * cap);
        if region_membership(&point, p) {
            let worse = UncertaintyPoint3::new(
                (a * cap + da).min(cap),
                (b * cap + db).min(cap),
                (c * cap + dc).min(cap),
            );
            prop_assert!(region_membership(&worse, p));
        }
    }

    /// The closed-form Bloch distances match the exact evaluator for every
    /// feasible vector and exponent.
    #[test]
    fn bloch_distances_match_exact_evaluator(
        j1 in -1.0f64..1.0,
        j2 in -1.0f64..1.0,
        j3 in -1.0f64..1.0,
        p in pnorm_strategy(),
    ) {
        let j = BlochVector::new(j1, j2, j3);
        prop_assume!(j.norm() <= 1.0);
        let frame = PauliFrame::standard();
        let joint = covariant_joint(&j, &frame).unwrap();
        let point = pauli_distances(&j, p).unwrap();
        for axis in 0..3 {
            let exact = d_p_exact_two_outcome(
                &joint.margin(axis).unwrap(),
                &sharp_target(&frame, axis),
                p,
            )
            .unwrap();
            prop_assert!((point.coords()[axis] - exact.value).abs() < tol::METRIC_EXACT);
        }
    }

    /// Lexicographic tuple encoding is a bijection.
    #[test]
    fn tuple_codec_is_bijective(orders in proptest::collection::vec(1usize..5, 1..4)) {
        let total: usize = orders.iter().product();
        for index in 0..total {
            let tuple = decode_tuple(index, &orders);
            prop_assert_eq!(tuple.len(), orders.len());
            for (t, o) in tuple.iter().zip(&orders) {
                prop_assert!(t < o);
            }
            prop_assert_eq!(encode_tuple(&tuple, &orders), index);
        }
    }

    /// Region boundary tables survive CSV and JSON round trips exactly.
    #[test]
    fn boundary_tables_round_trip(
        seed in any::<u64>(),
        rows in 0usize..6,
        family_fourier in any::<bool>(),
    ) {
        let mut rng = sample::rng(seed);
        let (family, columns): (&str, Vec<String>) = if family_fourier {
            ("fourier", ["d_a", "d_b", "ellipse_residual", "duality_gap"].map(String::from).to_vec())
        } else {
            ("pauli", ["d_a", "d_b", "d_c", "sphere_residual"].map(String::from).to_vec())
        };
        let points: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..columns.len())
                    .map(|_| rand::Rng::random_range(&mut rng, -1.0e3..1.0e3))
                    .collect()
            })
            .collect();
        let boundary = RegionBoundary {
            schema: 1,
            family: family.into(),
            p: PNorm::Infinity,
            dim: 4,
            seed,
            columns,
            points,
        };
        prop_assert_eq!(&RegionBoundary::from_csv(&boundary.to_csv()).unwrap(), &boundary);
        prop_assert_eq!(&RegionBoundary::from_json(&boundary.to_json()).unwrap(), &boundary);
    }

    /// PNorm display/parse round trip.
    #[test]
    fn pnorm_round_trips_through_strings(p in pnorm_strategy()) {
        let text = p.to_string();
        let back: PNorm = text.parse().unwrap();
        match (p, back) {
            (PNorm::Infinity, PNorm::Infinity) => {}
            (PNorm::Finite(x), PNorm::Finite(y)) => prop_assert!((x - y).abs() < 1e-12),
            _ => prop_assert!(false, "p-norm changed class in round trip"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Cyclic-pair margin distances: closed diagonal forms match the exact
    /// spectral evaluator.
    #[test]
    fn fourier_margin_formulas_match_exact(seed in any::<u64>(), n in 2usize..6) {
        let pair = build_fourier_pair(n).unwrap();
        let mut rng = sample::rng(seed);
        let tau = sample::random_density(&mut rng, n);
        let (d_a, d_b) = margin_distances(&pair, &tau).unwrap();
        let (c, d) = covariant_margins(&pair, &tau).unwrap();
        let ea = d_p_exact_infty(&c, &pair.sharp_a()).unwrap().value;
        let eb = d_p_exact_infty(&d, &pair.sharp_b()).unwrap().value;
        prop_assert!((d_a - ea).abs() < tol::METRIC_EXACT);
        prop_assert!((d_b - eb).abs() < tol::METRIC_EXACT);
    }

    /// Phase-space covariantisation maps any observable into the
    /// translation-covariant family.
    #[test]
    fn fourier_covariantisation_lands_in_covariant_family(seed in any::<u64>()) {
        let pair = build_fourier_pair(3).unwrap();
        let triple = phase_triple(&pair);
        let mut rng = sample::rng(seed);
        let e = sample::random_observable(&mut rng, 3, triple.action().outcomes().to_vec());
        let averaged = triple.covariantise(&e).unwrap();
        let (covariant, defect) = triple.check_covariance(&averaged, tol::REPRESENTATION).unwrap();
        prop_assert!(covariant, "defect {}", defect);
        prop_assert!(averaged.validate(tol::DEFAULT_VALIDATE).passes());
    }

    /// Dilation hits any requested error on the collapse path of a sharp
    /// diagonal joint.
    #[test]
    fn dilation_achieves_requested_values(v in 0.0f64..=1.0) {
        let frame = PauliFrame::standard();
        let joint = covariant_joint(&BlochVector::new(1.0, 0.0, 0.0), &frame).unwrap();
        let target = sharp_target(&frame, 0);
        let outcome = covmur::dilation::dilate_to_error(
            &target,
            &joint,
            0,
            v,
            PNorm::Infinity,
            tol::DILATION_DEFAULT,
        )
        .unwrap();
        prop_assert!((outcome.achieved - v).abs() <= tol::DILATION_DEFAULT);
        for axis in 1..3 {
            let before = joint.margin(axis).unwrap();
            let after = outcome.joint.margin(axis).unwrap();
            for i in 0..before.outcome_count() {
                prop_assert!(
                    before.effect(i).entry_distance(after.effect(i)) <= tol::MARGIN_UNCHANGED
                );
            }
        }
    }

    /// Outcome values survive JSON round trips inside observable
    /// documents.
    #[test]
    fn outcome_json_round_trip(values in proptest::collection::vec(any::<i64>(), 1..5)) {
        let outcomes: Vec<Outcome> = values.iter().map(|&v| Outcome::Int(v)).collect();
        let json = serde_json::to_string(&outcomes).unwrap();
        let back: Vec<Outcome> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, outcomes);
    }
}
