//! Finite symmetry machinery: groups as Cayley tables, outcome actions,
//! representations by (anti)unitary conjugation, covariance triples, and the
//! covariantisation (invariant-mean) map together with its product and
//! marginal structure.
//!
//! A covariance triple (G, R, f) couples a finite group G to a Hilbert space
//! (through a representation R by symmetry operations, each acting by
//! unitary or antiunitary conjugation) and to an outcome set (through an
//! action f by permutations). An observable E is covariant when
//! `R_g[E(ω)] = E(f_g(ω))` for all g and ω, and any observable is projected
//! onto the covariant subspace by the invariant mean
//!
//! ```text
//! 𝒞[E](ω) = (1/|G|) Σ_g R_{g⁻¹}[E(f_g(ω))].
//! ```
//!
//! The mean is linear, idempotent, norm-contractive, and maps observables to
//! observables; these facts are exercised by the property suite rather than
//! assumed. For product outcome sets there is a product action π of the
//! direct product group alongside marginal actions μ^i, and taking margins
//! commutes with covariantisation accordingly.
//!
//! Groups are stored as explicit Cayley tables. This caps practical order
//! (the associativity check is cubic and runs for orders ≤ 64) but keeps
//! every axiom machine-checked — there is no presentation or generator
//! machinery to trust.

use crate::error::{CovmurError, Result};
use crate::linalg::{CMat, HermitianOperator};
use crate::observables::{Observable, Outcome};
use crate::tol;

/// Largest group order for which the cubic associativity sweep runs.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

/// A finite group presented as a Cayley table over element indices
/// `0..order`, with precomputed identity and inverse lookups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a Cayley table and derive the identity and inverse tables.
    ///
    /// Checks, in order: square shape with in-range entries; rows and
    /// columns are permutations (Latin square); a two-sided identity
    /// exists; associativity on all triples (orders ≤
    /// [`ASSOCIATIVITY_CHECK_LIMIT`]); and two-sided inverses.
    pub fn from_cayley(cayley: Vec<Vec<usize>>) -> Result<Self> {
        let order = cayley.len();
        if order == 0 {
            return Err(CovmurError::InvalidGroup("empty Cayley table".into()));
        }
        for row in &cayley {
            if row.len() != order {
                return Err(CovmurError::InvalidGroup(format!(
                    "Cayley table is not square: row of length {} in table of order {order}",
                    row.len()
                )));
            }
            if row.iter().any(|&x| x >= order) {
                return Err(CovmurError::InvalidGroup(
                    "Cayley entry out of range".into(),
                ));
            }
        }
        // Latin square: each row and each column is a permutation.
        for i in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for j in 0..order {
                if std::mem::replace(&mut row_seen[cayley[i][j]], true) {
                    return Err(CovmurError::InvalidGroup(format!(
                        "row {i} repeats element {}",
                        cayley[i][j]
                    )));
                }
                if std::mem::replace(&mut col_seen[cayley[j][i]], true) {
                    return Err(CovmurError::InvalidGroup(format!(
                        "column {i} repeats element {}",
                        cayley[j][i]
                    )));
                }
            }
        }
        // Two-sided identity.
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| CovmurError::InvalidGroup("no two-sided identity".into()))?;
        // Associativity, cubic sweep at desk scale.
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                            return Err(CovmurError::InvalidGroup(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        // Two-sided inverses (forced by the axioms above; recorded anyway).
        let mut inverses = vec![0; order];
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| cayley[g][h] == identity)
                .expect("Latin square rows are onto");
            if cayley[inv][g] != identity {
                return Err(CovmurError::InvalidGroup(format!(
                    "element {g} has no two-sided inverse"
                )));
            }
            inverses[g] = inv;
        }
        Ok(Self {
            order,
            cayley,
            identity,
            inverses,
        })
    }

    /// The cyclic group ℤ_n under addition mod n.
    pub fn cyclic(n: usize) -> Self {
        let cayley = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::from_cayley(cayley).expect("cyclic tables satisfy the group axioms")
    }

    /// Number of elements |G|.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of the identity element.
    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Group product g·h.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    /// Inverse g⁻¹.
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// The Cayley table.
    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }
}

/// Mixed-radix encoding of a tuple (g₁, …, gₙ) with radices `orders`,
/// lexicographic: the first component is most significant.
pub fn encode_tuple(components: &[usize], orders: &[usize]) -> usize {
    components
        .iter()
        .zip(orders)
        .fold(0, |acc, (&c, &n)| acc * n + c)
}

/// Inverse of [`encode_tuple`].
pub fn decode_tuple(mut index: usize, orders: &[usize]) -> Vec<usize> {
    let mut out = vec![0; orders.len()];
    for (slot, &n) in out.iter_mut().zip(orders).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// Direct product ∏ᵢ Gᵢ with lexicographic element encoding.
pub fn product_group(groups: &[FiniteGroup]) -> Result<FiniteGroup> {
    if groups.is_empty() {
        return Err(CovmurError::InvalidGroup(
            "product of an empty list of groups".into(),
        ));
    }
    let orders: Vec<usize> = groups.iter().map(|g| g.order()).collect();
    let order: usize = orders.iter().product();
    let mut cayley = vec![vec![0; order]; order];
    for g in 0..order {
        let gc = decode_tuple(g, &orders);
        for h in 0..order {
            let hc = decode_tuple(h, &orders);
            let prod: Vec<usize> = groups
                .iter()
                .enumerate()
                .map(|(i, grp)| grp.mul(gc[i], hc[i]))
                .collect();
            cayley[g][h] = encode_tuple(&prod, &orders);
        }
    }
    FiniteGroup::from_cayley(cayley)
}

/// An action of a finite group on an ordered outcome set, stored as one
/// outcome-position permutation per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeAction {
    group: FiniteGroup,
    outcomes: Vec<Outcome>,
    /// perms[g][x] = position of f_g(outcome at position x).
    perms: Vec<Vec<usize>>,
}

impl OutcomeAction {
    /// Validate an action: one permutation per element, the identity element
    /// acting trivially, and `f_{gh} = f_g ∘ f_h` on every pair.
    pub fn new(group: FiniteGroup, outcomes: Vec<Outcome>, perms: Vec<Vec<usize>>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(CovmurError::InvalidAction("empty outcome set".into()));
        }
        if perms.len() != group.order() {
            return Err(CovmurError::InvalidAction(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let n = outcomes.len();
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(CovmurError::InvalidAction(format!(
                    "permutation {g} has length {} on {n} outcomes",
                    p.len()
                )));
            }
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(CovmurError::InvalidAction(format!(
                        "element {g} does not act by a permutation"
                    )));
                }
            }
        }
        let e = group.identity();
        if perms[e].iter().enumerate().any(|(x, &fx)| fx != x) {
            return Err(CovmurError::InvalidAction(
                "identity element must act trivially".into(),
            ));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for x in 0..n {
                    if perms[gh][x] != perms[g][perms[h][x]] {
                        return Err(CovmurError::InvalidAction(format!(
                            "composition fails: f_({g}·{h}) ≠ f_{g} ∘ f_{h}"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            group,
            outcomes,
            perms,
        })
    }

    /// The trivial action (every element fixes every outcome).
    pub fn trivial(group: FiniteGroup, outcomes: Vec<Outcome>) -> Result<Self> {
        let id: Vec<usize> = (0..outcomes.len()).collect();
        let perms = vec![id; group.order()];
        Self::new(group, outcomes, perms)
    }

    /// The acting group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// The ordered outcome set Ω.
    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Position of f_g(outcome at position x).
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    /// The permutation for element g.
    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }
}

/// Product action π of the direct product group on the Cartesian product of
/// the factor outcome sets: π_{(g₁,…,gₙ)}(ω₁, …, ωₙ) = (f¹_{g₁}(ω₁), …,
/// fⁿ_{gₙ}(ωₙ)). Product outcomes are ordered lexicographically.
pub fn product_action(actions: &[OutcomeAction]) -> Result<OutcomeAction> {
    if actions.is_empty() {
        return Err(CovmurError::InvalidAction(
            "product of an empty list of actions".into(),
        ));
    }
    let factor_groups: Vec<FiniteGroup> = actions.iter().map(|a| a.group().clone()).collect();
    let group = product_group(&factor_groups)?;
    let group_orders: Vec<usize> = factor_groups.iter().map(|g| g.order()).collect();
    let set_sizes: Vec<usize> = actions.iter().map(|a| a.outcomes().len()).collect();
    let total: usize = set_sizes.iter().product();

    let mut outcomes = Vec::with_capacity(total);
    for x in 0..total {
        let xs = decode_tuple(x, &set_sizes);
        outcomes.push(Outcome::tuple(
            xs.iter()
                .enumerate()
                .map(|(i, &xi)| actions[i].outcomes()[xi].clone()),
        ));
    }

    let mut perms = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let gs = decode_tuple(g, &group_orders);
        let perm = (0..total)
            .map(|x| {
                let xs = decode_tuple(x, &set_sizes);
                let ys: Vec<usize> = xs
                    .iter()
                    .enumerate()
                    .map(|(i, &xi)| actions[i].apply(gs[i], xi))
                    .collect();
                encode_tuple(&ys, &set_sizes)
            })
            .collect();
        perms.push(perm);
    }
    OutcomeAction::new(group, outcomes, perms)
}

/// Marginal action μ^i of the direct product group on the i-th factor set:
/// μ^i_{(g₁,…,gₙ)}(ω) = f^i_{g_i}(ω).
pub fn marginal_action(actions: &[OutcomeAction], axis: usize) -> Result<OutcomeAction> {
    if axis >= actions.len() {
        return Err(CovmurError::Domain(format!(
            "marginal axis {axis} out of range for {} factors",
            actions.len()
        )));
    }
    let factor_groups: Vec<FiniteGroup> = actions.iter().map(|a| a.group().clone()).collect();
    let group = product_group(&factor_groups)?;
    let group_orders: Vec<usize> = factor_groups.iter().map(|g| g.order()).collect();
    let outcomes = actions[axis].outcomes().to_vec();
    let perms = (0..group.order())
        .map(|g| {
            let gs = decode_tuple(g, &group_orders);
            actions[axis].perm(gs[axis]).to_vec()
        })
        .collect();
    OutcomeAction::new(group, outcomes, perms)
}

/// A single symmetry operation acting by conjugation: `A ↦ U†AU`, or
/// `A ↦ U†ĀU` when `antiunitary` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryOp {
    /// The conjugating unitary.
    pub unitary: CMat,
    /// Whether the operation includes entrywise complex conjugation.
    pub antiunitary: bool,
}

impl SymmetryOp {
    /// Unitary conjugation by `u`.
    pub fn unitary(u: CMat) -> Self {
        Self {
            unitary: u,
            antiunitary: false,
        }
    }

    /// Antiunitary conjugation: entrywise conjugation followed by `u`.
    pub fn antiunitary(u: CMat) -> Self {
        Self {
            unitary: u,
            antiunitary: true,
        }
    }

    /// The identity operation at dimension `dim`.
    pub fn identity_op(dim: usize) -> Self {
        Self::unitary(crate::linalg::identity(dim))
    }

    /// Matrix dimension this operation acts on.
    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// Apply the operation to a Hermitian operator.
    pub fn apply(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        a.conjugate(&self.unitary, self.antiunitary)
    }
}

/// The Hermitian matrix-unit spanning set of the real vector space of
/// Hermitian dim×dim matrices: {|i⟩⟨i|} ∪ {|i⟩⟨j|+|j⟩⟨i|} ∪
/// {i(|i⟩⟨j|−|j⟩⟨i|)} for i < j. Symmetry operations are real-linear, so
/// agreement on this set implies agreement everywhere.
pub fn hermitian_spanning_set(dim: usize) -> Vec<HermitianOperator> {
    use crate::linalg::cr;
    use num_complex::Complex;
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let mut m = crate::linalg::zeros(dim);
        m[(i, i)] = cr(1.0);
        out.push(HermitianOperator::new(m).expect("diagonal unit is Hermitian"));
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut re = crate::linalg::zeros(dim);
            re[(i, j)] = cr(1.0);
            re[(j, i)] = cr(1.0);
            out.push(HermitianOperator::new(re).expect("symmetric unit is Hermitian"));
            let mut im = crate::linalg::zeros(dim);
            im[(i, j)] = Complex::new(0.0, 1.0);
            im[(j, i)] = Complex::new(0.0, -1.0);
            out.push(HermitianOperator::new(im).expect("antisymmetric unit is Hermitian"));
        }
    }
    out
}

/// A representation of a finite group by symmetry operations, one
/// conjugation per element.
#[derive(Clone, Debug)]
pub struct SymmetryRepresentation {
    group: FiniteGroup,
    ops: Vec<SymmetryOp>,
    dim: usize,
}

impl SymmetryRepresentation {
    /// Validate a representation: every matrix unitary (within
    /// [`tol::UNITARITY`]); the identity element acting as the identity map;
    /// and the homomorphism law `R_{gh}[B] = R_g[R_h[B]]` on the Hermitian
    /// spanning set, to [`tol::REPRESENTATION`].
    ///
    /// Conjugation ignores global phases, so the law is checked through the
    /// *action* on a spanning set rather than by comparing matrices.
    pub fn new(group: FiniteGroup, ops: Vec<SymmetryOp>) -> Result<Self> {
        if ops.len() != group.order() {
            return Err(CovmurError::InvalidRepresentation(format!(
                "{} operations for a group of order {}",
                ops.len(),
                group.order()
            )));
        }
        let dim = ops[0].dim();
        for (g, op) in ops.iter().enumerate() {
            if op.dim() != dim || op.unitary.ncols() != dim {
                return Err(CovmurError::DimensionMismatch {
                    expected: dim,
                    got: op.dim(),
                });
            }
            let defect = crate::linalg::unitarity_defect(&op.unitary);
            if !(defect <= tol::UNITARITY) {
                return Err(CovmurError::InvalidRepresentation(format!(
                    "element {g}: unitarity defect {defect:.3e}"
                )));
            }
        }

        let basis = hermitian_spanning_set(dim);
        // transformed[h][b] = R_h[B_b], computed once and reused below.
        let transformed: Vec<Vec<HermitianOperator>> = ops
            .iter()
            .map(|op| basis.iter().map(|b| op.apply(b).expect("unitarity checked")).collect())
            .collect();

        let e = group.identity();
        for (b, rb) in basis.iter().zip(&transformed[e]) {
            let defect = b.entry_distance(rb);
            if defect > tol::REPRESENTATION {
                return Err(CovmurError::InvalidRepresentation(format!(
                    "identity element acts nontrivially, defect {defect:.3e}"
                )));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for (b, rhb) in transformed[h].iter().enumerate() {
                    let lhs = ops[g].apply(rhb).expect("unitarity checked");
                    let defect = lhs.entry_distance(&transformed[gh][b]);
                    if defect > tol::REPRESENTATION {
                        return Err(CovmurError::InvalidRepresentation(format!(
                            "homomorphism fails at ({g},{h}), defect {defect:.3e}"
                        )));
                    }
                }
            }
        }
        Ok(Self { group, ops, dim })
    }

    /// The trivial representation (every element acting as the identity).
    pub fn trivial(group: FiniteGroup, dim: usize) -> Self {
        let order = group.order();
        Self::new(group, vec![SymmetryOp::identity_op(dim); order])
            .expect("trivial representation satisfies the axioms")
    }

    /// The represented group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The symmetry operation for element g.
    pub fn op(&self, g: usize) -> &SymmetryOp {
        &self.ops[g]
    }

    /// Apply R_g to a Hermitian operator.
    pub fn apply(&self, g: usize, a: &HermitianOperator) -> HermitianOperator {
        self.ops[g].apply(a).expect("unitarity checked at construction")
    }
}

/// A covariance triple (G, R, f): one group acting on a Hilbert space by a
/// representation and on an outcome set by permutations.
#[derive(Clone, Debug)]
pub struct CovarianceTriple {
    representation: SymmetryRepresentation,
    action: OutcomeAction,
}

impl CovarianceTriple {
    /// Couple a representation and an action. The two must be actions of
    /// the same group (equal Cayley tables).
    pub fn new(representation: SymmetryRepresentation, action: OutcomeAction) -> Result<Self> {
        if representation.group() != action.group() {
            return Err(CovmurError::InvalidGroup(
                "representation and action belong to different groups".into(),
            ));
        }
        Ok(Self {
            representation,
            action,
        })
    }

    /// The shared group.
    pub fn group(&self) -> &FiniteGroup {
        self.representation.group()
    }

    /// The representation component.
    pub fn representation(&self) -> &SymmetryRepresentation {
        &self.representation
    }

    /// The action component.
    pub fn action(&self) -> &OutcomeAction {
        &self.action
    }

    /// Hilbert-space dimension of the representation.
    pub fn dim(&self) -> usize {
        self.representation.dim()
    }

    fn check_compatible(&self, obs: &Observable) -> Result<()> {
        if obs.dim() != self.dim() {
            return Err(CovmurError::DimensionMismatch {
                expected: self.dim(),
                got: obs.dim(),
            });
        }
        if obs.outcomes() != self.action.outcomes() {
            return Err(CovmurError::OutcomeMismatch);
        }
        Ok(())
    }

    /// Covariance defect of an observable: max over (g, ω) of
    /// ‖R_g[E(ω)] − E(f_g(ω))‖ in operator norm. Returns the pass verdict
    /// at `tolerance` together with the defect itself.
    pub fn check_covariance(&self, obs: &Observable, tolerance: f64) -> Result<(bool, f64)> {
        self.check_compatible(obs)?;
        let g_count = self.group().order();
        let mut worst = 0.0_f64;
        for g in 0..g_count {
            for x in 0..obs.outcome_count() {
                let lhs = self.representation.apply(g, obs.effect(x));
                let rhs = obs.effect(self.action.apply(g, x));
                worst = worst.max(lhs.sub(rhs).spectral_norm());
            }
        }
        Ok((worst <= tolerance, worst))
    }

    /// Covariantise an arbitrary Hermitian-valued map on the outcome set
    /// (one operator per outcome, aligned with the action's outcome order):
    ///
    /// ```text
    /// 𝒞[X](ω) = (1/|G|) Σ_g R_{g⁻¹}[X(f_g(ω))].
    /// ```
    ///
    /// No positivity or normalisation is required of the input; the map is
    /// the linear projection onto the covariant subspace.
    pub fn covariantise_map(&self, effects: &[HermitianOperator]) -> Result<Vec<HermitianOperator>> {
        let n = self.action.outcomes().len();
        if effects.len() != n {
            return Err(CovmurError::OutcomeMismatch);
        }
        for e in effects {
            if e.dim() != self.dim() {
                return Err(CovmurError::DimensionMismatch {
                    expected: self.dim(),
                    got: e.dim(),
                });
            }
        }
        let group = self.group();
        let weight = 1.0 / group.order() as f64;
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let mut acc = HermitianOperator::zero(self.dim());
            for g in 0..group.order() {
                let moved = &effects[self.action.apply(g, x)];
                acc = acc.add(&self.representation.apply(group.inv(g), moved));
            }
            out.push(acc.scale(weight));
        }
        Ok(out)
    }

    /// Covariantise an observable. The output has the same outcome set, is
    /// again a valid observable, and is covariant for this triple; covariant
    /// inputs are fixed points.
    pub fn covariantise(&self, obs: &Observable) -> Result<Observable> {
        self.check_compatible(obs)?;
        let effects = self.covariantise_map(obs.effects())?;
        Observable::new(obs.outcomes().to_vec(), effects)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, identity, DensityOperator};
    use num_complex::Complex;

    fn z2() -> FiniteGroup {
        FiniteGroup::cyclic(2)
    }

    fn sharp_basis(dim: usize) -> Observable {
        let effects = (0..dim)
            .map(|i| {
                let mut m = crate::linalg::zeros(dim);
                m[(i, i)] = cr(1.0);
                HermitianOperator::new(m).unwrap()
            })
            .collect();
        Observable::new((0..dim as i64).map(Outcome::Int).collect(), effects).unwrap()
    }

    fn sigma_z_mat() -> CMat {
        CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
    }

    /// ℤ₂ triple on ℂ²: nontrivial element conjugates by σ_z and swaps the
    /// two outcomes.
    fn z2_swap_triple() -> CovarianceTriple {
        let rep = SymmetryRepresentation::new(
            z2(),
            vec![SymmetryOp::identity_op(2), SymmetryOp::unitary(sigma_z_mat())],
        )
        .unwrap();
        let action = OutcomeAction::new(
            z2(),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        CovarianceTriple::new(rep, action).unwrap()
    }

    #[test]
    fn cyclic_group_sanity() {
        let g = FiniteGroup::cyclic(5);
        assert_eq!(g.order(), 5);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.mul(3, 4), 2);
        assert_eq!(g.inv(2), 3);
    }

    #[test]
    fn product_group_elementary_abelian() {
        let g = product_group(&[z2(), z2(), z2()]).unwrap();
        assert_eq!(g.order(), 8);
        // Elementary Abelian: every element is its own inverse.
        for x in 0..8 {
            assert_eq!(g.mul(x, x), g.identity());
            assert_eq!(g.inv(x), x);
        }
        // Commutative.
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(g.mul(x, y), g.mul(y, x));
            }
        }
    }

    #[test]
    fn product_group_z3_z3() {
        let z3 = FiniteGroup::cyclic(3);
        let g = product_group(&[z3.clone(), z3]).unwrap();
        assert_eq!(g.order(), 9);
        // (1,2)·(2,2) = (0,1): indices 1·3+2=5, 2·3+2=8, 0·3+1=1.
        assert_eq!(g.mul(5, 8), 1);
    }

    #[test]
    fn single_factor_product_is_identity_map() {
        let g = product_group(&[FiniteGroup::cyclic(4)]).unwrap();
        assert_eq!(g, FiniteGroup::cyclic(4));
    }

    #[test]
    fn latin_square_violation_rejected() {
        // Row 1 repeats 0.
        let bad = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(
            FiniteGroup::from_cayley(bad),
            Err(CovmurError::InvalidGroup(_))
        ));
    }

    #[test]
    fn nonassociative_loop_rejected() {
        // An order-5 Latin square with two-sided identity that is not a
        // group: (1·1)·2 = 0·2 = 2 but 1·(1·2) = 1·3 = 4.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        assert!(matches!(
            FiniteGroup::from_cayley(loop5),
            Err(CovmurError::InvalidGroup(_))
        ));
    }

    #[test]
    fn tuple_codec_round_trip() {
        let orders = [2, 3, 4];
        for idx in 0..24 {
            let t = decode_tuple(idx, &orders);
            assert_eq!(encode_tuple(&t, &orders), idx);
        }
        assert_eq!(decode_tuple(0, &orders), vec![0, 0, 0]);
        assert_eq!(decode_tuple(23, &orders), vec![1, 2, 3]);
    }

    #[test]
    fn action_axioms_enforced() {
        // Non-permutation.
        assert!(OutcomeAction::new(
            z2(),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![0, 0]],
        )
        .is_err());
        // Identity element must act trivially.
        assert!(OutcomeAction::new(
            z2(),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![1, 0], vec![0, 1]],
        )
        .is_err());
        // Composition: ℤ₄'s generator acting as a transposition fails
        // because f_2 = f_1∘f_1 would have to be trivial.
        assert!(OutcomeAction::new(
            FiniteGroup::cyclic(4),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![1, 0], vec![1, 0], vec![0, 1]],
        )
        .is_err());
        // The same data over ℤ₂×ℤ₂ ordering works as an action of ℤ₄ when
        // f_2 is trivial.
        assert!(OutcomeAction::new(
            FiniteGroup::cyclic(4),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0]],
        )
        .is_ok());
    }

    #[test]
    fn product_action_z2_z2() {
        let swap = OutcomeAction::new(
            z2(),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let pi = product_action(&[swap.clone(), swap]).unwrap();
        assert_eq!(pi.group().order(), 4);
        assert_eq!(pi.outcomes().len(), 4);
        // Element (1,0) = index 2 sends outcome (0,0) = position 0 to
        // (1,0) = position 2.
        assert_eq!(pi.apply(2, 0), 2);
        // Element (1,1) = index 3 sends (0,1) = position 1 to (1,0) = 2.
        assert_eq!(pi.apply(3, 1), 2);
    }

    #[test]
    fn single_factor_product_action_is_original() {
        let swap = OutcomeAction::new(
            z2(),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let pi = product_action(&[swap.clone()]).unwrap();
        assert_eq!(pi.group(), swap.group());
        // Outcomes become 1-tuples, but the permutations coincide.
        for g in 0..2 {
            assert_eq!(pi.perm(g), swap.perm(g));
        }
    }

    #[test]
    fn marginal_action_depends_only_on_own_slot() {
        let swap = OutcomeAction::new(
            z2(),
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let z3 = FiniteGroup::cyclic(3);
        let rot = OutcomeAction::new(
            z3.clone(),
            vec![Outcome::Int(0), Outcome::Int(1), Outcome::Int(2)],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        )
        .unwrap();
        let mu1 = marginal_action(&[swap.clone(), rot.clone()], 1).unwrap();
        assert_eq!(mu1.group().order(), 6);
        for g2 in 0..2 {
            for g3 in 0..3 {
                let g = encode_tuple(&[g2, g3], &[2, 3]);
                assert_eq!(mu1.perm(g), rot.perm(g3), "depends only on slot 1");
            }
        }
        // Identity in the acting slot → identity permutation.
        let mu0 = marginal_action(&[swap, rot], 0).unwrap();
        for g3 in 0..3 {
            let g = encode_tuple(&[0, g3], &[2, 3]);
            assert_eq!(mu0.perm(g), &[0, 1]);
        }
    }

    #[test]
    fn representation_axioms_enforced() {
        // Non-unitary matrix rejected.
        let stretch = CMat::from_row_slice(2, 2, &[cr(2.0), cr(0.0), cr(0.0), cr(1.0)]);
        assert!(SymmetryRepresentation::new(
            z2(),
            vec![SymmetryOp::identity_op(2), SymmetryOp::unitary(stretch)],
        )
        .is_err());
        // Homomorphism violation: ℤ₂'s nontrivial element must square to
        // the identity *as a conjugation*; a π/4 rotation does not.
        let c = cr(std::f64::consts::FRAC_1_SQRT_2);
        let rot8 = CMat::from_row_slice(2, 2, &[c, -c, c, c]);
        assert!(SymmetryRepresentation::new(
            z2(),
            vec![SymmetryOp::identity_op(2), SymmetryOp::unitary(rot8)],
        )
        .is_err());
        // A global phase is invisible to conjugation: e^{iθ}·I represents
        // the nontrivial element just fine.
        let phase = identity(2) * Complex::new(0.6, 0.8);
        assert!(SymmetryRepresentation::new(
            z2(),
            vec![SymmetryOp::identity_op(2), SymmetryOp::unitary(phase)],
        )
        .is_ok());
    }

    #[test]
    fn trivial_triple_fixes_everything() {
        let group = product_group(&[z2(), z2()]).unwrap();
        let obs = sharp_basis(3);
        let rep = SymmetryRepresentation::trivial(group.clone(), 3);
        let action = OutcomeAction::trivial(group, obs.outcomes().to_vec()).unwrap();
        let triple = CovarianceTriple::new(rep, action).unwrap();

        let (ok, defect) = triple.check_covariance(&obs, tol::FIXED_POINT).unwrap();
        assert!(ok);
        assert_eq!(defect, 0.0);

        let cov = triple.covariantise(&obs).unwrap();
        for i in 0..3 {
            assert!(cov.effect(i).entry_distance(obs.effect(i)) < 1e-15);
        }
    }

    #[test]
    fn swap_triple_covariance_verdicts() {
        let triple = z2_swap_triple();
        // σ_x eigenbasis: σ_z conjugation swaps the two projectors, which
        // matches the outcome swap → covariant.
        let s = cr(0.5);
        let xplus = HermitianOperator::new(CMat::from_row_slice(2, 2, &[s, s, s, s])).unwrap();
        let xminus = HermitianOperator::new(CMat::from_row_slice(2, 2, &[s, -s, -s, s])).unwrap();
        let sharp_x = Observable::new(
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![xplus, xminus],
        )
        .unwrap();
        let (ok, defect) = triple.check_covariance(&sharp_x, 1e-12).unwrap();
        assert!(ok, "defect {defect}");

        // Computational basis: σ_z conjugation fixes both projectors but
        // the action swaps them → defect ‖|0⟩⟨0| − |1⟩⟨1|‖ = 1.
        let sharp_z = sharp_basis(2);
        let (ok, defect) = triple.check_covariance(&sharp_z, 1e-12).unwrap();
        assert!(!ok);
        assert!((defect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn covariantise_averages_to_flat() {
        // Covariantising the computational-basis observable under the swap
        // triple yields ½(|0⟩⟨0| + |1⟩⟨1|) = ½I at each outcome.
        let triple = z2_swap_triple();
        let cov = triple.covariantise(&sharp_basis(2)).unwrap();
        let flat = HermitianOperator::identity(2).scale(0.5);
        assert!(cov.effect(0).entry_distance(&flat) < 1e-15);
        assert!(cov.effect(1).entry_distance(&flat) < 1e-15);
        assert!(cov.validate(tol::DEFAULT_VALIDATE).passes());
        let (ok, _) = triple.check_covariance(&cov, tol::FIXED_POINT).unwrap();
        assert!(ok);
    }

    #[test]
    fn covariant_input_is_fixed_point() {
        let triple = z2_swap_triple();
        let s = cr(0.5);
        let xplus = HermitianOperator::new(CMat::from_row_slice(2, 2, &[s, s, s, s])).unwrap();
        let xminus = HermitianOperator::new(CMat::from_row_slice(2, 2, &[s, -s, -s, s])).unwrap();
        let sharp_x = Observable::new(
            vec![Outcome::Int(0), Outcome::Int(1)],
            vec![xplus, xminus],
        )
        .unwrap();
        let cov = triple.covariantise(&sharp_x).unwrap();
        for i in 0..2 {
            assert!(cov.effect(i).entry_distance(sharp_x.effect(i)) < tol::FIXED_POINT);
        }
    }

    #[test]
    fn covariantise_map_zero_and_idempotent() {
        let triple = z2_swap_triple();
        let zero = vec![HermitianOperator::zero(2); 2];
        let out = triple.covariantise_map(&zero).unwrap();
        assert!(out.iter().all(|e| e.spectral_norm() == 0.0));

        let basis = sharp_basis(2);
        let once = triple.covariantise_map(basis.effects()).unwrap();
        let twice = triple.covariantise_map(&once).unwrap();
        for (a, b) in once.iter().zip(&twice) {
            assert!(a.entry_distance(b) < 1e-15);
        }
    }

    #[test]
    fn antiunitary_symmetry_op_round_trip() {
        // Complex conjugation (u = I, antiunitary) is a valid order-2
        // symmetry operation; the resulting ℤ₂ representation passes the
        // axioms.
        let rep = SymmetryRepresentation::new(
            z2(),
            vec![
                SymmetryOp::identity_op(2),
                SymmetryOp::antiunitary(identity(2)),
            ],
        )
        .unwrap();
        let y = HermitianOperator::new(CMat::from_row_slice(2, 2, &[
            cr(0.0),
            Complex::new(0.0, -1.0),
            Complex::new(0.0, 1.0),
            cr(0.0),
        ]))
        .unwrap();
        let flipped = rep.apply(1, &y);
        assert!(flipped.entry_distance(&y.scale(-1.0)) < 1e-15);
    }

    #[test]
    fn born_statistics_preserved_under_covariant_average() {
        // Sanity: covariantisation preserves normalisation, so Born sums
        // stay 1.
        let triple = z2_swap_triple();
        let cov = triple.covariantise(&sharp_basis(2)).unwrap();
        let rho = DensityOperator::from_pure(&[cr(0.8), cr(0.6)]).unwrap();
        let p = cov.born_distribution(&rho).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
