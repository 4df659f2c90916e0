//! Deterministic random generators for states, unitaries, observables, and
//! probability distributions.
//!
//! Everything is driven by an explicitly seeded ChaCha stream so that test
//! suites, the verification harness, and the CLI produce byte-identical
//! results for a given seed on every platform.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{cr, CMat, DensityOperator, HermitianOperator, C64};
use crate::observables::{Observable, Outcome};

/// A seeded deterministic RNG stream.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entry (real and imaginary parts N(0,1)).
pub fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-uniform random pure state as a normalised complex vector.
pub fn random_pure_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|c| c / cr(norm)).collect();
        }
    }
}

/// Random full-rank density operator G·G†/tr(G·G†) with Ginibre G.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityOperator {
    let g = CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(HermitianOperator::new(m * cr(1.0 / tr)).expect("G·G† is Hermitian"))
        .expect("normalised Gram matrix is a state")
}

/// Random Hermitian operator with independent Gaussian matrix elements,
/// scaled by `scale`.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> HermitianOperator {
    let g = CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    HermitianOperator::new((&g + g.adjoint()) * cr(0.5 * scale)).expect("symmetrised")
}

/// Haar-distributed random unitary via QR of a Ginibre matrix with the
/// standard phase correction.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q.clone();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / cr(d.norm()) } else { cr(1.0) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Random probability distribution over `n` outcomes (normalised
/// exponentials, strictly positive).
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    v
}

/// Random valid observable over the given outcome labels: Gram effects
/// A_ω = X_ω X_ω† whitened by S^{-1/2}·(·)·S^{-1/2} with S = Σ A_ω, which
/// yields positive effects summing to the identity.
pub fn random_observable<R: Rng>(rng: &mut R, dim: usize, outcomes: Vec<Outcome>) -> Observable {
    let grams: Vec<CMat> = (0..outcomes.len())
        .map(|_| {
            let x = CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
            &x * x.adjoint()
        })
        .collect();
    let mut s = crate::linalg::zeros(dim);
    for a in &grams {
        s += a;
    }
    let s_inv_sqrt = HermitianOperator::new(s)
        .expect("sum of Grams is Hermitian")
        .inverse_sqrt(1e-12)
        .expect("sum of ≥1 Ginibre Grams is strictly positive a.s.");
    let effects = grams
        .into_iter()
        .map(|a| {
            HermitianOperator::new(&s_inv_sqrt * a * &s_inv_sqrt).expect("congruence is Hermitian")
        })
        .collect();
    Observable::new(outcomes, effects).expect("structural validity by construction")
}

/// Integer outcome labels 0..n.
pub fn integer_outcomes(n: usize) -> Vec<Outcome> {
    (0..n as i64).map(Outcome::Int).collect()
}

/// Full product grid of integer labels with the given factor sizes,
/// lexicographic order.
pub fn product_integer_outcomes(sizes: &[usize]) -> Vec<Outcome> {
    let total: usize = sizes.iter().product();
    (0..total)
        .map(|x| {
            let comps = crate::symmetry::decode_tuple(x, sizes);
            Outcome::tuple(comps.into_iter().map(|c| Outcome::Int(c as i64)))
        })
        .collect()
}
