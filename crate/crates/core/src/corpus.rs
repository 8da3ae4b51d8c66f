//! Seeded random instances: matroids of every kind, distributions and
//! weight vectors with small rational entries.
//!
//! Used by the property suite and the tests. Everything is drawn from a
//! caller-owned generator, so a seed pins down the whole corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::matroid::{Matroid, PartitionBlock, SetFamily, StockSet};
use crate::pricing::{JointDiscreteDistribution, MarginalDistribution};
use crate::rational::Rational;

/// A rational `p/q` with `|p| <= magnitude * q` and `1 <= q <= max_denom`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, magnitude: i64, max_denom: i64) -> Rational {
    let q = rng.random_range(1..=max_denom);
    let p = rng.random_range(-magnitude * q..=magnitude * q);
    Rational::new(p.into(), q.into())
}

/// A value in `[0, 1]`, with the endpoints drawn more often than chance.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, max_denom: i64) -> Rational {
    match rng.random_range(0..8) {
        0 => Rational::from_integer(0.into()),
        1 => Rational::from_integer(1.into()),
        _ => {
            let q = rng.random_range(1..=max_denom);
            Rational::new(rng.random_range(0..=q).into(), q.into())
        }
    }
}

pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Rational> {
    (0..k).map(|_| random_rational(rng, 10, 6)).collect()
}

/// `n` positive probabilities summing to one.
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=12)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| Rational::new(x.into(), total.into())).collect()
}

/// A joint distribution over `k` stocks with between one and `max_atoms`
/// atoms (fewer if random atoms collide).
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, k: usize, max_atoms: usize) -> JointDiscreteDistribution {
    let n = rng.random_range(1..=max_atoms);
    let probs = random_probabilities(rng, n);
    let entries: Vec<_> = probs
        .into_iter()
        .map(|p| ((0..k).map(|_| random_rational(rng, 5, 4)).collect::<Vec<_>>(), p))
        .collect();
    JointDiscreteDistribution::new(k, entries).expect("probabilities sum to one")
}

pub fn random_marginal<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> MarginalDistribution {
    let n = rng.random_range(1..=max_atoms);
    let probs = random_probabilities(rng, n);
    MarginalDistribution::new(probs.into_iter().map(|p| (random_rational(rng, 5, 4), p)))
        .expect("probabilities sum to one")
}

/// A marginal shifted to mean zero.
pub fn random_centered_marginal<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> MarginalDistribution {
    let m = random_marginal(rng, max_atoms);
    let mu = m.mean();
    MarginalDistribution::new(m.iter().map(|(x, p)| (x - &mu, p.clone()))).expect("shift keeps probabilities")
}

pub fn random_uniform<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Matroid {
    Matroid::uniform(k, rng.random_range(1..=k)).expect("valid capacity")
}

pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Matroid {
    let blocks_wanted = rng.random_range(1..=k);
    let mut elements: Vec<usize> = (0..k).collect();
    elements.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); blocks_wanted];
    // The first elements seed each block so none is empty.
    for (i, e) in elements.into_iter().enumerate() {
        let b = if i < blocks_wanted { i } else { rng.random_range(0..blocks_wanted) };
        blocks[b].push(e);
    }
    let blocks = blocks
        .into_iter()
        .map(|mut elements| {
            elements.sort_unstable();
            let cap = rng.random_range(1..=elements.len());
            PartitionBlock { elements, cap }
        })
        .collect();
    Matroid::partition(k, blocks).expect("blocks cover the ground set")
}

/// A loopless multigraph with `k` edges on at most `k + 1` vertices.
pub fn random_graphic<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Matroid {
    let vertices = rng.random_range(2..=k + 1);
    let edges = (0..k)
        .map(|_| {
            let u = rng.random_range(0..vertices);
            let mut v = rng.random_range(0..vertices - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    Matroid::graphic(edges).expect("no self-loops")
}

/// An explicit matroid: the feasible sets of a random structured matroid,
/// optionally truncated to a smaller rank. Truncation keeps the axioms.
pub fn random_explicit<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Matroid {
    let base = match rng.random_range(0..3) {
        0 => random_uniform(rng, k),
        1 => random_partition(rng, k),
        _ => random_graphic(rng, k),
    };
    let full = base.rank(StockSet::full(k)).expect("in range");
    let rank = if rng.random_bool(0.5) { rng.random_range(1..=full) } else { full };
    let sets = (0..1u64 << k)
        .map(StockSet::from_bits)
        .filter(|&s| s.len() <= rank && base.is_feasible(s).expect("in range"));
    Matroid::explicit(SetFamily::new(k, sets).expect("small ground set")).expect("non-empty ground set")
}

/// Any of the four kinds, with `1 <= k <= max_k`.
pub fn random_matroid<R: Rng + ?Sized>(rng: &mut R, max_k: usize) -> Matroid {
    let k = rng.random_range(1..=max_k);
    match rng.random_range(0..4) {
        0 => random_uniform(rng, k),
        1 => random_partition(rng, k),
        2 => random_graphic(rng, k),
        _ => random_explicit(rng, k),
    }
}

/// Random-order instance: `n` distributions over `k` stocks.
pub fn random_order_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    max_atoms: usize,
) -> Vec<JointDiscreteDistribution> {
    (0..n).map(|_| random_joint(rng, k, max_atoms)).collect()
}
