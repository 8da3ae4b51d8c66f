//! `sum_{a, b} p_a q_b top_M(b - a)` over two finite distributions.
//!
//! The quadratic pair sum dominates every offline computation, so atoms are
//! first rescaled to a common integer lattice and the greedy runs on `i128`
//! weights. Any overflow falls back to the rational evaluation, which is
//! also the reference the fast path is tested against.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::pricing::JointDiscreteDistribution;
use crate::rational::{common_denominator, Rational};

/// Largest number of atom pairs an exact offline evaluation will visit.
pub const PAIR_LIMIT: u128 = 100_000_000;

/// Coordinates and probability weights beyond this magnitude disable the
/// integer path; it keeps every single difference well inside `i128`.
const LATTICE_BOUND: i128 = 1 << 62;

pub(crate) fn check_pair_budget(pairs: u128) -> Result<()> {
    if pairs > PAIR_LIMIT {
        return Err(Error::Capacity {
            what: "atom pairs for exact offline evaluation",
            size: pairs,
            limit: PAIR_LIMIT,
        });
    }
    Ok(())
}

/// Expected `top_M(X' - X)` for independent `X ~ from`, `X' ~ to`.
pub(crate) fn pair_top_expectation(
    m: &Matroid,
    from: &JointDiscreteDistribution,
    to: &JointDiscreteDistribution,
) -> Result<Rational> {
    check_pair_budget(from.len() as u128 * to.len() as u128)?;
    Ok(lattice_pair_sum(m, from, to).unwrap_or_else(|| reference_pair_sum(m, from, to)))
}

pub(crate) fn reference_pair_sum(
    m: &Matroid,
    from: &JointDiscreteDistribution,
    to: &JointDiscreteDistribution,
) -> Rational {
    let mut total = Rational::zero();
    let mut diff = vec![Rational::zero(); m.ground_size()];
    for (a, p) in from.iter() {
        let mut inner = Rational::zero();
        for (b, q) in to.iter() {
            for ((d, x), y) in diff.iter_mut().zip(b).zip(a) {
                *d = x - y;
            }
            inner += q * m.top_unchecked(&diff);
        }
        total += p * inner;
    }
    total
}

struct Lattice {
    atoms: Vec<Vec<i128>>,
    weights: Vec<i128>,
    weight_denom: BigInt,
}

fn to_lattice(d: &JointDiscreteDistribution, scale: &BigInt) -> Option<Lattice> {
    let weight_denom = common_denominator(d.probs());
    let fits = |v: BigInt| v.to_i128().filter(|x| x.abs() <= LATTICE_BOUND);
    let atoms = d
        .atoms()
        .iter()
        .map(|a| a.iter().map(|x| fits(x.numer() * (scale / x.denom()))).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let weights = d
        .probs()
        .iter()
        .map(|p| fits(p.numer() * (&weight_denom / p.denom())))
        .collect::<Option<Vec<_>>>()?;
    Some(Lattice {
        atoms,
        weights,
        weight_denom,
    })
}

fn lattice_pair_sum(m: &Matroid, from: &JointDiscreteDistribution, to: &JointDiscreteDistribution) -> Option<Rational> {
    let scale = common_denominator(from.atoms().iter().chain(to.atoms()).flatten());
    let a = to_lattice(from, &scale)?;
    let b = to_lattice(to, &scale)?;
    let mut total = BigInt::zero();
    let mut diff = vec![0i128; m.ground_size()];
    for (xa, &pa) in a.atoms.iter().zip(&a.weights) {
        let mut inner: i128 = 0;
        for (xb, &pb) in b.atoms.iter().zip(&b.weights) {
            for ((d, x), y) in diff.iter_mut().zip(xb).zip(xa) {
                *d = x - y;
            }
            let set = m.greedy(&diff);
            let top = set.iter().try_fold(0i128, |acc, e| acc.checked_add(diff[e]))?;
            inner = inner.checked_add(top.checked_mul(pb)?)?;
        }
        total += BigInt::from(inner) * BigInt::from(pa);
    }
    Some(Rational::new(total, scale * a.weight_denom * b.weight_denom))
}
