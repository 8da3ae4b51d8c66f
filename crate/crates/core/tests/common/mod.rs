//! Brute-force oracles. They only use feasibility queries and plain loops,
//! never the greedy algorithm or the exact engine under test.

#![allow(dead_code)]

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trading_prophet::rational::Rational;
use trading_prophet::{JointDiscreteDistribution, Matroid, StockSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn feasible_sets(m: &Matroid) -> Vec<StockSet> {
    (0..1u64 << m.ground_size())
        .map(StockSet::from_bits)
        .filter(|&s| m.is_feasible(s).unwrap())
        .collect()
}

/// Maximum of `sum_{e in S} w(e)` over the given feasible sets.
pub fn brute_top_over(sets: &[StockSet], w: &[Rational]) -> Rational {
    sets.iter()
        .map(|s| s.iter().map(|e| w[e].clone()).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero)
}

pub fn brute_top(m: &Matroid, w: &[Rational]) -> Rational {
    brute_top_over(&feasible_sets(m), w)
}

pub fn brute_rank(sets: &[StockSet], x: StockSet) -> usize {
    sets.iter().filter(|s| s.is_subset(x)).map(|s| s.len()).max().unwrap_or(0)
}

pub fn brute_density(m: &Matroid) -> Rational {
    let sets = feasible_sets(m);
    (1..1u64 << m.ground_size())
        .map(StockSet::from_bits)
        .map(|x| Rational::new(x.len().into(), brute_rank(&sets, x).into()))
        .max()
        .unwrap()
}

/// `top` for the `l`-uniform matroid: the `l` largest positive weights.
pub fn uniform_top(l: usize, w: &[Rational]) -> Rational {
    let mut pos: Vec<&Rational> = w.iter().filter(|x| x.is_positive()).collect();
    pos.sort_by(|a, b| b.cmp(a));
    pos.into_iter().take(l).sum()
}

pub fn oracle_online(top: impl Fn(&[Rational]) -> Rational, d: &JointDiscreteDistribution) -> Rational {
    let k = d.k();
    let mu: Vec<Rational> = (0..k)
        .map(|s| d.iter().map(|(a, p)| p * &a[s]).sum())
        .collect();
    d.iter()
        .map(|(a, p)| {
            let w: Vec<Rational> = mu.iter().zip(a).map(|(m, x)| m - x).collect();
            p * top(&w)
        })
        .sum()
}

pub fn oracle_pairs(
    top: impl Fn(&[Rational]) -> Rational,
    from: &JointDiscreteDistribution,
    to: &JointDiscreteDistribution,
) -> Rational {
    let mut total = Rational::zero();
    for (a, p) in from.iter() {
        for (b, q) in to.iter() {
            let w: Vec<Rational> = b.iter().zip(a).map(|(y, x)| y - x).collect();
            total += p * q * top(&w);
        }
    }
    total
}

pub fn oracle_offline(top: impl Fn(&[Rational]) -> Rational, d: &JointDiscreteDistribution) -> Rational {
    oracle_pairs(top, d, d)
}

/// All orderings of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Expected total profit per step of a policy on the random-order model,
/// by enumerating every order and every atom sequence and running
/// `run(prices)` on each realisation.
pub fn enumerate_random_order(
    ds: &[JointDiscreteDistribution],
    run: impl Fn(Vec<Vec<Rational>>) -> Rational,
) -> Rational {
    let n = ds.len();
    let orders = permutations(n);
    let mut total = Rational::zero();
    for order in &orders {
        let mut stack: Vec<(Vec<Vec<Rational>>, Rational)> = vec![(Vec::new(), Rational::from_integer(1.into()))];
        for &i in order {
            stack = stack
                .into_iter()
                .flat_map(|(prefix, p)| {
                    ds[i].iter().map(move |(a, q)| {
                        let mut next = prefix.clone();
                        next.push(a.to_vec());
                        (next, &p * q)
                    })
                })
                .collect();
        }
        for (prices, p) in stack {
            total += p * run(prices);
        }
    }
    total / Rational::from_integer(((n - 1) * orders.len()).into())
}
