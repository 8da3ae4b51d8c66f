//! Finite-support price distributions.
//!
//! A [`JointDiscreteDistribution`] is a list of price-vector atoms with exact
//! rational probabilities, kept in lexicographic order with duplicates
//! merged. Independent instances are built from per-stock
//! [`MarginalDistribution`]s with [`product`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational, PQ};

mod hardness;

pub use hardness::{half_hardness_instance, matroid_hardness_instance, uniform_ratio_hardness_instance};

/// Default cap on the number of atoms [`product`] may create.
pub const DEFAULT_JOINT_LIMIT: usize = 10_000;

/// Expected price vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeanVector(Vec<Rational>);

impl MeanVector {
    pub fn new(values: Vec<Rational>) -> Self {
        MeanVector(values)
    }

    pub fn zero(k: usize) -> Self {
        MeanVector(vec![Rational::zero(); k])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        MeanVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl std::ops::Deref for MeanVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for MeanVector {
    fn from(values: Vec<Rational>) -> Self {
        MeanVector(values)
    }
}

/// Precomputed inverse-CDF table. Exact integer thresholds when the common
/// probability denominator fits in 64 bits, floating point otherwise.
#[derive(Debug, Clone)]
enum CdfTable {
    Exact { total: u64, cumulative: Vec<u64> },
    Float { cumulative: Vec<f64> },
}

impl CdfTable {
    fn build(probs: &[Rational]) -> Self {
        let denom = common_denominator(probs);
        if let Some(total) = denom.to_u64() {
            let mut acc = 0u64;
            let cumulative = probs
                .iter()
                .map(|p| {
                    let scaled = p.numer() * (&denom / p.denom());
                    acc += scaled.to_u64().expect("bounded by the common denominator");
                    acc
                })
                .collect();
            CdfTable::Exact { total, cumulative }
        } else {
            let mut acc = 0.0;
            let cumulative = probs
                .iter()
                .map(|p| {
                    acc += p.to_f64().unwrap_or(0.0);
                    acc
                })
                .collect();
            CdfTable::Float { cumulative }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            CdfTable::Exact { total, cumulative } => {
                let u = rng.random_range(0..*total);
                cumulative.partition_point(|&c| c <= u)
            }
            CdfTable::Float { cumulative } => {
                let u = rng.random::<f64>() * cumulative.last().copied().unwrap_or(1.0);
                cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
            }
        }
    }
}

/// A distribution over `k`-dimensional price vectors with finitely many atoms.
#[derive(Clone)]
pub struct JointDiscreteDistribution {
    k: usize,
    atoms: Vec<Vec<Rational>>,
    probs: Vec<Rational>,
    cdf: CdfTable,
}

impl PartialEq for JointDiscreteDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.atoms == other.atoms && self.probs == other.probs
    }
}

impl Eq for JointDiscreteDistribution {}

impl fmt::Debug for JointDiscreteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (atom, p) in self.iter() {
            let atom: Vec<String> = atom.iter().map(|x| PQ(x).to_string()).collect();
            list.entry(&format_args!("({}) w.p. {}", atom.join(", "), PQ(p)));
        }
        list.finish()
    }
}

fn merge_entries<K: Ord>(entries: impl IntoIterator<Item = (K, Rational)>) -> Result<BTreeMap<K, Rational>> {
    let mut merged: BTreeMap<K, Rational> = BTreeMap::new();
    for (atom, p) in entries {
        if !p.is_positive() {
            return Err(Error::input(format!("probability {} is not positive", PQ(&p))));
        }
        *merged.entry(atom).or_insert_with(Rational::zero) += p;
    }
    if merged.is_empty() {
        return Err(Error::input("distribution has no atoms"));
    }
    let total: Rational = merged.values().sum();
    if !total.is_one() {
        return Err(Error::input(format!("probabilities sum to {}, not 1", PQ(&total))));
    }
    Ok(merged)
}

impl JointDiscreteDistribution {
    /// Builds a distribution from `(atom, probability)` pairs. Equal atoms are
    /// merged; probabilities must be positive and sum to exactly one.
    pub fn new(k: usize, entries: impl IntoIterator<Item = (Vec<Rational>, Rational)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("price vectors must have at least one coordinate"));
        }
        let entries: Vec<_> = entries.into_iter().collect();
        if let Some((atom, _)) = entries.iter().find(|(a, _)| a.len() != k) {
            return Err(Error::input(format!(
                "atom of length {} in a distribution over {k} stocks",
                atom.len()
            )));
        }
        let merged = merge_entries(entries)?;
        let (atoms, probs): (Vec<_>, Vec<_>) = merged.into_iter().unzip();
        let cdf = CdfTable::build(&probs);
        Ok(JointDiscreteDistribution { k, atoms, probs, cdf })
    }

    /// The distribution that always returns `atom`.
    pub fn point_mass(atom: Vec<Rational>) -> Result<Self> {
        let k = atom.len();
        Self::new(k, [(atom, Rational::one())])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Vec<Rational>] {
        &self.atoms
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// `(atom, probability)` pairs in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (&[Rational], &Rational)> {
        self.atoms.iter().map(Vec::as_slice).zip(&self.probs)
    }

    pub fn mean(&self) -> MeanVector {
        let mut mu = vec![Rational::zero(); self.k];
        for (atom, p) in self.iter() {
            for (m, x) in mu.iter_mut().zip(atom) {
                *m += p * x;
            }
        }
        MeanVector(mu)
    }

    pub fn is_zero_mean(&self) -> bool {
        self.mean().is_zero()
    }

    /// Replaces every atom `a` by `a - v`.
    pub fn shift(&self, v: &[Rational]) -> Result<Self> {
        if v.len() != self.k {
            return Err(Error::input(format!(
                "shift vector has length {}, distribution has {} stocks",
                v.len(),
                self.k
            )));
        }
        let entries = self.iter().map(|(atom, p)| {
            let shifted = atom.iter().zip(v).map(|(a, s)| a - s).collect();
            (shifted, p.clone())
        });
        Self::new(self.k, entries)
    }

    /// The zero-expectation instance `X - E[X]`.
    pub fn centered(&self) -> Self {
        self.shift(&self.mean()).expect("mean has matching length")
    }

    /// The distribution of coordinate `s`.
    pub fn marginal(&self, s: usize) -> Result<MarginalDistribution> {
        if s >= self.k {
            return Err(Error::input(format!("coordinate {s} out of range 0..{}", self.k)));
        }
        MarginalDistribution::new(self.iter().map(|(a, p)| (a[s].clone(), p.clone())))
    }

    /// Places this distribution on coordinates `coords` of a `ground_size`
    /// vector; every other coordinate is zero with probability one.
    pub fn embed(&self, ground_size: usize, coords: &[usize]) -> Result<Self> {
        if coords.len() != self.k {
            return Err(Error::input(format!(
                "{} target coordinates for a distribution over {} stocks",
                coords.len(),
                self.k
            )));
        }
        let mut seen = vec![false; ground_size];
        for &c in coords {
            if c >= ground_size || std::mem::replace(&mut seen[c], true) {
                return Err(Error::input(format!("bad or repeated target coordinate {c}")));
            }
        }
        let entries = self.iter().map(|(atom, p)| {
            let mut full = vec![Rational::zero(); ground_size];
            for (&c, x) in coords.iter().zip(atom) {
                full[c] = x.clone();
            }
            (full, p.clone())
        });
        Self::new(ground_size, entries)
    }

    /// Index of an atom drawn by inverse CDF over the canonical order.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.cdf.draw(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &[Rational] {
        &self.atoms[self.sample_index(rng)]
    }
}

/// The distribution of a single stock's price.
#[derive(Clone, PartialEq, Eq)]
pub struct MarginalDistribution {
    atoms: Vec<Rational>,
    probs: Vec<Rational>,
}

impl fmt::Debug for MarginalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (x, p) in self.iter() {
            list.entry(&format_args!("{} w.p. {}", PQ(x), PQ(p)));
        }
        list.finish()
    }
}

impl MarginalDistribution {
    pub fn new(entries: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let (atoms, probs) = merge_entries(entries)?.into_iter().unzip();
        Ok(MarginalDistribution { atoms, probs })
    }

    pub fn point_mass(x: Rational) -> Self {
        MarginalDistribution {
            atoms: vec![x],
            probs: vec![Rational::one()],
        }
    }

    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.atoms.iter().zip(&self.probs)
    }

    pub fn mean(&self) -> Rational {
        self.iter().map(|(x, p)| x * p).sum()
    }

    /// `Pr[-X >= x]`.
    pub fn prob_negated_at_least(&self, x: &Rational) -> Rational {
        self.iter().filter(|(a, _)| -*a >= *x).map(|(_, p)| p).sum()
    }
}

/// The joint distribution of independent stocks with the given marginals.
pub fn product(marginals: &[MarginalDistribution], limit: usize) -> Result<JointDiscreteDistribution> {
    if marginals.is_empty() {
        return Err(Error::input("product of zero marginals"));
    }
    let size = marginals
        .iter()
        .try_fold(1u128, |acc, m| acc.checked_mul(m.len() as u128))
        .unwrap_or(u128::MAX);
    if size > limit as u128 {
        return Err(Error::Capacity {
            what: "product distribution atoms",
            size,
            limit: limit as u128,
        });
    }
    let mut entries: Vec<(Vec<Rational>, Rational)> = vec![(Vec::new(), Rational::one())];
    for m in marginals {
        entries = entries
            .iter()
            .flat_map(|(prefix, q)| {
                m.iter().map(move |(x, p)| {
                    let mut atom = prefix.clone();
                    atom.push(x.clone());
                    (atom, q * p)
                })
            })
            .collect();
    }
    JointDiscreteDistribution::new(marginals.len(), entries)
}

/// `sum_i weights[i] * ds[i]`.
pub fn mixture(ds: &[JointDiscreteDistribution], weights: &[Rational]) -> Result<JointDiscreteDistribution> {
    let first = ds.first().ok_or_else(|| Error::input("mixture of zero distributions"))?;
    if ds.len() != weights.len() {
        return Err(Error::input(format!(
            "{} distributions but {} mixture weights",
            ds.len(),
            weights.len()
        )));
    }
    if ds.iter().any(|d| d.k() != first.k()) {
        return Err(Error::input("mixture components have different numbers of stocks"));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::input("mixture weights must be positive"));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::input(format!("mixture weights sum to {}, not 1", PQ(&total))));
    }
    let entries = ds
        .iter()
        .zip(weights)
        .flat_map(|(d, w)| d.iter().map(move |(a, p)| (a.to_vec(), w * p)));
    JointDiscreteDistribution::new(first.k(), entries)
}

/// The equal-weight mixture of `ds`.
pub fn uniform_mixture(ds: &[JointDiscreteDistribution]) -> Result<JointDiscreteDistribution> {
    let w = Rational::new(BigInt::one(), BigInt::from(ds.len().max(1)));
    mixture(ds, &vec![w; ds.len()])
}
