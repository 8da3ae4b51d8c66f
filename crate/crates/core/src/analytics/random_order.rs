//! Exact values for the random-order model: `n` distributions, one draw
//! each, revealed in a uniformly random order.

use num_traits::Zero;

use super::lemmas::InequalityCheck;
use super::pairs::{check_pair_budget, pair_top_expectation};
use super::{abs, check_dims, one_over, online_value_with_mean, RatioReport};
use crate::engine::mixture_mean;
use crate::error::{Error, Result};
use crate::matroid::{matroid_guarantee, Matroid};
use crate::pricing::{uniform_mixture, JointDiscreteDistribution, MeanVector};
use crate::rational::Rational;

fn check_instance(m: &Matroid, ds: &[JointDiscreteDistribution]) -> Result<()> {
    if ds.len() < 2 {
        return Err(Error::input(format!(
            "the random-order model needs at least two distributions, got {}",
            ds.len()
        )));
    }
    ds.iter().try_for_each(|d| check_dims(m, d))
}

/// `mu_bar^i`, the mean of the uniform mixture of all distributions but `i`.
pub fn leave_one_out_means(ds: &[JointDiscreteDistribution]) -> Result<Vec<MeanVector>> {
    let n = ds.len();
    if n < 2 {
        return Err(Error::input("leave-one-out means need at least two distributions"));
    }
    let means: Vec<MeanVector> = ds.iter().map(|d| d.mean()).collect();
    let k = means[0].len();
    let total: Vec<Rational> = (0..k).map(|s| means.iter().map(|mu| &mu[s]).sum()).collect();
    let scale = one_over(n - 1);
    Ok(means
        .iter()
        .map(|mu| MeanVector::new(total.iter().zip(mu.iter()).map(|(t, x)| (t - x) * &scale).collect()))
        .collect())
}

/// `pairs[i][j] = E[top_M(Y - X)]` with `X ~ ds[i]`, `Y ~ ds[j]` independent.
fn pair_matrix(m: &Matroid, ds: &[JointDiscreteDistribution]) -> Result<Vec<Vec<Rational>>> {
    let atoms: u128 = ds.iter().map(|d| d.len() as u128).sum();
    check_pair_budget(atoms * atoms)?;
    ds.iter()
        .map(|from| ds.iter().map(|to| pair_top_expectation(m, from, to)).collect())
        .collect()
}

fn ordered_pair_sums(pairs: &[Vec<Rational>]) -> (Rational, Rational) {
    let mut all = Rational::zero();
    let mut diagonal = Rational::zero();
    for (i, row) in pairs.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            all += v;
            if i == j {
                diagonal += v;
            }
        }
    }
    (all, diagonal)
}

fn offline_from_pairs(pairs: &[Vec<Rational>]) -> Rational {
    let n = pairs.len();
    let (all, diagonal) = ordered_pair_sums(pairs);
    (all - diagonal) * one_over(n * (n - 1))
}

fn mixture_from_pairs(pairs: &[Vec<Rational>]) -> Rational {
    let n = pairs.len();
    ordered_pair_sums(pairs).0 * one_over(n * n)
}

/// Per-step offline value `E[top_M(X^2 - X^1)]`: the average over ordered
/// pairs of distinct distributions.
pub fn exact_random_order_offline(m: &Matroid, ds: &[JointDiscreteDistribution]) -> Result<Rational> {
    check_instance(m, ds)?;
    Ok(offline_from_pairs(&pair_matrix(m, ds)?))
}

/// `E[top_M(X~^2 - X^1)]` where both draws come from the uniform mixture
/// independently: the average over all ordered pairs, `i = j` included.
pub fn mixture_pair_offline(m: &Matroid, ds: &[JointDiscreteDistribution]) -> Result<Rational> {
    check_instance(m, ds)?;
    Ok(mixture_from_pairs(&pair_matrix(m, ds)?))
}

/// Per-step value of the random-order policy. It buys
/// `H = argmax top_M(mu - X^1)` for the mixture mean `mu` and then faces the
/// leave-one-out mean of the distributions it has not yet seen.
pub fn exact_random_order_online(m: &Matroid, ds: &[JointDiscreteDistribution]) -> Result<Rational> {
    check_instance(m, ds)?;
    let mu = mixture_mean(ds);
    let rest = leave_one_out_means(ds)?;
    let mut w = vec![Rational::zero(); m.ground_size()];
    let mut total = Rational::zero();
    for (d, mu_bar) in ds.iter().zip(&rest) {
        for (atom, p) in d.iter() {
            for ((wi, mi), xi) in w.iter_mut().zip(mu.iter()).zip(atom) {
                *wi = mi - xi;
            }
            let gain: Rational = m.greedy(&w).iter().map(|j| &mu_bar[j] - &atom[j]).sum();
            total += p * gain;
        }
    }
    Ok(total * one_over(ds.len()))
}

/// `(1/n) sum_i ||mu - mu_bar^i||_1`.
pub fn mean_discrepancy(ds: &[JointDiscreteDistribution]) -> Result<Rational> {
    let rest = leave_one_out_means(ds)?;
    let mu = mixture_mean(ds);
    let total: Rational = rest
        .iter()
        .flat_map(|mu_bar| mu.iter().zip(mu_bar.iter()).map(|(a, b)| abs(&(a - b))))
        .sum();
    Ok(total * one_over(ds.len()))
}

/// `1/(1+d) - 2/n`. Negative for small `n`, where it says nothing.
pub fn random_order_guarantee(m: &Matroid, n: usize) -> Result<Rational> {
    Ok(matroid_guarantee(m)? - Rational::from_integer(2.into()) * one_over(n))
}

/// The random-order guarantee together with the two intermediate bounds
/// its argument rests on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomOrderCertificate {
    pub n: usize,
    pub density: Rational,
    /// Online and offline per-step values against `1/(1+d) - 2/n`.
    pub report: RatioReport,
    /// `((n-1)/n) E[top(X^2 - X^1)] <= E[top(X~^2 - X^1)]`.
    pub mixture_pair: InequalityCheck,
    /// `(1/n) sum_i ||mu - mu_bar^i||_1 <= (2d/(n-1)) E[top(mu - X^1)]`.
    pub discrepancy: InequalityCheck,
}

impl RandomOrderCertificate {
    pub fn all_hold(&self) -> bool {
        self.report.satisfied && self.mixture_pair.holds && self.discrepancy.holds
    }
}

/// Evaluates the random-order guarantee and both lemmas exactly.
pub fn check_random_order_guarantee(m: &Matroid, ds: &[JointDiscreteDistribution]) -> Result<RandomOrderCertificate> {
    check_instance(m, ds)?;
    let n = ds.len();
    let density = m.density()?;
    let pairs = pair_matrix(m, ds)?;
    let offline = offline_from_pairs(&pairs);
    let online = exact_random_order_online(m, ds)?;
    let report = RatioReport::new(online, offline.clone(), random_order_guarantee(m, n)?);

    let shrink = Rational::new((n - 1).into(), n.into());
    let mixture_pair = InequalityCheck::at_most(shrink * &offline, mixture_from_pairs(&pairs));

    let mixture = uniform_mixture(ds)?;
    let mixture_online = online_value_with_mean(m, &mixture, &mixture.mean());
    let factor = Rational::from_integer(2.into()) * &density * one_over(n - 1);
    let discrepancy = InequalityCheck::at_most(mean_discrepancy(ds)?, factor * mixture_online);

    Ok(RandomOrderCertificate {
        n,
        density,
        report,
        mixture_pair,
        discrepancy,
    })
}
