//! The property suite: every lemma and guarantee checked exactly on a
//! seeded random corpus.
//!
//! Trial `i` of property `p` draws from its own ChaCha8 stream, so results
//! depend only on the seed and the trial count, never on scheduling.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::{
    check_decomposition_lemma, check_density_lemma, exact_offline_per_step, exact_online_per_step, check_matroid_guarantee, check_polynomial_inequality,
    check_random_order_guarantee, check_uniform_guarantee, check_uniform_offline_bound, check_uniform_online_formula,
};
use crate::corpus::{
    random_centered_marginal, random_explicit, random_joint, random_marginal, random_matroid, random_order_instance,
    random_unit, random_weights,
};
use crate::engine::{offline_decisions, online_decisions, Trace};
use crate::error::Result;
use crate::matroid::StockSet;
use crate::pricing::{JointDiscreteDistribution, MarginalDistribution};
use crate::rational::{int, Rational};

/// How many instances each property sees, and the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub seed: u64,
    pub trials: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { seed: 0, trials: 200 }
    }
}

/// Outcome of one property over all its trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Description of the first failing trial, if any.
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:>6} trials {:>4} failures  {}",
            self.name,
            self.trials,
            self.failures,
            if self.passed() { "ok" } else { "FAILED" }
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, "\n    first failure: {msg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyReport {
    pub results: Vec<PropertyResult>,
}

impl CertifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

/// A trial either passes, or fails with a description.
type Outcome = Result<std::result::Result<(), String>>;

type Check = fn(&mut ChaCha8Rng) -> Outcome;

/// The properties in reporting order.
pub const PROPERTIES: &[&str] = &[
    "kruskal-brute-force",
    "rank-greedy",
    "density-lemma",
    "decomposition-lemma",
    "polynomial-inequality",
    "uniform-offline-bound",
    "uniform-online-formula",
    "matroid-guarantee",
    "uniform-guarantee",
    "random-order-guarantee",
    "trace-accounting",
    "zero-expectation-reduction",
];

fn check_for(name: &str) -> Check {
    match name {
        "kruskal-brute-force" => kruskal_brute_force,
        "rank-greedy" => rank_greedy,
        "density-lemma" => density_lemma,
        "decomposition-lemma" => decomposition_lemma,
        "polynomial-inequality" => polynomial_inequality,
        "uniform-offline-bound" => uniform_offline_bound,
        "uniform-online-formula" => uniform_online_formula,
        "matroid-guarantee" => matroid_guarantee,
        "uniform-guarantee" => uniform_guarantee,
        "random-order-guarantee" => random_order_guarantee,
        "trace-accounting" => trace_accounting,
        "zero-expectation-reduction" => zero_expectation_reduction,
        _ => unreachable!("unknown property {name}"),
    }
}

/// Stream for trial `trial` of property number `property`.
pub fn trial_rng(seed: u64, property: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((property as u64) << 40) | trial as u64);
    rng
}

/// Runs one named property. Unknown names are a caller bug.
pub fn run_property(name: &'static str, options: CertifyOptions) -> Result<PropertyResult> {
    let index = PROPERTIES.iter().position(|p| *p == name).expect("known property");
    let check = check_for(name);
    let outcomes: Vec<std::result::Result<(), String>> = (0..options.trials)
        .into_par_iter()
        .map(|trial| check(&mut trial_rng(options.seed, index, trial)).map(|r| r.map_err(|e| format!("trial {trial}: {e}"))))
        .collect::<Result<_>>()?;
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let first_failure = outcomes.into_iter().find_map(|o| o.err());
    Ok(PropertyResult {
        name,
        trials: options.trials,
        failures,
        first_failure,
    })
}

/// Runs every property in [`PROPERTIES`].
pub fn certify(options: CertifyOptions) -> Result<CertifyReport> {
    let results = PROPERTIES
        .iter()
        .map(|name| run_property(name, options))
        .collect::<Result<_>>()?;
    Ok(CertifyReport { results })
}

fn verdict(ok: bool, describe: impl FnOnce() -> String) -> Outcome {
    Ok(if ok { Ok(()) } else { Err(describe()) })
}

fn kruskal_brute_force(rng: &mut ChaCha8Rng) -> Outcome {
    let k = rng.random_range(1..=8);
    let m = random_explicit(rng, k);
    let w = random_weights(rng, k);
    let (set, weight) = m.max_weight_feasible_set(&w.clone().into())?;
    let best = (0..1u64 << k)
        .map(StockSet::from_bits)
        .filter(|&s| m.is_feasible(s).expect("in range"))
        .map(|s| s.iter().map(|e| w[e].clone()).sum())
        .max()
        .unwrap_or_else(Zero::zero);
    verdict(m.is_feasible(set)? && weight == best, || format!("{m:?} w={w:?}"))
}

fn rank_greedy(rng: &mut ChaCha8Rng) -> Outcome {
    let m = random_matroid(rng, 10);
    let ones = vec![int(1); m.ground_size()];
    let (set, _) = m.max_weight_feasible_set(&ones.into())?;
    verdict(m.rank(StockSet::full(m.ground_size()))? == set.len(), || format!("{m:?}"))
}

fn density_lemma(rng: &mut ChaCha8Rng) -> Outcome {
    let m = random_matroid(rng, 10);
    let w = random_weights(rng, m.ground_size());
    let c = check_density_lemma(&m, &w)?;
    verdict(c.holds, || format!("{m:?} w={w:?}: {c}"))
}

fn decomposition_lemma(rng: &mut ChaCha8Rng) -> Outcome {
    let m = random_matroid(rng, 10);
    let x = random_weights(rng, m.ground_size());
    let y = random_weights(rng, m.ground_size());
    let c = check_decomposition_lemma(&m, &x, &y)?;
    verdict(c.holds, || format!("{m:?} x={x:?} x'={y:?}: {c}"))
}

fn polynomial_inequality(rng: &mut ChaCha8Rng) -> Outcome {
    let k = rng.random_range(2..=8);
    let l = rng.random_range(1..=k);
    let a: Vec<_> = (0..k).map(|_| random_unit(rng, 12)).collect();
    let c = check_polynomial_inequality(k, l, &a)?;
    verdict(c.holds, || format!("k={k} l={l} a={a:?}: {c}"))
}

fn centered_marginals(rng: &mut ChaCha8Rng, min_k: usize) -> Vec<MarginalDistribution> {
    let k = rng.random_range(min_k..=4);
    (0..k).map(|_| random_centered_marginal(rng, 3)).collect()
}

fn uniform_offline_bound(rng: &mut ChaCha8Rng) -> Outcome {
    let ms = centered_marginals(rng, 2);
    let l = rng.random_range(1..=ms.len());
    let c = check_uniform_offline_bound(&ms, l)?;
    verdict(c.holds, || format!("{ms:?} l'={l}: {c}"))
}

fn uniform_online_formula(rng: &mut ChaCha8Rng) -> Outcome {
    let ms = centered_marginals(rng, 1);
    let l = rng.random_range(1..=ms.len());
    let c = check_uniform_online_formula(&ms, l)?;
    verdict(c.holds, || format!("{ms:?} l={l}: {c}"))
}

fn matroid_guarantee(rng: &mut ChaCha8Rng) -> Outcome {
    let m = random_matroid(rng, 6);
    let d = random_joint(rng, m.ground_size(), 8).centered();
    let r = check_matroid_guarantee(&m, &d)?;
    verdict(r.satisfied, || format!("{m:?} {d:?}: {r}"))
}

fn uniform_guarantee(rng: &mut ChaCha8Rng) -> Outcome {
    let k = rng.random_range(1..=5);
    let ms: Vec<_> = (0..k).map(|_| random_marginal(rng, 4)).collect();
    let l = rng.random_range(1..=k);
    let l_off = rng.random_range(1..=l);
    let r = check_uniform_guarantee(&ms, l, l_off)?;
    verdict(r.satisfied, || format!("{ms:?} l={l} l'={l_off}: {r}"))
}

fn random_order_guarantee(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.random_range(2..=6);
    let m = random_matroid(rng, 4);
    let ds = random_order_instance(rng, n, m.ground_size(), 3);
    let c = check_random_order_guarantee(&m, &ds)?;
    verdict(c.all_hold(), || format!("{m:?} {ds:?}: {c:?}"))
}

fn sample_path(rng: &mut ChaCha8Rng, d: &JointDiscreteDistribution, n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|_| d.sample(rng).to_vec()).collect()
}

fn trace_accounting(rng: &mut ChaCha8Rng) -> Outcome {
    let m = random_matroid(rng, 6);
    let d = random_joint(rng, m.ground_size(), 6);
    let n = rng.random_range(1..=8);
    let prices = sample_path(rng, &d, n);
    let online = Trace::execute(prices.clone(), online_decisions(&m, &d.mean(), &prices))?;
    let offline = Trace::execute(prices.clone(), offline_decisions(&m, &prices))?;
    let feasible = online
        .holdings
        .iter()
        .chain(&offline.holdings)
        .all(|&h| m.is_feasible(h).expect("in range"));
    let accounted = [&online, &offline]
        .iter()
        .all(|t| t.total_profit == t.telescoped_profit() && t.total_profit == t.cashflows.iter().sum());
    let dominated = offline.total_profit >= online.total_profit;
    verdict(feasible && accounted && dominated, || {
        format!("{m:?} prices={prices:?} feasible={feasible} accounted={accounted} dominated={dominated}")
    })
}

fn zero_expectation_reduction(rng: &mut ChaCha8Rng) -> Outcome {
    let m = random_matroid(rng, 6);
    let d = random_joint(rng, m.ground_size(), 6);
    let n = rng.random_range(2..=8);
    let mu = d.mean();
    let prices = sample_path(rng, &d, n);
    let shifted: Vec<Vec<_>> = prices
        .iter()
        .map(|x| x.iter().zip(mu.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let zero = vec![int(0); m.ground_size()];
    let same_online = online_decisions(&m, &mu, &prices) == online_decisions(&m, &zero, &shifted);
    let same_offline = offline_decisions(&m, &prices) == offline_decisions(&m, &shifted);
    let c = d.centered();
    let same_values = exact_offline_per_step(&m, &d)? == exact_offline_per_step(&m, &c)?
        && exact_online_per_step(&m, &d)? == exact_online_per_step(&m, &c)?;
    verdict(same_online && same_offline && same_values, || {
        format!("{m:?} {d:?} online={same_online} offline={same_offline} values={same_values}")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_reproducible() {
        let opts = CertifyOptions { seed: 5, trials: 20 };
        let a = certify(opts).unwrap();
        assert!(a.all_passed(), "{:?}", a.failed().collect::<Vec<_>>());
        assert_eq!(a.results.len(), PROPERTIES.len());
        assert_eq!(a, certify(opts).unwrap());
    }
}
