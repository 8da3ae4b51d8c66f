//! Trace-level simulation of the trading policies.
//!
//! Every policy is executed in the sell-all-rebuy form: at step `t` the
//! player liquidates whatever it holds at the prices `X^t` and then buys a
//! feasible set `H^t` at the same prices. Holding a stock across a step is
//! the same as selling and rebuying it, so nothing is lost by this form. On
//! the last step the player only sells.

use std::fmt;
use std::io;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::{Matroid, StockSet};
use crate::pricing::{JointDiscreteDistribution, MeanVector};
use crate::rational::{format_rational, Rational};

/// How price vectors are generated over the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriceModel {
    /// Every step draws independently from the same distribution.
    Iid(JointDiscreteDistribution),
    /// One draw from each distribution, revealed in a uniformly random order.
    RandomOrder(Vec<JointDiscreteDistribution>),
}

/// A matroid, a price model, a horizon and a master seed.
#[derive(Debug, Clone)]
pub struct MarketInstance {
    matroid: Matroid,
    model: PriceModel,
    horizon: usize,
    seed: u64,
}

impl MarketInstance {
    pub fn new(matroid: Matroid, model: PriceModel, horizon: usize, seed: u64) -> Result<Self> {
        matroid.validate()?;
        let k = matroid.ground_size();
        if horizon == 0 {
            return Err(Error::input("horizon must be at least 1"));
        }
        let dists: &[JointDiscreteDistribution] = match &model {
            PriceModel::Iid(d) => std::slice::from_ref(d),
            PriceModel::RandomOrder(ds) => {
                if ds.len() != horizon {
                    return Err(Error::input(format!(
                        "random-order horizon {horizon} must equal the number of distributions {}",
                        ds.len()
                    )));
                }
                ds
            }
        };
        if let Some(d) = dists.iter().find(|d| d.k() != k) {
            return Err(Error::input(format!(
                "distribution over {} stocks paired with a matroid on {k}",
                d.k()
            )));
        }
        Ok(MarketInstance {
            matroid,
            model,
            horizon,
            seed,
        })
    }

    pub fn iid(matroid: Matroid, dist: JointDiscreteDistribution, horizon: usize, seed: u64) -> Result<Self> {
        Self::new(matroid, PriceModel::Iid(dist), horizon, seed)
    }

    /// Random-order instance; the horizon is the number of distributions.
    pub fn random_order(matroid: Matroid, dists: Vec<JointDiscreteDistribution>, seed: u64) -> Result<Self> {
        let n = dists.len();
        Self::new(matroid, PriceModel::RandomOrder(dists), n, seed)
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn model(&self) -> &PriceModel {
        &self.model
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[must_use]
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The prices of trial `trial`, and the revealed order for random-order
    /// instances. Deterministic in `(seed, trial)`.
    pub fn draw_prices(&self, trial: u64) -> (Vec<Vec<Rational>>, Option<Vec<usize>>) {
        let (mut price_rng, mut order_rng) = trial_streams(self.seed, trial);
        match &self.model {
            PriceModel::Iid(d) => {
                let prices = (0..self.horizon).map(|_| d.sample(&mut price_rng).to_vec()).collect();
                (prices, None)
            }
            PriceModel::RandomOrder(ds) => {
                let mut order: Vec<usize> = (0..ds.len()).collect();
                order.shuffle(&mut order_rng);
                let prices = order.iter().map(|&i| ds[i].sample(&mut price_rng).to_vec()).collect();
                (prices, Some(order))
            }
        }
    }

    /// The mean the online policy trades against: the distribution's mean,
    /// or the mean of the equal-weight mixture for random-order instances.
    pub fn policy_mean(&self) -> MeanVector {
        match &self.model {
            PriceModel::Iid(d) => d.mean(),
            PriceModel::RandomOrder(ds) => mixture_mean(ds),
        }
    }
}

/// Mean of the equal-weight mixture of `ds`.
pub fn mixture_mean(ds: &[JointDiscreteDistribution]) -> MeanVector {
    let k = ds.first().map_or(0, JointDiscreteDistribution::k);
    let n = Rational::from_integer(ds.len().into());
    let mut mu = vec![Rational::zero(); k];
    for d in ds {
        for (m, x) in mu.iter_mut().zip(d.mean().iter()) {
            *m += x;
        }
    }
    MeanVector::new(mu.into_iter().map(|x| x / &n).collect())
}

/// Independent price and permutation streams for one trial: ChaCha8 keyed by
/// the master seed, with stream ids `2 * trial` and `2 * trial + 1`.
pub fn trial_streams(seed: u64, trial: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut prices = ChaCha8Rng::seed_from_u64(seed);
    prices.set_stream(2 * trial);
    let mut order = ChaCha8Rng::seed_from_u64(seed);
    order.set_stream(2 * trial + 1);
    (prices, order)
}

/// A realised run of a policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// `prices[t]` is the price vector revealed at step `t`.
    pub prices: Vec<Vec<Rational>>,
    /// `holdings[t]` is the set held after trading at step `t`; the last
    /// entry is always empty.
    pub holdings: Vec<StockSet>,
    /// Sale proceeds minus purchase cost at each step.
    pub cashflows: Vec<Rational>,
    pub total_profit: Rational,
}

impl Trace {
    /// Executes `holdings` against `prices` in sell-all-rebuy form.
    pub fn execute(prices: Vec<Vec<Rational>>, holdings: Vec<StockSet>) -> Result<Self> {
        if prices.len() != holdings.len() || prices.is_empty() {
            return Err(Error::input(format!(
                "{} price vectors but {} holding sets",
                prices.len(),
                holdings.len()
            )));
        }
        if !holdings.last().is_some_and(|h| h.is_empty()) {
            return Err(Error::input("holdings must be empty after the final step"));
        }
        let mut previous = StockSet::empty();
        let cashflows: Vec<Rational> = prices
            .iter()
            .zip(&holdings)
            .map(|(x, &held)| {
                let sold: Rational = previous.iter().map(|s| &x[s]).sum();
                let bought: Rational = held.iter().map(|s| &x[s]).sum();
                previous = held;
                sold - bought
            })
            .collect();
        let total_profit = cashflows.iter().sum();
        Ok(Trace {
            prices,
            holdings,
            cashflows,
            total_profit,
        })
    }

    pub fn horizon(&self) -> usize {
        self.prices.len()
    }

    /// `sum_t sum_{s in H^t} (X^{t+1}_s - X^t_s)`.
    pub fn telescoped_profit(&self) -> Rational {
        self.holdings
            .iter()
            .zip(self.prices.windows(2))
            .map(|(held, pair)| held.iter().map(|s| &pair[1][s] - &pair[0][s]).sum::<Rational>())
            .sum()
    }

    /// One row per step: `step, price_1..price_k, held, cashflow`. Stocks and
    /// steps are numbered from 1; `held` lists stocks separated by spaces.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let k = self.prices.first().map_or(0, Vec::len);
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["step".to_string()];
        header.extend((1..=k).map(|s| format!("price_{s}")));
        header.push("held".into());
        header.push("cashflow".into());
        w.write_record(&header)?;
        for (t, ((x, held), cash)) in self.prices.iter().zip(&self.holdings).zip(&self.cashflows).enumerate() {
            let mut row = vec![(t + 1).to_string()];
            row.extend(x.iter().map(format_rational));
            row.push(held.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(" "));
            row.push(format_rational(cash));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Holdings chosen by the online policy: at every step but the last, the
/// maximum-weight feasible set for `mean - X^t`.
pub fn online_decisions(m: &Matroid, mean: &[Rational], prices: &[Vec<Rational>]) -> Vec<StockSet> {
    let n = prices.len();
    prices
        .iter()
        .enumerate()
        .map(|(t, x)| {
            if t + 1 == n {
                return StockSet::empty();
            }
            let w: Vec<Rational> = mean.iter().zip(x).map(|(mu, p)| mu - p).collect();
            m.greedy(&w)
        })
        .collect()
}

/// Runs the online policy with the given mean on a realised price sequence.
pub fn online_trace(m: &Matroid, mean: &[Rational], prices: Vec<Vec<Rational>>) -> Result<Trace> {
    check_prices(m, &prices)?;
    if mean.len() != m.ground_size() {
        return Err(Error::input("mean vector length differs from the ground set size"));
    }
    let holdings = online_decisions(m, mean, &prices);
    Trace::execute(prices, holdings)
}

fn check_prices(m: &Matroid, prices: &[Vec<Rational>]) -> Result<()> {
    if prices.is_empty() {
        return Err(Error::input("need at least one price vector"));
    }
    match prices.iter().find(|x| x.len() != m.ground_size()) {
        Some(x) => Err(Error::input(format!(
            "price vector of length {} for a matroid on {} stocks",
            x.len(),
            m.ground_size()
        ))),
        None => Ok(()),
    }
}

/// The online policy on an i.i.d. instance, using the trial-0 streams.
pub fn run_online_iid(inst: &MarketInstance) -> Result<Trace> {
    if !matches!(inst.model, PriceModel::Iid(_)) {
        return Err(Error::input("run_online_iid needs an i.i.d. instance"));
    }
    run_policy(inst, Policy::OnlineIid, 0)
}

/// The online policy on a random-order instance, trading against the
/// mixture mean, using the trial-0 streams.
pub fn run_online_random_order(inst: &MarketInstance) -> Result<Trace> {
    if !matches!(inst.model, PriceModel::RandomOrder(_)) {
        return Err(Error::input("run_online_random_order needs a random-order instance"));
    }
    run_policy(inst, Policy::OnlineRandomOrder, 0)
}

/// Hindsight-optimal trading: at each step buy the maximum-weight feasible
/// set for `X^{t+1} - X^t`. Returns the trace and its profit.
pub fn run_offline_optimal(prices: Vec<Vec<Rational>>, m: &Matroid) -> Result<(Trace, Rational)> {
    check_prices(m, &prices)?;
    let holdings = offline_decisions(m, &prices);
    let trace = Trace::execute(prices, holdings)?;
    let profit = trace.total_profit.clone();
    Ok((trace, profit))
}

pub fn offline_decisions(m: &Matroid, prices: &[Vec<Rational>]) -> Vec<StockSet> {
    let mut holdings: Vec<StockSet> = prices
        .windows(2)
        .map(|pair| {
            let w: Vec<Rational> = pair[1].iter().zip(&pair[0]).map(|(next, now)| next - now).collect();
            m.greedy(&w)
        })
        .collect();
    holdings.push(StockSet::empty());
    holdings
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    OnlineIid,
    OnlineRandomOrder,
    Offline,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::OnlineIid => "online_iid",
            Policy::OnlineRandomOrder => "online_random_order",
            Policy::Offline => "offline",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs `policy` on the prices of trial `trial`.
pub fn run_policy(inst: &MarketInstance, policy: Policy, trial: u64) -> Result<Trace> {
    let (prices, _) = inst.draw_prices(trial);
    match (policy, &inst.model) {
        (Policy::OnlineIid, PriceModel::Iid(_)) | (Policy::OnlineRandomOrder, PriceModel::RandomOrder(_)) => {
            online_trace(&inst.matroid, &inst.policy_mean(), prices)
        }
        (Policy::Offline, _) => run_offline_optimal(prices, &inst.matroid).map(|(trace, _)| trace),
        (p, _) => Err(Error::input(format!("policy {p} does not apply to this price model"))),
    }
}

/// Aggregate of many independent trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloStats {
    pub trials: u64,
    pub mean_profit: f64,
    /// Sample standard deviation of the total profit over `sqrt(trials)`.
    pub stderr: f64,
    /// `mean_profit / (n - 1)`, or zero when `n = 1`.
    pub per_step_mean: f64,
    pub horizon: usize,
}

impl MonteCarloStats {
    pub fn per_step_stderr(&self) -> f64 {
        if self.horizon >= 2 {
            self.stderr / (self.horizon - 1) as f64
        } else {
            0.0
        }
    }

    fn from_profits(profits: &[f64], horizon: usize) -> Self {
        let trials = profits.len() as f64;
        let mean = profits.iter().sum::<f64>() / trials;
        let stderr = if profits.len() > 1 {
            let var = profits.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (trials - 1.0);
            (var / trials).sqrt()
        } else {
            0.0
        };
        let per_step_mean = if horizon >= 2 { mean / (horizon - 1) as f64 } else { 0.0 };
        MonteCarloStats {
            trials: profits.len() as u64,
            mean_profit: mean,
            stderr,
            per_step_mean,
            horizon,
        }
    }
}

/// Runs `trials` independent copies of `policy` in parallel. Trial `i` uses
/// the streams from [`trial_streams`]`(seed, i)`, and profits are reduced
/// in trial order, so the result does not depend on the thread count.
pub fn monte_carlo(inst: &MarketInstance, policy: Policy, trials: u64) -> Result<MonteCarloStats> {
    if trials == 0 {
        return Err(Error::input("monte carlo needs at least one trial"));
    }
    let profits = (0..trials)
        .into_par_iter()
        .map(|i| run_policy(inst, policy, i).map(|t| t.total_profit.to_f64().unwrap_or(f64::NAN)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(MonteCarloStats::from_profits(&profits, inst.horizon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn prices(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn coin() -> JointDiscreteDistribution {
        JointDiscreteDistribution::new(1, [(vec![int(0)], ratio(1, 2)), (vec![int(2)], ratio(1, 2))]).unwrap()
    }

    #[test]
    fn hand_traced_online_run() {
        let m = Matroid::uniform(1, 1).unwrap();
        let trace = online_trace(&m, &[int(1)], prices(&[&[0], &[2], &[0]])).unwrap();
        assert_eq!(
            trace.holdings,
            vec![StockSet::singleton(0), StockSet::empty(), StockSet::empty()]
        );
        assert_eq!(trace.cashflows, vec![int(0), int(2), int(0)]);
        assert_eq!(trace.total_profit, int(2));
    }

    #[test]
    fn deterministic_prices_earn_nothing() {
        let m = Matroid::uniform(3, 2).unwrap();
        let d = JointDiscreteDistribution::point_mass(vec![int(4), int(-1), ratio(1, 3)]).unwrap();
        for n in [1, 2, 7] {
            let inst = MarketInstance::iid(m.clone(), d.clone(), n, 11).unwrap();
            assert!(run_online_iid(&inst).unwrap().total_profit.is_zero());
        }
    }

    #[test]
    fn offline_examples() {
        let m = Matroid::uniform(2, 1).unwrap();
        let (trace, profit) = run_offline_optimal(prices(&[&[1, 4], &[3, 2], &[0, 5]]), &m).unwrap();
        assert_eq!(profit, int(5));
        assert_eq!(
            trace.holdings,
            vec![StockSet::singleton(0), StockSet::singleton(1), StockSet::empty()]
        );
        assert_eq!(run_offline_optimal(prices(&[&[1, 4]]), &m).unwrap().1, int(0));
        let single = Matroid::uniform(1, 1).unwrap();
        assert_eq!(run_offline_optimal(prices(&[&[9], &[7], &[7], &[2]]), &single).unwrap().1, int(0));
    }

    #[test]
    fn random_order_two_step_cases() {
        let m = Matroid::uniform(1, 1).unwrap();
        let low = JointDiscreteDistribution::point_mass(vec![int(0)]).unwrap();
        let high = JointDiscreteDistribution::point_mass(vec![int(2)]).unwrap();
        let inst = MarketInstance::random_order(m.clone(), vec![low, high], 0).unwrap();
        assert_eq!(*inst.policy_mean(), [int(1)]);
        let mut seen = std::collections::BTreeMap::new();
        for trial in 0..64 {
            let (p, order) = inst.draw_prices(trial);
            let profit = run_policy(&inst, Policy::OnlineRandomOrder, trial).unwrap().total_profit;
            let expected = if p[0][0].is_zero() { int(2) } else { int(0) };
            assert_eq!(profit, expected);
            seen.insert(order.unwrap(), profit);
        }
        assert_eq!(seen.len(), 2, "both orders should appear in 64 trials");
    }

    #[test]
    fn identical_distributions_match_iid() {
        let m = Matroid::uniform(1, 1).unwrap();
        let n = 5;
        let ro = MarketInstance::random_order(m.clone(), vec![coin(); n], 77).unwrap();
        let iid = MarketInstance::iid(m, coin(), n, 77).unwrap();
        assert_eq!(run_online_random_order(&ro).unwrap(), run_online_iid(&iid).unwrap());
    }

    #[test]
    fn wrong_model_is_rejected() {
        let m = Matroid::uniform(1, 1).unwrap();
        let iid = MarketInstance::iid(m.clone(), coin(), 3, 0).unwrap();
        assert!(run_online_random_order(&iid).is_err());
        let ro = MarketInstance::random_order(m, vec![coin(); 3], 0).unwrap();
        assert!(run_online_iid(&ro).is_err());
    }

    #[test]
    fn instance_validation() {
        let m = Matroid::uniform(2, 1).unwrap();
        assert!(MarketInstance::iid(m.clone(), coin(), 3, 0).is_err());
        let two = JointDiscreteDistribution::point_mass(vec![int(0), int(0)]).unwrap();
        assert!(MarketInstance::iid(m.clone(), two.clone(), 0, 0).is_err());
        assert!(MarketInstance::new(m, PriceModel::RandomOrder(vec![two.clone(), two]), 3, 0).is_err());
    }

    #[test]
    fn monte_carlo_zero_trials_and_point_mass() {
        let m = Matroid::uniform(1, 1).unwrap();
        let d = JointDiscreteDistribution::point_mass(vec![int(3)]).unwrap();
        let inst = MarketInstance::iid(m, d, 4, 5).unwrap();
        assert!(monte_carlo(&inst, Policy::OnlineIid, 0).is_err());
        for policy in [Policy::OnlineIid, Policy::Offline] {
            let stats = monte_carlo(&inst, policy, 50).unwrap();
            assert_eq!((stats.mean_profit, stats.stderr), (0.0, 0.0));
        }
    }

    #[test]
    fn trace_csv_layout() {
        let m = Matroid::uniform(2, 1).unwrap();
        let (trace, _) = run_offline_optimal(prices(&[&[1, 4], &[3, 2], &[0, 5]]), &m).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "step,price_1,price_2,held,cashflow\n1,1/1,4/1,1,-1/1\n2,3/1,2/1,2,1/1\n3,0/1,5/1,,5/1\n"
        );
    }
}
