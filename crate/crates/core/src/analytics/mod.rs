//! Exact per-step expected profits and competitive ratios.
//!
//! Over a horizon of `n` steps both players earn `n - 1` identically
//! distributed per-step profits, so all comparisons are made per step:
//!
//! * online: `E[top_M(mu - X)]`,
//! * offline: `E[top_M(X' - X)]` for independent copies `X, X'`.
//!
//! Everything here is exact rational arithmetic over finite supports.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matroid::{matroid_guarantee, Matroid};
use crate::pricing::{product, JointDiscreteDistribution, MarginalDistribution, DEFAULT_JOINT_LIMIT};
use crate::rational::{Rational, PQ};

mod hardness;
mod lemmas;
mod pairs;
mod random_order;

pub use hardness::{hardness_sweep, HardnessFamily, Sweep, SweepPoint};
pub use lemmas::{
    capped_subset_sum, check_decomposition_lemma, check_density_lemma, check_polynomial_inequality,
    check_uniform_offline_bound, check_uniform_online_formula, negated_breakpoints, InequalityCheck, uniform_offline_breakpoint_bound,
    uniform_online_breakpoint_sum,
};
pub use pairs::PAIR_LIMIT;
pub use random_order::{
    check_random_order_guarantee, exact_random_order_offline, exact_random_order_online, leave_one_out_means,
    mean_discrepancy, mixture_pair_offline, random_order_guarantee, RandomOrderCertificate,
};

/// `E[top_M(mu - X)]`: the per-step profit of the online policy.
pub fn exact_online_per_step(m: &Matroid, d: &JointDiscreteDistribution) -> Result<Rational> {
    check_dims(m, d)?;
    let mu = d.mean();
    Ok(online_value_with_mean(m, d, &mu))
}

pub(crate) fn online_value_with_mean(m: &Matroid, d: &JointDiscreteDistribution, mu: &[Rational]) -> Rational {
    let mut w = vec![Rational::zero(); m.ground_size()];
    d.iter()
        .map(|(atom, p)| {
            for ((wi, mi), xi) in w.iter_mut().zip(mu).zip(atom) {
                *wi = mi - xi;
            }
            p * m.top_unchecked(&w)
        })
        .sum()
}

/// `E[top_M(X' - X)]`: the per-step profit of the hindsight-optimal player.
pub fn exact_offline_per_step(m: &Matroid, d: &JointDiscreteDistribution) -> Result<Rational> {
    check_dims(m, d)?;
    pairs::pair_top_expectation(m, d, d)
}

fn check_dims(m: &Matroid, d: &JointDiscreteDistribution) -> Result<()> {
    if m.ground_size() == d.k() {
        Ok(())
    } else {
        Err(Error::input(format!(
            "distribution over {} stocks paired with a matroid on {}",
            d.k(),
            m.ground_size()
        )))
    }
}

/// Online and offline per-step values compared against a guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub online_per_step: Rational,
    pub offline_per_step: Rational,
    /// `online / offline`, or `None` when the offline value is zero.
    pub ratio: Option<Rational>,
    pub bound: Rational,
    /// `online >= bound * offline`. Holds by convention when both are zero.
    pub satisfied: bool,
}

impl RatioReport {
    pub fn new(online: Rational, offline: Rational, bound: Rational) -> Self {
        let ratio = (!offline.is_zero()).then(|| &online / &offline);
        let satisfied = offline.is_zero() || online >= &bound * &offline;
        RatioReport {
            online_per_step: online,
            offline_per_step: offline,
            ratio,
            bound,
            satisfied,
        }
    }
}

impl fmt::Display for RatioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "online {} offline {} ratio {} bound {} {}",
            PQ(&self.online_per_step),
            PQ(&self.offline_per_step),
            self.ratio.as_ref().map_or("undefined".to_string(), |r| PQ(r).to_string()),
            PQ(&self.bound),
            if self.satisfied { "satisfied" } else { "VIOLATED" }
        )
    }
}

/// Exact online/offline values on one matroid, compared against `bound`.
pub fn exact_ratio(m: &Matroid, d: &JointDiscreteDistribution, bound: Rational) -> Result<RatioReport> {
    exact_ratio_augmented(m, m, d, bound)
}

/// As [`exact_ratio`], but the offline player is constrained by its own
/// matroid (resource augmentation: a smaller offline capacity).
pub fn exact_ratio_augmented(
    online: &Matroid,
    offline: &Matroid,
    d: &JointDiscreteDistribution,
    bound: Rational,
) -> Result<RatioReport> {
    let on = exact_online_per_step(online, d)?;
    let off = exact_offline_per_step(offline, d)?;
    Ok(RatioReport::new(on, off, bound))
}

/// `min{1/2, l/k}`, the guarantee for independent stocks under capacity `l`.
pub fn uniform_guarantee(k: usize, capacity: usize) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    let share = Rational::new(capacity.into(), k.into());
    half.min(share)
}

/// The density guarantee `1/(1+d)` checked exactly on `d`.
pub fn check_matroid_guarantee(m: &Matroid, d: &JointDiscreteDistribution) -> Result<RatioReport> {
    exact_ratio(m, d, matroid_guarantee(m)?)
}

/// The `min{1/2, l/k}` guarantee for independent stocks: the online player
/// holds up to `capacity` stocks, the offline player up to
/// `offline_capacity <= capacity`.
pub fn check_uniform_guarantee(
    marginals: &[MarginalDistribution],
    capacity: usize,
    offline_capacity: usize,
) -> Result<RatioReport> {
    let k = marginals.len();
    if offline_capacity == 0 || offline_capacity > capacity {
        return Err(Error::input(format!(
            "offline capacity must be in 1..={capacity}, got {offline_capacity}"
        )));
    }
    let d = product(marginals, DEFAULT_JOINT_LIMIT)?;
    exact_ratio_augmented(
        &Matroid::uniform(k, capacity)?,
        &Matroid::uniform(k, offline_capacity)?,
        &d,
        uniform_guarantee(k, capacity),
    )
}

pub(crate) fn one_over(n: usize) -> Rational {
    Rational::new(One::one(), n.into())
}

pub(crate) fn abs(x: &Rational) -> Rational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricing::{matroid_hardness_instance, uniform_ratio_hardness_instance};
    use crate::rational::{int, ratio};

    fn coin() -> JointDiscreteDistribution {
        JointDiscreteDistribution::new(1, [(vec![int(0)], ratio(1, 2)), (vec![int(2)], ratio(1, 2))]).unwrap()
    }

    #[test]
    fn point_mass_is_worthless() {
        let m = Matroid::uniform(2, 1).unwrap();
        let d = JointDiscreteDistribution::point_mass(vec![int(3), ratio(-1, 2)]).unwrap();
        assert_eq!(exact_online_per_step(&m, &d).unwrap(), int(0));
        assert_eq!(exact_offline_per_step(&m, &d).unwrap(), int(0));
        let r = exact_ratio(&m, &d, ratio(1, 3)).unwrap();
        assert!(r.ratio.is_none() && r.satisfied);
    }

    #[test]
    fn single_stock_coin() {
        let m = Matroid::uniform(1, 1).unwrap();
        assert_eq!(exact_offline_per_step(&m, &coin()).unwrap(), ratio(1, 2));
        assert_eq!(exact_online_per_step(&m, &coin()).unwrap(), ratio(1, 2));
    }

    #[test]
    fn two_stock_uniform_ratio_instance() {
        let marginals = uniform_ratio_hardness_instance(2, &ratio(1, 2)).unwrap();
        let d = product(&marginals, DEFAULT_JOINT_LIMIT).unwrap();
        let m = Matroid::uniform(2, 1).unwrap();
        assert_eq!(exact_online_per_step(&m, &d).unwrap(), ratio(3, 4));
        assert_eq!(exact_offline_per_step(&m, &d).unwrap(), ratio(7, 8));
        let r = exact_ratio(&m, &d, uniform_guarantee(2, 1)).unwrap();
        assert_eq!(r.ratio, Some(ratio(6, 7)));
        assert_eq!(r.bound, ratio(1, 2));
        assert!(r.satisfied);
        assert_eq!(check_uniform_guarantee(&marginals, 1, 1).unwrap(), r);
    }

    #[test]
    fn matroid_hardness_online_value() {
        let m = Matroid::uniform(4, 2).unwrap();
        for eps in [ratio(1, 10), ratio(1, 100), ratio(1, 1000)] {
            let d = matroid_hardness_instance(4, 2, &eps).unwrap();
            let k_eps = int(4) * &eps;
            let expected = int(2) * (int(1) - &k_eps / (int(1) + &k_eps));
            assert_eq!(exact_online_per_step(&m, &d).unwrap(), expected);
        }
    }

    #[test]
    fn matroid_hardness_tightness_probe() {
        let m = Matroid::uniform(4, 2).unwrap();
        let d = matroid_hardness_instance(4, 2, &ratio(1, 1000)).unwrap();
        let r = check_matroid_guarantee(&m, &d).unwrap();
        assert_eq!(r.bound, ratio(1, 3));
        assert!(r.satisfied);
        assert!(r.ratio.unwrap() <= ratio(1, 3) + ratio(1, 100));
    }

    #[test]
    fn ratio_report_violation() {
        let r = RatioReport::new(int(1), int(4), ratio(1, 2));
        assert_eq!(r.ratio, Some(ratio(1, 4)));
        assert!(!r.satisfied);
        assert!(r.to_string().contains("VIOLATED"));
    }

    #[test]
    fn dimension_mismatch() {
        let m = Matroid::uniform(2, 1).unwrap();
        assert!(exact_online_per_step(&m, &coin()).is_err());
        assert!(exact_offline_per_step(&m, &coin()).is_err());
    }

    #[test]
    fn guarantee_values() {
        assert_eq!(uniform_guarantee(4, 1), ratio(1, 4));
        assert_eq!(uniform_guarantee(4, 3), ratio(1, 2));
        assert!(check_uniform_guarantee(&uniform_ratio_hardness_instance(2, &ratio(1, 2)).unwrap(), 1, 2).is_err());
    }
}
