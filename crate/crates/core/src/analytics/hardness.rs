//! Exact ratios of the hardness instances along a decreasing `epsilon` schedule.

use num_traits::Signed;

use super::{exact_ratio_augmented, uniform_guarantee, RatioReport};
use crate::error::{Error, Result};
use crate::matroid::{matroid_guarantee, Matroid};
use crate::pricing::{
    half_hardness_instance, matroid_hardness_instance, product, uniform_ratio_hardness_instance,
    JointDiscreteDistribution, DEFAULT_JOINT_LIMIT,
};
use crate::rational::{Rational, PQ};

/// A family of instances indexed by `epsilon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HardnessFamily {
    /// The correlated instance placed on a densest set of the matroid;
    /// all other stocks are constant zero. Ratio tends to `1/(1+d)`.
    Matroid(Matroid),
    /// Independent `{0, 1/eps}` stocks. Ratio tends to `l/k`.
    UniformRatio { k: usize, capacity: usize, offline_capacity: usize },
    /// Independent `{-1/eps, 0, 1/eps}` stocks. Ratio tends to `1/2`.
    Half { k: usize, capacity: usize, offline_capacity: usize },
}

impl HardnessFamily {
    pub fn name(&self) -> &'static str {
        match self {
            HardnessFamily::Matroid(_) => "matroid",
            HardnessFamily::UniformRatio { .. } => "uniform-ratio",
            HardnessFamily::Half { .. } => "half",
        }
    }

    /// Number of stocks the instance varies on; the margin scales with it.
    pub fn active_stocks(&self) -> Result<usize> {
        match self {
            HardnessFamily::Matroid(m) => Ok(m.densest_set()?.len()),
            HardnessFamily::UniformRatio { k, .. } | HardnessFamily::Half { k, .. } => Ok(*k),
        }
    }

    /// The value the ratio approaches as `epsilon` goes to zero.
    pub fn limit(&self) -> Result<Rational> {
        match self {
            HardnessFamily::Matroid(m) => matroid_guarantee(m),
            HardnessFamily::UniformRatio { k, capacity, .. } => Ok(Rational::new((*capacity).into(), (*k).into())),
            HardnessFamily::Half { .. } => Ok(Rational::new(1.into(), 2.into())),
        }
    }

    fn matroids(&self) -> Result<(Matroid, Matroid)> {
        match self {
            HardnessFamily::Matroid(m) => Ok((m.clone(), m.clone())),
            HardnessFamily::UniformRatio {
                k,
                capacity,
                offline_capacity,
            }
            | HardnessFamily::Half {
                k,
                capacity,
                offline_capacity,
            } => {
                if *offline_capacity == 0 || offline_capacity > capacity {
                    return Err(Error::input(format!(
                        "offline capacity must be in 1..={capacity}, got {offline_capacity}"
                    )));
                }
                Ok((Matroid::uniform(*k, *capacity)?, Matroid::uniform(*k, *offline_capacity)?))
            }
        }
    }

    fn bound(&self) -> Result<Rational> {
        match self {
            HardnessFamily::Matroid(m) => matroid_guarantee(m),
            HardnessFamily::UniformRatio { k, capacity, .. } | HardnessFamily::Half { k, capacity, .. } => {
                Ok(uniform_guarantee(*k, *capacity))
            }
        }
    }

    /// The instance at a given `epsilon`.
    pub fn instance(&self, eps: &Rational) -> Result<JointDiscreteDistribution> {
        match self {
            HardnessFamily::Matroid(m) => {
                let dense = m.densest_set()?;
                let r = m.rank(dense)?;
                let coords: Vec<usize> = dense.iter().collect();
                matroid_hardness_instance(coords.len(), r, eps)?.embed(m.ground_size(), &coords)
            }
            HardnessFamily::UniformRatio { k, .. } => {
                product(&uniform_ratio_hardness_instance(*k, eps)?, DEFAULT_JOINT_LIMIT)
            }
            HardnessFamily::Half { k, .. } => product(&half_hardness_instance(*k, eps)?, DEFAULT_JOINT_LIMIT),
        }
    }
}

/// One exact evaluation of a hardness family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPoint {
    pub epsilon: Rational,
    pub report: RatioReport,
    /// `|ratio - limit|`.
    pub gap: Rational,
    /// `5 * epsilon * k` with `k` the number of active stocks.
    pub margin: Rational,
}

impl SweepPoint {
    pub fn within_margin(&self) -> bool {
        self.gap <= self.margin
    }
}

/// Exact ratios over an `epsilon` schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub family: &'static str,
    pub limit: Rational,
    pub points: Vec<SweepPoint>,
}

impl Sweep {
    /// Ratios strictly decrease along the schedule.
    pub fn monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| matches!((&w[0].report.ratio, &w[1].report.ratio), (Some(a), Some(b)) if b < a))
    }

    pub fn all_within_margin(&self) -> bool {
        self.points.iter().all(SweepPoint::within_margin)
    }
}

/// Evaluates `family` at each `epsilon`, which must be strictly decreasing.
pub fn hardness_sweep(family: &HardnessFamily, epsilons: &[Rational]) -> Result<Sweep> {
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::input("epsilon schedule must be strictly decreasing"));
    }
    let (online, offline) = family.matroids()?;
    let limit = family.limit()?;
    let bound = family.bound()?;
    let active = Rational::from_integer((5 * family.active_stocks()?).into());
    let points = epsilons
        .iter()
        .map(|eps| {
            let d = family.instance(eps)?;
            let report = exact_ratio_augmented(&online, &offline, &d, bound.clone())?;
            let ratio = report.ratio.clone().ok_or_else(|| {
                Error::precondition(format!("offline value vanished at epsilon {}", PQ(eps)))
            })?;
            Ok(SweepPoint {
                epsilon: eps.clone(),
                gap: (ratio - &limit).abs(),
                margin: &active * eps,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        family: family.name(),
        limit,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn schedule() -> Vec<Rational> {
        vec![ratio(1, 10), ratio(1, 100), ratio(1, 1000)]
    }

    #[test]
    fn matroid_family_on_uniform_four_two() {
        let sweep = hardness_sweep(&HardnessFamily::Matroid(Matroid::uniform(4, 2).unwrap()), &schedule()).unwrap();
        assert_eq!(sweep.limit, ratio(1, 3));
        assert!(sweep.monotone() && sweep.all_within_margin(), "{sweep:?}");
        for p in &sweep.points {
            let k_eps = int(4) * &p.epsilon;
            assert_eq!(p.report.online_per_step, int(2) * (int(1) - &k_eps / (int(1) + &k_eps)));
            assert!(p.report.satisfied);
        }
    }

    #[test]
    fn matroid_family_embeds_into_larger_ground_set() {
        // A triangle plus a pendant edge: the triangle is the densest set.
        let m = Matroid::graphic(vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let sweep = hardness_sweep(&HardnessFamily::Matroid(m), &schedule()).unwrap();
        assert_eq!(sweep.limit, ratio(2, 5));
        assert!(sweep.monotone() && sweep.all_within_margin(), "{sweep:?}");
    }

    #[test]
    fn uniform_families() {
        let quarter = HardnessFamily::UniformRatio {
            k: 4,
            capacity: 1,
            offline_capacity: 1,
        };
        let s = hardness_sweep(&quarter, &schedule()).unwrap();
        assert_eq!(s.limit, ratio(1, 4));
        assert!(s.monotone() && s.all_within_margin(), "{s:?}");

        let half = HardnessFamily::Half {
            k: 4,
            capacity: 2,
            offline_capacity: 2,
        };
        let s = hardness_sweep(&half, &schedule()).unwrap();
        assert!(s.monotone() && s.all_within_margin(), "{s:?}");
    }

    #[test]
    fn spot_value() {
        let fam = HardnessFamily::UniformRatio {
            k: 2,
            capacity: 1,
            offline_capacity: 1,
        };
        let s = hardness_sweep(&fam, &[ratio(1, 2)]).unwrap();
        assert_eq!(s.points[0].report.ratio, Some(ratio(6, 7)));
    }

    #[test]
    fn rejects_bad_schedules() {
        let fam = HardnessFamily::Half {
            k: 2,
            capacity: 1,
            offline_capacity: 1,
        };
        assert!(hardness_sweep(&fam, &[ratio(1, 100), ratio(1, 10)]).is_err());
        assert!(hardness_sweep(&fam, &[ratio(1, 2)]).is_err());
    }
}
