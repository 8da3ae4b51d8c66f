//! Trading prophets over matroids.
//!
//! A trader holds a feasible set of a matroid over `k` stocks while price
//! vectors arrive one step at a time. This crate provides
//!
//! * the [`matroid`] representations and Kruskal's greedy algorithm,
//! * discrete price distributions and hardness instances in [`pricing`],
//! * trace-level simulation of the online and hindsight-optimal policies in
//!   [`engine`],
//! * exact per-step values, competitive ratios and lemma checks in
//!   [`analytics`].
//!
//! Arithmetic is exact throughout: prices, probabilities and expectations
//! are [`Rational`]s. Stocks are numbered from zero.
//!
//! ```
//! use trading_prophet::{analytics, pricing, Matroid, rational::ratio};
//!
//! let m = Matroid::uniform(2, 1)?;
//! let stocks = pricing::uniform_ratio_hardness_instance(2, &ratio(1, 2))?;
//! let d = pricing::product(&stocks, pricing::DEFAULT_JOINT_LIMIT)?;
//! let report = analytics::exact_ratio(&m, &d, analytics::uniform_guarantee(2, 1))?;
//! assert_eq!(report.ratio, Some(ratio(6, 7)));
//! assert!(report.satisfied);
//! # Ok::<(), trading_prophet::Error>(())
//! ```

pub mod analytics;
pub mod certify;
pub mod corpus;
pub mod engine;
mod error;
pub mod matroid;
pub mod pricing;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use matroid::{Matroid, StockSet, WeightVector};
pub use pricing::{JointDiscreteDistribution, MarginalDistribution, MeanVector};
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matroids.md")]
    mod matroids {}
    #[doc = include_str!("../../../book/src/prices.md")]
    mod prices {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/random_order.md")]
    mod random_order {}
    #[doc = include_str!("../../../book/src/hardness.md")]
    mod hardness {}
    #[doc = include_str!("../../../book/src/certify.md")]
    mod certify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
