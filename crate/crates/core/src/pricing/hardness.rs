//! Instances on which no online policy beats the competitive guarantees.
//!
//! Each generator is parameterised by a small `epsilon`; the online/offline
//! ratio of the generated instance tends to the matching guarantee as
//! `epsilon` goes to zero.

use num_traits::{One, Signed, Zero};

use super::{JointDiscreteDistribution, MarginalDistribution};
use crate::error::{Error, Result};
use crate::rational::{Rational, PQ};

fn check_epsilon(eps: &Rational, upper: Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= upper {
        return Err(Error::input(format!(
            "epsilon must lie in (0, {}), got {}",
            PQ(&upper),
            PQ(eps)
        )));
    }
    Ok(())
}

/// Correlated instance over `k` stocks of a matroid restriction with rank
/// `r`, whose ratio tends to `r / (k + r)`:
///
/// * all zeros with probability `1 - eps`,
/// * all `-1/eps` with probability `eps - k eps^2 / (1 + k eps)`,
/// * `1/eps^2` on stock `s` and zero elsewhere, with probability
///   `eps^2 / (1 + k eps)` for each `s`.
///
/// The mean is the zero vector. `r` does not change the atoms; it is
/// checked against `k` so callers pair the instance with a matching matroid.
pub fn matroid_hardness_instance(k: usize, r: usize, eps: &Rational) -> Result<JointDiscreteDistribution> {
    if k == 0 || r == 0 || r > k {
        return Err(Error::input(format!("need 1 <= r <= k, got k = {k}, r = {r}")));
    }
    let kr = Rational::from_integer(k.into());
    let one = Rational::one();
    let spread = &one + &kr * eps;
    let p_zero = &one - eps;
    let p_crash = eps - &kr * eps * eps / &spread;
    let p_spike = eps * eps / &spread;
    for (label, p) in [("all-zero", &p_zero), ("crash", &p_crash), ("spike", &p_spike)] {
        if !p.is_positive() {
            return Err(Error::input(format!(
                "epsilon {} gives the {label} atom probability {}",
                PQ(eps),
                PQ(p)
            )));
        }
    }
    let crash = -eps.recip();
    let spike = (eps * eps).recip();
    let mut entries = vec![
        (vec![Rational::zero(); k], p_zero),
        (vec![crash; k], p_crash),
    ];
    for s in 0..k {
        let mut atom = vec![Rational::zero(); k];
        atom[s] = spike.clone();
        entries.push((atom, p_spike.clone()));
    }
    JointDiscreteDistribution::new(k, entries)
}

/// `k` independent stocks, each `0` w.p. `1 - eps` and `1/eps` w.p. `eps`
/// (mean one). The ratio tends to `l / k` for capacity `l`.
pub fn uniform_ratio_hardness_instance(k: usize, eps: &Rational) -> Result<Vec<MarginalDistribution>> {
    if k == 0 {
        return Err(Error::input("need at least one stock"));
    }
    check_epsilon(eps, Rational::one())?;
    let marginal = MarginalDistribution::new([
        (Rational::zero(), Rational::one() - eps),
        (eps.recip(), eps.clone()),
    ])?;
    Ok(vec![marginal; k])
}

/// `k` independent stocks, each `-1/eps` w.p. `eps`, `0` w.p. `1 - 2 eps`
/// and `1/eps` w.p. `eps` (mean zero). The ratio tends to one half.
pub fn half_hardness_instance(k: usize, eps: &Rational) -> Result<Vec<MarginalDistribution>> {
    if k == 0 {
        return Err(Error::input("need at least one stock"));
    }
    check_epsilon(eps, Rational::new(1.into(), 2.into()))?;
    let two = Rational::from_integer(2.into());
    let marginal = MarginalDistribution::new([
        (-eps.recip(), eps.clone()),
        (Rational::zero(), Rational::one() - two * eps),
        (eps.recip(), eps.clone()),
    ])?;
    Ok(vec![marginal; k])
}
