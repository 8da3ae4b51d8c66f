//! Exact checks of the inequalities behind the competitive guarantees.
//!
//! Each check evaluates both sides in rationals and reports them, so a
//! failure can be inspected rather than just counted.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{exact_offline_per_step, exact_online_per_step};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::pricing::{product, MarginalDistribution, DEFAULT_JOINT_LIMIT};
use crate::rational::{positive_part, Rational, PQ};

/// Both sides of an inequality `lhs <= rhs` (or an equality) and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

impl InequalityCheck {
    pub(crate) fn at_most(lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs <= rhs;
        InequalityCheck { lhs, rhs, holds }
    }

    pub(crate) fn equal(lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs == rhs;
        InequalityCheck { lhs, rhs, holds }
    }
}

impl fmt::Display for InequalityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lhs {} rhs {} ({})", PQ(&self.lhs), PQ(&self.rhs), if self.holds { "holds" } else { "fails" })
    }
}

fn check_len(m: &Matroid, w: &[Rational]) -> Result<()> {
    if w.len() != m.ground_size() {
        return Err(Error::input(format!(
            "weight vector has length {}, matroid has {} elements",
            w.len(),
            m.ground_size()
        )));
    }
    Ok(())
}

/// `sum_e w(e)^+ <= d * top_M(w)` for a loopless matroid of density `d`.
pub fn check_density_lemma(m: &Matroid, w: &[Rational]) -> Result<InequalityCheck> {
    check_len(m, w)?;
    let lhs: Rational = w.iter().map(positive_part).sum();
    let rhs = m.density()? * m.top_unchecked(w);
    Ok(InequalityCheck::at_most(lhs, rhs))
}

/// `top_M(x' - x) <= top_M(-x) + sum_i x'_i + d * top_M(-x')`.
pub fn check_decomposition_lemma(m: &Matroid, x: &[Rational], x_next: &[Rational]) -> Result<InequalityCheck> {
    check_len(m, x)?;
    check_len(m, x_next)?;
    let diff: Vec<Rational> = x_next.iter().zip(x).map(|(b, a)| b - a).collect();
    let neg_x: Vec<Rational> = x.iter().map(|v| -v).collect();
    let neg_next: Vec<Rational> = x_next.iter().map(|v| -v).collect();
    let lhs = m.top_unchecked(&diff);
    let rhs = m.top_unchecked(&neg_x) + x_next.iter().sum::<Rational>() + m.density()? * m.top_unchecked(&neg_next);
    Ok(InequalityCheck::at_most(lhs, rhs))
}

/// `sum_S min(|S|, l) prod_{s in S} a_s prod_{s not in S} (1 - a_s)`.
///
/// This is `E[min(Z, l)]` for `Z` a sum of independent Bernoulli(`a_s`),
/// so the subset sum is evaluated through the distribution of `Z`.
pub fn capped_subset_sum(capacity: usize, a: &[Rational]) -> Rational {
    let mut count = vec![Rational::one()];
    for p in a {
        let q = Rational::one() - p;
        let mut next = vec![Rational::zero(); count.len() + 1];
        for (c, mass) in count.iter().enumerate() {
            next[c] += mass * &q;
            next[c + 1] += mass * p;
        }
        count = next;
    }
    count
        .iter()
        .enumerate()
        .map(|(c, mass)| mass * Rational::from_integer(c.min(capacity).into()))
        .sum()
}

/// `2 sum_s a_s - (2/(k-1)) sum_{s<s'} a_s a_s'`, for `k >= 2`.
fn pair_penalised_sum(a: &[Rational]) -> Rational {
    let k = a.len();
    let total: Rational = a.iter().sum();
    let squares: Rational = a.iter().map(|x| x * x).sum();
    // sum_{s<s'} a_s a_s' = ((sum a)^2 - sum a^2) / 2
    let pairs = (&total * &total - squares) / Rational::from_integer(2.into());
    Rational::from_integer(2.into()) * total - pairs * Rational::new(2.into(), (k - 1).into())
}

/// `max{2, k/l} * capped_subset_sum(l, a) >= 2 sum a - (2/(k-1)) sum_{s<s'} a_s a_s'`.
///
/// In the returned check `lhs` is the right-hand side above, so `holds`
/// keeps its `lhs <= rhs` meaning.
pub fn check_polynomial_inequality(k: usize, capacity: usize, a: &[Rational]) -> Result<InequalityCheck> {
    if k < 2 {
        return Err(Error::precondition(format!("the inequality needs k >= 2, got {k}")));
    }
    if a.len() != k {
        return Err(Error::input(format!("expected {k} values, got {}", a.len())));
    }
    if capacity == 0 || capacity > k {
        return Err(Error::input(format!("capacity must be in 1..={k}, got {capacity}")));
    }
    if let Some(bad) = a.iter().find(|x| x.is_negative() || **x > Rational::one()) {
        return Err(Error::input(format!("value {} outside [0, 1]", PQ(bad))));
    }
    let factor = Rational::from_integer(2.into()).max(Rational::new(k.into(), capacity.into()));
    Ok(InequalityCheck::at_most(
        pair_penalised_sum(a),
        factor * capped_subset_sum(capacity, a),
    ))
}

/// `0` followed by the sorted distinct positive values of `-X_s` over all
/// stocks. Between consecutive breakpoints every `Pr[-X_s >= x]` is constant.
pub fn negated_breakpoints(marginals: &[MarginalDistribution]) -> Vec<Rational> {
    let mut points: Vec<Rational> = marginals
        .iter()
        .flat_map(|m| m.atoms().iter().map(|x| -x))
        .filter(|x| x.is_positive())
        .collect();
    points.sort();
    points.dedup();
    points.insert(0, Rational::zero());
    points
}

/// `int_0^inf f(Pr[-X_1 >= x], ..., Pr[-X_k >= x]) dx` as an exact sum over
/// breakpoints. On `(b_{i-1}, b_i]` the probabilities equal their value at `b_i`,
/// and past the last breakpoint they vanish.
fn breakpoint_integral(marginals: &[MarginalDistribution], f: impl Fn(&[Rational]) -> Rational) -> Rational {
    let points = negated_breakpoints(marginals);
    points
        .windows(2)
        .map(|w| {
            let a: Vec<Rational> = marginals.iter().map(|m| m.prob_negated_at_least(&w[1])).collect();
            (&w[1] - &w[0]) * f(&a)
        })
        .sum()
}

/// The offline upper bound `int_0^inf (2 sum_s a_s(x) - (2/(k-1)) sum_{s<s'} a_s(x) a_s'(x)) dx`
/// with `a_s(x) = Pr[-X_s >= x]`.
pub fn uniform_offline_breakpoint_bound(marginals: &[MarginalDistribution]) -> Result<Rational> {
    if marginals.len() < 2 {
        return Err(Error::precondition(format!(
            "the offline bound needs at least two stocks, got {}",
            marginals.len()
        )));
    }
    Ok(breakpoint_integral(marginals, pair_penalised_sum))
}

/// `int_0^inf sum_S min(|S|, l) prod a_s(x) prod (1 - a_s'(x)) dx`.
pub fn uniform_online_breakpoint_sum(marginals: &[MarginalDistribution], capacity: usize) -> Rational {
    breakpoint_integral(marginals, |a| capped_subset_sum(capacity, a))
}

fn require_zero_mean(marginals: &[MarginalDistribution]) -> Result<()> {
    if let Some((s, m)) = marginals.iter().enumerate().find(|(_, m)| !m.mean().is_zero()) {
        return Err(Error::precondition(format!(
            "stock {s} has mean {}; shift the instance to zero expectation first",
            PQ(&m.mean())
        )));
    }
    Ok(())
}

/// `E[top_l'(X' - X)] <= ` the breakpoint bound, for independent zero-mean stocks.
pub fn check_uniform_offline_bound(
    marginals: &[MarginalDistribution],
    offline_capacity: usize,
) -> Result<InequalityCheck> {
    require_zero_mean(marginals)?;
    let rhs = uniform_offline_breakpoint_bound(marginals)?;
    let d = product(marginals, DEFAULT_JOINT_LIMIT)?;
    let lhs = exact_offline_per_step(&Matroid::uniform(marginals.len(), offline_capacity)?, &d)?;
    Ok(InequalityCheck::at_most(lhs, rhs))
}

/// `E[top_l(mu - X)]` equals the breakpoint sum, for independent zero-mean stocks.
pub fn check_uniform_online_formula(marginals: &[MarginalDistribution], capacity: usize) -> Result<InequalityCheck> {
    require_zero_mean(marginals)?;
    let d = product(marginals, DEFAULT_JOINT_LIMIT)?;
    let lhs = exact_online_per_step(&Matroid::uniform(marginals.len(), capacity)?, &d)?;
    Ok(InequalityCheck::equal(lhs, uniform_online_breakpoint_sum(marginals, capacity)))
}
