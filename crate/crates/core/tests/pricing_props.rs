mod common;

use common::rng;
use num_traits::{One, Zero};
use proptest::prelude::*;
use trading_prophet::corpus::{random_joint, random_marginal};
use trading_prophet::pricing::{
    mixture, product, uniform_mixture, JointDiscreteDistribution, MarginalDistribution, MeanVector,
    DEFAULT_JOINT_LIMIT,
};
use trading_prophet::rational::{int, ratio, Rational};
use trading_prophet::Error;

fn joint() -> impl Strategy<Value = JointDiscreteDistribution> {
    (any::<u64>(), 1usize..=4, 1usize..=8).prop_map(|(seed, k, atoms)| random_joint(&mut rng(seed), k, atoms))
}

fn marginals() -> impl Strategy<Value = Vec<MarginalDistribution>> {
    (any::<u64>(), 1usize..=4).prop_map(|(seed, k)| {
        let mut r = rng(seed);
        (0..k).map(|_| random_marginal(&mut r, 4)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn probabilities_sum_to_one(d in joint()) {
        prop_assert_eq!(d.probs().iter().sum::<Rational>(), Rational::one());
        prop_assert!(d.probs().iter().all(|p| *p > Rational::zero()));
    }

    #[test]
    fn shift_is_invertible(d in joint(), seed in any::<u64>()) {
        let v = trading_prophet::corpus::random_weights(&mut rng(seed), d.k());
        let back: Vec<Rational> = v.iter().map(|x| -x).collect();
        prop_assert_eq!(d.shift(&v).unwrap().shift(&back).unwrap(), d);
    }

    #[test]
    fn centering_gives_zero_mean(d in joint()) {
        prop_assert!(d.centered().is_zero_mean());
        prop_assert_eq!(d.shift(&MeanVector::zero(d.k())).unwrap(), d);
    }

    #[test]
    fn product_marginals_recover_inputs(ms in marginals()) {
        let d = product(&ms, DEFAULT_JOINT_LIMIT).unwrap();
        for (s, m) in ms.iter().enumerate() {
            prop_assert_eq!(&d.marginal(s).unwrap(), m);
        }
    }

    #[test]
    fn mixture_mean_is_average(a in joint(), seed in any::<u64>()) {
        let b = random_joint(&mut rng(seed), a.k(), 5);
        let mix = uniform_mixture(&[a.clone(), b.clone()]).unwrap();
        let expected: Vec<Rational> = a.mean().iter().zip(b.mean().iter()).map(|(x, y)| (x + y) / int(2)).collect();
        prop_assert_eq!(mix.mean().into_inner(), expected);
        prop_assert_eq!(mixture(&[a.clone(), a.clone()], &[ratio(1, 2), ratio(1, 2)]).unwrap(), a);
    }
}

#[test]
fn mean_examples() {
    let d = JointDiscreteDistribution::point_mass(vec![int(0), int(0)]).unwrap();
    assert!(d.mean().is_zero());
    let coin = JointDiscreteDistribution::new(1, [(vec![int(0)], ratio(1, 2)), (vec![int(2)], ratio(1, 2))]).unwrap();
    assert_eq!(coin.mean().into_inner(), vec![int(1)]);
}

#[test]
fn shift_example() {
    let d = JointDiscreteDistribution::point_mass(vec![int(3), int(1)]).unwrap();
    let z = d.shift(&[int(3), int(1)]).unwrap();
    assert_eq!(z.atoms(), &[vec![int(0), int(0)]]);
    assert!(d.shift(&[int(1)]).is_err());
}

#[test]
fn product_examples() {
    let coin = MarginalDistribution::new([(int(0), ratio(1, 2)), (int(2), ratio(1, 2))]).unwrap();
    let d = product(&[coin.clone(), coin], DEFAULT_JOINT_LIMIT).unwrap();
    assert_eq!(d.len(), 4);
    assert!(d.probs().iter().all(|p| *p == ratio(1, 4)));
    let single = product(&[MarginalDistribution::point_mass(int(5))], DEFAULT_JOINT_LIMIT).unwrap();
    assert_eq!(single.atoms(), &[vec![int(5)]]);
    let ten = MarginalDistribution::new((0..10).map(|i| (int(i), ratio(1, 10)))).unwrap();
    assert!(matches!(
        product(&[ten.clone(), ten.clone(), ten], 500),
        Err(Error::Capacity { size: 1000, limit: 500, .. })
    ));
}

#[test]
fn mixture_example() {
    let low = JointDiscreteDistribution::point_mass(vec![int(0)]).unwrap();
    let high = JointDiscreteDistribution::point_mass(vec![int(2)]).unwrap();
    let mix = mixture(&[low.clone(), high.clone()], &[ratio(1, 2), ratio(1, 2)]).unwrap();
    let coin = JointDiscreteDistribution::new(1, [(vec![int(0)], ratio(1, 2)), (vec![int(2)], ratio(1, 2))]).unwrap();
    assert_eq!(mix, coin);
    assert!(mixture(&[low, high], &[ratio(1, 2), ratio(1, 3)]).is_err());
}

#[test]
fn invalid_distributions_are_rejected() {
    assert!(JointDiscreteDistribution::new(1, [(vec![int(0)], ratio(1, 2))]).is_err());
    assert!(JointDiscreteDistribution::new(1, [(vec![int(0)], int(0)), (vec![int(1)], int(1))]).is_err());
    assert!(JointDiscreteDistribution::new(2, [(vec![int(0)], int(1))]).is_err());
}

#[test]
fn sampling_frequencies_and_determinism() {
    use rand::SeedableRng;
    let coin = JointDiscreteDistribution::new(1, [(vec![int(0)], ratio(1, 2)), (vec![int(2)], ratio(1, 2))]).unwrap();
    let draws = 100_000;
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let heads = (0..draws).filter(|_| coin.sample_index(&mut r) == 1).count() as f64;
    // Binomial standard error of the frequency is sqrt(p(1-p)/n).
    let stderr = (0.25f64 / draws as f64).sqrt();
    assert!((heads / draws as f64 - 0.5).abs() <= 3.0 * stderr);

    let seq = |seed| {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..50).map(|_| coin.sample_index(&mut r)).collect::<Vec<_>>()
    };
    assert_eq!(seq(9), seq(9));
    let point = JointDiscreteDistribution::point_mass(vec![int(7)]).unwrap();
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    assert!((0..20).all(|_| point.sample(&mut r) == [int(7)]));
}
