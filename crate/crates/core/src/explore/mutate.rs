use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactset::{FiniteSet, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub set: FiniteSet,
    /// `false` when no legal move existed and `set` is the input.
    pub moved: bool,
}

/// One-element move: swap an element for one of `ground ∖ A`. With probability
/// `rational_rate` the new element is instead a random rational in the span of
/// `ground`.
pub fn mutate(a: &FiniteSet, ground: &FiniteSet, seed: u64) -> Mutation {
    mutate_rng(a, ground, 0.0, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn mutate_with(a: &FiniteSet, ground: &FiniteSet, seed: u64, rational_rate: f64) -> Mutation {
    mutate_rng(a, ground, rational_rate, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_rational(ground: &FiniteSet, a: &FiniteSet, rng: &mut impl Rng) -> Option<Scalar> {
    let span = ground.max() - ground.min();
    if span.is_zero() {
        return None;
    }
    for _ in 0..32 {
        let q = rng.gen_range(1..=16i64);
        let k = rng.gen_range(0..=q);
        let x = ground.min() + &(&span * &Scalar::new(k, q).unwrap());
        if !a.contains(&x) {
            return Some(x);
        }
    }
    None
}

pub(crate) fn mutate_rng(a: &FiniteSet, ground: &FiniteSet, rational_rate: f64, rng: &mut impl Rng) -> Mutation {
    let out = a.elements().choose(rng).expect("nonempty").clone();
    let incoming = if rational_rate > 0.0 && rng.gen_bool(rational_rate.min(1.0)) {
        random_rational(ground, a, rng)
    } else {
        None
    };
    let incoming = incoming.or_else(|| ground.difference(a).choose(rng).cloned());
    match incoming {
        None => Mutation { set: a.clone(), moved: false },
        Some(x) => {
            let v: Vec<Scalar> = a.iter().filter(|y| **y != out).cloned().chain([x]).collect();
            Mutation { set: FiniteSet::new(v).expect("nonempty"), moved: true }
        }
    }
}
