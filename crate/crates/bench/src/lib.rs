//! Inputs shared by the benchmarks.

use sumprod_core::explore::{generate, GeneratorSpec};
use sumprod_core::{FiniteSet, Scalar};

pub fn interval(n: usize) -> FiniteSet {
    generate(&GeneratorSpec::Ap { start: Scalar::one(), step: Scalar::one(), n }).expect("valid progression")
}

pub fn powers_of_two(n: usize) -> FiniteSet {
    generate(&GeneratorSpec::Gp { start: Scalar::one(), ratio: Scalar::int(2), n }).expect("valid progression")
}

pub fn random_integers(n: usize, seed: u64) -> FiniteSet {
    generate(&GeneratorSpec::RandomInteger { n, range: 1_000_000, seed }).expect("range is large enough")
}

pub fn random_rationals(n: usize, seed: u64) -> FiniteSet {
    generate(&GeneratorSpec::RandomRational { n, range: 1000, seed }).expect("range is large enough")
}
