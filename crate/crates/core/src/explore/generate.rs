use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactset::{read_set_file, FiniteSet, Scalar};

/// Recipe for a test set. Random kinds carry their seed so every recipe is reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `{start + i·step : i < n}`.
    Ap {
        start: Scalar,
        step: Scalar,
        n: usize,
    },
    /// `{start·ratio^i : i < n}`.
    Gp {
        start: Scalar,
        ratio: Scalar,
        n: usize,
    },
    /// Products of the AP `{start + i·step : i < n}` with the GP `{ratio^j : j < m}`.
    ApTimesGp {
        start: Scalar,
        step: Scalar,
        n: usize,
        ratio: Scalar,
        m: usize,
    },
    /// `n` distinct integers drawn uniformly from `[1, range]`.
    RandomInteger {
        n: usize,
        range: u64,
        seed: u64,
    },
    /// `n` distinct rationals `p/q` with `p` and `q` uniform in `[1, range]`.
    RandomRational {
        n: usize,
        range: u64,
        seed: u64,
    },
    Union {
        operands: Vec<GeneratorSpec>,
    },
    CustomFile {
        path: PathBuf,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Domain(format!("invalid generator: {}", msg.into()))
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    Ok(())
}

fn check_ratio(r: &Scalar) -> Result<()> {
    if r.is_zero() || r.abs() == Scalar::one() {
        return Err(invalid("gp ratio must avoid 0, 1 and -1"));
    }
    Ok(())
}

fn geometric(start: &Scalar, ratio: &Scalar, n: usize) -> Vec<Scalar> {
    std::iter::successors(Some(start.clone()), |x| Some(x * ratio)).take(n).collect()
}

fn arithmetic(start: &Scalar, step: &Scalar, n: usize) -> Vec<Scalar> {
    std::iter::successors(Some(start.clone()), |x| Some(x + step)).take(n).collect()
}

fn distinct_draws(n: usize, capacity: u128, mut draw: impl FnMut() -> Scalar) -> Result<Vec<Scalar>> {
    if (n as u128) > capacity {
        return Err(invalid(format!("cannot draw {n} distinct values from a range of {capacity}")));
    }
    let mut seen = BTreeSet::new();
    let mut tries = 0u64;
    while seen.len() < n {
        seen.insert(draw());
        tries += 1;
        if tries > 1000 * n as u64 + 10_000 {
            return Err(invalid("range too small for distinct draws"));
        }
    }
    Ok(seen.into_iter().collect())
}

pub fn generate(spec: &GeneratorSpec) -> Result<FiniteSet> {
    let values = match spec {
        GeneratorSpec::Ap { start, step, n } => {
            check_n(*n)?;
            if step.is_zero() {
                return Err(invalid("ap step must be nonzero"));
            }
            arithmetic(start, step, *n)
        }
        GeneratorSpec::Gp { start, ratio, n } => {
            check_n(*n)?;
            check_ratio(ratio)?;
            if start.is_zero() {
                return Err(invalid("gp start must be nonzero"));
            }
            geometric(start, ratio, *n)
        }
        GeneratorSpec::ApTimesGp { start, step, n, ratio, m } => {
            check_n(*n)?;
            check_n(*m)?;
            check_ratio(ratio)?;
            if step.is_zero() {
                return Err(invalid("ap step must be nonzero"));
            }
            let g = geometric(&Scalar::one(), ratio, *m);
            arithmetic(start, step, *n).iter().flat_map(|x| g.iter().map(move |y| x * y)).collect()
        }
        GeneratorSpec::RandomInteger { n, range, seed } => {
            check_n(*n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let range = *range;
            distinct_draws(*n, range as u128, || Scalar::from_bigint(rng.gen_range(1..=range.max(1)).into()))?
        }
        GeneratorSpec::RandomRational { n, range, seed } => {
            check_n(*n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let range = (*range).max(1);
            // p and q drawn independently; distinct values are at most range²
            distinct_draws(*n, (range as u128).pow(2), || {
                let p = rng.gen_range(1..=range);
                let q = rng.gen_range(1..=range);
                Scalar::new(p, q).unwrap()
            })?
        }
        GeneratorSpec::Union { operands } => {
            if operands.is_empty() {
                return Err(invalid("union needs operands"));
            }
            let mut v = Vec::new();
            for op in operands {
                v.extend(generate(op)?.iter().cloned());
            }
            v
        }
        GeneratorSpec::CustomFile { path } => return Ok(read_set_file(path)?.set),
    };
    FiniteSet::new(values)
}
