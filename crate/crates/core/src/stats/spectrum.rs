use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};

use super::rep::{rep_counts, Op};

/// Ratios whose fiber size lies in the window `(tau, 2 tau]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSlice {
    pub tau: Scalar,
    pub lambdas: FiniteSet,
    pub sizes: BTreeMap<Scalar, u64>,
}

fn require_nonzero(a: &FiniteSet) -> Result<()> {
    if a.has_zero() {
        return Err(Error::domain("set contains zero"));
    }
    Ok(())
}

/// `A ∩ λA`, or `None` when empty.
pub fn lambda_set(a: &FiniteSet, lambda: &Scalar) -> Result<Option<FiniteSet>> {
    if lambda.is_zero() {
        return Err(Error::domain("zero ratio"));
    }
    require_nonzero(a)?;
    Ok(a.intersection(&a.dilate(lambda)?))
}

/// `(λ, |A_λ|)` for every λ ∈ A/A, ascending in λ.
pub fn spectrum(a: &FiniteSet) -> Result<Vec<(Scalar, u64)>> {
    require_nonzero(a)?;
    Ok(rep_counts(a, a, Op::Div)?.iter().map(|(k, v)| (k.clone(), v)).collect())
}

/// Index `j` of the window `(2^(j-1), 2^j]` holding `size`.
pub(crate) fn slice_index(size: u64) -> u32 {
    size.next_power_of_two().trailing_zeros()
}

pub(crate) fn slice_tau(j: u32) -> Scalar {
    if j == 0 {
        Scalar::new(1, 2).unwrap()
    } else {
        Scalar::int(1i64 << (j - 1))
    }
}

/// `⌈log₂ n⌉`.
pub fn ceil_log2(n: u64) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Nonempty dyadic slices for `j = 0..=⌈log₂|A|⌉`, ascending in τ.
pub fn dyadic_slices(a: &FiniteSet) -> Result<Vec<SpectrumSlice>> {
    Ok(slices_from_spectrum(&spectrum(a)?))
}

pub(crate) fn slices_from_spectrum(spec: &[(Scalar, u64)]) -> Vec<SpectrumSlice> {
    let mut buckets: BTreeMap<u32, BTreeMap<Scalar, u64>> = BTreeMap::new();
    for (lambda, size) in spec {
        buckets.entry(slice_index(*size)).or_default().insert(lambda.clone(), *size);
    }
    buckets
        .into_iter()
        .map(|(j, sizes)| SpectrumSlice {
            tau: slice_tau(j),
            lambdas: FiniteSet::from_sorted(sizes.keys().cloned().collect()),
            sizes,
        })
        .collect()
}

/// Every fiber `A_λ` at once, grouping the pairs `(x, y)` by `x / y`.
pub(crate) fn all_fibers(a: &FiniteSet) -> Result<BTreeMap<Scalar, FiniteSet>> {
    require_nonzero(a)?;
    let mut groups: BTreeMap<Scalar, Vec<Scalar>> = BTreeMap::new();
    for x in a {
        for y in a {
            groups.entry(x.checked_div(y)?).or_default().push(x.clone());
        }
    }
    // x runs in ascending order, so each group is already sorted
    Ok(groups.into_iter().map(|(l, xs)| (l, FiniteSet::from_sorted(xs))).collect())
}
