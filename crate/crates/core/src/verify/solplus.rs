use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::explore::{bsg_subset_oracle, BSG_MAX_SIZE};
use crate::stats::image_size;
use crate::stats::Op;

use super::small_l::small_l_construction;

/// Quantities along the proof of the improved sum-quotient bound, at toy scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolPlusTrace {
    pub l: Scalar,
    /// `max(1, |A/A|³/|A|⁴)`.
    pub l_prime: Scalar,
    pub tau: Scalar,
    pub s_prime: FiniteSet,
    /// `L⁻⁶⁴ E^×(A) τ⁶ |A/A|⁻⁵`.
    pub eta: Scalar,
    pub s_doubleprime: FiniteSet,
    /// Objective of the subset oracle; `None` when `S′` was a single ratio.
    pub bsg_objective: Option<Scalar>,
    pub a_witness: Scalar,
    /// `A ∩ a·S″`.
    pub a_prime: FiniteSet,
}

pub fn solplus_trace(a: &FiniteSet, max_bsg_size: usize) -> Result<SolPlusTrace> {
    if max_bsg_size > BSG_MAX_SIZE {
        return Err(Error::resource(format!("subset oracle limited to {BSG_MAX_SIZE} elements")));
    }
    let sl = small_l_construction(a)?;
    let slice = sl.slice.as_ref().ok_or_else(|| Error::domain("no slice reaches the energy threshold"))?;
    if slice.s_prime.len() > max_bsg_size {
        return Err(Error::resource(format!(
            "|S'| = {} exceeds the subset oracle size {max_bsg_size}",
            slice.s_prime.len()
        )));
    }
    let n = BigInt::from(a.len());
    let quot = BigInt::from(image_size(a, a, Op::Div)?);
    let l_prime = BigRational::new(Pow::pow(&quot, 3u32), Pow::pow(&n, 4u32)).max(BigRational::one());
    let tau = slice.tau.ratio();
    let eta = BigRational::from_integer(sl.multiplicative_energy.into()) * Pow::pow(tau, 6i32)
        / (Pow::pow(sl.l_quot.ratio(), 64i32) * BigRational::from_integer(Pow::pow(&quot, 5u32)));

    let (s_doubleprime, bsg_objective) = if slice.s_prime.len() == 1 {
        (slice.s_prime.clone(), None)
    } else {
        let (sub, obj) = bsg_subset_oracle(&slice.s_prime, max_bsg_size)?;
        (sub, Some(obj))
    };
    // first a in ascending order with the largest |A ∩ a·S″|
    let mut best: Option<(usize, Scalar, FiniteSet)> = None;
    for x in a {
        let Some(hit) = a.intersection(&s_doubleprime.dilate(x)?) else { continue };
        if best.as_ref().is_none_or(|(k, _, _)| hit.len() > *k) {
            best = Some((hit.len(), x.clone(), hit));
        }
    }
    let (_, a_witness, a_prime) = best.ok_or_else(|| Error::domain("no a with A ∩ a·S'' nonempty"))?;
    Ok(SolPlusTrace {
        l: sl.l_quot.clone(),
        l_prime: Scalar::from_ratio(l_prime),
        tau: slice.tau.clone(),
        s_prime: slice.s_prime.clone(),
        eta: Scalar::from_ratio(eta),
        s_doubleprime,
        bsg_objective,
        a_witness,
        a_prime,
    })
}
