use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::stats::{image_size, Op};

/// Largest set the subset oracle enumerates.
pub const BSG_MAX_SIZE: usize = 14;

/// Subset `S″ ⊆ S` minimising `|S″/S″|·|S|²/|S″|³` over all nonempty subsets.
/// Ties go to the larger subset, then the lexicographically smaller one.
pub fn bsg_subset_oracle(s: &FiniteSet, max_size: usize) -> Result<(FiniteSet, Scalar)> {
    if max_size > BSG_MAX_SIZE {
        return Err(Error::resource(format!("subset oracle limited to {BSG_MAX_SIZE} elements")));
    }
    if s.len() > max_size {
        return Err(Error::resource(format!("{} elements exceed the oracle size {max_size}", s.len())));
    }
    if s.len() < 2 {
        return Err(Error::domain("subset oracle needs at least two elements"));
    }
    if s.has_zero() {
        return Err(Error::domain("set contains zero"));
    }
    let k = s.len();
    let full = (k * k) as i64;
    let mut best: Option<(Scalar, FiniteSet)> = None;
    for mask in 1u32..(1 << k) {
        let sub = FiniteSet::new((0..k).filter(|i| mask >> i & 1 == 1).map(|i| s.elements()[i].clone())).unwrap();
        let m = sub.len() as i64;
        let obj = Scalar::new(image_size(&sub, &sub, Op::Div)? as i64 * full, m * m * m).unwrap();
        let better = match &best {
            None => true,
            Some((o, b)) => (&obj, std::cmp::Reverse(sub.len()), &sub) < (o, std::cmp::Reverse(b.len()), b),
        };
        if better {
            best = Some((obj, sub));
        }
    }
    let (obj, sub) = best.unwrap();
    Ok((sub, obj))
}
