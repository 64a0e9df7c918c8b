use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};

use super::rep::{image_size, quotientset, Op};

/// Upper bound on `d(A) = min_C |AC|²/(|A||C|)` with the set achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingProfile {
    pub k_mul: Scalar,
    pub d_upper: Scalar,
    pub witness_c: FiniteSet,
}

fn doubling_ratio(a: &FiniteSet, c: &FiniteSet) -> Scalar {
    let ac = image_size(a, c, Op::Mul).expect("products exist") as i64;
    Scalar::new(ac * ac, (a.len() * c.len()) as i64).unwrap()
}

pub(crate) fn k_mul(a: &FiniteSet) -> Result<Scalar> {
    let aa = image_size(a, a, Op::Mul)?;
    let qq = image_size(a, a, Op::Div)?;
    Ok(Scalar::new(aa.min(qq) as i64, a.len() as i64).unwrap())
}

struct Best {
    value: Scalar,
    witness: FiniteSet,
}

impl Best {
    fn offer(slot: &mut Option<Best>, a: &FiniteSet, c: FiniteSet) {
        let value = doubling_ratio(a, &c);
        let better = match slot {
            None => true,
            Some(b) => (&value, c.len(), &c) < (&b.value, b.witness.len(), &b.witness),
        };
        if better {
            *slot = Some(Best { value, witness: c });
        }
    }
}

fn check(a: &FiniteSet) -> Result<()> {
    if a.has_zero() {
        return Err(Error::domain("set contains zero"));
    }
    Ok(())
}

/// Minimum of `|AC|²/(|A||C|)` over the supplied candidates and the defaults
/// `{1}`, `A`, `A⁻¹`, `A/A`. Ties go to the smaller, then lexicographically smaller, `C`.
pub fn d_upper(a: &FiniteSet, candidates: &[FiniteSet]) -> Result<DoublingProfile> {
    check(a)?;
    let mut best = None;
    for c in candidates {
        if c.has_zero() {
            return Err(Error::domain("candidate contains zero"));
        }
        Best::offer(&mut best, a, c.clone());
    }
    Best::offer(&mut best, a, FiniteSet::singleton(Scalar::one()));
    Best::offer(&mut best, a, a.clone());
    Best::offer(&mut best, a, a.reciprocals()?);
    Best::offer(&mut best, a, quotientset(a, a)?);
    let best = best.expect("defaults present");
    Ok(DoublingProfile { k_mul: k_mul(a)?, d_upper: best.value, witness_c: best.witness })
}

/// Exact minimum over nonempty `C ⊆ ground` with `|C| ≤ max_size`.
pub fn d_exhaustive(a: &FiniteSet, ground: &FiniteSet, max_size: usize) -> Result<DoublingProfile> {
    check(a)?;
    if ground.len() > 20 {
        return Err(Error::resource(format!("ground set of size {} exceeds 20", ground.len())));
    }
    if ground.has_zero() {
        return Err(Error::domain("ground contains zero"));
    }
    let g = ground.elements();
    let mut best = None;
    for mask in 1u32..(1 << g.len()) {
        if mask.count_ones() as usize > max_size {
            continue;
        }
        let c: Vec<Scalar> = (0..g.len()).filter(|i| mask >> i & 1 == 1).map(|i| g[i].clone()).collect();
        Best::offer(&mut best, a, FiniteSet::from_sorted(c));
    }
    let best = best.ok_or_else(|| Error::domain("max_size admits no subset"))?;
    Ok(DoublingProfile { k_mul: k_mul(a)?, d_upper: best.value, witness_c: best.witness })
}
