use crate::error::Result;
use crate::exactset::{FiniteSet, Scalar};
use crate::stats::{all_fibers, productset, quotientset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inclusion {
    /// `A_λ/A_λ ⊆ Π ∩ λΠ` with `Π = A/A`.
    Quotient,
    /// `A_λA_λ ⊆ Π′ ∩ λΠ′` with `Π′ = AA`.
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KkViolation {
    pub lambda: Scalar,
    pub element: Scalar,
    pub inclusion: Inclusion,
}

fn in_both(pi: &FiniteSet, lambda: &Scalar, x: &Scalar) -> bool {
    pi.contains(x) && pi.contains(&x.checked_div(lambda).expect("ratios are nonzero"))
}

/// Checks both inclusions for every fiber and lists the elements that break them.
pub fn katz_koester_check(a: &FiniteSet) -> Result<Vec<KkViolation>> {
    let quot = quotientset(a, a)?;
    let prod = productset(a, a);
    let mut out = Vec::new();
    for (lambda, fiber) in all_fibers(a)? {
        for x in &fiber {
            for y in &fiber {
                let q = x.checked_div(y)?;
                if !in_both(&quot, &lambda, &q) {
                    out.push(KkViolation { lambda: lambda.clone(), element: q, inclusion: Inclusion::Quotient });
                }
                let p = x * y;
                if !in_both(&prod, &lambda, &p) {
                    out.push(KkViolation { lambda: lambda.clone(), element: p, inclusion: Inclusion::Product });
                }
            }
        }
    }
    Ok(out)
}
