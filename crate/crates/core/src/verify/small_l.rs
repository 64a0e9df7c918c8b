use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::stats::{additive_energy, all_fibers, image_size, slices_from_spectrum, spectrum, Op};

/// The slice chosen by the construction and its split by additive energy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallLSlice {
    pub tau: Scalar,
    pub s_tau: FiniteSet,
    /// The larger-energy half; every bound is checked on it.
    pub s_prime: FiniteSet,
    /// The `⌊|S_τ|/2⌋` ratios of smallest `E⁺(A_λ)`.
    pub s_doubleprime: FiniteSet,
    /// `min_{λ∈S′} E⁺(A_λ)/τ³`.
    pub min_additive_energy_ratio: Scalar,
    /// `min_{λ∈S′} |A_λ/A_λ|/τ²`.
    pub min_quotient_ratio: Scalar,
    /// `min_{λ∈S′} |A_λA_λ|/τ²`.
    pub min_product_ratio: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallLReport {
    /// `max(1, |A+A|²·min(|A/A|, |AA|)/|A|⁴)`.
    pub l: Scalar,
    pub l_quot: Scalar,
    pub l_prod: Scalar,
    pub multiplicative_energy: u64,
    /// `E^×(A)/(2|A|²)`; the chosen τ is at least this.
    pub threshold: Scalar,
    /// `(τ, |S_τ|τ²)` for every nonempty slice.
    pub slice_weights: Vec<(Scalar, Scalar)>,
    /// `None` when no slice reaches the threshold.
    pub slice: Option<SmallLSlice>,
}

impl SmallLSlice {
    /// Energy ratio times `L⁴`.
    pub fn scaled_additive(&self, l: &Scalar) -> Scalar {
        &self.min_additive_energy_ratio * &pow(l, 4)
    }

    /// Quotient ratio times `L¹⁶`.
    pub fn scaled_quotient(&self, l: &Scalar) -> Scalar {
        &self.min_quotient_ratio * &pow(l, 16)
    }

    /// Product ratio times `L¹⁶`.
    pub fn scaled_product(&self, l: &Scalar) -> Scalar {
        &self.min_product_ratio * &pow(l, 16)
    }
}

fn pow(x: &Scalar, k: i32) -> Scalar {
    Scalar::from_ratio(num_traits::pow::Pow::pow(x.ratio(), k))
}

fn clamp_l(sumset: u64, other: u64, n: u64) -> Scalar {
    let v = BigRational::new(BigInt::from(sumset).pow(2) * other, BigInt::from(n).pow(4));
    Scalar::from_ratio(v.max(BigRational::one()))
}

fn frac(p: u64, q: &BigRational) -> Scalar {
    Scalar::from_ratio(BigRational::from_integer(p.into()) / q)
}

/// Picks the dyadic slice maximising `|S_τ|τ²` among `τ ≥ E^×(A)/(2|A|²)` (ties
/// to the larger τ) and splits it in half by the additive energy of the fibers.
pub fn small_l_construction(a: &FiniteSet) -> Result<SmallLReport> {
    if a.len() < 2 {
        return Err(Error::domain("need |A| >= 2"));
    }
    if a.has_zero() {
        return Err(Error::domain("set contains zero"));
    }
    let n = a.len() as u64;
    let sumset = image_size(a, a, Op::Add)? as u64;
    let prod = image_size(a, a, Op::Mul)? as u64;
    let quot = image_size(a, a, Op::Div)? as u64;
    let l_quot = clamp_l(sumset, quot, n);
    let l_prod = clamp_l(sumset, prod, n);
    let l = clamp_l(sumset, quot.min(prod), n);

    let spec = spectrum(a)?;
    let e: u64 = spec.iter().map(|(_, s)| s * s).sum();
    let threshold = Scalar::new(e, 2 * n * n).unwrap();
    let slices = slices_from_spectrum(&spec);
    let weight = |s: &crate::stats::SpectrumSlice| &Scalar::int(s.lambdas.len() as i64) * &(&s.tau * &s.tau);
    let slice_weights = slices.iter().map(|s| (s.tau.clone(), weight(s))).collect();
    let chosen = slices.iter().filter(|s| s.tau >= threshold).max_by_key(|s| (weight(s), s.tau.clone()));

    let slice = match chosen {
        None => None,
        Some(chosen) => {
            let fibers = all_fibers(a)?;
            let mut ranked: Vec<(u64, Scalar)> =
                chosen.lambdas.iter().map(|l| (additive_energy(&fibers[l]), l.clone())).collect();
            ranked.sort();
            let half = if ranked.len() == 1 { 0 } else { ranked.len() / 2 };
            let lower: Vec<Scalar> = ranked[..half].iter().map(|(_, l)| l.clone()).collect();
            let upper = &ranked[half..];
            let s_prime = FiniteSet::new(upper.iter().map(|(_, l)| l.clone())).unwrap();
            let s_doubleprime = if half == 0 { s_prime.clone() } else { FiniteSet::new(lower).unwrap() };
            let tau = chosen.tau.ratio();
            let tau2 = tau * tau;
            let tau3 = &tau2 * tau;
            let mut min_add = None::<Scalar>;
            let mut min_quot = None::<Scalar>;
            let mut min_prod = None::<Scalar>;
            for (energy, l) in upper {
                let f = &fibers[l];
                let take = |slot: &mut Option<Scalar>, v: Scalar| {
                    if slot.as_ref().is_none_or(|m| v < *m) {
                        *slot = Some(v);
                    }
                };
                take(&mut min_add, frac(*energy, &tau3));
                take(&mut min_quot, frac(image_size(f, f, Op::Div)? as u64, &tau2));
                take(&mut min_prod, frac(image_size(f, f, Op::Mul)? as u64, &tau2));
            }
            Some(SmallLSlice {
                tau: chosen.tau.clone(),
                s_tau: chosen.lambdas.clone(),
                s_prime,
                s_doubleprime,
                min_additive_energy_ratio: min_add.unwrap(),
                min_quotient_ratio: min_quot.unwrap(),
                min_product_ratio: min_prod.unwrap(),
            })
        }
    };
    Ok(SmallLReport { l, l_quot, l_prod, multiplicative_energy: e, threshold, slice_weights, slice })
}
