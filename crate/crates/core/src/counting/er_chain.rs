use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exactset::FiniteSet;
use crate::quantity::Quantity;
use crate::stats::{image_size, rep_counts, Multiset, Op};

use super::collinear::{collinear_triples_product, product_triples_lower};

/// Collinear triple count, or a certified lower bound when the exact count was skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleCount {
    Exact(u128),
    AtLeast(u128),
}

impl TripleCount {
    pub fn value(&self) -> u128 {
        match *self {
            TripleCount::Exact(v) | TripleCount::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TripleCount::Exact(_))
    }
}

pub const CHECK_SUM_F: &str = "sum_F";
pub const CHECK_EST_U: &str = "est_U";
pub const CHECK_EST_FA: &str = "est_F+A";
pub const CHECK_TRIPLE_LOW: &str = "tripple_low";
pub const RATIO_TRIPLE_UPP: &str = "tripple_upp";
pub const RATIO_SOL_NEW: &str = "sol_new";

/// The counting chain behind the additive-energy bound.
#[derive(Clone, Debug)]
pub struct ErChain {
    /// `N(x) = |A ∩ (x − A)|` over `A + A`.
    pub n: Multiset,
    pub f: FiniteSet,
    pub u: u64,
    pub t: TripleCount,
    pub additive_energy: u64,
    pub sum_f_squares: u64,
    /// `min(|AA|, |A/A|)`.
    pub min_doubling: u64,
    pub grid_side: usize,
    pub checks: BTreeMap<&'static str, bool>,
    pub ratios: BTreeMap<&'static str, Quantity>,
}

/// Above this `|A ∪ F|` the sloped-line count is skipped when the axis-parallel
/// lower bound already settles the triple inequality.
pub const ER_EXACT_LIMIT: usize = 320;

pub fn er_chain(a: &FiniteSet) -> Result<ErChain> {
    er_chain_with(a, ER_EXACT_LIMIT)
}

pub fn er_chain_with(a: &FiniteSet, exact_limit: usize) -> Result<ErChain> {
    if a.len() < 2 {
        return Err(Error::domain("need |A| >= 2"));
    }
    if !a.all_positive() {
        return Err(Error::domain("elements must be positive"));
    }
    let n_big = a.len() as u64;
    let n = rep_counts(a, a, Op::Add)?;
    let e = n.sum_of_squares();
    let f_elems: Vec<_> = n.iter().filter(|(_, c)| 2 * n_big * n_big * c > e).map(|(x, _)| x.clone()).collect();
    let f = FiniteSet::new(f_elems).expect("F holds the mode of N");
    let u: u64 = f.iter().map(|x| n.get(x)).sum();
    let sum_f_squares: u64 = f.iter().map(|x| n.get(x).pow(2)).sum();
    let min_doubling = image_size(a, a, Op::Mul)?.min(image_size(a, a, Op::Div)?) as u64;

    let x = a.union(&f);
    let big = |v: u64| BigUint::from(v);
    let need = big(u).pow(4);
    let have = |t: u128| BigUint::from(t) * big(min_doubling) * big(n_big * n_big);
    let lower = product_triples_lower(&x, &x);
    let t = if x.len() > exact_limit && have(lower) >= need {
        TripleCount::AtLeast(lower)
    } else {
        TripleCount::Exact(collinear_triples_product(&x, &x))
    };

    let mut checks = BTreeMap::new();
    checks.insert(CHECK_SUM_F, 2 * sum_f_squares >= e);
    checks.insert(CHECK_EST_U, 2 * n_big * u >= e);
    checks
        .insert(CHECK_EST_FA, (f.len() as u64 + n_big) as u128 * e as u128 <= 4 * (n_big * n_big) as u128 * u as u128);
    checks.insert(CHECK_TRIPLE_LOW, have(t.value()) >= need);

    let q = Quantity::from_u64;
    let log = Quantity::log2(n_big);
    let mut ratios = BTreeMap::new();
    ratios.insert(RATIO_TRIPLE_UPP, Quantity::from_u128(t.value()).div(&q(x.len() as u64).powi(4).mul(&log)));
    ratios.insert(RATIO_SOL_NEW, q(e).powi(4).div(&q(min_doubling).mul(&q(n_big).powi(10)).mul(&log)));

    Ok(ErChain { n, f, u, t, additive_energy: e, sum_f_squares, min_doubling, grid_side: x.len(), checks, ratios })
}
