use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::lane::{on_lane, scale, LaneInt, Scaled};
use crate::quantity::Quantity;
use crate::stats::{lambda_set, rep_histogram, slice_index, spectrum, Op};

use super::sigma::{sigma_lower_bound, sigma_max_bounded, SigmaOutcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSums {
    pub distinct_sums: u64,
    /// `τ²·C(M,2) − σM⁴`; may be negative.
    pub rho_lower: BigRational,
}

impl GroupSums {
    pub fn meets_rho(&self) -> bool {
        BigRational::from_integer(self.distinct_sums.into()) >= self.rho_lower
    }
}

/// The value used for σ and whether it is the exact maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaBound {
    pub value: u64,
    /// `false` when the search stopped after exceeding `τ²/32`: then σ is at least `value`.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct ClusterReport {
    pub tau: Scalar,
    pub m: usize,
    pub group_count: usize,
    pub per_group: Vec<GroupSums>,
    /// `max(σ, 1)`; σ is zero only when there are fewer than three slopes.
    pub sigma_used: u64,
    pub sigma_exact: bool,
    pub slope_count: usize,
    pub conditions_ok: (bool, bool),
    pub sumset_size: u64,
    pub lemma_rhs: Quantity,
    pub lemma_pass: bool,
    /// Every vector sum lies in `(A+A) × (A+A)`.
    pub sums_inside: bool,
    /// `Σ_j distinct_sums ≤ |A+A|²`.
    pub total_within_square: bool,
}

impl ClusterReport {
    pub fn conditions_hold(&self) -> bool {
        self.conditions_ok.0 && self.conditions_ok.1
    }
}

/// Work budget (line intersections and membership tests) for the σ search.
pub const CLUSTER_SIGMA_BUDGET: u64 = 400_000_000;

/// Shared state for cluster reports over one slice: slopes, fibers and σ.
pub struct ClusterContext {
    a: FiniteSet,
    tau: Scalar,
    slopes: Vec<Scalar>,
    // points (x, λx) of A × A on the line of slope λ, as indices into A
    curves: Vec<Vec<(usize, usize)>>,
    sumset_size: u64,
    sigma: SigmaBound,
}

fn sq(x: &Scalar) -> Scalar {
    x * x
}

fn slice_members(a: &FiniteSet, tau: &Scalar) -> Result<Vec<Scalar>> {
    let window = |s: u64| {
        let s = Scalar::int(s as i64);
        tau < &s && s <= tau + tau
    };
    Ok(spectrum(a)?.into_iter().filter(|(_, s)| window(*s)).map(|(l, _)| l).collect())
}

impl ClusterContext {
    pub fn new(a: &FiniteSet, tau: &Scalar, s_sub: Option<&FiniteSet>, budget: u64) -> Result<Self> {
        if !a.all_positive() {
            return Err(Error::domain("cluster construction needs positive elements"));
        }
        if !tau.is_positive() {
            return Err(Error::domain("tau must be positive"));
        }
        let s_tau = slice_members(a, tau)?;
        let slopes = match s_sub {
            None => s_tau,
            Some(sub) => {
                if let Some(bad) = sub.iter().find(|l| s_tau.binary_search(l).is_err()) {
                    return Err(Error::domain(format!("{bad} is not in the slice")));
                }
                sub.elements().to_vec()
            }
        };
        let sumset_size = rep_histogram(a, a, Op::Add)?.len() as u64;
        let threshold =
            (sq(tau).ratio() / BigRational::from_integer(32.into())).floor().to_integer().to_u64().unwrap_or(u64::MAX);
        let sigma = slope_sigma(a, &slopes, threshold, budget)?;
        let index: FxHashMap<&Scalar, usize> = a.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let curves = slopes
            .iter()
            .map(|l| a.iter().enumerate().filter_map(|(i, x)| index.get(&(l * x)).map(|&j| (i, j))).collect())
            .collect();
        Ok(ClusterContext { a: a.clone(), tau: tau.clone(), slopes, curves, sumset_size, sigma })
    }

    pub fn slope_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn sigma(&self) -> SigmaBound {
        self.sigma
    }

    pub fn report(&self, m: usize) -> Result<ClusterReport> {
        if m < 2 {
            return Err(Error::domain("cluster needs two slopes"));
        }
        if m > self.slopes.len() {
            return Err(Error::domain(format!("group size {m} exceeds the {} available slopes", self.slopes.len())));
        }
        let lane = scale([self.a.elements()]);
        let (per_group, inside) = on_lane!(lane, s => group_sums(&s, &self.curves, m, self.sigma_used(), &self.tau));
        let k = self.slopes.len() as u64;
        let sigma = self.sigma_used();
        let ss = BigInt::from(self.sumset_size);
        let tau = self.tau.ratio();
        let tau2 = tau * tau;
        let lhs4 = BigRational::from_integer(BigInt::from(128 * 128) * BigInt::from(sigma) * ss.pow(4));
        let rhs2 = tau2.pow(3) * BigRational::from_integer((k * k).into());
        let lemma_pass = lhs4 >= rhs2;
        let tau_q = Quantity::from_ratio(tau)?;
        let lemma_rhs = tau_q
            .powi(3)
            .mul(&Quantity::from_u64(k))
            .div(&Quantity::from_u64(128).mul(&Quantity::from_u64(sigma).pow_frac(1, 2)));
        let total: u128 = per_group.iter().map(|g| g.distinct_sums as u128).sum();
        Ok(ClusterReport {
            tau: self.tau.clone(),
            m,
            group_count: per_group.len(),
            per_group,
            sigma_used: sigma,
            sigma_exact: self.sigma.exact,
            slope_count: self.slopes.len(),
            conditions_ok: self.conditions(),
            sumset_size: self.sumset_size,
            lemma_rhs,
            lemma_pass,
            sums_inside: inside,
            total_within_square: total <= (self.sumset_size as u128).pow(2),
        })
    }

    /// The two hypotheses `32σ ≤ τ²` and `τ² ≤ |A+A|√σ`; neither depends on the group size.
    pub fn conditions(&self) -> (bool, bool) {
        let tau2 = sq(&self.tau).into_ratio();
        let sig = BigRational::from_integer(self.sigma_used().into());
        let ss = BigInt::from(self.sumset_size);
        let cond_a = &sig * BigRational::from_integer(32.into()) <= tau2;
        let cond_b = &tau2 * &tau2 <= BigRational::from_integer(&ss * &ss) * &sig;
        (cond_a, cond_b)
    }

    /// Whether the vector sums of every pair of distinct slopes lie in `(A+A) × (A+A)`.
    /// Every group of every size draws its pairs from these, so this covers all `M` at once.
    pub fn all_sums_inside(&self) -> bool {
        let lane = scale([self.a.elements()]);
        on_lane!(lane, s => pair_sums_inside(&s, &self.curves))
    }

    fn sigma_used(&self) -> u64 {
        self.sigma.value.max(1)
    }
}

pub fn solymosi_cluster_report(
    a: &FiniteSet,
    tau: &Scalar,
    m: usize,
    s_sub: Option<&FiniteSet>,
) -> Result<ClusterReport> {
    ClusterContext::new(a, tau, s_sub, CLUSTER_SIGMA_BUDGET)?.report(m)
}

/// Max of σ over unordered triples of distinct slopes, stopping once it exceeds `threshold`.
fn slope_sigma(a: &FiniteSet, slopes: &[Scalar], threshold: u64, budget: u64) -> Result<SigmaBound> {
    let fibers: Vec<FiniteSet> = slopes
        .iter()
        .map(|l| lambda_set(a, l).map(|f| f.expect("slice slopes have nonempty fibers")))
        .collect::<Result<_>>()?;
    let n = fibers.len();
    let triples = || (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))));
    let mut spent = 0u64;
    let mut best = 0u64;
    for (i, j, k) in triples() {
        let (x, y, z) = (&fibers[i], &fibers[j], &fibers[k]);
        let size = (x.len() * y.len() * z.len()) as u64;
        spent += 9 * size;
        if spent > budget {
            return Err(Error::resource("slope-triple σ search exceeds the work budget"));
        }
        best = best.max(sigma_lower_bound(x, y, z));
        if best > threshold {
            return Ok(SigmaBound { value: best, exact: false });
        }
    }
    for (i, j, k) in triples() {
        let (x, y, z) = (&fibers[i], &fibers[j], &fibers[k]);
        let cap = (x.len() * y.len()).min(x.len() * z.len()).min(y.len() * z.len()) as u64;
        if cap <= best {
            continue;
        }
        let stop = threshold.max(best);
        match sigma_max_bounded(x, y, z, Some(stop), budget.saturating_sub(spent))? {
            SigmaOutcome::Exact(r) => best = best.max(r.count),
            SigmaOutcome::Exceeds(r) => return Ok(SigmaBound { value: r.count.max(best), exact: false }),
        }
        let size = (x.len() * y.len() * z.len()) as u64;
        spent += size * size / 2 + size;
        if spent > budget {
            return Err(Error::resource("slope-triple σ search exceeds the work budget"));
        }
    }
    Ok(SigmaBound { value: best, exact: true })
}

fn sumset_hash<T: LaneInt>(vals: &[T]) -> FxHashSet<T> {
    let mut h = FxHashSet::default();
    for (i, x) in vals.iter().enumerate() {
        for y in &vals[i..] {
            h.insert(x.clone() + y.clone());
        }
    }
    h
}

fn pair_sums_inside<T: LaneInt>(s: &Scaled<T>, curves: &[Vec<(usize, usize)>]) -> bool {
    let vals = &s.sets[0];
    let sums = sumset_hash(vals);
    curves.iter().enumerate().all(|(g, c1)| {
        curves[g + 1..].iter().all(|c2| {
            c1.iter().all(|&(x1, y1)| {
                c2.iter().all(|&(x2, y2)| {
                    sums.contains(&(vals[x1].clone() + vals[x2].clone()))
                        && sums.contains(&(vals[y1].clone() + vals[y2].clone()))
                })
            })
        })
    })
}

fn group_sums<T: LaneInt>(
    s: &Scaled<T>,
    curves: &[Vec<(usize, usize)>],
    m: usize,
    sigma: u64,
    tau: &Scalar,
) -> (Vec<GroupSums>, bool) {
    let vals = &s.sets[0];
    let sums = sumset_hash(vals);
    let tau2 = sq(tau).into_ratio();
    let pairs = BigRational::from_integer(BigInt::from(m * (m - 1) / 2));
    let rho_lower = tau2 * pairs - BigRational::from_integer(BigInt::from(sigma) * BigInt::from(m).pow(4));
    let mut inside = true;
    let mut out = Vec::new();
    let mut seen: FxHashSet<(T, T)> = FxHashSet::default();
    for group in curves.chunks_exact(m) {
        seen.clear();
        for (g, c1) in group.iter().enumerate() {
            for c2 in &group[g + 1..] {
                for &(x1, y1) in c1 {
                    for &(x2, y2) in c2 {
                        let p = (vals[x1].clone() + vals[x2].clone(), vals[y1].clone() + vals[y2].clone());
                        if seen.insert(p.clone()) {
                            inside &= sums.contains(&p.0) && sums.contains(&p.1);
                        }
                    }
                }
            }
        }
        out.push(GroupSums { distinct_sums: seen.len() as u64, rho_lower: rho_lower.clone() });
    }
    (out, inside)
}

/// Every slice threshold τ for which `S_τ` is nonempty.
pub fn slice_taus(a: &FiniteSet) -> Result<Vec<Scalar>> {
    let mut js: Vec<u32> = spectrum(a)?.iter().map(|(_, s)| slice_index(*s)).collect();
    js.sort_unstable();
    js.dedup();
    Ok(js.into_iter().map(crate::stats::slice_tau).collect())
}
