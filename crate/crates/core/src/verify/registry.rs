use std::cell::OnceCell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::counting::{
    er_chain, sigma_count, slice_taus, ClusterContext, ClusterReport, ErChain, CHECK_EST_FA, CHECK_EST_U, CHECK_SUM_F,
    CHECK_TRIPLE_LOW,
};
use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::quantity::Quantity;
use crate::stats::{
    ceil_log2, d_upper, energy, image_size, multiplicative_energy, productset, quotientset, rep_counts, EnergyKind, Op,
};

use super::report::{set_digest, InequalityId, InequalityReport};
use super::small_l::{small_l_construction, SmallLReport};

/// Budget of line intersections per slice when σ is searched for the cluster entry.
pub const LEMMA3_SIGMA_BUDGET: u64 = 20_000_000;

/// Largest `|A/A|` or `|AA|` whose multiplicative energy is computed.
pub const PROP_CRIT_LIMIT: usize = 5_000;

/// Optional inputs of the entries that take more than `A`.
#[derive(Clone, Debug, Default)]
pub struct Params {
    /// Second set of LEVELSET, ENERGY-SUMSET and DA-LEVEL; defaults to `A`.
    pub b: Option<FiniteSet>,
    /// Level of LEVELSET and DA-LEVEL (default 2), or the single slice for LEMMA3.
    pub tau: Option<Scalar>,
    /// `(A₁, A₂)` of CS-SUBS, both subsets of `A`; default `(A, A)`.
    pub subsets: Option<(FiniteSet, FiniteSet)>,
    /// `(A₁, A₂, A₃)` of GEN-SIGMA; default `(A, A, A)`.
    pub sigma_sets: Option<[FiniteSet; 3]>,
    /// Coefficients of GEN-SIGMA; default `(1, 1, −2)`.
    pub alpha: Option<[Scalar; 3]>,
    /// Group size for LEMMA3; by default `⌊√(τ²/8σ)⌋` clamped to `[2, |S′|]`.
    pub group_size: Option<usize>,
    /// Restricts the LEMMA3 slopes to a subset of the slice; needs `tau`.
    pub slopes: Option<FiniteSet>,
    pub sigma_budget: Option<u64>,
}

fn q(v: u64) -> Quantity {
    Quantity::from_u64(v)
}

fn qs(x: &Scalar) -> Quantity {
    Quantity::from_ratio(x.ratio()).expect("nonnegative")
}

fn cached<T>(cell: &OnceCell<T>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = f()?;
    Ok(cell.get_or_init(|| v))
}

/// Evaluates registry entries on one set, sharing the statistics between them.
pub struct Evaluator {
    a: FiniteSet,
    digest: String,
    sum: OnceCell<u64>,
    prod: OnceCell<u64>,
    quot: OnceCell<u64>,
    e_add: OnceCell<u64>,
    e_mul: OnceCell<u64>,
    d_hat: OnceCell<Scalar>,
    small_l: OnceCell<SmallLReport>,
    er: OnceCell<ErChain>,
}

impl Evaluator {
    pub fn new(a: &FiniteSet) -> Self {
        Evaluator {
            a: a.clone(),
            digest: set_digest(a),
            sum: OnceCell::new(),
            prod: OnceCell::new(),
            quot: OnceCell::new(),
            e_add: OnceCell::new(),
            e_mul: OnceCell::new(),
            d_hat: OnceCell::new(),
            small_l: OnceCell::new(),
            er: OnceCell::new(),
        }
    }

    pub fn set(&self) -> &FiniteSet {
        &self.a
    }

    fn n(&self) -> u64 {
        self.a.len() as u64
    }

    fn sum(&self) -> u64 {
        *self.sum.get_or_init(|| image_size(&self.a, &self.a, Op::Add).unwrap() as u64)
    }

    fn prod(&self) -> u64 {
        *self.prod.get_or_init(|| image_size(&self.a, &self.a, Op::Mul).unwrap() as u64)
    }

    fn quot(&self) -> Result<u64> {
        cached(&self.quot, || Ok(image_size(&self.a, &self.a, Op::Div)? as u64)).copied()
    }

    fn e_add(&self) -> u64 {
        *self.e_add.get_or_init(|| energy(&self.a, &self.a, EnergyKind::Additive).unwrap())
    }

    fn e_mul(&self) -> Result<u64> {
        cached(&self.e_mul, || multiplicative_energy(&self.a)).copied()
    }

    fn d_hat(&self) -> Result<&Scalar> {
        cached(&self.d_hat, || Ok(d_upper(&self.a, &[])?.d_upper))
    }

    fn small_l(&self) -> Result<&SmallLReport> {
        cached(&self.small_l, || small_l_construction(&self.a))
    }

    fn er(&self) -> Result<&ErChain> {
        cached(&self.er, || er_chain(&self.a))
    }

    /// `(K, description)` with `K = min(|AA|, |A/A|)/|A|`.
    fn k(&self) -> Result<(Quantity, String)> {
        let (p, d, n) = (self.prod(), self.quot()?, self.n());
        let k = Scalar::new(p.min(d), n).unwrap();
        let desc = format!("K={k} (|AA|/|A|={}, |A/A|/|A|={})", Scalar::new(p, n).unwrap(), Scalar::new(d, n).unwrap());
        Ok((qs(&k), desc))
    }

    fn inputs(&self, extra: &[String]) -> String {
        let mut s = self.digest.clone();
        for e in extra {
            s.push_str("; ");
            s.push_str(e);
        }
        s
    }

    fn require(&self, id: InequalityId) -> Result<()> {
        use InequalityId::*;
        if self.a.len() < 2 {
            return Err(Error::domain(format!("{id} needs |A| >= 2")));
        }
        let positive = matches!(id, SolyProd | SolyQuot | Lemma3 | ErSumF | ErEstU | ErEstFa | ErTripleLow);
        if positive && !self.a.all_positive() {
            return Err(Error::domain(format!("{id} needs positive elements")));
        }
        let additive_only = matches!(id, SolyMax);
        if !additive_only && self.a.has_zero() {
            return Err(Error::domain(format!("{id} needs 0 outside A")));
        }
        Ok(())
    }

    pub fn evaluate(&self, id: InequalityId, params: &Params) -> Result<InequalityReport> {
        use InequalityId::*;
        self.require(id)?;
        let n = self.n();
        let nq = q(n);
        let log = Quantity::log2(n);
        let ratio = InequalityReport::ratio_only;
        let lower_k = |num: i64, den: i64, k_num: i64, k_den: i64| -> Result<InequalityReport> {
            let (k, desc) = self.k()?;
            let rhs = nq.pow_frac(num, den).mul(&k.pow_frac(k_num, k_den));
            Ok(ratio(id, q(self.sum()), rhs, self.inputs(&[desc])))
        };
        match id {
            SolyProd | SolyQuot => {
                let other = if id == SolyProd { self.prod() } else { self.quot()? };
                let lhs = q(self.sum()).powi(2).mul(&q(other));
                let rhs = nq.powi(4).div(&q(4 * ceil_log2(n) as u64));
                Ok(InequalityReport::checked(id, lhs, rhs, None, self.inputs(&[])))
            }
            SolyMax => {
                let lhs = q(self.sum().max(self.prod()));
                Ok(ratio(id, lhs, nq.pow_frac(4, 3).mul(&log.pow_frac(-1, 3)), self.inputs(&[])))
            }
            CorSol => lower_k(3, 2, -1, 2),
            Prev => lower_k(58, 37, -42, 37),
            MainA => lower_k(19, 12, -5, 6),
            MainB | Small2 => lower_k(49, 32, -19, 32),
            SmallMd => {
                let mut r = lower_k(19, 12, -5, 6)?;
                r.rhs = r.rhs.mul(&log.pow_frac(-1, 2));
                r.ratio = r.lhs.div(&r.rhs);
                Ok(r)
            }
            PrevDa => {
                let d = self.d_hat()?;
                let rhs = nq.pow_frac(58, 37).mul(&qs(d).pow_frac(-21, 37));
                Ok(ratio(id, q(self.sum()), rhs, self.inputs(&[format!("d_upper={d}")])))
            }
            SmallMdEnergy => {
                let (k, desc) = self.k()?;
                let rhs = k
                    .pow_frac(1, 4)
                    .mul(&nq.pow_frac(5, 8))
                    .mul(&q(self.sum()).pow_frac(3, 2))
                    .mul(&log.pow_frac(3, 4));
                Ok(ratio(id, q(self.e_mul()?), rhs, self.inputs(&[desc])))
            }
            CsSubs => self.cs_subs(params),
            LevelSet | EnergySumset | DaLevel => self.two_set(id, params),
            GenSigma => self.gen_sigma(params),
            Er => {
                let e = q(self.e_add()).powi(4);
                let m = self.prod().min(self.quot()?);
                let rhs = q(m).mul(&nq.powi(10)).mul(&log);
                Ok(ratio(id, e, rhs, self.inputs(&[format!("E+={}", self.e_add())])))
            }
            PropCritQ | PropCritP => self.prop_crit(id),
            SolPlusQ | SolPlusP => {
                let other = if id == SolPlusQ { self.quot()? } else { self.prod() };
                let c = BigRational::new(1.into(), 20598.into()) - BigRational::new(1.into(), 1_000_000.into());
                let e = BigRational::new(4.into(), 3.into()) + &c;
                let rhs = nq.pow(&e);
                let inputs = self.inputs(&[format!("c={}/{}", c.numer(), c.denom())]);
                Ok(ratio(id, q(self.sum().max(other)), rhs, inputs))
            }
            ErSumF | ErEstU | ErEstFa | ErTripleLow => self.er_entry(id),
            Lemma3 => self.lemma3(params),
        }
    }

    fn cs_subs(&self, params: &Params) -> Result<InequalityReport> {
        let (a1, a2) = match &params.subsets {
            Some((x, y)) => (x.clone(), y.clone()),
            None => (self.a.clone(), self.a.clone()),
        };
        if !a1.is_subset(&self.a) || !a2.is_subset(&self.a) {
            return Err(Error::domain("CS-SUBS needs A1 and A2 inside A"));
        }
        let e = energy(&a1, &a2, EnergyKind::Multiplicative)?;
        let m = self.prod().min(self.quot()?);
        let lhs = q(e).mul(&q(m));
        let rhs = q(a1.len() as u64).powi(2).mul(&q(a2.len() as u64).powi(2));
        let inputs = self.inputs(&[format!("A1={}", set_digest(&a1)), format!("A2={}", set_digest(&a2))]);
        Ok(InequalityReport::checked(InequalityId::CsSubs, lhs, rhs, None, inputs))
    }

    fn two_set(&self, id: InequalityId, params: &Params) -> Result<InequalityReport> {
        let b = params.b.clone().unwrap_or_else(|| self.a.clone());
        if b.len() < 2 {
            return Err(Error::domain(format!("{id} needs |B| >= 2")));
        }
        if b.has_zero() {
            return Err(Error::domain(format!("{id} needs 0 outside B")));
        }
        let tau = params.tau.clone().unwrap_or_else(|| Scalar::int(2));
        let tau_q = || -> Result<Quantity> {
            if tau < Scalar::one() {
                return Err(Error::domain(format!("{id} needs tau >= 1")));
            }
            Ok(qs(&tau))
        };
        let bb = image_size(&b, &b, Op::Add)? as u64;
        let ss = q(self.sum()).mul(&q(bb));
        let mut extra = vec![format!("B={}", set_digest(&b))];
        let (lhs, rhs) = match id {
            InequalityId::LevelSet => {
                let t = tau_q()?;
                extra.push(format!("tau={tau}"));
                let count =
                    rep_counts(&self.a, &b, Op::Div)?.iter().filter(|(_, c)| Scalar::int(*c as i64) >= tau).count();
                (q(count as u64), ss.div(&t.powi(2)))
            }
            InequalityId::EnergySumset => {
                let e = energy(&self.a, &b, EnergyKind::Multiplicative)?;
                (q(e), ss.mul(&Quantity::log2(self.n().min(b.len() as u64))))
            }
            _ => {
                let t = tau_q()?;
                let d = self.d_hat()?;
                extra.push(format!("tau={tau}"));
                extra.push(format!("d_upper={d}"));
                let count =
                    rep_counts(&self.a, &b, Op::Add)?.iter().filter(|(_, c)| Scalar::int(*c as i64) >= tau).count();
                let rhs = qs(d).mul(&q(self.n())).mul(&q(b.len() as u64).powi(2)).div(&t.powi(3));
                (q(count as u64), rhs)
            }
        };
        Ok(InequalityReport::ratio_only(id, lhs, rhs, self.inputs(&extra)))
    }

    fn gen_sigma(&self, params: &Params) -> Result<InequalityReport> {
        let sets = params.sigma_sets.clone().unwrap_or_else(|| [self.a.clone(), self.a.clone(), self.a.clone()]);
        let alpha = params.alpha.clone().unwrap_or_else(|| [Scalar::one(), Scalar::one(), Scalar::int(-2)]);
        let r = sigma_count(&alpha[0], &sets[0], &alpha[1], &sets[1], &alpha[2], &sets[2])?;
        let d = if sets[0] == self.a { self.d_hat()?.clone() } else { d_upper(&sets[0], &[])?.d_upper };
        let len = |s: &FiniteSet| q(s.len() as u64);
        let rhs = qs(&d)
            .pow_frac(1, 3)
            .mul(&len(&sets[0]).pow_frac(1, 3))
            .mul(&len(&sets[1]).pow_frac(2, 3))
            .mul(&len(&sets[2]).pow_frac(2, 3));
        let mut extra = vec![format!("alpha=({}, {}, {})", alpha[0], alpha[1], alpha[2]), format!("d_upper={d}")];
        if params.sigma_sets.is_some() {
            extra.extend(sets.iter().enumerate().map(|(i, s)| format!("A{}={}", i + 1, set_digest(s))));
        }
        Ok(InequalityReport::ratio_only(InequalityId::GenSigma, q(r.count), rhs, self.inputs(&extra)))
    }

    fn prop_crit(&self, id: InequalityId) -> Result<InequalityReport> {
        let quotient = id == InequalityId::PropCritQ;
        let pi = if quotient { quotientset(&self.a, &self.a)? } else { productset(&self.a, &self.a) };
        if pi.len() > PROP_CRIT_LIMIT {
            return Err(Error::resource(format!(
                "{id}: energy of a {}-element set exceeds the limit {PROP_CRIT_LIMIT}",
                pi.len()
            )));
        }
        let lhs = q(multiplicative_energy(&pi)?);
        let sl = self.small_l()?;
        let l = if quotient { &sl.l_quot } else { &sl.l_prod };
        let rhs = q(self.e_mul()?).powi(3).div(&qs(l).powi(32).mul(&q(self.n()).powi(4)));
        Ok(InequalityReport::ratio_only(id, lhs, rhs, self.inputs(&[format!("L={l}")])))
    }

    fn er_entry(&self, id: InequalityId) -> Result<InequalityReport> {
        let c = self.er()?;
        let n = self.n();
        let e = c.additive_energy;
        let e_q = qs(&Scalar::int(e as i64));
        let half = Quantity::from_ratio(&BigRational::new(1.into(), 2.into())).unwrap();
        let (lhs, rhs, check, extra) = match id {
            InequalityId::ErSumF => (q(c.sum_f_squares), e_q.mul(&half), CHECK_SUM_F, vec![]),
            InequalityId::ErEstU => (q(c.u), e_q.mul(&half).div(&q(n)), CHECK_EST_U, vec![]),
            InequalityId::ErEstFa => {
                (q(4 * n * n).mul(&q(c.u)).div(&e_q), q(c.f.len() as u64 + n), CHECK_EST_FA, vec![])
            }
            _ => {
                let t = if c.t.is_exact() { "T exact" } else { "T is a lower bound" };
                let rhs = q(c.u).powi(4).div(&q(c.min_doubling).mul(&q(n).powi(2)));
                (Quantity::from_u128(c.t.value()), rhs, CHECK_TRIPLE_LOW, vec![t.to_string()])
            }
        };
        let mut extra = extra;
        extra.insert(0, format!("E+={e}, |F|={}, U={}", c.f.len(), c.u));
        Ok(InequalityReport::checked(id, lhs, rhs, Some(c.checks[check]), self.inputs(&extra)))
    }

    fn lemma3(&self, params: &Params) -> Result<InequalityReport> {
        if params.slopes.is_some() && params.tau.is_none() {
            return Err(Error::domain("LEMMA3 slopes need an explicit tau"));
        }
        let budget = params.sigma_budget.unwrap_or(LEMMA3_SIGMA_BUDGET);
        let taus = match &params.tau {
            Some(t) => vec![t.clone()],
            None => slice_taus(&self.a)?,
        };
        let mut instances: Vec<ClusterReport> = Vec::new();
        let mut skipped = Vec::new();
        for tau in &taus {
            let ctx = match ClusterContext::new(&self.a, tau, params.slopes.as_ref(), budget) {
                Ok(c) => c,
                Err(Error::Resource(_)) if params.tau.is_none() => {
                    skipped.push(tau.clone());
                    continue;
                }
                Err(e) => return Err(e),
            };
            if ctx.slope_count() < 2 && params.tau.is_none() {
                continue;
            }
            let m = params.group_size.unwrap_or_else(|| default_group_size(&ctx, tau));
            instances.push(ctx.report(m)?);
        }
        if instances.is_empty() {
            return Err(if skipped.is_empty() {
                Error::domain("LEMMA3 needs a slice with two slopes")
            } else {
                Error::resource(format!("LEMMA3: sigma search over budget at every slice ({} skipped)", skipped.len()))
            });
        }
        let pass = instances.iter().all(lemma_holds);
        let sumset_sq = q(self.sum()).powi(2);
        let tight = instances
            .iter()
            .min_by(|x, y| sumset_sq.div(&x.lemma_rhs).total_cmp(&sumset_sq.div(&y.lemma_rhs)))
            .unwrap();
        let held = instances.iter().filter(|r| r.conditions_hold()).count();
        let mut extra = vec![
            format!(
                "tau={}, M={}, sigma={}{}",
                tight.tau,
                tight.m,
                tight.sigma_used,
                if tight.sigma_exact { "" } else { "+" }
            ),
            format!("conditions held in {held} of {} slices", instances.len()),
        ];
        if !skipped.is_empty() {
            let list: Vec<String> = skipped.iter().map(|t| t.to_string()).collect();
            extra.push(format!("skipped tau {}", list.join(",")));
        }
        Ok(InequalityReport::checked(
            InequalityId::Lemma3,
            sumset_sq,
            tight.lemma_rhs.clone(),
            Some(pass),
            self.inputs(&extra),
        ))
    }
}

/// Whether the conditions imply the conclusion for this instance, including the
/// containment of every vector sum in `(A+A) × (A+A)`.
pub fn lemma_holds(r: &ClusterReport) -> bool {
    !r.conditions_hold() || (r.lemma_pass && r.sums_inside && r.total_within_square)
}

/// `⌊√(τ²/(8σ))⌋` clamped to `[2, |S′|]`.
fn default_group_size(ctx: &ClusterContext, tau: &Scalar) -> usize {
    let sigma = ctx.sigma().value.max(1);
    let t2 = tau.ratio() * tau.ratio();
    let x = (t2 / BigRational::from_integer(BigInt::from(8 * sigma))).floor().to_integer();
    let m = x.sqrt().to_usize().unwrap_or(usize::MAX);
    m.clamp(2, ctx.slope_count().max(2))
}

pub fn evaluate(id: InequalityId, a: &FiniteSet, params: &Params) -> Result<InequalityReport> {
    Evaluator::new(a).evaluate(id, params)
}
