use num_rational::BigRational;
use num_traits::Pow;

use sumprod_core::explore::{bsg_subset_oracle, generate, GeneratorSpec};
use sumprod_core::oracle;
use sumprod_core::stats::ceil_log2;
use sumprod_core::verify::{
    evaluate, katz_koester_check, small_l_construction, solplus_trace, verify_suite, InequalityId, Params,
};
use sumprod_core::{Error, FiniteSet, Op, Quantity, Scalar};

fn set(v: &[i64]) -> FiniteSet {
    FiniteSet::from_ints(v).unwrap()
}

fn gp(n: u32) -> FiniteSet {
    FiniteSet::new((0..n).map(|i| Scalar::int(1 << i))).unwrap()
}

fn s(x: &str) -> Scalar {
    x.parse().unwrap()
}

fn qt(x: &str) -> Quantity {
    x.parse().unwrap()
}

#[test]
fn solymosi_product_on_one_two_three() {
    let r = evaluate(InequalityId::SolyProd, &set(&[1, 2, 3]), &Params::default()).unwrap();
    assert_eq!(r.lhs, qt("150/1"));
    assert_eq!(r.rhs, qt("81/8"));
    assert_eq!(r.pass, Some(true));
    assert!(r.explicit);
}

#[test]
fn cauchy_schwarz_subsets_on_one_two_three() {
    let r = evaluate(InequalityId::CsSubs, &set(&[1, 2, 3]), &Params::default()).unwrap();
    assert_eq!(r.lhs, qt("90/1"));
    assert_eq!(r.rhs, qt("81/1"));
    assert_eq!(r.pass, Some(true));
    let p = Params { subsets: Some((set(&[1, 2]), set(&[5]))), ..Params::default() };
    assert!(evaluate(InequalityId::CsSubs, &set(&[1, 2, 3]), &p).is_err());
}

#[test]
fn level_set_on_one_two_three() {
    let r = evaluate(InequalityId::LevelSet, &set(&[1, 2, 3]), &Params::default()).unwrap();
    assert_eq!(r.lhs, qt("1/1"));
    assert_eq!(r.rhs, qt("25/4"));
    assert_eq!(r.ratio, qt("4/25"));
    assert_eq!(r.pass, None);
}

#[test]
fn main_a_on_powers_of_two() {
    let a = gp(16);
    let r = evaluate(InequalityId::MainA, &a, &Params::default()).unwrap();
    assert_eq!(r.lhs, qt("136/1"));
    let k = Quantity::from_ratio(&BigRational::new(31.into(), 16.into())).unwrap();
    let rhs = Quantity::from_u64(16).pow_frac(19, 12).mul(&k.pow_frac(-5, 6));
    assert_eq!(r.rhs, rhs);
    assert_eq!(r.ratio, Quantity::from_u64(136).div(&rhs));
    assert!(r.pass.is_none());
}

#[test]
fn suite_on_one_two_three() {
    let out = verify_suite(&set(&[1, 2, 3]), None);
    for (id, e) in &out.errors {
        eprintln!("{id}: {e}");
    }
    assert!(out.reports.len() >= 14);
    assert!(out.all_explicit_pass());
    let ids: Vec<InequalityId> = out.reports.iter().map(|r| r.id).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for r in &out.reports {
        assert_eq!(r.pass.is_some(), r.explicit, "{}", r.id);
    }
}

#[test]
fn suite_selected_entries() {
    let a = FiniteSet::new((1..=64).map(Scalar::int)).unwrap();
    let out = verify_suite(&a, Some(&[InequalityId::SolyProd]));
    assert_eq!(out.reports.len(), 1);
    assert_eq!(out.reports[0].pass, Some(true));
    let out = verify_suite(&gp(16), Some(&[InequalityId::SolyQuot]));
    assert_eq!(out.reports[0].pass, Some(true));
    // |A/A| = 31 for the 16 powers of two
    assert_eq!(out.reports[0].lhs, Quantity::from_u64(136 * 136 * 31));
}

#[test]
fn preconditions_are_reported() {
    let neg = set(&[-2, 1, 3]);
    assert!(matches!(evaluate(InequalityId::SolyProd, &neg, &Params::default()), Err(Error::Domain(_))));
    assert!(matches!(evaluate(InequalityId::ErSumF, &neg, &Params::default()), Err(Error::Domain(_))));
    assert!(matches!(evaluate(InequalityId::MainA, &set(&[0, 1, 2]), &Params::default()), Err(Error::Domain(_))));
    assert!(evaluate(InequalityId::SolyMax, &set(&[0, 1, 2]), &Params::default()).is_ok());
    assert!(evaluate(InequalityId::SolyProd, &set(&[4]), &Params::default()).is_err());
    assert!(matches!("SOLY-NOPE".parse::<InequalityId>(), Err(Error::UnknownId(_))));
}

#[test]
fn multiplicative_entries_are_dilation_invariant() {
    let a = set(&[1, 2, 3, 5, 8, 13]);
    let b = a.dilate(&s("-7/3")).unwrap();
    for id in
        [InequalityId::SolyMax, InequalityId::CsSubs, InequalityId::CorSol, InequalityId::MainB, InequalityId::GenSigma]
    {
        let x = evaluate(id, &a, &Params::default()).unwrap();
        let y = evaluate(id, &b, &Params::default()).unwrap();
        assert_eq!(x.ratio, y.ratio, "{id}");
    }
}

#[test]
fn small_l_on_one_two_three() {
    let r = small_l_construction(&set(&[1, 2, 3])).unwrap();
    assert_eq!(r.multiplicative_energy, 15);
    assert_eq!(r.threshold, s("5/6"));
    let sl = r.slice.unwrap();
    assert_eq!(sl.tau, Scalar::int(2));
    assert_eq!(sl.s_tau, set(&[1]));
    assert_eq!(sl.s_prime, set(&[1]));
    assert_eq!(sl.s_doubleprime, set(&[1]));
    assert_eq!(sl.min_additive_energy_ratio, s("19/8"));
    assert!(small_l_construction(&set(&[3])).is_err());
}

#[test]
fn small_l_on_four_powers_of_two() {
    let a = gp(4);
    assert_eq!(oracle::spectrum_energy_brute(&a), 44);
    let r = small_l_construction(&a).unwrap();
    assert_eq!(r.threshold, s("11/8"));
    let sl = r.slice.unwrap();
    // sizes 3, 4, 3 for λ = 1/2, 1, 2 all fall in the window (2, 4]
    assert_eq!(sl.tau, Scalar::int(2));
    assert_eq!(sl.s_tau, FiniteSet::new([s("1/2"), s("1"), s("2")]).unwrap());
    // E⁺ of the three fibers: 15, 28, 15; the smallest (15, 1/2) is dropped
    let fib = |l: &str| {
        let l = s(l);
        FiniteSet::new(a.iter().filter(|x| a.contains(&x.checked_div(&l).unwrap())).cloned()).unwrap()
    };
    assert_eq!(oracle::energy_brute(&fib("1/2"), &fib("1/2"), Op::Add), 15);
    assert_eq!(oracle::energy_brute(&fib("2"), &fib("2"), Op::Add), 15);
    assert_eq!(oracle::energy_brute(&fib("1"), &fib("1"), Op::Add), 28);
    assert_eq!(sl.s_doubleprime, FiniteSet::new([s("1/2")]).unwrap());
    assert_eq!(sl.s_prime, set(&[1, 2]));
    assert_eq!(sl.min_additive_energy_ratio, s("15/8"));
    // |A₂/A₂| = 5 for A₂ = {2, 4, 8}
    assert_eq!(sl.min_quotient_ratio, s("5/4"));
    assert_eq!(sl.min_product_ratio, s("5/4"));
}

#[test]
fn small_l_slice_carries_a_log_share_of_the_energy() {
    let mut sets: Vec<FiniteSet> = (2..=40).map(|n| FiniteSet::new((1..=n).map(Scalar::int)).unwrap()).collect();
    sets.extend((2..=24).map(gp));
    sets.extend((0..30u64).map(|seed| {
        let n = 2 + (seed as usize * 5) % 29;
        generate(&GeneratorSpec::RandomRational { n, range: 10, seed }).unwrap()
    }));
    for a in sets {
        let r = small_l_construction(&a).unwrap();
        let sl = r.slice.as_ref().unwrap();
        let selected = &Scalar::int(sl.s_tau.len() as i64) * &(&sl.tau * &sl.tau);
        let total = r.slice_weights.iter().fold(Scalar::zero(), |acc, (_, w)| &acc + w);
        let slices = Scalar::int(ceil_log2(a.len() as u64) as i64 + 1);
        assert!(&selected * &slices >= total, "{a}");
        assert!(total >= Scalar::new(r.multiplicative_energy as i64, 4).unwrap(), "{a}");
        assert!(sl.tau >= r.threshold);
        assert!(2 * sl.s_prime.len() >= sl.s_tau.len());
    }
}

#[test]
fn katz_koester_fixtures() {
    for a in [set(&[1, 2, 3]), gp(4), set(&[7]), set(&[2, 3, 5, 6, 10, 15])] {
        assert!(katz_koester_check(&a).unwrap().is_empty(), "{a}");
    }
}

#[test]
fn solplus_on_one_two_three() {
    let t = solplus_trace(&set(&[1, 2, 3]), 14).unwrap();
    assert_eq!(t.tau, Scalar::int(2));
    assert_eq!(t.s_prime, set(&[1]));
    assert_eq!(t.s_doubleprime, set(&[1]));
    assert_eq!(t.a_witness, Scalar::one());
    assert_eq!(t.a_prime, set(&[1]));
    assert!(t.bsg_objective.is_none());
}

#[test]
fn solplus_on_four_powers_of_two() {
    let t = solplus_trace(&gp(4), 14).unwrap();
    assert_eq!(t.s_prime, set(&[1, 2]));
    assert_eq!(t.s_doubleprime, set(&[1, 2]));
    assert_eq!(t.bsg_objective, Some(s("3/2")));
    assert_eq!(t.a_witness, Scalar::one());
    assert_eq!(t.a_prime, set(&[1, 2]));
    // |A+A| = 10, |A/A| = 7: L = 700/256
    let l = BigRational::new(175.into(), 64.into());
    assert_eq!(t.l, Scalar::from_ratio(l.clone()));
    assert_eq!(t.l_prime, Scalar::from_ratio(BigRational::new(343.into(), 256.into())));
    let eta =
        BigRational::from_integer((44 * 64).into()) / (Pow::pow(&l, 64i32) * BigRational::from_integer(16807.into()));
    assert_eq!(t.eta, Scalar::from_ratio(eta));
}

#[test]
fn solplus_guards_the_oracle_size() {
    // for 32 powers of two the top slice holds the 31 ratios 2^k with |k| < 16
    let a = gp(32);
    let r = small_l_construction(&a).unwrap();
    let size = r.slice.unwrap().s_prime.len();
    assert!(size > 14, "{size}");
    assert!(matches!(solplus_trace(&a, 14), Err(Error::Resource(_))));
    assert!(matches!(solplus_trace(&a, 15), Err(Error::Resource(_))));
}

#[test]
fn bsg_oracle_fixtures() {
    let (sub, obj) = bsg_subset_oracle(&gp(4), 14).unwrap();
    assert_eq!(sub, gp(4));
    assert_eq!(obj, s("7/4"));
    let (sub, obj) = bsg_subset_oracle(&set(&[1, 2]), 14).unwrap();
    assert_eq!(sub, set(&[1, 2]));
    assert_eq!(obj, s("3/2"));
    assert!(bsg_subset_oracle(&set(&[3]), 14).is_err());
    let big = FiniteSet::new((1..=15).map(Scalar::int)).unwrap();
    assert!(matches!(bsg_subset_oracle(&big, 14), Err(Error::Resource(_))));
}

#[test]
fn lemma3_entry_on_small_sets() {
    for a in [set(&[1, 2, 3]), set(&[1, 2, 3, 4, 6, 9, 12, 18, 36]), gp(8)] {
        let r = evaluate(InequalityId::Lemma3, &a, &Params::default()).unwrap();
        assert_eq!(r.pass, Some(true), "{a}: {}", r.inputs);
    }
}
