// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumprod_core::counting::{
    collinear_triples, er_chain, sigma_count, sigma_max, slice_taus, ClusterContext, CLUSTER_SIGMA_BUDGET,
};
use sumprod_core::exactset::PointSet;
use sumprod_core::explore::{
    corpus_load, corpus_store, generate, search_extremal, GeneratorSpec, SearchConfig, SearchMode,
};
use sumprod_core::stats::{additive_energy, energy, image_size, multiplicative_energy, spectrum, EnergyKind};
use sumprod_core::verify::{evaluate, katz_koester_check, lemma_holds, verify_suite, InequalityId, Params};
use sumprod_core::{oracle, FiniteSet, Op, Quantity, Scalar};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: i64) -> Scalar {
    Scalar::int(v)
}

fn ap(n: usize) -> FiniteSet {
    generate(&GeneratorSpec::Ap { start: Scalar::one(), step: Scalar::one(), n }).unwrap()
}

fn gp(n: usize) -> FiniteSet {
    generate(&GeneratorSpec::Gp { start: Scalar::one(), ratio: int(2), n }).unwrap()
}

/// AP, GP and AP×GP sets with `2 ≤ |A| ≤ max`.
fn structured(max: usize) -> Vec<(String, FiniteSet)> {
    let mut v = Vec::new();
    for n in 2..=max {
        v.push((format!("ap{n}"), ap(n)));
        v.push((format!("gp{n}"), gp(n)));
        v.push((
            format!("ap{n}/3"),
            generate(&GeneratorSpec::Ap { start: Scalar::new(1, 3).unwrap(), step: Scalar::new(2, 3).unwrap(), n })
                .unwrap(),
        ));
        if n >= 4 && n % 2 == 0 {
            let spec =
                GeneratorSpec::ApTimesGp { start: Scalar::one(), step: Scalar::one(), n: n / 2, ratio: int(3), m: 2 };
            v.push((format!("apxgp{n}"), generate(&spec).unwrap()));
        }
    }
    v
}

/// 500 seeded random sets of positive integers and rationals with `2 ≤ |A| ≤ 32`.
fn random_corpus() -> Vec<(String, FiniteSet)> {
    (0..500u64)
        .map(|seed| {
            let n = 2 + (seed as usize * 7) % 31;
            let spec = if seed % 2 == 0 {
                GeneratorSpec::RandomInteger { n, range: 3 * n as u64 + 10, seed }
            } else {
                GeneratorSpec::RandomRational { n, range: 12, seed }
            };
            (format!("random{seed}"), generate(&spec).unwrap())
        })
        .collect()
}

/// `X ∪ 2X` and `X ∪ 2X ∪ 4X` for odd `X`: two slopes share a slice with fibers
/// above 8, which is where both cluster hypotheses can hold at this scale.
fn dilate_unions() -> Vec<(String, FiniteSet)> {
    let mut v = Vec::new();
    for seed in 0..16u64 {
        let n = 9 + seed as usize % 8;
        let x = generate(&GeneratorSpec::RandomInteger { n, range: 200, seed: 100 + seed }).unwrap();
        let odd = FiniteSet::new(x.iter().map(|y| &(y + y) + &Scalar::one())).unwrap();
        let two = odd.union(&odd.dilate(&int(2)).unwrap());
        v.push((format!("xu2x{seed}"), two.clone()));
        v.push((format!("xu2xu4x{seed}"), two.union(&odd.dilate(&int(4)).unwrap())));
    }
    v
}

fn random_rational(rng: &mut ChaCha8Rng, range: i64) -> Scalar {
    let p = rng.gen_range(1..=range);
    let q = if rng.gen_bool(0.3) { rng.gen_range(1..=6) } else { 1 };
    Scalar::new(if rng.gen_bool(0.3) { -p } else { p }, q).unwrap()
}

fn random_signed_set(rng: &mut ChaCha8Rng, max: usize, range: i64) -> FiniteSet {
    let n = rng.gen_range(1..=max);
    FiniteSet::new((0..n).map(|_| random_rational(rng, range))).unwrap()
}

fn energy_identity() -> Outcome {
    let start = Instant::now();
    let mut sets: Vec<(String, FiniteSet)> = (0..500u64)
        .map(|seed| {
            let n = 2 + (seed as usize * 13) % 47;
            (format!("rational{seed}"), generate(&GeneratorSpec::RandomRational { n, range: 40, seed }).unwrap())
        })
        .collect();
    sets.extend(structured(32));
    for (name, a) in &sets {
        let fibers: u64 = spectrum(a).map_err(|e| e.to_string())?.iter().map(|(_, s)| s * s).sum();
        let e = multiplicative_energy(a).map_err(|e| e.to_string())?;
        ensure(e == fibers, || format!("{name}: E = {e}, fiber sum {fibers}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} sets, {:.1}s", sets.len(), elapsed.as_secs_f64()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100 {
        let a = random_signed_set(&mut rng, 20, 30);
        let b = random_signed_set(&mut rng, 20, 30);
        for op in [Op::Add, Op::Mul] {
            let fast =
                energy(&a, &b, if op == Op::Add { EnergyKind::Additive } else { EnergyKind::Multiplicative }).unwrap();
            ensure(fast == oracle::energy_brute(&a, &b, op), || format!("energy {op:?} on pair {i}"))?;
        }
    }
    let mut grids = 0;
    for w in 1..=8 {
        for h in 1..=8 {
            let g = PointSet::grid(w, h);
            ensure(collinear_triples(&g) == oracle::triples_brute(&g), || format!("grid {w}x{h}"))?;
            grids += 1;
        }
    }
    for i in 0..100 {
        let n = rng.gen_range(1..=30);
        let p = PointSet::new((0..n).map(|_| (random_rational(&mut rng, 6), random_rational(&mut rng, 6))));
        ensure(collinear_triples(&p) == oracle::triples_brute(&p), || format!("random point set {i}"))?;
    }
    Ok(format!("200 energies, {grids} grids, 100 point sets"))
}
const EXPLICIT: [InequalityId; 7] = [
    InequalityId::SolyProd,
    InequalityId::SolyQuot,
    InequalityId::CsSubs,
    InequalityId::ErSumF,
    InequalityId::ErEstU,
    InequalityId::ErEstFa,
    InequalityId::ErTripleLow,
];

fn random_subset(rng: &mut ChaCha8Rng, a: &FiniteSet) -> FiniteSet {
    let k = rng.gen_range(1..=a.len());
    FiniteSet::new(a.elements().choose_multiple(rng, k).cloned()).unwrap()
}

fn explicit_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sets = structured(64);
    sets.extend(random_corpus());
    let (mut checks, mut cs) = (0usize, 0usize);
    for (name, a) in &sets {
        let out = verify_suite(a, Some(&EXPLICIT));
        if let Some((id, e)) = out.errors.first() {
            return Err(format!("{name}: {id} errored: {e}"));
        }
        if let Some(r) = out.failures().next() {
            return Err(format!("{name}: {} failed: lhs {} rhs {}", r.id, r.lhs, r.rhs));
        }
        checks += out.reports.len();
        for _ in 0..50 {
            let params =
                Params { subsets: Some((random_subset(&mut rng, a), random_subset(&mut rng, a))), ..Params::default() };
            let r = evaluate(InequalityId::CsSubs, a, &params).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.pass == Some(true), || format!("{name}: CS-SUBS failed on {}", r.inputs))?;
            cs += 1;
        }
        let kk = katz_koester_check(a).map_err(|e| e.to_string())?;
        ensure(kk.is_empty(), || format!("{name}: Katz–Koester violation {:?}", kk[0]))?;
    }
    Ok(format!("{} sets, {checks} entry checks, {cs} subset pairs, no inclusion violations", sets.len()))
}

fn lemma3_end_to_end() -> Outcome {
    let mut sets = structured(64);
    sets.extend(random_corpus());
    sets.extend(dilate_unions());
    let (mut taus, mut held, mut instances, mut skipped) = (0usize, 0usize, 0usize, 0usize);
    for (name, a) in &sets {
        for tau in slice_taus(a).map_err(|e| e.to_string())? {
            let ctx = match ClusterContext::new(a, &tau, None, CLUSTER_SIGMA_BUDGET) {
                Ok(c) => c,
                Err(sumprod_core::Error::Resource(_)) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(format!("{name} tau {tau}: {e}")),
            };
            taus += 1;
            ensure(ctx.all_sums_inside(), || format!("{name} tau {tau}: a vector sum leaves (A+A)x(A+A)"))?;
            let (c1, c2) = ctx.conditions();
            if !(c1 && c2) || ctx.slope_count() < 2 {
                continue;
            }
            held += 1;
            for m in 2..=ctx.slope_count() {
                let r = ctx.report(m).map_err(|e| e.to_string())?;
                ensure(r.sums_inside && lemma_holds(&r), || format!("{name} tau {tau} M {m}: {r:?}"))?;
                instances += 1;
            }
        }
    }
    ensure(skipped == 0, || format!("{skipped} slices exceeded the σ budget"))?;
    ensure(held > 0, || "the hypotheses never held; the check is vacuous".to_string())?;
    Ok(format!("{} sets, {taus} slices; hypotheses held on {held} slices, {instances} (tau, M) instances", sets.len()))
}

fn fixtures() -> Outcome {
    let three = FiniteSet::from_ints(&[1, 2, 3]).unwrap();
    let checks: [(&str, u128, u128); 6] = [
        ("E+({1,2,3})", additive_energy(&three) as u128, oracle::energy_brute(&three, &three, Op::Add) as u128),
        (
            "Ex({1,2,3})",
            multiplicative_energy(&three).unwrap() as u128,
            oracle::energy_brute(&three, &three, Op::Mul) as u128,
        ),
        (
            "|A/A|",
            image_size(&three, &three, Op::Div).unwrap() as u128,
            oracle::rep_counts_brute(&three, &three, Op::Div).len() as u128,
        ),
        ("T(2x2 grid)", collinear_triples(&PointSet::grid(2, 2)) as u128, oracle::triples_brute(&PointSet::grid(2, 2))),
        (
            "sigma((1,1,-1))",
            sigma_count(&int(1), &three, &int(1), &three, &int(-1), &three).unwrap().count as u128,
            oracle::sigma_count_brute([&int(1), &int(1), &int(-1)], [&three, &three, &three]) as u128,
        ),
        ("|F|", er_chain(&three).unwrap().f.len() as u128, 3),
    ];
    let expected: [u128; 6] = [19, 15, 7, 40, 3, 3];
    for ((name, fast, brute), want) in checks.iter().zip(expected) {
        ensure(*fast == want && *brute == want, || format!("{name}: fast {fast}, brute {brute}, expected {want}"))?;
    }
    let chain = er_chain(&three).unwrap();
    ensure(chain.f == FiniteSet::from_ints(&[3, 4, 5]).unwrap(), || format!("F = {}", chain.f))?;
    ensure(chain.u == 7, || format!("U = {}", chain.u))?;
    Ok("6 values, each matched by its oracle; F = {3,4,5}, U = 7".to_string())
}

fn gp_regression() -> Outcome {
    for n in 2..=32usize {
        let a = gp(n);
        let prod = image_size(&a, &a, Op::Mul).unwrap();
        let sum = image_size(&a, &a, Op::Add).unwrap();
        ensure(prod == 2 * n - 1 && sum == n * (n + 1) / 2, || format!("n={n}: |AA| = {prod}, |A+A| = {sum}"))?;
    }
    // |A+A| K^{1/2} / |A|^{3/2} with |A+A| = 136, K = 31/16, |A| = 16, from brute-force sizes.
    let a = gp(16);
    let sum = oracle::rep_counts_brute(&a, &a, Op::Add).len() as u64;
    let prod = oracle::rep_counts_brute(&a, &a, Op::Mul).len() as u64;
    let quot = oracle::rep_counts_brute(&a, &a, Op::Div).len() as u64;
    let k = Quantity::from_u64(prod.min(quot)).div(&Quantity::from_u64(16));
    let expected = Quantity::from_u64(sum).mul(&k.pow_frac(1, 2)).div(&Quantity::from_u64(16).pow_frac(3, 2));
    let got = evaluate(InequalityId::CorSol, &a, &Params::default()).map_err(|e| e.to_string())?.ratio;
    ensure(got == expected, || format!("COR-SOL ratio {got}, expected {expected}"))?;
    ensure(got.to_string() == "17/32 * 31^(1/2)", || format!("COR-SOL ratio {got}"))?;
    Ok(format!("n = 2..32 closed forms; COR-SOL(gp16) = {got}"))
}

/// Coefficients `(1, α₂, α₃)` solving two triples' equations at once.
fn pair_system_max(s: &[FiniteSet]) -> u64 {
    let triples: Vec<[&Scalar; 3]> =
        s[0].iter().flat_map(|x| s[1].iter().flat_map(move |y| s[2].iter().map(move |z| [x, y, z]))).collect();
    let one = Scalar::one();
    let mut best = 0;
    for (i, p) in triples.iter().enumerate() {
        for t in &triples[i + 1..] {
            let det = &(p[1] * t[2]) - &(p[2] * t[1]);
            if det.is_zero() {
                continue;
            }
            let a2 = (&(t[0] * p[2]) - &(p[0] * t[2])).checked_div(&det).unwrap();
            let a3 = (&(p[0] * t[1]) - &(t[0] * p[1])).checked_div(&det).unwrap();
            if !a2.is_zero() && !a3.is_zero() {
                best = best.max(oracle::sigma_count_brute([&one, &a2, &a3], [&s[0], &s[1], &s[2]]));
            }
        }
    }
    best
}

fn sigma_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut via_pairs = 0;
    for i in 0..50 {
        let s: Vec<FiniteSet> = (0..3).map(|_| random_signed_set(&mut rng, 6, 10)).collect();
        let best = sigma_max(&s[0], &s[1], &s[2]).map_err(|e| e.to_string())?;
        for c in oracle::random_coefficients(1000 + i, 200) {
            let k = oracle::sigma_count_brute([&c[0], &c[1], &c[2]], [&s[0], &s[1], &s[2]]);
            ensure(k <= best.count, || format!("instance {i}: sample {c:?} gives {k} > {}", best.count))?;
        }
        let pairs = pair_system_max(&s);
        ensure(pairs <= best.count, || format!("instance {i}: pair system gives {pairs} > {}", best.count))?;
        // a maximum of at least two solutions sits where two triples' lines cross
        if best.count >= 2 {
            ensure(pairs == best.count, || format!("instance {i}: max {} not attained by a pair system", best.count))?;
            via_pairs += 1;
        }
    }
    Ok(format!("50 instances x 200 samples; {via_pairs} maxima >= 2 attained by pair systems"))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ratios.json")
}

fn golden_ratios() -> Outcome {
    const IDS: [InequalityId; 5] = [
        InequalityId::MainA,
        InequalityId::MainB,
        InequalityId::SmallMdEnergy,
        InequalityId::Er,
        InequalityId::PropCritQ,
    ];
    let mut current = BTreeMap::new();
    for n in [4usize, 8, 16, 32] {
        for (family, a) in [("ap", ap(n)), ("gp", gp(n))] {
            for id in IDS.iter().copied().chain([InequalityId::PropCritP]) {
                let r = evaluate(id, &a, &Params::default()).map_err(|e| format!("{id} {family}{n}: {e}"))?;
                current.insert(format!("{id}/{family}{n}"), r.ratio.to_string());
            }
        }
    }
    let path = golden_path();
    if !path.exists() {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        let text = serde_json::to_string_pretty(&current).unwrap() + "\n";
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        return Ok(format!("{} ratios written to {}", current.len(), path.display()));
    }
    let stored: BTreeMap<String, String> =
        serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(stored.len() == current.len(), || format!("{} stored ratios, {} computed", stored.len(), current.len()))?;
    for (key, value) in &current {
        ensure(stored.get(key) == Some(value), || format!("{key}: stored {:?}, computed {value}", stored.get(key)))?;
    }
    Ok(format!("{} ratios reproduce exactly", current.len()))
}

fn performance() -> Outcome {
    let big = generate(&GeneratorSpec::RandomInteger { n: 4096, range: 1_000_000, seed: 9 }).unwrap();
    let t = Instant::now();
    let e = multiplicative_energy(&big).map_err(|e| e.to_string())?;
    let energy_time = t.elapsed();
    ensure(energy_time < Duration::from_secs(5), || format!("E^x of 4096 elements took {energy_time:?}"))?;

    let a = gp(256);
    let t = Instant::now();
    let out = verify_suite(&a, None);
    let suite_time = t.elapsed();
    ensure(suite_time < Duration::from_secs(60), || format!("suite on gp(256) took {suite_time:?}"))?;
    ensure(out.all_explicit_pass(), || "an explicit entry failed on gp(256)".to_string())?;
    let errs: Vec<String> = out.errors.iter().map(|(id, _)| id.to_string()).collect();
    Ok(format!(
        "E^x(4096) = {e} in {:.2}s; suite on gp(256): {} reports in {:.1}s, skipped [{}]",
        energy_time.as_secs_f64(),
        out.reports.len(),
        suite_time.as_secs_f64(),
        errs.join(", ")
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("corpus.jsonl");
    let config = SearchConfig { budget: 80, seed: 17, restarts: 2, ..SearchConfig::default() };
    let mut stored = 0;
    for id in [InequalityId::CorSol, InequalityId::MainA, InequalityId::SolyProd, InequalityId::Er] {
        let first = search_extremal(id, 5, SearchMode::Hillclimb, &config).map_err(|e| e.to_string())?;
        let second = search_extremal(id, 5, SearchMode::Hillclimb, &config).map_err(|e| e.to_string())?;
        ensure(first.record.same_result(&second.record), || format!("{id}: two runs differ"))?;
        corpus_store(&first.record, &path).map_err(|e| e.to_string())?;
        stored += 1;
    }
    let loaded = corpus_load(&path).map_err(|e| e.to_string())?;
    ensure(loaded.len() == stored, || format!("{} of {stored} records loaded", loaded.len()))?;
    let drift = loaded.iter().filter(|l| l.drift).count();
    ensure(drift == 0, || format!("{drift} records drifted"))?;
    Ok(format!("{stored} searches repeat exactly; round trip without drift"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("energy identity", energy_identity),
        ("oracle equivalence", oracle_equivalence),
        ("explicit-constant suite", explicit_suite),
        ("cluster lemma end to end", lemma3_end_to_end),
        ("hand-checked fixtures", fixtures),
        ("geometric progression regression", gp_regression),
        ("sigma_max soundness", sigma_soundness),
        ("golden tightness ratios", golden_ratios),
        ("performance", performance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
