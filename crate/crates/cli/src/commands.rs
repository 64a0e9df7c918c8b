use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sumprod_core::counting::{collinear_triples, collinear_triples_product, sigma_count, sigma_max, SIGMA_MAX_TRIPLES};
use sumprod_core::exactset::{read_set_file, PointSet};
use sumprod_core::explore::{corpus_store, search_extremal, Direction, SearchConfig, SearchMode};
use sumprod_core::stats::{additive_energy, d_upper, dyadic_slices, image_size, multiplicative_energy, Op};
use sumprod_core::verify::{parse_ids, verify_suite, InequalityId};
use sumprod_core::{oracle, Error, FiniteSet, Result};

use crate::display;

// Writes to stdout, ignoring a closed pipe so `| head` does not panic.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

use crate::exit;
use crate::OracleOp;

fn load(path: &Path) -> Result<FiniteSet> {
    let parsed = read_set_file(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })?;
    for line in &parsed.duplicate_lines {
        eprintln!("warning: {}:{line}: duplicate value dropped", path.display());
    }
    Ok(parsed.set)
}

fn print_json(v: &(impl serde::Serialize + ?Sized)) -> Result<()> {
    out!("{}", serde_json::to_string(v)?);
    Ok(())
}

pub fn stats(input: &Path, json: bool) -> Result<u8> {
    let a = load(input)?;
    let n = a.len();
    let sum = image_size(&a, &a, Op::Add)?;
    let prod = image_size(&a, &a, Op::Mul)?;
    let e_add = additive_energy(&a);
    let zero_free = !a.has_zero();
    let quot = if zero_free { Some(image_size(&a, &a, Op::Div)?) } else { None };
    let e_mul = if zero_free { Some(multiplicative_energy(&a)?) } else { None };
    let slices = if zero_free { dyadic_slices(&a)? } else { Vec::new() };
    let profile = if zero_free { Some(d_upper(&a, &[])?) } else { None };

    if json {
        let spectrum: Vec<Value> = slices
            .iter()
            .map(|s| json!({"tau": s.tau.to_pq(), "count": s.lambdas.len(), "max_size": s.sizes.values().max()}))
            .collect();
        let doubling = profile.as_ref().map(
            |p| json!({"k_mul": p.k_mul.to_pq(), "d_upper": p.d_upper.to_pq(), "witness": p.witness_c.to_pq_strings()}),
        );
        return print_json(&json!({
            "size": n,
            "sumset": sum,
            "productset": prod,
            "quotientset": quot,
            "additive_energy": e_add,
            "multiplicative_energy": e_mul,
            "spectrum": spectrum,
            "doubling": doubling,
        }))
        .map(|_| 0);
    }
    out!("|A|      {n}");
    out!("|A+A|    {sum}");
    out!("|AA|     {prod}");
    match quot {
        Some(q) => out!("|A/A|    {q}"),
        None => out!("|A/A|    undefined (0 in A)"),
    }
    out!("E+(A)    {e_add}");
    if let Some(e) = e_mul {
        out!("Ex(A)    {e}");
    }
    if !slices.is_empty() {
        out!("spectrum slices (tau, ratios, largest fiber):");
        for s in &slices {
            out!("  {:<10} {:>8} {:>6}", s.tau.to_string(), s.lambdas.len(), s.sizes.values().max().unwrap());
        }
    }
    if let Some(p) = profile {
        out!("K        {}", display::scalar(&p.k_mul));
        out!("d(A) <=  {}  (witness of size {})", display::scalar(&p.d_upper), p.witness_c.len());
    }
    Ok(0)
}

pub fn verify(input: &Path, ids: Option<&str>, json: bool) -> Result<u8> {
    let a = load(input)?;
    let ids = ids.map(parse_ids).transpose()?;
    let out = verify_suite(&a, ids.as_deref());
    for (id, e) in &out.errors {
        eprintln!("{id}: {e}");
    }
    if json {
        print_json(&out.reports)?;
    } else {
        for r in &out.reports {
            let verdict = match r.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "ratio",
            };
            out!("{:<15} {:<5} {}", r.id.name(), verdict, display::quantity(&r.ratio));
            out!("{:21} lhs {}  rhs {}", "", display::quantity(&r.lhs), display::quantity(&r.rhs));
            if let Some(ln) = r.ratio_natural_log() {
                out!("{:21} ratio with natural logs {}", "", display::decimal(ln));
            }
            out!("{:21} {}", "", r.inputs);
        }
    }
    if !out.all_explicit_pass() {
        return Ok(exit::EXPLICIT_FAIL);
    }
    let unresolved = out.errors.iter().any(|(id, e)| id.explicit() && matches!(e, Error::Resource(_)));
    Ok(if unresolved { exit::RESOURCE } else { 0 })
}

pub struct ExploreArgs {
    pub ineq: String,
    pub n: usize,
    pub hillclimb: bool,
    pub budget: u64,
    pub seed: Option<u64>,
    pub ground: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub restarts: u32,
    pub maximize: Option<bool>,
    pub json: bool,
}

pub fn explore(args: ExploreArgs) -> Result<u8> {
    let id: InequalityId = args.ineq.parse()?;
    if args.hillclimb && args.seed.is_none() {
        eprintln!("error: hillclimb needs --seed");
        return Ok(exit::USAGE);
    }
    let ground = args.ground.as_deref().map(load).transpose()?;
    let config = SearchConfig {
        ground,
        budget: args.budget,
        seed: args.seed.unwrap_or(0),
        restarts: args.restarts,
        direction: args.maximize.map(|m| if m { Direction::Maximize } else { Direction::Minimize }),
        ..SearchConfig::default()
    };
    let mode = if args.hillclimb { SearchMode::Hillclimb } else { SearchMode::Exhaustive };
    let out = search_extremal(id, args.n, mode, &config)?;
    let corpus = args
        .corpus
        .or_else(|| std::env::var_os("SUMPROD_CORPUS").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("corpus.jsonl"));
    corpus_store(&out.record, &corpus)?;
    if out.truncated {
        eprintln!("warning: budget exhausted after {} candidates", out.evaluated);
    }
    if args.json {
        print_json(&out.record)?;
    } else {
        out!("{} best ratio {}", id, display::quantity(&out.record.ratio));
        out!("set {}", out.record.set);
        out!("{} candidates evaluated, {} skipped; appended to {}", out.evaluated, out.skipped, corpus.display());
    }
    Ok(0)
}

fn report_pair<T: PartialEq + std::fmt::Display>(name: &str, fast: T, brute: T) -> bool {
    let same = fast == brute;
    out!("{name}: fast {fast}, brute force {brute}{}", if same { "" } else { "  MISMATCH" });
    same
}

/// Largest input for the quadruple enumeration.
const ENERGY_BRUTE_LIMIT: usize = 40;
/// Largest `|A|` for triple enumeration on `A × A`.
const TRIPLES_BRUTE_LIMIT: usize = 12;
const SIGMA_SAMPLES: usize = 200;

pub fn oracle(input: &Path, op: OracleOp, seed: u64) -> Result<u8> {
    let a = load(input)?;
    let ok = match op {
        OracleOp::EnergyBrute => {
            if a.len() > ENERGY_BRUTE_LIMIT {
                return Err(Error::Resource(format!("energy oracle limited to {ENERGY_BRUTE_LIMIT} elements")));
            }
            let mut ok = report_pair("additive energy", additive_energy(&a), oracle::energy_brute(&a, &a, Op::Add));
            if !a.has_zero() {
                ok &= report_pair(
                    "multiplicative energy",
                    multiplicative_energy(&a)?,
                    oracle::energy_brute(&a, &a, Op::Mul),
                );
            }
            ok
        }
        OracleOp::TriplesBrute => {
            if a.len() > TRIPLES_BRUTE_LIMIT {
                return Err(Error::Resource(format!("triple oracle limited to {TRIPLES_BRUTE_LIMIT} elements")));
            }
            let p = PointSet::cartesian(&a, &a);
            let brute = oracle::triples_brute(&p);
            let general = report_pair("collinear triples in A x A (line grouping)", collinear_triples(&p), brute);
            let product =
                report_pair("collinear triples in A x A (product formula)", collinear_triples_product(&a, &a), brute);
            general && product
        }
        OracleOp::SigmaMaxSample => {
            if a.len().pow(3) > SIGMA_MAX_TRIPLES {
                return Err(Error::Resource(format!("sigma_max limited to {SIGMA_MAX_TRIPLES} triples")));
            }
            let best = sigma_max(&a, &a, &a)?;
            let (c1, c2, c3) = &best.coefficients;
            let mut ok = report_pair("count at the maximiser", sigma_count(c1, &a, c2, &a, c3, &a)?.count, best.count);
            let sampled = oracle::random_coefficients(seed, SIGMA_SAMPLES)
                .iter()
                .map(|c| oracle::sigma_count_brute([&c[0], &c[1], &c[2]], [&a, &a, &a]))
                .max()
                .unwrap_or(0);
            out!("sigma_max {} at ({c1}, {c2}, {c3}); best of {SIGMA_SAMPLES} samples {sampled}", best.count);
            if sampled > best.count {
                out!("MISMATCH: a sample beats the maximum");
                ok = false;
            }
            ok
        }
    };
    Ok(if ok { 0 } else { exit::ORACLE_MISMATCH })
}
