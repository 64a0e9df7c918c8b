//! Brute-force reference computations. They share no code with the fast
//! kernels and work directly on exact scalars, so they can check them.

use std::collections::{BTreeMap, BTreeSet};

use crate::exactset::{FiniteSet, PointSet, Scalar};
use crate::stats::Op;

fn apply(x: &Scalar, y: &Scalar, op: Op) -> Option<Scalar> {
    match op {
        Op::Add => Some(x + y),
        Op::Sub => Some(x - y),
        Op::Mul => Some(x * y),
        Op::Div => x.checked_div(y).ok(),
    }
}

pub fn rep_counts_brute(a: &FiniteSet, b: &FiniteSet, op: Op) -> BTreeMap<Scalar, u64> {
    let mut m = BTreeMap::new();
    for x in a {
        for y in b {
            if let Some(v) = apply(x, y, op) {
                *m.entry(v).or_insert(0) += 1;
            }
        }
    }
    m
}

/// Quadruples `(a₁, b₁, a₂, b₂)` with `a₁ ∘ b₁ = a₂ ∘ b₂`, by direct enumeration.
pub fn energy_brute(a: &FiniteSet, b: &FiniteSet, op: Op) -> u64 {
    let vals: Vec<Scalar> = a.iter().flat_map(|x| b.iter().map(move |y| apply(x, y, op).unwrap())).collect();
    let mut count = 0;
    for u in &vals {
        for v in &vals {
            if u == v {
                count += 1;
            }
        }
    }
    count
}

/// `Σ_λ |A ∩ λA|²` over `λ ∈ A/A`, intersecting dilates one at a time.
pub fn spectrum_energy_brute(a: &FiniteSet) -> u64 {
    let ratios: BTreeSet<Scalar> = a.iter().flat_map(|x| a.iter().map(move |y| x.checked_div(y).unwrap())).collect();
    ratios
        .iter()
        .map(|l| {
            let k = a.iter().filter(|x| a.contains(&(l * x))).count() as u64;
            k * k
        })
        .sum()
}

fn collinear(p: &(Scalar, Scalar), q: &(Scalar, Scalar), r: &(Scalar, Scalar)) -> bool {
    let cross = &(&(&q.0 - &p.0) * &(&r.1 - &p.1)) - &(&(&q.1 - &p.1) * &(&r.0 - &p.0));
    cross.is_zero()
}

/// Ordered collinear triples by checking all `|P|³` of them.
pub fn triples_brute(p: &PointSet) -> u128 {
    let pts = p.points();
    let mut count = 0u128;
    for a in pts {
        for b in pts {
            for c in pts {
                if collinear(a, b, c) {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn sigma_count_brute(alpha: [&Scalar; 3], sets: [&FiniteSet; 3]) -> u64 {
    let mut count = 0;
    for x in sets[0] {
        for y in sets[1] {
            for z in sets[2] {
                let s = &(&(alpha[0] * x) + &(alpha[1] * y)) + &(alpha[2] * z);
                if s.is_zero() {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Maximum of the solution count over coefficient candidates `(1, α₂, α₃)`:
/// solutions of every nonsingular system from two triples, plus sample points
/// on each single-triple line.
pub fn sigma_max_brute(sets: [&FiniteSet; 3]) -> u64 {
    let triples: Vec<[&Scalar; 3]> =
        sets[0].iter().flat_map(|x| sets[1].iter().flat_map(move |y| sets[2].iter().map(move |z| [x, y, z]))).collect();
    let mut cands: BTreeSet<(Scalar, Scalar)> = BTreeSet::new();
    for (i, s) in triples.iter().enumerate() {
        // y·α₂ + z·α₃ = −x
        for t in &triples[i + 1..] {
            let det = &(s[1] * t[2]) - &(s[2] * t[1]);
            if det.is_zero() {
                continue;
            }
            let a2 = (&(&(-s[0]) * t[2]) - &(&(-t[0]) * s[2])).checked_div(&det).unwrap();
            let a3 = (&(s[1] * &(-t[0])) - &(t[1] * &(-s[0]))).checked_div(&det).unwrap();
            cands.insert((a2, a3));
        }
        for k in [1i64, -1, 2, -2, 3, -3, 5, 7] {
            let a2 = Scalar::new(k, 3).unwrap();
            if !s[2].is_zero() {
                let a3 = (&(-s[0]) - &(s[1] * &a2)).checked_div(s[2]).unwrap();
                cands.insert((a2, a3));
            } else if !s[1].is_zero() {
                let a2 = (-s[0]).checked_div(s[1]).unwrap();
                cands.insert((a2, Scalar::new(k, 3).unwrap()));
            }
        }
    }
    let one = Scalar::one();
    cands
        .iter()
        .filter(|(a2, a3)| !a2.is_zero() && !a3.is_zero())
        .map(|(a2, a3)| sigma_count_brute([&one, a2, a3], sets))
        .max()
        .unwrap_or(0)
}

/// `count` seeded coefficient triples with nonzero entries `±p/q`, `p, q ≤ 12`.
pub fn random_coefficients(seed: u64, count: usize) -> Vec<[Scalar; 3]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let p = rng.gen_range(1..=12i64);
        let q = rng.gen_range(1..=12i64);
        Scalar::new(if rng.gen_bool(0.5) { p } else { -p }, q).unwrap()
    };
    (0..count).map(|_| [draw(), draw(), draw()]).collect()
}
