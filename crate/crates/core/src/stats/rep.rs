use std::collections::BTreeMap;
use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::lane::{on_lane, reduce_frac, scale, LaneInt, Scaled};

/// Binary operation whose representation function is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnergyKind {
    Additive,
    Multiplicative,
}

/// Representation counts `x ↦ #{(a, b) : a ∘ b = x}`; every stored count is positive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multiset(BTreeMap<Scalar, u64>);

impl Multiset {
    pub fn get(&self, x: &Scalar) -> u64 {
        self.0.get(x).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.0.values().map(|c| c * c).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, u64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn support(&self) -> Option<FiniteSet> {
        (!self.0.is_empty()).then(|| FiniteSet::from_sorted(self.0.keys().cloned().collect()))
    }
}

impl FromIterator<(Scalar, u64)> for Multiset {
    fn from_iter<I: IntoIterator<Item = (Scalar, u64)>>(iter: I) -> Self {
        let mut m = BTreeMap::new();
        for (k, v) in iter {
            if v > 0 {
                *m.entry(k).or_insert(0) += v;
            }
        }
        Multiset(m)
    }
}

fn tally<K: Hash + Eq, T>(a: &[T], b: &[T], symmetric: bool, key: impl Fn(&T, &T) -> Option<K>) -> FxHashMap<K, u64> {
    let mut map = FxHashMap::default();
    map.reserve((a.len() * b.len()).min(1 << 22));
    if symmetric {
        for (i, x) in a.iter().enumerate() {
            if let Some(k) = key(x, x) {
                *map.entry(k).or_insert(0) += 1;
            }
            for y in &a[i + 1..] {
                if let Some(k) = key(x, y) {
                    *map.entry(k).or_insert(0) += 2;
                }
            }
        }
    } else {
        for x in a {
            for y in b {
                if let Some(k) = key(x, y) {
                    *map.entry(k).or_insert(0) += 1;
                }
            }
        }
    }
    map
}

enum Tally<T> {
    Single(FxHashMap<T, u64>),
    Pair(FxHashMap<(T, T), u64>),
}

fn tally_lane<T: LaneInt>(s: &Scaled<T>, op: Op, same: bool) -> Tally<T> {
    let (a, b) = (&s.sets[0], &s.sets[1]);
    match op {
        Op::Add => Tally::Single(tally(a, b, same, |x, y| Some(x.clone() + y.clone()))),
        Op::Mul => Tally::Single(tally(a, b, same, |x, y| Some(x.clone() * y.clone()))),
        Op::Sub => Tally::Single(tally(a, b, false, |x, y| Some(x.clone() - y.clone()))),
        Op::Div => Tally::Pair(tally(a, b, false, |x, y| (!y.is_zero()).then(|| reduce_frac(x.clone(), y.clone())))),
    }
}

fn check_div(b: &FiniteSet, op: Op) -> Result<()> {
    if op == Op::Div && b.len() == 1 && b.has_zero() {
        return Err(Error::domain("no nonzero divisors"));
    }
    Ok(())
}

/// Counts only, in no particular order. This is the fast path behind sizes and energies.
pub(crate) fn rep_histogram(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<Vec<u64>> {
    check_div(b, op)?;
    let same = a == b;
    Ok(on_lane!(scale([a.elements(), b.elements()]), s => match tally_lane(&s, op, same) {
        Tally::Single(m) => m.into_values().collect(),
        Tally::Pair(m) => m.into_values().collect(),
    }))
}

fn materialize<T: LaneInt>(s: &Scaled<T>, op: Op, same: bool) -> Vec<(Scalar, u64)> {
    match tally_lane(s, op, same) {
        Tally::Single(m) => {
            m.into_iter().map(|(k, c)| (if op == Op::Mul { s.scalar_sq(&k) } else { s.scalar(&k) }, c)).collect()
        }
        Tally::Pair(m) => {
            m.into_iter().map(|((p, q), c)| (Scalar::new(p.to_big(), q.to_big()).expect("nonzero"), c)).collect()
        }
    }
}

pub fn rep_counts(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<Multiset> {
    check_div(b, op)?;
    let same = a == b;
    let pairs = on_lane!(scale([a.elements(), b.elements()]), s => materialize(&s, op, same));
    Ok(pairs.into_iter().collect())
}

fn image(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<FiniteSet> {
    check_div(b, op)?;
    let same = a == b;
    let mut v: Vec<Scalar> = on_lane!(scale([a.elements(), b.elements()]), s => materialize(&s, op, same))
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    v.sort_unstable();
    Ok(FiniteSet::from_sorted(v))
}

pub fn sumset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    image(a, b, Op::Add).expect("sums always exist")
}

pub fn difference_set(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    image(a, b, Op::Sub).expect("differences always exist")
}

pub fn productset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    image(a, b, Op::Mul).expect("products always exist")
}

pub fn quotientset(a: &FiniteSet, b: &FiniteSet) -> Result<FiniteSet> {
    image(a, b, Op::Div)
}

/// `|A ∘ B|` without materialising the set.
pub fn image_size(a: &FiniteSet, b: &FiniteSet, op: Op) -> Result<usize> {
    Ok(rep_histogram(a, b, op)?.len())
}

pub fn energy(a: &FiniteSet, b: &FiniteSet, kind: EnergyKind) -> Result<u64> {
    let op = match kind {
        EnergyKind::Additive => Op::Add,
        EnergyKind::Multiplicative => {
            if a.has_zero() || b.has_zero() {
                return Err(Error::domain("zero element in multiplicative energy"));
            }
            Op::Mul
        }
    };
    Ok(rep_histogram(a, b, op)?.iter().map(|c| c * c).sum())
}

pub fn additive_energy(a: &FiniteSet) -> u64 {
    energy(a, a, EnergyKind::Additive).expect("additive energy is total")
}

pub fn multiplicative_energy(a: &FiniteSet) -> Result<u64> {
    energy(a, a, EnergyKind::Multiplicative)
}
