use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Scalar;
use crate::error::{Error, Result};

/// Nonempty, strictly increasing sequence of distinct scalars.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSet(Arc<[Scalar]>);

/// Result of [`set_build`]: the set plus the number of dropped duplicates.
#[derive(Clone, Debug)]
pub struct BuildReport {
    pub set: FiniteSet,
    pub duplicates: usize,
}

pub fn set_build(values: impl IntoIterator<Item = Scalar>) -> Result<BuildReport> {
    let mut v: Vec<Scalar> = values.into_iter().collect();
    if v.is_empty() {
        return Err(Error::domain("empty set"));
    }
    let before = v.len();
    v.sort_unstable();
    v.dedup();
    let duplicates = before - v.len();
    Ok(BuildReport { set: FiniteSet(v.into()), duplicates })
}

pub fn affine_image(a: &FiniteSet, alpha: &Scalar, beta: &Scalar) -> Result<FiniteSet> {
    if alpha.is_zero() {
        return Err(Error::domain("degenerate dilation"));
    }
    let mut v: Vec<Scalar> = a.iter().map(|x| &(alpha * x) + beta).collect();
    if alpha.is_negative() {
        v.reverse();
    }
    Ok(FiniteSet(v.into()))
}

impl FiniteSet {
    pub fn new(values: impl IntoIterator<Item = Scalar>) -> Result<Self> {
        set_build(values).map(|r| r.set)
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Scalar::int(v)))
    }

    pub fn singleton(x: Scalar) -> Self {
        FiniteSet(vec![x].into())
    }

    /// Caller guarantees `v` is nonempty, sorted and duplicate free.
    pub(crate) fn from_sorted(v: Vec<Scalar>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        FiniteSet(v.into())
    }

    /// Sorts and dedups; `None` when empty.
    pub(crate) fn collect_opt(mut v: Vec<Scalar>) -> Option<Self> {
        if v.is_empty() {
            return None;
        }
        v.sort_unstable();
        v.dedup();
        Some(FiniteSet(v.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn min(&self) -> &Scalar {
        &self.0[0]
    }

    pub fn max(&self) -> &Scalar {
        &self.0[self.0.len() - 1]
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn has_zero(&self) -> bool {
        self.contains(&Scalar::zero())
    }

    pub fn all_positive(&self) -> bool {
        self.min().is_positive()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        let mut v: Vec<Scalar> = self.iter().chain(other.iter()).cloned().collect();
        v.sort_unstable();
        v.dedup();
        FiniteSet(v.into())
    }

    pub fn intersection(&self, other: &FiniteSet) -> Option<FiniteSet> {
        let v: Vec<Scalar> = self.iter().filter(|x| other.contains(x)).cloned().collect();
        if v.is_empty() {
            None
        } else {
            Some(FiniteSet(v.into()))
        }
    }

    pub fn difference(&self, other: &FiniteSet) -> Vec<Scalar> {
        self.iter().filter(|x| !other.contains(x)).cloned().collect()
    }

    pub fn dilate(&self, lambda: &Scalar) -> Result<FiniteSet> {
        affine_image(self, lambda, &Scalar::zero())
    }

    /// `{1/a : a ∈ A}`.
    pub fn reciprocals(&self) -> Result<FiniteSet> {
        let v = self.iter().map(Scalar::recip).collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn with(&self, x: Scalar) -> FiniteSet {
        let mut v = self.0.to_vec();
        v.push(x);
        Self::collect_opt(v).expect("nonempty")
    }

    pub fn to_pq_strings(&self) -> Vec<String> {
        self.iter().map(Scalar::to_pq).collect()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Scalar;
    type IntoIter = std::slice::Iter<'a, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Scalar>::deserialize(d)?;
        let r = set_build(v).map_err(serde::de::Error::custom)?;
        if r.duplicates > 0 {
            return Err(serde::de::Error::custom("duplicate set elements"));
        }
        Ok(r.set)
    }
}
