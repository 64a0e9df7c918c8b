use super::{FiniteSet, Scalar};

/// Duplicate-free planar point set, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet(Vec<(Scalar, Scalar)>);

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = (Scalar, Scalar)>) -> Self {
        let mut v: Vec<_> = points.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }

    pub fn cartesian(x: &FiniteSet, y: &FiniteSet) -> Self {
        let v = x.iter().flat_map(|a| y.iter().map(move |b| (a.clone(), b.clone()))).collect();
        PointSet(v)
    }

    pub fn grid(w: i64, h: i64) -> Self {
        Self::new((0..w).flat_map(|i| (0..h).map(move |j| (Scalar::int(i), Scalar::int(j)))))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[(Scalar, Scalar)] {
        &self.0
    }
}
