use rustc_hash::FxHashMap;

use crate::exactset::{FiniteSet, PointSet, Scalar};
use crate::lane::{normalize_dir, on_lane, reduce_frac, scale, LaneInt, Scaled};

fn degenerate(n: u128) -> u128 {
    // one repeated point, or exactly two distinct points in some order
    n + 3 * n * n.saturating_sub(1)
}

fn falling3(m: u128) -> u128 {
    m * m.saturating_sub(1) * m.saturating_sub(2)
}

fn lines_kernel<T: LaneInt>(s: &Scaled<T>) -> u128 {
    let pts: Vec<(T, T)> = s.sets[0].iter().cloned().zip(s.sets[1].iter().cloned()).collect();
    let mut dirs: FxHashMap<(T, T), u64> = FxHashMap::default();
    let mut sum = 0u128;
    for (i, (px, py)) in pts.iter().enumerate() {
        dirs.clear();
        for (j, (qx, qy)) in pts.iter().enumerate() {
            if i != j {
                *dirs.entry(normalize_dir(qx.clone() - px.clone(), qy.clone() - py.clone())).or_insert(0) += 1;
            }
        }
        // a line through p with k further points contributes k(k-1) ordered pairs
        sum += dirs.values().map(|&k| k as u128 * (k as u128 - 1)).sum::<u128>();
    }
    sum
}

/// Ordered triples of points of `P` on a common line, repetitions allowed.
pub fn collinear_triples(p: &PointSet) -> u128 {
    let xs: Vec<Scalar> = p.points().iter().map(|q| q.0.clone()).collect();
    let ys: Vec<Scalar> = p.points().iter().map(|q| q.1.clone()).collect();
    let distinct_triples = on_lane!(scale([xs.as_slice(), ys.as_slice()]), s => lines_kernel(&s));
    degenerate(p.len() as u128) + distinct_triples
}

/// Unordered triples `z₁ < z₂ < z₃` grouped by the orbit of their cross ratio
/// `(z₃ − z₁)/(z₂ − z₁)`, keyed by the representative `(z₃ − z₁)/max(z₂ − z₁, z₃ − z₂)`.
fn orbit_counts<T: LaneInt>(v: &[T]) -> FxHashMap<(T, T), u64> {
    let mut map = FxHashMap::default();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d1 = v[j].clone() - v[i].clone();
            for k in j + 1..v.len() {
                let d2 = v[k].clone() - v[j].clone();
                let m = if d1 > d2 { d1.clone() } else { d2.clone() };
                *map.entry(reduce_frac(d1.clone() + d2, m)).or_insert(0) += 1;
            }
        }
    }
    map
}

fn sloped<T: LaneInt>(x: &[T], y: Option<&[T]>) -> u128 {
    let cx = orbit_counts(x);
    let cy = y.map(orbit_counts);
    let two = (T::one() + T::one(), T::one());
    let mut total = 0u128;
    for (key, &ux) in &cx {
        let uy = match &cy {
            None => ux,
            Some(m) => m.get(key).copied().unwrap_or(0),
        };
        // each unordered triple gives every ratio in its orbit 6/|orbit| times
        let weight = if *key == two { 12 } else { 6 };
        total += weight * ux as u128 * uy as u128;
    }
    total
}

fn sloped_triples(x: &FiniteSet, y: &FiniteSet) -> u128 {
    if x == y {
        return on_lane!(scale([x.elements()]), s => sloped(&s.sets[0], None));
    }
    // ratios are scale invariant, so one shared denominator is harmless
    on_lane!(scale([x.elements(), y.elements()]), s => sloped(&s.sets[0], Some(&s.sets[1])))
}

/// Axis-parallel and degenerate triples of `X × Y`: a lower bound for the full count.
pub fn product_triples_lower(x: &FiniteSet, y: &FiniteSet) -> u128 {
    let (kx, ky) = (x.len() as u128, y.len() as u128);
    degenerate(kx * ky) + kx * falling3(ky) + ky * falling3(kx)
}

/// Collinear triples of the grid `X × Y` in `O(|X|³ + |Y|³)`: distinct points on a
/// sloped line correspond to triples of `X` and of `Y` with the same cross ratio.
pub fn collinear_triples_product(x: &FiniteSet, y: &FiniteSet) -> u128 {
    product_triples_lower(x, y) + sloped_triples(x, y)
}
