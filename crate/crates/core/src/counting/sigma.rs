use std::cmp::Ordering;

use num_bigint::BigInt;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::exactset::{FiniteSet, Scalar};
use crate::lane::{on_lane, scale, LaneInt, Scaled};

/// Number of solutions of `α₁a₁ + α₂a₂ + α₃a₃ = 0` and the coefficients used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaResult {
    pub count: u64,
    pub coefficients: (Scalar, Scalar, Scalar),
}

fn count_kernel<T: LaneInt>(s: &Scaled<T>) -> u64 {
    let third: FxHashSet<&T> = s.sets[2].iter().collect();
    let mut count = 0;
    for x in &s.sets[0] {
        for y in &s.sets[1] {
            if third.contains(&-(x.clone() + y.clone())) {
                count += 1;
            }
        }
    }
    count
}

pub fn sigma_count(
    a1: &Scalar,
    s1: &FiniteSet,
    a2: &Scalar,
    s2: &FiniteSet,
    a3: &Scalar,
    s3: &FiniteSet,
) -> Result<SigmaResult> {
    if a1.is_zero() || a2.is_zero() || a3.is_zero() {
        return Err(Error::domain("zero coefficient"));
    }
    let v = [s1.dilate(a1)?, s2.dilate(a2)?, s3.dilate(a3)?];
    let count = on_lane!(scale(v.iter().map(FiniteSet::elements)), s => count_kernel(&s));
    Ok(SigmaResult { count, coefficients: (a1.clone(), a2.clone(), a3.clone()) })
}

/// Outcome of a maximisation that may stop early once a threshold is beaten.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaOutcome {
    Exact(SigmaResult),
    /// The maximum is at least `count` of the carried result, which exceeds the threshold.
    Exceeds(SigmaResult),
}

impl SigmaOutcome {
    pub fn result(&self) -> &SigmaResult {
        match self {
            SigmaOutcome::Exact(r) | SigmaOutcome::Exceeds(r) => r,
        }
    }
}

/// Line `p·α₂ + q·α₃ = r` in coefficient space, carrying `w` proportional triples.
struct Line<T> {
    p: T,
    q: T,
    r: T,
    w: u64,
}

/// Projective point `(x/z, y/z)` with `z > 0` and coprime coordinates.
type Point<T> = (T, T, T);

fn normalize_point<T: LaneInt>(x: T, y: T, z: T) -> Point<T> {
    let g = x.gcd(&y).gcd(&z);
    let (mut x, mut y, mut z) = (x / g.clone(), y / g.clone(), z / g);
    if z.is_negative() {
        x = -x;
        y = -y;
        z = -z;
    }
    (x, y, z)
}

fn cmp_frac<T: LaneInt>(a: &T, b: &T, c: &T, d: &T) -> Ordering {
    // a/b against c/d with b, d > 0
    let (u, v) = (a.approx() / b.approx(), c.approx() / d.approx());
    let tol = 1e-9 * u.abs().max(v.abs()).max(1e-300);
    if (u - v).abs() > tol {
        return u.partial_cmp(&v).unwrap();
    }
    (a.to_big() * d.to_big()).cmp(&(c.to_big() * b.to_big()))
}

fn lex_cmp<T: LaneInt>(p: &Point<T>, q: &Point<T>) -> Ordering {
    cmp_frac(&p.0, &p.2, &q.0, &q.2).then_with(|| cmp_frac(&p.1, &p.2, &q.1, &q.2))
}

struct Best<T> {
    count: u64,
    point: Option<Point<T>>,
}

impl<T: LaneInt> Best<T> {
    fn offer(&mut self, count: u64, point: Point<T>) {
        let better = match &self.point {
            None => true,
            Some(p) => count > self.count || (count == self.count && lex_cmp(&point, p) == Ordering::Less),
        };
        if better {
            self.count = count;
            self.point = Some(point);
        }
    }
}

fn canonical_point<T: LaneInt>(l: &Line<T>) -> Point<T> {
    let (p, q, r) = (l.p.clone(), l.q.clone(), l.r.clone());
    let tries = [
        (r.clone(), r.clone(), p.clone() + q.clone()),
        (r.clone(), -r.clone(), p.clone() - q.clone()),
        (q.clone(), r.clone() - p.clone(), q.clone()),
        (-q.clone(), r.clone() + p.clone(), q.clone()),
        (r.clone() - q.clone(), p.clone(), p.clone()),
        (r.clone() + q.clone(), -p.clone(), p.clone()),
    ];
    for (x, y, z) in tries {
        if !x.is_zero() && !y.is_zero() && !z.is_zero() {
            return normalize_point(x, y, z);
        }
    }
    unreachable!("non-axis line always meets the open quadrant region")
}

fn on_line<T: LaneInt>(l: &Line<T>, pt: &Point<T>) -> bool {
    l.p.clone() * pt.0.clone() + l.q.clone() * pt.1.clone() == l.r.clone() * pt.2.clone()
}

fn count_at<T: LaneInt>(lines: &[Line<T>], base: u64, pt: &Point<T>) -> u64 {
    base + lines.iter().filter(|l| on_line(l, pt)).map(|l| l.w).sum::<u64>()
}

fn build_lines<T: LaneInt>(s: &Scaled<T>) -> (Vec<Line<T>>, u64) {
    let mut constant = 0u64;
    let mut groups: FxHashMap<(T, T, T), u64> = FxHashMap::default();
    for x1 in &s.sets[0] {
        for x2 in &s.sets[1] {
            for x3 in &s.sets[2] {
                let (p, q, r) = (x2.clone(), x3.clone(), -x1.clone());
                if p.is_zero() && q.is_zero() {
                    constant += r.is_zero() as u64;
                    continue;
                }
                // the axes α₂ = 0 and α₃ = 0 hold no admissible coefficients
                if r.is_zero() && (p.is_zero() || q.is_zero()) {
                    continue;
                }
                let g = p.gcd(&q).gcd(&r);
                let (mut p, mut q, mut r) = (p / g.clone(), q / g.clone(), r / g);
                if p.is_negative() || (p.is_zero() && q.is_negative()) {
                    p = -p;
                    q = -q;
                    r = -r;
                }
                *groups.entry((p, q, r)).or_insert(0) += 1;
            }
        }
    }
    let mut lines: Vec<Line<T>> = groups.into_iter().map(|((p, q, r), w)| Line { p, q, r, w }).collect();
    lines.sort_by(|a, b| (&a.p, &a.q, &a.r).cmp(&(&b.p, &b.q, &b.r)));
    (lines, constant)
}

/// Offers the canonical points of the `k` heaviest lines: a cheap lower bound.
fn heaviest_lines<T: LaneInt>(lines: &[Line<T>], constant: u64, k: usize, best: &mut Best<T>) {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| lines[j].w.cmp(&lines[i].w).then(i.cmp(&j)));
    for &i in order.iter().take(k) {
        let pt = canonical_point(&lines[i]);
        best.offer(count_at(lines, constant, &pt), pt);
    }
}

fn lower_kernel<T: LaneInt>(s: &Scaled<T>) -> u64 {
    let (lines, constant) = build_lines(s);
    let mut best = Best { count: constant, point: None };
    heaviest_lines(&lines, constant, 8, &mut best);
    best.count
}

/// A count attained by some admissible coefficients, found in `O(|A₁||A₂||A₃|)`.
pub(crate) fn sigma_lower_bound(s1: &FiniteSet, s2: &FiniteSet, s3: &FiniteSet) -> u64 {
    on_lane!(scale([s1.elements(), s2.elements(), s3.elements()]), s => lower_kernel(&s))
}

enum KernelOutcome<T> {
    Exact(u64, Point<T>),
    Exceeds(u64, Point<T>),
}

fn max_kernel<T: LaneInt>(s: &Scaled<T>, stop_above: Option<u64>, budget: u64) -> Result<KernelOutcome<T>> {
    let (lines, constant) = build_lines(s);
    let mut best = Best { count: 0, point: None };
    if lines.is_empty() {
        let minus_half = normalize_point(-T::one(), -T::one(), T::one() + T::one());
        return Ok(KernelOutcome::Exact(constant, minus_half));
    }
    let exceeded = |b: &Best<T>| stop_above.is_some_and(|t| b.count > t);

    heaviest_lines(&lines, constant, 64, &mut best);
    if exceeded(&best) {
        let (c, p) = (best.count, best.point.unwrap());
        return Ok(KernelOutcome::Exceeds(c, p));
    }

    let mut work = 0u64;
    let mut hits: FxHashMap<Point<T>, u64> = FxHashMap::default();
    for (i, li) in lines.iter().enumerate() {
        hits.clear();
        for lj in &lines[i + 1..] {
            let det = li.p.clone() * lj.q.clone() - lj.p.clone() * li.q.clone();
            if det.is_zero() {
                continue;
            }
            let x = li.r.clone() * lj.q.clone() - lj.r.clone() * li.q.clone();
            let y = li.p.clone() * lj.r.clone() - lj.p.clone() * li.r.clone();
            if x.is_zero() || y.is_zero() {
                continue;
            }
            *hits.entry(normalize_point(x, y, det)).or_insert(0) += lj.w;
        }
        work += (lines.len() - i) as u64;
        // a point first met on line i has all of its later lines in `hits`
        for (pt, w) in hits.drain() {
            best.offer(constant + li.w + w, pt);
        }
        let pt = canonical_point(li);
        best.offer(count_at(&lines, constant, &pt), pt);
        if exceeded(&best) {
            let (c, p) = (best.count, best.point.unwrap());
            return Ok(KernelOutcome::Exceeds(c, p));
        }
        if work > budget {
            return Err(Error::resource(format!(
                "coefficient search over {} lines exceeds the work budget {budget}",
                lines.len()
            )));
        }
    }
    let (c, p) = (best.count, best.point.unwrap());
    Ok(KernelOutcome::Exact(c, p))
}

fn to_result<T: LaneInt>(count: u64, p: Point<T>) -> SigmaResult {
    let z: BigInt = p.2.to_big();
    let a2 = Scalar::new(p.0.to_big(), z.clone()).unwrap();
    let a3 = Scalar::new(p.1.to_big(), z).unwrap();
    SigmaResult { count, coefficients: (Scalar::one(), a2, a3) }
}

/// Largest product `|A₁||A₂||A₃|` accepted by [`sigma_max`].
pub const SIGMA_MAX_TRIPLES: usize = 1_000_000;

/// Maximum over nonzero `(α₂, α₃)` of the solution count with `α₁ = 1`; ties go to
/// the lexicographically smallest coefficient pair among the candidates.
pub fn sigma_max(s1: &FiniteSet, s2: &FiniteSet, s3: &FiniteSet) -> Result<SigmaResult> {
    match sigma_max_bounded(s1, s2, s3, None, u64::MAX)? {
        SigmaOutcome::Exact(r) | SigmaOutcome::Exceeds(r) => Ok(r),
    }
}

/// [`sigma_max`] that stops as soon as a count above `stop_above` is found, and
/// fails with a resource error once `budget` line intersections were examined.
pub fn sigma_max_bounded(
    s1: &FiniteSet,
    s2: &FiniteSet,
    s3: &FiniteSet,
    stop_above: Option<u64>,
    budget: u64,
) -> Result<SigmaOutcome> {
    let triples = s1.len().saturating_mul(s2.len()).saturating_mul(s3.len());
    if triples > SIGMA_MAX_TRIPLES {
        return Err(Error::resource(format!("{triples} triples exceed {SIGMA_MAX_TRIPLES}")));
    }
    let lane = scale([s1.elements(), s2.elements(), s3.elements()]);
    on_lane!(lane, s => Ok(match max_kernel(&s, stop_above, budget)? {
        KernelOutcome::Exact(c, p) => SigmaOutcome::Exact(to_result(c, p)),
        KernelOutcome::Exceeds(c, p) => SigmaOutcome::Exceeds(to_result(c, p)),
    }))
}
