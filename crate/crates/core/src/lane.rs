//! Integer lanes: sets rescaled by a common denominator so that the hot
//! kernels hash machine integers instead of big rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::exactset::Scalar;

pub(crate) trait LaneInt: Clone + Ord + Hash + Debug + Integer + Signed {
    fn to_big(&self) -> BigInt;
    fn approx(&self) -> f64;
}

impl LaneInt for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn approx(&self) -> f64 {
        *self as f64
    }
}

impl LaneInt for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// `sets[i][j] = denom · original[i][j]`, all integral.
pub(crate) struct Scaled<T> {
    pub denom: BigInt,
    pub sets: Vec<Vec<T>>,
}

impl<T: LaneInt> Scaled<T> {
    pub fn scalar(&self, v: &T) -> Scalar {
        Scalar::new(v.to_big(), self.denom.clone()).expect("positive denominator")
    }

    pub fn scalar_sq(&self, v: &T) -> Scalar {
        Scalar::new(v.to_big(), &self.denom * &self.denom).expect("positive denominator")
    }
}

pub(crate) enum Lane {
    Small(Scaled<i128>),
    Big(Scaled<BigInt>),
}

/// Values below this bound keep every sum of two pairwise products inside i128.
const SMALL_BOUND: i128 = 1 << 62;

pub(crate) fn scale<'a>(sets: impl IntoIterator<Item = &'a [Scalar]> + Clone) -> Lane {
    let mut denom = BigInt::one();
    for s in sets.clone() {
        for x in s {
            denom = denom.lcm(x.denom());
        }
    }
    let big: Vec<Vec<BigInt>> =
        sets.into_iter().map(|s| s.iter().map(|x| x.numer() * (&denom / x.denom())).collect()).collect();
    let fits = big.iter().flatten().all(|v| v.to_i128().is_some_and(|v| v.abs() < SMALL_BOUND));
    if fits {
        let sets = big.iter().map(|s| s.iter().map(|v| v.to_i128().unwrap()).collect()).collect();
        Lane::Small(Scaled { denom, sets })
    } else {
        Lane::Big(Scaled { denom, sets: big })
    }
}

/// Runs a generic kernel on whichever lane the sets fit in.
macro_rules! on_lane {
    ($lane:expr, $s:ident => $body:expr) => {
        match $lane {
            $crate::lane::Lane::Small($s) => $body,
            $crate::lane::Lane::Big($s) => $body,
        }
    };
}
pub(crate) use on_lane;

/// Direction `(dx, dy)` reduced and sign-normalised so it names an undirected line.
pub(crate) fn normalize_dir<T: LaneInt>(dx: T, dy: T) -> (T, T) {
    let g = dx.gcd(&dy);
    let (mut dx, mut dy) = (dx / g.clone(), dy / g);
    if dx.is_negative() || (dx.is_zero() && dy.is_negative()) {
        dx = -dx;
        dy = -dy;
    }
    (dx, dy)
}

/// Reduced fraction `(p, q)` with `q > 0`; `q` must be nonzero.
pub(crate) fn reduce_frac<T: LaneInt>(p: T, q: T) -> (T, T) {
    let g = p.gcd(&q);
    let (mut p, mut q) = (p / g.clone(), q / g);
    if q.is_negative() {
        p = -p;
        q = -q;
    }
    (p, q)
}
