//! Exact nonnegative power products.
//!
//! A [`Quantity`] is `r · Π bᵢ^(eᵢ) · Π log₂(nⱼ)^(fⱼ)` with rational exponents.
//! This is closed under the products, quotients and rational powers that
//! appear in the inequality right-hand sides, so ratios stay exact even when
//! they are irrational.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor::factor_big;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quantity {
    zero: bool,
    bases: BTreeMap<BigUint, BigRational>,
    logs: BTreeMap<u64, BigRational>,
}

fn ratio_floor(e: &BigRational) -> BigInt {
    e.floor().to_integer()
}

impl Quantity {
    pub fn zero() -> Self {
        Quantity { zero: true, bases: BTreeMap::new(), logs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Quantity { zero: false, bases: BTreeMap::new(), logs: BTreeMap::new() }
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let mut q = Self::one();
        for (p, e) in factor_big(n) {
            q.bases.insert(p, BigRational::from_integer(e.into()));
        }
        q
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_biguint(&BigUint::from(n))
    }

    pub fn from_u128(n: u128) -> Self {
        Self::from_biguint(&BigUint::from(n))
    }

    pub fn from_ratio(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::domain("negative quantity"));
        }
        let n = r.numer().magnitude();
        let d = r.denom().magnitude();
        Ok(Self::from_biguint(n).div(&Self::from_biguint(d)))
    }

    /// `log₂ n`, folded into the rational part when `n` is a power of two.
    pub fn log2(n: u64) -> Self {
        match n {
            0 => panic!("log of zero"),
            1 => Self::zero(),
            _ if n.is_power_of_two() => Self::from_u64(n.trailing_zeros() as u64),
            _ => {
                let mut q = Self::one();
                q.logs.insert(n, BigRational::one());
                q
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn mul(&self, other: &Quantity) -> Quantity {
        if self.zero || other.zero {
            return Self::zero();
        }
        let mut out = self.clone();
        for (b, e) in &other.bases {
            let v = out.bases.entry(b.clone()).or_insert_with(BigRational::zero);
            *v += e;
        }
        for (n, e) in &other.logs {
            let v = out.logs.entry(*n).or_insert_with(BigRational::zero);
            *v += e;
        }
        out.prune();
        out
    }

    pub fn div(&self, other: &Quantity) -> Quantity {
        assert!(!other.zero, "division by a zero quantity");
        self.mul(&other.pow(&BigRational::from_integer((-1).into())))
    }

    pub fn pow(&self, e: &BigRational) -> Quantity {
        if self.zero {
            assert!(e.is_positive(), "zero to a nonpositive power");
            return Self::zero();
        }
        let mut out = self.clone();
        for v in out.bases.values_mut() {
            *v *= e;
        }
        for v in out.logs.values_mut() {
            *v *= e;
        }
        out.prune();
        out
    }

    pub fn powi(&self, e: i64) -> Quantity {
        self.pow(&BigRational::from_integer(e.into()))
    }

    pub fn pow_frac(&self, num: i64, den: i64) -> Quantity {
        self.pow(&BigRational::new(num.into(), den.into()))
    }

    fn prune(&mut self) {
        self.bases.retain(|_, e| !e.is_zero());
        self.logs.retain(|_, e| !e.is_zero());
    }

    /// Exact rational value, when every exponent is an integer and no log remains.
    pub fn as_ratio(&self) -> Option<BigRational> {
        if self.zero {
            return Some(BigRational::zero());
        }
        if !self.logs.is_empty() || self.bases.values().any(|e| !e.is_integer()) {
            return None;
        }
        let (n, d) = self.integer_parts();
        Some(BigRational::new(n.into(), d.into()))
    }

    fn integer_parts(&self) -> (BigUint, BigUint) {
        let mut n = BigUint::one();
        let mut d = BigUint::one();
        for (b, e) in &self.bases {
            let k = ratio_floor(e);
            let p = k.magnitude().to_u32().expect("exponent fits in u32");
            if k.sign() == Sign::Minus {
                d *= b.pow(p);
            } else {
                n *= b.pow(p);
            }
        }
        (n, d)
    }

    /// Natural logarithm of the value; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.zero {
            return f64::NEG_INFINITY;
        }
        let mut acc = 0.0;
        for (b, e) in &self.bases {
            acc += ratio_to_f64(e) * biguint_ln(b);
        }
        for (n, e) in &self.logs {
            acc += ratio_to_f64(e) * (*n as f64).log2().ln();
        }
        acc
    }

    /// Decimal value for display only.
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_ratio() {
            if let Some(v) = r.to_f64() {
                if v.is_finite() && v != 0.0 {
                    return v;
                }
            }
        }
        self.ln().exp()
    }

    /// Exact comparison when it can be decided by integer arithmetic.
    pub fn exact_cmp(&self, other: &Quantity) -> Option<Ordering> {
        match (self.zero, other.zero) {
            (true, true) => return Some(Ordering::Equal),
            (true, false) => return Some(Ordering::Less),
            (false, true) => return Some(Ordering::Greater),
            _ => {}
        }
        let r = self.div(other);
        if !r.logs.is_empty() {
            return None;
        }
        let mut den = BigInt::one();
        for e in r.bases.values() {
            den = den.lcm(e.denom());
        }
        let den = den.to_u64().filter(|&d| d <= 1 << 20)?;
        let mut bits = 0f64;
        for (b, e) in &r.bases {
            bits += ratio_to_f64(e).abs() * den as f64 * b.bits() as f64;
        }
        if bits > 4.0e6 {
            return None;
        }
        let raised = r.pow(&BigRational::from_integer(den.into()));
        let (n, d) = raised.integer_parts();
        Some(n.cmp(&d))
    }

    /// Total order: exact where decidable, otherwise by logarithm, then by rendering.
    pub fn total_cmp(&self, other: &Quantity) -> Ordering {
        if let Some(o) = self.exact_cmp(other) {
            return o;
        }
        self.ln()
            .partial_cmp(&other.ln())
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn biguint_ln(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits < 1000 {
        return b.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (b >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return f.write_str("0/1");
        }
        let (n, d) = self.integer_parts();
        write!(f, "{n}/{d}")?;
        for (b, e) in &self.bases {
            let frac = e - BigRational::from_integer(ratio_floor(e));
            if !frac.is_zero() {
                write!(f, " * {b}^({frac})")?;
            }
        }
        for (n, e) in &self.logs {
            write!(f, " * log2({n})^({e})")?;
        }
        Ok(())
    }
}

fn parse_exponent(s: &str) -> Option<BigRational> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let x: crate::Scalar = inner.parse().ok()?;
    Some(x.into_ratio())
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, msg: format!("not a quantity: `{s}`") };
        let mut parts = s.split(" * ");
        let head: crate::Scalar = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if head.is_zero() {
            return if parts.next().is_none() { Ok(Self::zero()) } else { Err(bad()) };
        }
        let mut q = Self::from_ratio(head.ratio()).map_err(|_| bad())?;
        for part in parts {
            let (base, exp) = part.split_once('^').ok_or_else(bad)?;
            let e = parse_exponent(exp).ok_or_else(bad)?;
            let term = if let Some(arg) = base.strip_prefix("log2(").and_then(|r| r.strip_suffix(')')) {
                let n: u64 = arg.parse().map_err(|_| bad())?;
                if n < 3 || n.is_power_of_two() {
                    return Err(bad());
                }
                Quantity::log2(n).pow(&e)
            } else {
                let b: BigUint = base.parse().map_err(|_| bad())?;
                if b < BigUint::from(2u32) {
                    return Err(bad());
                }
                let mut t = Self::one();
                t.bases.insert(b, e);
                t
            };
            q = q.mul(&term);
        }
        Ok(q)
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<u64> for Quantity {
    fn from(n: u64) -> Self {
        Quantity::from_u64(n)
    }
}
