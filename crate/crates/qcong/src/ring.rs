//! Exact coefficient rings for q-series: arbitrary-precision integers,
//! rationals in lowest terms, and integers mod m.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A coefficient ring. The ring value itself carries any parameters
/// (the modulus for `ModRing`); elements are plain data.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + Zero;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` when `a` is not a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    /// Parse one coefficient in the cache text format.
    fn parse(&self, s: &str) -> Option<Self::Elem>;
    /// Render one coefficient in the cache text format.
    fn render(&self, a: &Self::Elem) -> String;
}

/// Arbitrary-precision integers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct IntRing;

impl Ring for IntRing {
    type Elem = BigInt;

    fn name(&self) -> String {
        "int".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.is_one() {
            Some(BigInt::one())
        } else if (-a).is_one() {
            Some(-BigInt::one())
        } else {
            None
        }
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn parse(&self, s: &str) -> Option<BigInt> {
        s.parse().ok()
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// Exact rationals, always in lowest terms with positive denominator
/// (maintained by `BigRational` itself).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct RatRing;

impl Ring for RatRing {
    type Elem = BigRational;

    fn name(&self) -> String {
        "rat".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn parse(&self, s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            Some((p, q)) => Some(BigRational::new(p.parse().ok()?, q.parse().ok()?)),
            None => Some(BigRational::from_integer(s.parse().ok()?)),
        }
    }
    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Integers mod m, m >= 2, elements stored reduced to `0..m`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModRing {
    pub m: u64,
}

impl ModRing {
    pub fn new(m: u64) -> Self {
        assert!(m >= 2, "modulus must be >= 2");
        ModRing { m }
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.m as i64) as u64
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.m);
        let r = n % &m;
        let r = if r.is_negative() { r + &m } else { r };
        u64::try_from(r).expect("reduced residue fits u64")
    }

    /// Reduce a rational whose denominator is coprime to m.
    /// Returns `None` when the denominator shares a factor with m.
    pub fn reduce_rational(&self, x: &BigRational) -> Option<u64> {
        let den = self.reduce_bigint(x.denom());
        let num = self.reduce_bigint(x.numer());
        let inv = crate::numt::inv_mod(den, self.m)?;
        Some(self.mul(&num, &inv))
    }
}

impl Ring for ModRing {
    type Elem = u64;

    fn name(&self) -> String {
        format!("mod-{}", self.m)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        crate::numt::inv_mod(*a, self.m)
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        self.reduce_bigint(n)
    }
    fn parse(&self, s: &str) -> Option<u64> {
        let v: i64 = s.parse().ok()?;
        Some(self.reduce_i64(v))
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_ring_basics() {
        let r = ModRing::new(11);
        assert_eq!(r.add(&7, &8), 4);
        assert_eq!(r.sub(&3, &8), 6);
        assert_eq!(r.mul(&7, &8), 1);
        assert_eq!(r.inv(&7), Some(8));
        assert_eq!(r.inv(&0), None);
        assert_eq!(r.from_i64(-1), 10);
    }

    #[test]
    fn rational_reduction_detects_bad_denominators() {
        let r = ModRing::new(11);
        let ok = BigRational::new(BigInt::from(3), BigInt::from(7));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(22));
        assert!(r.reduce_rational(&ok).is_some());
        assert!(r.reduce_rational(&bad).is_none());
    }

    #[test]
    fn rational_render_parse_round_trip() {
        let r = RatRing;
        let x = BigRational::new(BigInt::from(-10), BigInt::from(4));
        let s = r.render(&x);
        assert_eq!(s, "-5/2");
        assert_eq!(r.parse(&s).unwrap(), x);
    }
}
