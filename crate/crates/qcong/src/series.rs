//! Ring-generic truncated q-series arithmetic.
//!
//! A [`QSeries`] stores coefficients for exponents `0 <= n < trunc`; absent
//! exponents are zero. Arithmetic never reads beyond `trunc`, and binary
//! operations carry `trunc = min` of the operands' truncations. Storage is a
//! dense vector below [`DENSE_LIMIT`] and a sparse map above it, so that long
//! sparse series (pentagonal factors, `E(q^ell)`-type substitutions) stay cheap.

use crate::error::{QError, QResult};
use crate::numt;
use crate::ring::{IntRing, ModRing, RatRing, Ring};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Truncation order above which coefficients are kept in a sparse map.
pub const DENSE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
enum Coeffs<T> {
    Dense(Vec<T>),
    Sparse(BTreeMap<usize, T>),
}

/// Sieve parameters for the operator U*_{epsilon,ell}: keep the coefficient of
/// q^n exactly when the Legendre symbol ((1-24n) | ell) equals epsilon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveSpec {
    pub ell: u64,
    pub epsilon: i32,
}

impl SieveSpec {
    pub fn new(ell: u64, epsilon: i32) -> QResult<Self> {
        if ell <= 3 || !numt::is_prime(ell) {
            return Err(QError::InvalidArgument(format!(
                "sieve modulus {ell} must be a prime > 3"
            )));
        }
        if !(-1..=1).contains(&epsilon) {
            return Err(QError::InvalidArgument("epsilon must be -1, 0 or 1".into()));
        }
        Ok(SieveSpec { ell, epsilon })
    }
}

/// A truncated formal power series over an exact coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<R: Ring> {
    ring: R,
    trunc: usize,
    coeffs: Coeffs<R::Elem>,
}

impl<R: Ring> QSeries<R> {
    pub fn zero(ring: R, trunc: usize) -> Self {
        let coeffs = if trunc <= DENSE_LIMIT {
            Coeffs::Dense(vec![ring.zero(); trunc])
        } else {
            Coeffs::Sparse(BTreeMap::new())
        };
        QSeries { ring, trunc, coeffs }
    }

    pub fn one(ring: R, trunc: usize) -> Self {
        let mut s = Self::zero(ring.clone(), trunc);
        s.set(0, ring.one());
        s
    }

    pub fn monomial(ring: R, coeff: R::Elem, exp: usize, trunc: usize) -> Self {
        let mut s = Self::zero(ring, trunc);
        s.set(exp, coeff);
        s
    }

    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        let trunc = coeffs.len();
        if trunc <= DENSE_LIMIT {
            QSeries { ring, trunc, coeffs: Coeffs::Dense(coeffs) }
        } else {
            let map = coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            QSeries { ring, trunc, coeffs: Coeffs::Sparse(map) }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Coefficient of q^n (zero when absent). Panics when n >= trunc:
    /// coefficients beyond the truncation are undefined, not zero.
    pub fn coeff(&self, n: usize) -> R::Elem {
        assert!(n < self.trunc, "coefficient {n} beyond truncation {}", self.trunc);
        match &self.coeffs {
            Coeffs::Dense(v) => v[n].clone(),
            Coeffs::Sparse(m) => m.get(&n).cloned().unwrap_or_else(|| self.ring.zero()),
        }
    }

    pub fn set(&mut self, n: usize, value: R::Elem) {
        assert!(n < self.trunc, "exponent {n} beyond truncation {}", self.trunc);
        match &mut self.coeffs {
            Coeffs::Dense(v) => v[n] = value,
            Coeffs::Sparse(m) => {
                if value.is_zero() {
                    m.remove(&n);
                } else {
                    m.insert(n, value);
                }
            }
        }
    }

    fn add_assign_at(&mut self, n: usize, value: &R::Elem) {
        if value.is_zero() || n >= self.trunc {
            return;
        }
        match &mut self.coeffs {
            Coeffs::Dense(v) => v[n] = self.ring.add(&v[n], value),
            Coeffs::Sparse(m) => {
                let cur = m.entry(n).or_insert_with(|| self.ring.zero());
                *cur = self.ring.add(cur, value);
                if cur.is_zero() {
                    m.remove(&n);
                }
            }
        }
    }

    /// Iterate (exponent, coefficient) over nonzero stored terms, ascending.
    pub fn iter_nonzero(&self) -> Box<dyn Iterator<Item = (usize, &R::Elem)> + '_> {
        match &self.coeffs {
            Coeffs::Dense(v) => {
                Box::new(v.iter().enumerate().filter(|(_, c)| !c.is_zero()))
            }
            Coeffs::Sparse(m) => Box::new(m.iter().map(|(&n, c)| (n, c))),
        }
    }

    pub fn nnz(&self) -> usize {
        self.iter_nonzero().count()
    }

    pub fn is_zero_series(&self) -> bool {
        self.iter_nonzero().next().is_none()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.iter_nonzero().next().map(|(n, _)| n)
    }

    fn check_ring(&self, other: &Self) -> QResult<()> {
        if self.ring != other.ring {
            return Err(QError::RingMismatch(format!(
                "{} vs {}",
                self.ring.name(),
                other.ring.name()
            )));
        }
        Ok(())
    }

    /// Shrink the truncation order.
    pub fn truncate(&self, trunc: usize) -> Self {
        let trunc = trunc.min(self.trunc);
        let mut out = Self::zero(self.ring.clone(), trunc);
        for (n, c) in self.iter_nonzero() {
            if n < trunc {
                out.set(n, c.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> QResult<Self> {
        self.check_ring(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncate(trunc);
        for (n, c) in other.iter_nonzero() {
            if n < trunc {
                out.add_assign_at(n, c);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> QResult<Self> {
        self.check_ring(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncate(trunc);
        for (n, c) in other.iter_nonzero() {
            if n < trunc {
                let neg = self.ring.neg(c);
                out.add_assign_at(n, &neg);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, scalar: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.trunc);
        for (n, c) in self.iter_nonzero() {
            out.set(n, self.ring.mul(scalar, c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.trunc);
        for (n, c) in self.iter_nonzero() {
            out.set(n, self.ring.neg(c));
        }
        out
    }

    /// Cauchy product, iterating the nonzero terms of the sparser operand on
    /// the outside so pentagonal-type factors cost O(trunc * sqrt(trunc)).
    pub fn mul(&self, other: &Self) -> QResult<Self> {
        self.check_ring(other)?;
        let trunc = self.trunc.min(other.trunc);
        let (outer, inner) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::zero(self.ring.clone(), trunc);
        for (i, a) in outer.iter_nonzero() {
            if i >= trunc {
                break;
            }
            for (j, b) in inner.iter_nonzero() {
                if i + j >= trunc {
                    break;
                }
                let p = self.ring.mul(a, b);
                out.add_assign_at(i + j, &p);
            }
        }
        Ok(out)
    }

    /// Multiply by q^a: exponents shift up, truncation is preserved, the top
    /// `a` coefficients fall away.
    pub fn shift_up(&self, a: usize) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.trunc);
        for (n, c) in self.iter_nonzero() {
            if n + a < self.trunc {
                out.set(n + a, c.clone());
            }
        }
        out
    }

    /// Divide by q^a; requires valuation >= a.
    pub fn shift_down(&self, a: usize) -> QResult<Self> {
        let mut out = Self::zero(self.ring.clone(), self.trunc - a);
        for (n, c) in self.iter_nonzero() {
            if n < a {
                return Err(QError::InvalidArgument(format!(
                    "shift_down({a}) on a series with valuation {n}"
                )));
            }
            out.set(n - a, c.clone());
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be a unit in the ring.
    pub fn invert_unit(&self) -> QResult<Self> {
        let c0 = self.coeff(0);
        let u = self.ring.inv(&c0).ok_or(QError::NonUnitConstant)?;
        let trunc = self.trunc;
        // c(0) = u; c(n) = -u * sum_{j>=1} a(j) c(n-j)
        let terms: Vec<(usize, R::Elem)> = self
            .iter_nonzero()
            .filter(|(n, _)| *n > 0)
            .map(|(n, c)| (n, c.clone()))
            .collect();
        let mut out = vec![self.ring.zero(); trunc.min(DENSE_LIMIT.max(1))];
        if trunc > out.len() {
            // inversion of very long series is quadratic; keep it dense anyway
            out = vec![self.ring.zero(); trunc];
        }
        out[0] = u.clone();
        for n in 1..trunc {
            let mut s = self.ring.zero();
            for (j, a) in &terms {
                if *j > n {
                    break;
                }
                let t = self.ring.mul(a, &out[n - j]);
                s = self.ring.add(&s, &t);
            }
            let s = self.ring.mul(&u, &s);
            out[n] = self.ring.neg(&s);
        }
        Ok(Self::from_coeffs(self.ring.clone(), out))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(self.ring.clone(), self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        result
    }

    /// Substitute q -> q^t: the coefficient of q^{tn} becomes a(n); truncation
    /// scales by t.
    pub fn substitute_power(&self, t: usize) -> Self {
        assert!(t >= 1);
        let trunc = self.trunc.saturating_mul(t);
        let mut out = Self::zero(self.ring.clone(), trunc);
        for (n, c) in self.iter_nonzero() {
            out.set(n * t, c.clone());
        }
        out
    }

    /// The operator delta_q = q d/dq: coefficient at n is multiplied by n.
    pub fn delta_q(&self) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.trunc);
        for (n, c) in self.iter_nonzero() {
            let f = self.ring.from_i64(n as i64);
            out.set(n, self.ring.mul(&f, c));
        }
        out
    }

    /// U(m): keeps every m-th coefficient, c(n) = a(mn); truncation divides by m.
    pub fn u_op(&self, m: usize) -> Self {
        assert!(m >= 1);
        let trunc = self.trunc.div_ceil(m);
        let mut out = Self::zero(self.ring.clone(), trunc);
        for (n, c) in self.iter_nonzero() {
            if n % m == 0 {
                out.set(n / m, c.clone());
            }
        }
        out
    }

    /// Arithmetic-progression extraction: c(n) = a(ell*n + beta).
    pub fn ap_extract(&self, ell: usize, beta: usize) -> Self {
        assert!(ell >= 1 && beta < ell);
        let trunc = if self.trunc > beta {
            (self.trunc - beta).div_ceil(ell)
        } else {
            0
        };
        let mut out = Self::zero(self.ring.clone(), trunc);
        for (n, c) in self.iter_nonzero() {
            if n >= beta && (n - beta) % ell == 0 {
                out.set((n - beta) / ell, c.clone());
            }
        }
        out
    }

    /// The sieve U*_{epsilon,ell}: keeps a(n) iff ((1-24n) | ell) = epsilon,
    /// zeroes the rest. Exponents are preserved.
    pub fn sieve(&self, spec: SieveSpec) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.trunc);
        for (n, c) in self.iter_nonzero() {
            let a = 1i64 - 24 * n as i64;
            if numt::legendre(a, spec.ell) == spec.epsilon {
                out.set(n, c.clone());
            }
        }
        out
    }

    /// E(q)^r via the sparse pentagonal series and repeated squaring.
    pub fn euler_pow(ring: R, r: u64, trunc: usize) -> Self {
        Self::euler(ring, trunc).pow(r)
    }

    /// Euler's pentagonal series E(q) = sum_k (-1)^k q^{k(3k-1)/2}.
    pub fn euler(ring: R, trunc: usize) -> Self {
        let mut out = Self::zero(ring.clone(), trunc);
        for (g, s) in numt::pentagonal_terms(trunc as u64) {
            out.set(g as usize, ring.from_i64(s));
        }
        out
    }

    /// The partition generating function P = 1/E(q).
    pub fn partition_series(ring: R, trunc: usize) -> Self {
        Self::euler(ring, trunc).invert_unit().expect("E has unit constant term")
    }

    /// eta^r(24 tau) as an integer-exponent q-series: q^r E(q^24)^r.
    /// Nonzero coefficients live on exponents == r (mod 24); the lowest is
    /// exactly q^r with coefficient 1.
    pub fn eta24_power(ring: R, r: u64, trunc: usize) -> Self {
        assert!(r >= 1);
        let inner = trunc.saturating_sub(r as usize).div_ceil(24);
        let e = Self::euler_pow(ring.clone(), r, inner.max(1));
        let mut out = Self::zero(ring, trunc);
        for (n, c) in e.iter_nonzero() {
            let m = 24 * n + r as usize;
            if m < trunc {
                out.set(m, c.clone());
            }
        }
        out
    }

    /// Map coefficients into another ring.
    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> QSeries<S> {
        let mut out = QSeries::zero(ring, self.trunc);
        for (n, c) in self.iter_nonzero() {
            out.set(n, f(c));
        }
        out
    }
}

impl QSeries<IntRing> {
    /// Reduce coefficients mod m.
    pub fn reduce_mod(&self, m: u64) -> QSeries<ModRing> {
        let ring = ModRing::new(m);
        self.map_ring(ring, |c| ring.reduce_bigint(c))
    }

    pub fn to_rational(&self) -> QSeries<RatRing> {
        self.map_ring(RatRing, |c| num_rational::BigRational::from_integer(c.clone()))
    }
}

impl QSeries<RatRing> {
    /// Reduce coefficients mod m. Every denominator must be coprime to m (this
    /// check is the ell-integrality test); the error names the first offending
    /// exponent.
    pub fn reduce_mod(&self, m: u64) -> QResult<QSeries<ModRing>> {
        let ring = ModRing::new(m);
        let mut out = QSeries::zero(ring, self.trunc);
        for (n, c) in self.iter_nonzero() {
            match ring.reduce_rational(c) {
                Some(v) => out.set(n, v),
                None => return Err(QError::NotIntegral { exponent: n, modulus: m }),
            }
        }
        Ok(out)
    }

    /// Exact integer coefficients, or the first fractional exponent.
    pub fn to_integer(&self) -> Result<QSeries<IntRing>, usize> {
        let mut out = QSeries::zero(IntRing, self.trunc);
        for (n, c) in self.iter_nonzero() {
            if !c.is_integer() {
                return Err(n);
            }
            out.set(n, c.to_integer());
        }
        Ok(out)
    }

    /// Largest power of p dividing some denominator (0 when all coprime).
    pub fn max_denominator_valuation(&self, p: u64) -> u32 {
        let p = BigInt::from(p);
        let mut best = 0u32;
        for (_, c) in self.iter_nonzero() {
            let mut d = c.denom().abs();
            let mut v = 0u32;
            while (&d % &p).is_zero() {
                d /= &p;
                v += 1;
            }
            best = best.max(v);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn geometric_series_times_one_minus_q() {
        // (1-q) * (1+q+q^2+...) = 1
        let t = 50;
        let mut a = QSeries::one(IntRing, t);
        a.set(1, int(-1));
        let geo = QSeries::from_coeffs(IntRing, (0..t).map(|_| int(1)).collect());
        let p = a.mul(&geo).unwrap();
        assert_eq!(p, QSeries::one(IntRing, t));
    }

    #[test]
    fn euler_times_partition_series_is_one() {
        let t = 50;
        let e = QSeries::euler(IntRing, t);
        let p = QSeries::partition_series(IntRing, t);
        assert_eq!(e.mul(&p).unwrap(), QSeries::one(IntRing, t));
        // p(4) = 5
        assert_eq!(p.coeff(4), int(5));
    }

    #[test]
    fn partition_series_mod_5_vanishes_on_class_4() {
        let p = QSeries::partition_series(IntRing, 200).reduce_mod(5);
        let cls = p.ap_extract(5, 4);
        assert!(cls.is_zero_series());
    }

    #[test]
    fn invert_rejects_zero_constant() {
        let mut s = QSeries::zero(IntRing, 10);
        s.set(1, int(1));
        s.set(2, int(1));
        assert!(matches!(s.invert_unit(), Err(QError::NonUnitConstant)));
    }

    #[test]
    fn invert_one_is_one() {
        let one = QSeries::one(RatRing, 10);
        assert_eq!(one.invert_unit().unwrap(), one);
    }

    #[test]
    fn euler_leading_terms() {
        let e = QSeries::euler(IntRing, 10);
        let expect = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0];
        for (n, v) in expect.iter().enumerate() {
            assert_eq!(e.coeff(n), int(*v), "exponent {n}");
        }
    }

    #[test]
    fn children_binomial_mod_ell() {
        for ell in [5u64, 7, 11, 13] {
            let t = 300;
            let ring = ModRing::new(ell);
            let e = QSeries::euler(ring, t);
            let lhs = e.pow(ell);
            let rhs = e.substitute_power(ell as usize).truncate(t);
            assert_eq!(lhs, rhs, "mod {ell}");
        }
    }

    #[test]
    fn euler23_mod_11_factorization() {
        // E^23 == E(q^11)^2 * E (mod 11) to 300 terms
        let t = 300;
        let ring = ModRing::new(11);
        let e = QSeries::euler(ring, t);
        let lhs = e.pow(23);
        let rhs = e
            .substitute_power(11)
            .truncate(t)
            .pow(2)
            .mul(&e)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eta24_power_exponent_classes() {
        let s = QSeries::eta24_power(IntRing, 13, 1000);
        assert_eq!(s.valuation(), Some(13));
        assert_eq!(s.coeff(13), int(1));
        for (n, _) in s.iter_nonzero() {
            assert_eq!(n % 24, 13);
        }
    }

    #[test]
    fn substitute_power_basics() {
        let mut a = QSeries::one(IntRing, 2);
        a.set(1, int(1));
        let b = a.substitute_power(24);
        assert_eq!(b.trunc(), 48);
        assert_eq!(b.coeff(0), int(1));
        assert_eq!(b.coeff(24), int(1));
        let e = QSeries::euler(IntRing, 40);
        assert_eq!(
            e.substitute_power(11).truncate(40),
            {
                let mut s = QSeries::zero(IntRing, 40);
                s.set(0, int(1));
                s.set(11, int(-1));
                s.set(22, int(-1));
                s
            }
        );
    }

    #[test]
    fn delta_q_and_u_op() {
        let p = QSeries::partition_series(IntRing, 60);
        let d = p.delta_q();
        assert_eq!(d.coeff(0), int(0));
        assert_eq!(d.coeff(4), int(20)); // 4 * p(4)
        assert_eq!(p.u_op(1), p);
        // ap_extract(P, 11, 6) starts with p(6) = 11
        assert_eq!(p.ap_extract(11, 6).coeff(0), int(11));
    }

    #[test]
    fn sieve_partitions_indices() {
        let p = QSeries::partition_series(IntRing, 120);
        let specs: Vec<SieveSpec> = [-1, 0, 1]
            .iter()
            .map(|&e| SieveSpec::new(7, e).unwrap())
            .collect();
        let mut sum = QSeries::zero(IntRing, 120);
        for s in &specs {
            sum = sum.add(&p.sieve(*s)).unwrap();
        }
        assert_eq!(sum, p);
        // idempotence
        let s0 = p.sieve(specs[1]);
        assert_eq!(s0.sieve(specs[1]), s0);
        // ell = 5, eps = 0 keeps exactly n == 4 (mod 5)
        let s5 = p.sieve(SieveSpec::new(5, 0).unwrap());
        for (n, _) in s5.iter_nonzero() {
            assert_eq!(n % 5, 4);
        }
    }

    #[test]
    fn reduce_mod_rejects_bad_denominator() {
        use num_rational::BigRational;
        let mut s = QSeries::zero(RatRing, 10);
        s.set(0, BigRational::new(int(1), int(11)));
        s.set(1, BigRational::from_integer(int(1)));
        match s.reduce_mod(11) {
            Err(QError::NotIntegral { exponent, modulus }) => {
                assert_eq!((exponent, modulus), (0, 11));
            }
            other => panic!("expected NotIntegral, got {other:?}"),
        }
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = QSeries::one(ModRing::new(5), 10);
        let b = QSeries::one(ModRing::new(7), 10);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn sparse_storage_above_dense_limit() {
        let t = DENSE_LIMIT + 50;
        let e = QSeries::euler(IntRing, t);
        assert!(e.nnz() < 3000);
        assert_eq!(e.coeff(0), int(1));
    }
}
