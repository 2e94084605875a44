//! Exact linear algebra for the elimination pipeline.
//!
//! The decomposition matrices have a few hundred columns with coefficients in
//! the hundreds of digits, so the unique-solution search runs mod several
//! word-size primes and lifts the answer by CRT plus rational reconstruction.
//! Exactness is restored at the end: the caller re-verifies the reconstructed
//! rational solution over Q on every row, and the rank assertion mod a prime
//! (rank >= ncols - 1) together with an exhibited exact nullvector proves the
//! nullspace is exactly one-dimensional.

use crate::error::{QError, QResult};
use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Word-size primes for modular elimination (below 2^62 so products fit u128).
pub fn elimination_primes() -> impl Iterator<Item = u64> {
    crate::numt::primes_from((1u64 << 62) - (1u64 << 20)).take(512)
}

/// Dense row-major matrix mod p.
pub struct ModMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    /// Row-reduce in place; returns pivot column per row rank info.
    /// After the call the matrix is in reduced row echelon form.
    fn rref(&mut self) -> Vec<isize> {
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let mut piv_of_col = vec![-1isize; cols];
        let mut r = 0usize;
        for c in 0..cols {
            let mut pr = None;
            for rr in r..rows {
                if self.at(rr, c) != 0 {
                    pr = Some(rr);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = crate::numt::inv_mod(self.at(r, c), p).expect("pivot invertible");
            for j in c..cols {
                let v = self.at(r, j);
                self.data[r * cols + j] = ((v as u128 * inv as u128) % p as u128) as u64;
            }
            for rr in 0..rows {
                if rr == r {
                    continue;
                }
                let f = self.at(rr, c);
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = (f as u128 * self.at(r, j) as u128) % p as u128;
                    let cur = self.data[rr * cols + j] as u128;
                    self.data[rr * cols + j] = ((cur + p as u128 - sub) % p as u128) as u64;
                }
            }
            piv_of_col[c] = r as isize;
            r += 1;
            if r == rows {
                break;
            }
        }
        piv_of_col
    }
}

/// Result of a mod-p nullspace probe on a column-stacked matrix.
pub struct ModProbe {
    /// Coefficients x with col_last = sum x_c col_c (mod p), when the
    /// nullspace is one-dimensional with the last column free.
    pub solution: Option<Vec<u64>>,
    pub nullity: usize,
}

/// Columns as coefficient vectors mod p; rows = common length.
pub fn probe_columns_mod_p(columns: &[Vec<u64>], p: u64) -> ModProbe {
    let cols = columns.len();
    let rows = columns[0].len();
    let mut m = ModMatrix {
        p,
        rows,
        cols,
        data: vec![0u64; rows * cols],
    };
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            m.data[r * cols + c] = v % p;
        }
    }
    let piv = m.rref();
    let free: Vec<usize> = (0..cols).filter(|&c| piv[c] < 0).collect();
    let nullity = free.len();
    if nullity != 1 || free[0] != cols - 1 {
        return ModProbe { solution: None, nullity };
    }
    // col_last = sum_c x_c col_c with x_c read off the rref
    let mut x = vec![0u64; cols - 1];
    for c in 0..cols - 1 {
        if piv[c] >= 0 {
            x[c] = m.at(piv[c] as usize, cols - 1);
        }
    }
    ModProbe { solution: Some(x), nullity }
}

/// Rational reconstruction of r mod m: p/q with |p|, q <= sqrt(m/2).
pub fn rational_reconstruct(r: &BigUint, m: &BigUint) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let bound = BigInt::from(bound);
    let mut a0 = BigInt::from(m.clone());
    let mut a1 = BigInt::from(r.clone());
    let mut b0 = BigInt::zero();
    let mut b1 = BigInt::one();
    while a1 > bound {
        let q = &a0 / &a1;
        let a2 = &a0 - &q * &a1;
        let b2 = &b0 - &q * &b1;
        a0 = std::mem::replace(&mut a1, a2);
        b0 = std::mem::replace(&mut b1, b2);
    }
    if b1.is_zero() || b1.abs() > bound {
        return None;
    }
    if a1.gcd(&b1).abs() != BigInt::one() {
        return None;
    }
    if b1.is_negative() {
        Some(BigRational::new(-a1, -b1))
    } else {
        Some(BigRational::new(a1, b1))
    }
}

/// CRT-combine per-prime solutions and reconstruct rationals. The closure
/// `probe` returns the mod-p solution vector for a given prime (or None when
/// the structural assertions fail for that prime, which is an error).
pub fn lift_solution(
    ncols: usize,
    mut probe: impl FnMut(u64) -> QResult<Vec<u64>>,
    mut accept: impl FnMut(&[BigRational]) -> bool,
) -> QResult<Vec<BigRational>> {
    let mut residues: Vec<BigUint> = vec![BigUint::zero(); ncols];
    let mut modulus = BigUint::one();
    let mut primes = elimination_primes();
    let check_prime = primes.next().expect("primes available");
    let check = probe(check_prime)?;
    loop {
        let p = primes
            .next()
            .ok_or_else(|| QError::Pipeline("prime pool exhausted during lifting".into()))?;
        let x = probe(p)?;
        let bp = BigUint::from(p);
        if modulus.is_one() {
            residues = x.into_iter().map(BigUint::from).collect();
            modulus = bp;
        } else {
            // CRT: r' = r + M * ((x - r) * M^{-1} mod p)
            let m_mod_p = (&modulus % &bp)
                .to_u64_digits()
                .first()
                .copied()
                .unwrap_or(0);
            let m_inv = crate::numt::inv_mod(m_mod_p, p)
                .ok_or_else(|| QError::Pipeline("CRT modulus collision".into()))?;
            for (r, &xv) in residues.iter_mut().zip(x.iter()) {
                let r_mod_p = (&*r % &bp).to_u64_digits().first().copied().unwrap_or(0);
                let diff = (xv + p - r_mod_p) % p;
                let k = ((diff as u128 * m_inv as u128) % p as u128) as u64;
                *r += &modulus * BigUint::from(k);
            }
            modulus *= &bp;
        }
        // attempt reconstruction
        let mut rec = Vec::with_capacity(ncols);
        let mut ok = true;
        for r in &residues {
            match rational_reconstruct(r, &modulus) {
                Some(f) => rec.push(f),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // cheap consistency check against the held-out prime
        let consistent = rec.iter().zip(check.iter()).all(|(f, &g)| {
            let ring = crate::ring::ModRing::new(check_prime);
            match ring.reduce_rational(f) {
                Some(v) => v == g,
                None => false,
            }
        });
        if consistent && accept(&rec) {
            return Ok(rec);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruct_simple_fractions() {
        // 3/7 mod 101*103
        let m = BigUint::from(101u32 * 103u32);
        let inv7 = crate::numt::inv_mod(7, 101 * 103).unwrap();
        let r = BigUint::from((3 * inv7) % (101 * 103));
        let f = rational_reconstruct(&r, &m).unwrap();
        assert_eq!(f, BigRational::new(BigInt::from(3), BigInt::from(7)));
    }

    #[test]
    fn probe_finds_unique_combination() {
        // col2 = 2*col0 - 3*col1 over a tiny system
        let p = 1_000_003u64;
        let c0: Vec<u64> = vec![1, 4, 9, 16, 25];
        let c1: Vec<u64> = vec![1, 2, 3, 5, 8];
        let c2: Vec<u64> = c0
            .iter()
            .zip(&c1)
            .map(|(&a, &b)| ((2 * a as i64 - 3 * b as i64).rem_euclid(p as i64)) as u64)
            .collect();
        let probe = probe_columns_mod_p(&[c0, c1, c2], p);
        assert_eq!(probe.nullity, 1);
        assert_eq!(probe.solution.unwrap(), vec![2, p - 3]);
    }

    #[test]
    fn probe_reports_rank_deficiency() {
        let p = 1_000_003u64;
        let c0: Vec<u64> = vec![1, 2, 3];
        let c1: Vec<u64> = vec![2, 4, 6];
        let c2: Vec<u64> = vec![0, 0, 0];
        let probe = probe_columns_mod_p(&[c0, c1, c2], p);
        assert!(probe.nullity > 1 || probe.solution.is_none());
    }
}
