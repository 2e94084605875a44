//! Rank and crank moment generating functions and the elimination pipeline
//! that turns them into SPT congruences mod ell.
//!
//! The pipeline works in six stages for a prime ell > 3 with
//! 24 beta == 1 (mod ell):
//!
//! 1. Decompose R_{2k} for k = (ell-1)/2 and (ell+1)/2 over the generator set
//!    T_{2k} (crank derivatives delta^m C_{2j} plus cusp-form generators
//!    delta^m (P * b)) together with delta-derivatives of R_2, by a nullspace
//!    computation with exact rational coefficients.
//! 2. Multiply the first identity by ell and reduce mod ell; only coefficients
//!    with an ell in the denominator survive. On the progression
//!    n == beta (mod ell) every delta_q collapses to the scalar beta, which
//!    closes the relation into U*(C_2) == U*(P * W_C) for a cusp combination W_C.
//! 3. Reduce the second identity mod ell, use m^{ell+1} == m^2 to identify
//!    R_{ell+1} with R_2 and substitute step 2, giving U*(R_2) == U*(P * W_R).
//! 4. Combine via spt = (M_2 - N_2)/2 and push each cusp term through the
//!    Chua lift, reducing the result to its minimal-weight representative
//!    mod ell: SPT(ell, beta) == scalar * E^r(q) * F(tau) (mod ell).
//!
//! Stages 5-6 (Hecke eigenvalue scans and explicit certificates) live in
//! [`crate::hecke`].

use crate::error::{QError, QResult};
use crate::forms::{
    dim_cusp, dim_modular, level1_basis, mono_series, pfcong_g, to_basis_mod, BasisKind,
    Level1Form, Mono, PfcongParams,
};
use crate::linalg;
use crate::oracle::{self, Method, StatKind};
use crate::report::Check;
use crate::ring::{IntRing, ModRing, RatRing, Ring};
use crate::series::QSeries;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Binomial coefficient as BigInt.
fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for j in 0..k.min(n - k) {
        out = out * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    out
}

/// Crank moment generating functions C_0 = P, C_2, ..., C_{2k} via the
/// recurrence C_{2n} = 2 sum_{j<n} C(2n-1, 2j-1) Phi_{2j-1} C_{2n-2j}
///                     + 2 Phi_{2n-1} P.
pub fn crank_moment_series_upto(k: u32, trunc: usize) -> Vec<QSeries<IntRing>> {
    let p = QSeries::partition_series(IntRing, trunc);
    let phis: Vec<QSeries<IntRing>> = (0..=k)
        .map(|j| {
            if j == 0 {
                QSeries::zero(IntRing, trunc)
            } else {
                crate::forms::phi_series(2 * j - 1, trunc)
            }
        })
        .collect();
    let mut out: Vec<QSeries<IntRing>> = vec![p.clone()];
    for n in 1..=k as u64 {
        let mut acc = QSeries::zero(IntRing, trunc);
        for j in 1..n {
            let c = BigInt::from(2) * binom(2 * n - 1, 2 * j - 1);
            let term = phis[j as usize].mul(&out[(n - j) as usize]).unwrap();
            acc = acc.add(&term.scale(&c)).unwrap();
        }
        let last = phis[n as usize].mul(&p).unwrap().scale(&BigInt::from(2));
        acc = acc.add(&last).unwrap();
        out.push(acc);
    }
    out
}

/// C_{2k} alone.
pub fn crank_moment_series(k: u32, trunc: usize) -> QSeries<IntRing> {
    crank_moment_series_upto(k, trunc).pop().unwrap()
}

/// Rank moment generating function R_{2k} from the bivariate count table.
pub fn rank_moment_series(k: u32, trunc: usize) -> QResult<QSeries<IntRing>> {
    let table = oracle::count_table(StatKind::Rank, trunc.saturating_sub(1), Method::Dp)?;
    Ok(rank_moment_from_table(&table, k, trunc))
}

pub fn rank_moment_from_table(
    table: &oracle::CountTable,
    k: u32,
    trunc: usize,
) -> QSeries<IntRing> {
    assert!(table.max_n + 1 >= trunc);
    let mut coeffs = vec![BigInt::zero(); trunc];
    for (n, c) in coeffs.iter_mut().enumerate() {
        *c = table.moment(n, 2 * k);
    }
    QSeries::from_coeffs(IntRing, coeffs)
}

/// R_2 = C_2 - 2 * spt generating function; cheap route for long truncations,
/// used by congruence verifications (the identity itself is oracle-tested).
pub fn r2_series_fast(trunc: usize) -> QSeries<IntRing> {
    let c2 = QSeries::partition_series(IntRing, trunc)
        .delta_q()
        .scale(&BigInt::from(2));
    let spt = oracle::spt_series(trunc);
    let mut coeffs = vec![BigInt::zero(); trunc];
    for (n, c) in coeffs.iter_mut().enumerate() {
        *c = c2.coeff(n) - BigInt::from(spt[n].clone()) * 2;
    }
    QSeries::from_coeffs(IntRing, coeffs)
}

/// Check the rank-crank moment identity relating triple crank products to
/// R_{2k} and delta-derivatives of lower rank moments, coefficientwise.
pub fn rcrel_check(k: u32, trunc: usize) -> QResult<Check> {
    assert!(k >= 2);
    let cranks = crank_moment_series_upto(k, trunc);
    let table = oracle::count_table(StatKind::Rank, trunc - 1, Method::Dp)?;
    let ranks: Vec<QSeries<IntRing>> = (0..=k)
        .map(|j| rank_moment_from_table(&table, j, trunc))
        .collect();
    let e2 = QSeries::euler(IntRing, trunc).pow(2);

    // left side: sum_{i=0}^{k-1} C(2k,2i) sum_{a+b+c=2k-2i even} multinom * C_a C_b C_c * P^{-2}
    let mut triple = QSeries::zero(IntRing, trunc);
    for i in 0..k {
        let outer = binom(2 * k as u64, 2 * i as u64);
        let s = 2 * (k - i); // total even weight to distribute
        for a in (0..=s).step_by(2) {
            for b in (0..=(s - a)).step_by(2) {
                let c = s - a - b;
                let multi = binom(s as u64, a as u64)
                    * binom((s - a) as u64, b as u64);
                let prod = cranks[(a / 2) as usize]
                    .mul(&cranks[(b / 2) as usize])?
                    .mul(&cranks[(c / 2) as usize])?;
                triple = triple.add(&prod.scale(&(&outer * multi)))?;
            }
        }
    }
    let lhs = triple.mul(&e2)?.sub(
        &cranks[1].scale(&(BigInt::from(3) * ((BigInt::one() << (2 * k - 1)) - 1))),
    )?;

    // right side
    let mut rhs = ranks[k as usize]
        .scale(&BigInt::from((2 * k as i64 - 1) * (2 * k as i64 - 2) / 2));
    for i in 1..k {
        let c1 = BigInt::from(6)
            * binom(2 * k as u64, 2 * i as u64)
            * ((BigInt::one() << (2 * i - 1)) - 1);
        rhs = rhs.add(&ranks[(k - i) as usize].delta_q().scale(&c1))?;
        let c2 = binom(2 * k as u64, 2 * i as u64 + 2) * ((BigInt::one() << (2 * i + 1)) - 1)
            - (BigInt::one() << (2 * i)) * binom(2 * k as u64, 2 * i as u64 + 1)
            + binom(2 * k as u64, 2 * i as u64);
        rhs = rhs.add(&ranks[(k - i) as usize].scale(&c2))?;
    }

    let witness = (0..trunc).find(|&n| lhs.coeff(n) != rhs.coeff(n));
    Ok(Check::scan(
        "rank-crank-moment-identity",
        serde_json::json!({"k": k, "trunc": trunc}),
        witness.map(|n| serde_json::json!(n)),
    ))
}

/// The exact weight-six moment relation used for the t = 5 reduction:
/// N_6 = 2/33 (324n^2+69n-10) M_2 + 20/33 (-45n+4) M_4 + 18/11 M_6
///       + (108n^2-24n+1) N_2.
fn exact_n6_relation(rank: &oracle::CountTable, crank: &oracle::CountTable, max_n: usize) -> Option<usize> {
    let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    (1..=max_n).find(|&n| {
        let nn = n as i64;
        let lhs = BigRational::from_integer(rank.moment(n, 6));
        let rhs = r(2, 33) * BigRational::from_integer(BigInt::from(324 * nn * nn + 69 * nn - 10))
            * BigRational::from_integer(crank.moment(n, 2))
            + r(20, 33)
                * BigRational::from_integer(BigInt::from(-45 * nn + 4))
                * BigRational::from_integer(crank.moment(n, 4))
            + r(18, 11) * BigRational::from_integer(crank.moment(n, 6))
            + BigRational::from_integer(BigInt::from(108 * nn * nn - 24 * nn + 1))
                * BigRational::from_integer(rank.moment(n, 2));
        lhs != rhs
    })
}

/// The displayed mod-t moment reductions for t = 5, 7, 13, checked against
/// oracle moments. Each failed check carries the witness n.
pub fn classical_reductions(t: u64, max_n: usize) -> QResult<Vec<Check>> {
    let rank = oracle::count_table(StatKind::Rank, max_n, Method::Dp)?;
    let crank = oracle::count_table(StatKind::Crank, max_n, Method::Dp)?;
    let p = oracle::partition_table_mod(max_n, t);
    let spt = oracle::spt_series_mod(max_n + 1, t);
    let tm = BigInt::from(t);
    let modn = |x: BigInt| -> i64 {
        let r = x % &tm;
        let r = if r.is_negative() { r + &tm } else { r };
        i64::try_from(r).unwrap()
    };
    let params = serde_json::json!({"t": t, "max_n": max_n});
    let mut checks = Vec::new();
    let mut scan = |name: &str, f: &mut dyn FnMut(usize) -> bool| {
        let witness = (1..=max_n).find(|&n| f(n));
        checks.push(Check::scan(name, params.clone(), witness.map(|n| serde_json::json!(n))));
    };
    match t {
        5 => {
            let w = exact_n6_relation(&rank, &crank, max_n);
            checks.push(Check::scan(
                "exact-n6-moment-relation",
                params.clone(),
                w.map(|n| serde_json::json!(n)),
            ));
            scan("n6-reduction-mod-5", &mut |n| {
                let nn = n as i64;
                let lhs = rank.moment(n, 6);
                let rhs = BigInt::from(nn * nn + nn) * crank.moment(n, 2)
                    + 3 * crank.moment(n, 6)
                    + BigInt::from(3 * nn * nn + nn + 1) * rank.moment(n, 2);
                modn(lhs - rhs) != 0
            });
            scan("n2-m2-relation-mod-5", &mut |n| {
                let nn = n as i64;
                let lhs = BigInt::from(2 * nn * (nn + 2)) * rank.moment(n, 2);
                let rhs = BigInt::from((nn + 2) * (nn + 4)) * crank.moment(n, 2);
                modn(lhs - rhs) != 0
            });
            scan("n2-p-reduction-mod-5", &mut |n| {
                if [0, 3].contains(&(n % 5)) {
                    return false;
                }
                let rhs = BigInt::from((n as i64 + 4) * p[n] as i64);
                modn(rank.moment(n, 2) - rhs) != 0
            });
            scan("spt-reduction-mod-5", &mut |n| {
                if [0, 3].contains(&(n % 5)) {
                    return false;
                }
                (spt[n] + 5 * 5 - (3 * (n as u64 + 1) % 5) * p[n] % 5) % 5 != 0
            });
        }
        7 => {
            scan("n2-m2-relation-mod-7", &mut |n| {
                let nn = n as i64;
                let lhs = BigInt::from(3 * nn * (nn + 1) * (nn + 5)) * rank.moment(n, 2);
                let rhs = BigInt::from(2 * (nn + 1) * (nn + 5) * (nn + 6)) * crank.moment(n, 2);
                modn(lhs - rhs) != 0
            });
            scan("n2-p-reduction-mod-7", &mut |n| {
                if [0, 2, 6].contains(&(n % 7)) {
                    return false;
                }
                let rhs = BigInt::from((6 * n as i64 + 1) * p[n] as i64);
                modn(rank.moment(n, 2) - rhs) != 0
            });
            scan("spt-reduction-mod-7", &mut |n| {
                if [0, 2, 6].contains(&(n % 7)) {
                    return false;
                }
                (spt[n] + 7 * 7 - ((5 * n as u64 + 3) % 7) * p[n] % 7) % 7 != 0
            });
        }
        13 => {
            // N_14 relation; the M_2-coefficient polynomial is
            // 6 + 4n + 12n^2 + 4n^3 + 12n^4 + 5n^5 + 8n^6 (mod 13)
            scan("n14-reduction-mod-13", &mut |n| {
                let nn = BigInt::from(n as i64);
                let a = BigInt::from(6)
                    + 4 * &nn
                    + 12 * nn.pow(2)
                    + 4 * nn.pow(3)
                    + 12 * nn.pow(4)
                    + 5 * nn.pow(5)
                    + 8 * nn.pow(6);
                let b = BigInt::one()
                    + 6 * &nn
                    + 4 * nn.pow(2)
                    + 2 * nn.pow(3)
                    + 3 * nn.pow(4)
                    + 5 * nn.pow(5)
                    + 6 * nn.pow(6);
                let lhs = rank.moment(n, 14);
                let rhs = a * crank.moment(n, 2) + b * rank.moment(n, 2) + crank.moment(n, 14);
                modn(lhs - rhs) != 0
            });
            scan("n2-m2-relation-mod-13", &mut |n| {
                let nn = n as i64;
                let lhs = BigInt::from(7 * nn)
                    * BigInt::from((nn + 1) * (nn + 2) * (nn + 5))
                    * BigInt::from((nn + 9) * (nn + 12))
                    * rank.moment(n, 2);
                let rhs = BigInt::from(8 * (nn + 1) * (nn + 2))
                    * BigInt::from((nn + 5) * (nn + 9) * (nn + 9))
                    * BigInt::from(nn + 12)
                    * crank.moment(n, 2);
                modn(lhs - rhs) != 0
            });
            scan("n2-p-reduction-mod-13", &mut |n| {
                if [0, 1, 4, 8, 11, 12].contains(&(n % 13)) {
                    return false;
                }
                let rhs = BigInt::from(6 * n as i64 + 2) * BigInt::from(p[n]);
                modn(rank.moment(n, 2) - rhs) != 0
            });
            scan("spt-reduction-mod-13", &mut |n| {
                if [0, 1, 4, 8, 11, 12].contains(&(n % 13)) {
                    return false;
                }
                (spt[n] + 13 * 13 - ((11 * n as u64 + 12) % 13) * p[n] % 13) % 13 != 0
            });
        }
        _ => {
            return Err(QError::InvalidArgument(format!(
                "classical reductions exist for t = 5, 7, 13; got {t}"
            )))
        }
    }
    Ok(checks)
}

/// A generator of the space spanned by T_{2k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenTag {
    /// delta_q^m (C_{2j})
    Crank { j: u32, m: u32 },
    /// delta_q^m (P * mono), mono a cusp monomial of its weight
    Cusp { mono: Mono, m: u32 },
}

/// The generating set T_{2k} = C_{2k} union S_{2k} with materialized series.
pub struct BasisT2k {
    pub k: u32,
    pub trunc: usize,
    pub gens: Vec<(GenTag, QSeries<IntRing>)>,
}

/// |T_{2k}| = sum_{j<=k} #{(a,b,c): a+2b+3c = j} (the dimension of P W_{2k}).
pub fn t2k_size(k: u32) -> usize {
    let crank = (k * (k + 1) / 2) as usize;
    let cusp: usize = (1..=k)
        .map(|j| (k - j + 1) as usize * dim_cusp(2 * j as i64))
        .sum();
    crank + cusp
}

fn delta_pow(s: &QSeries<IntRing>, m: u32) -> QSeries<IntRing> {
    let mut out = s.clone();
    for _ in 0..m {
        out = out.delta_q();
    }
    out
}

pub fn basis_t2k(k: u32, trunc: usize) -> QResult<BasisT2k> {
    let cranks = crank_moment_series_upto(k, trunc);
    let p = QSeries::partition_series(IntRing, trunc);
    let mut gens = Vec::new();
    for j in 1..=k {
        for m in 0..=(k - j) {
            gens.push((
                GenTag::Crank { j, m },
                delta_pow(&cranks[j as usize], m),
            ));
        }
    }
    for j in 1..=k {
        for b in level1_basis(2 * j, BasisKind::Cusp) {
            let mono = *b.terms().next().unwrap().0;
            let base = p.mul(&mono_series(mono, trunc))?;
            for m in 0..=(k - j) {
                gens.push((GenTag::Cusp { mono, m }, delta_pow(&base, m)));
            }
        }
    }
    assert_eq!(gens.len(), t2k_size(k));
    Ok(BasisT2k { k, trunc, gens })
}

/// Verify that the T_{2k} generators are linearly independent over Q by
/// exhibiting full column rank mod a word-size prime (rank mod p is a lower
/// bound for rank over Q).
pub fn verify_t2k_rank(basis: &BasisT2k) -> QResult<Check> {
    let rows = basis.trunc.min(basis.gens.len() + 20);
    let p = linalg::elimination_primes().next().unwrap();
    let ring = ModRing::new(p);
    let cols: Vec<Vec<u64>> = basis
        .gens
        .iter()
        .map(|(_, s)| (0..rows).map(|n| ring.reduce_bigint(&s.coeff(n))).collect())
        .collect();
    // append a zero column so the probe's "last column free" convention
    // reports nullity 1 exactly when the generators are independent
    let mut cols = cols;
    cols.push(vec![0u64; rows]);
    let probe = linalg::probe_columns_mod_p(&cols, p);
    let ok = probe.nullity == 1 && probe.solution.is_some();
    Ok(Check::scan(
        "t2k-basis-rank",
        serde_json::json!({"k": basis.k, "size": basis.gens.len()}),
        (!ok).then(|| serde_json::json!({"nullity": probe.nullity})),
    ))
}

/// Step 1 output: R_{2k} = sum_i t_coeffs[i] * gen_i + sum_j d_coeffs[j] * delta_q^j(R_2),
/// with exact rational coefficients, verified coefficientwise to `trunc`.
pub struct Step1 {
    pub k: u32,
    pub trunc: usize,
    pub tags: Vec<GenTag>,
    pub t_coeffs: Vec<BigRational>,
    pub d_coeffs: Vec<BigRational>,
}

pub fn step1_solve(k: u32, trunc: Option<usize>) -> QResult<Step1> {
    let ncols = t2k_size(k) + k as usize + 1;
    let trunc = trunc.unwrap_or(ncols + 40).max(ncols + 40);
    let rows = ncols + 20;
    let basis = basis_t2k(k, trunc)?;
    let table = oracle::count_table(StatKind::Rank, trunc - 1, Method::Dp)?;
    let r2 = rank_moment_from_table(&table, 1, trunc);
    let r2k = rank_moment_from_table(&table, k, trunc);
    let mut columns: Vec<QSeries<IntRing>> =
        basis.gens.iter().map(|(_, s)| s.clone()).collect();
    for j in 0..k {
        columns.push(delta_pow(&r2, j));
    }
    columns.push(r2k.clone());

    let col_big: Vec<Vec<BigInt>> = columns
        .iter()
        .map(|s| (0..rows).map(|n| s.coeff(n)).collect())
        .collect();

    let probe = |p: u64| -> QResult<Vec<u64>> {
        let ring = ModRing::new(p);
        let cols_p: Vec<Vec<u64>> = col_big
            .iter()
            .map(|c| c.iter().map(|v| ring.reduce_bigint(v)).collect())
            .collect();
        let pr = linalg::probe_columns_mod_p(&cols_p, p);
        match pr.solution {
            Some(x) => Ok(x),
            None => Err(QError::NullspaceDimension(pr.nullity)),
        }
    };
    // quick acceptance check on a few rows before full verification
    let accept = |x: &[BigRational]| -> bool {
        for n in (0..trunc).step_by((trunc / 7).max(1)) {
            let mut acc = BigRational::zero();
            for (i, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    acc += c * BigRational::from_integer(columns[i].coeff(n));
                }
            }
            if acc != BigRational::from_integer(r2k.coeff(n)) {
                return false;
            }
        }
        true
    };
    let sol = linalg::lift_solution(ncols - 1, probe, accept)?;
    // full exact verification on every coefficient up to trunc
    for n in 0..trunc {
        let mut acc = BigRational::zero();
        for (i, c) in sol.iter().enumerate() {
            if !c.is_zero() {
                acc += c * BigRational::from_integer(columns[i].coeff(n));
            }
        }
        if acc != BigRational::from_integer(r2k.coeff(n)) {
            return Err(QError::Pipeline(format!(
                "step 1 residual nonzero at q^{n} (k = {k})"
            )));
        }
    }
    let tcount = basis.gens.len();
    Ok(Step1 {
        k,
        trunc,
        tags: basis.gens.iter().map(|(t, _)| *t).collect(),
        t_coeffs: sol[..tcount].to_vec(),
        d_coeffs: sol[tcount..].to_vec(),
    })
}

/// p-adic valuation of a rational (negative when p divides the denominator).
fn val_p(x: &BigRational, p: u64) -> i32 {
    if x.is_zero() {
        return i32::MAX;
    }
    let pb = BigInt::from(p);
    let mut v = 0i32;
    let mut num = x.numer().clone();
    while (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    let mut den = x.denom().clone();
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    v
}

fn residue_mod(x: &BigRational, ell: u64) -> u64 {
    ModRing::new(ell)
        .reduce_rational(x)
        .expect("ell-integral rational")
}

/// A cusp-form combination with mod-ell coefficients on canonical cusp
/// monomials (Delta^d E4^b E6^c, d >= 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspCombo {
    pub ell: u64,
    pub terms: BTreeMap<Mono, u64>,
}

impl CuspCombo {
    pub fn new(ell: u64) -> Self {
        CuspCombo { ell, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, mono: Mono, c: u64) {
        let e = self.terms.entry(mono).or_insert(0);
        *e = (*e + c) % self.ell;
        if *e == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn scaled(&self, c: u64) -> Self {
        let mut out = Self::new(self.ell);
        for (m, v) in &self.terms {
            out.add(*m, v * c % self.ell);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Series of P * (combination) mod ell.
    pub fn p_times_series(&self, trunc: usize) -> QResult<QSeries<ModRing>> {
        let ring = ModRing::new(self.ell);
        let mut acc = QSeries::zero(ring, trunc);
        for (m, c) in &self.terms {
            let s = mono_series(*m, trunc).reduce_mod(self.ell).scale(c);
            acc = acc.add(&s)?;
        }
        let p = QSeries::partition_series(ring, trunc);
        acc.mul(&p)
    }

    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let f = Level1Form::monomial(*m);
                format!("{c}*{}", f.describe())
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Steps 2-3 output: U*(C_2) == U*(P W_C) and U*(R_2) == U*(P W_R) mod ell,
/// both verified coefficientwise along the progression.
pub struct Step23 {
    pub ell: u64,
    pub beta: u64,
    pub wc: CuspCombo,
    pub wr: CuspCombo,
    pub checks: Vec<Check>,
}

struct Collapsed {
    /// reduced crank index 2j -> gamma coefficient
    crank: BTreeMap<u32, u64>,
    cusp: CuspCombo,
}

/// Collapse a surviving combination on the progression n == beta (mod ell):
/// U*(delta^m f) == beta^m U*(f), and crank indices reduce mod ell - 1
/// (m^{2j} == m^{2j'} for 2j == 2j' mod ell-1, both >= 2).
fn collapse(
    tags: &[GenTag],
    residues: &[Option<u64>],
    ell: u64,
    beta: u64,
) -> Collapsed {
    let ring = ModRing::new(ell);
    let mut crank: BTreeMap<u32, u64> = BTreeMap::new();
    let mut cusp = CuspCombo::new(ell);
    for (tag, res) in tags.iter().zip(residues) {
        let Some(r) = res else { continue };
        if *r == 0 {
            continue;
        }
        match tag {
            GenTag::Crank { j, m } => {
                let mut idx = 2 * j;
                if idx as u64 > ell - 1 {
                    idx = (idx - 2) % (ell as u32 - 1) + 2;
                }
                let c = ring.mul(r, &crate::numt::pow_mod(beta, *m as u64, ell));
                let e = crank.entry(idx).or_insert(0);
                *e = ring.add(e, &c);
                if *e == 0 {
                    crank.remove(&idx);
                }
            }
            GenTag::Cusp { mono, m } => {
                let c = ring.mul(r, &crate::numt::pow_mod(beta, *m as u64, ell));
                cusp.add(*mono, c);
            }
        }
    }
    Collapsed { crank, cusp }
}

/// Verify U*(lhs) == U*(P * combo) (mod ell) on `ap_terms` progression terms.
fn verify_ap_congruence(
    name: &str,
    lhs: &QSeries<IntRing>,
    combo: &CuspCombo,
    ell: u64,
    beta: u64,
    ap_terms: usize,
) -> QResult<Check> {
    let trunc = ell as usize * ap_terms + beta as usize + 1;
    assert!(lhs.trunc() >= trunc);
    let rhs = combo.p_times_series(trunc)?;
    let lhs_m = lhs.truncate(trunc).reduce_mod(ell);
    let witness = (0..ap_terms)
        .map(|n| ell as usize * n + beta as usize)
        .find(|&idx| lhs_m.coeff(idx) != rhs.coeff(idx));
    Ok(Check::scan(
        name,
        serde_json::json!({"ell": ell, "beta": beta, "ap_terms": ap_terms, "combo": combo.describe()}),
        witness.map(|n| serde_json::json!(n)),
    ))
}

/// Primes whose crank residue counts are equidistributed on the progression
/// (M(r, ell, ell n + beta) = p(ell n + beta)/ell), making every moment
/// U*(C_{2j}) with 2 <= 2j < ell - 1 vanish mod ell.
fn crank_equidistributed(ell: u64) -> bool {
    matches!(ell, 5 | 7 | 11)
}

pub fn step23_reduce(ell: u64, d1: &Step1, d2: &Step1, ap_terms: usize) -> QResult<Step23> {
    let params = PfcongParams::new(ell)?;
    let beta = params.beta;
    let ring = ModRing::new(ell);
    let mut checks = Vec::new();
    let equi = crank_equidistributed(ell);
    let verify_trunc = ell as usize * ap_terms + beta as usize + 1;

    // ---- step 2: multiply the k = (ell-1)/2 identity by ell, reduce mod ell ----
    assert_eq!(d1.k as u64, (ell - 1) / 2);
    for c in &d1.d_coeffs {
        if val_p(c, ell) < 0 {
            return Err(QError::Pipeline(
                "step 2: rank-side coefficient with an ell denominator".into(),
            ));
        }
    }
    let residues1: Vec<Option<u64>> = d1
        .t_coeffs
        .iter()
        .map(|c| {
            let v = val_p(c, ell);
            match v {
                v if v >= 0 => None, // killed by the extra factor ell
                -1 => {
                    let scaled = c * BigRational::from_integer(BigInt::from(ell));
                    Some(residue_mod(&scaled, ell))
                }
                _ => panic!("denominator valuation below -1"),
            }
        })
        .collect();
    let col1 = collapse(&d1.tags, &residues1, ell, beta);
    let cranks_needed: Vec<u32> = col1
        .crank
        .keys()
        .chain(std::iter::once(&2))
        .copied()
        .collect();
    let max_j = cranks_needed.iter().map(|&i| i / 2).max().unwrap_or(1);
    let crank_series = crank_moment_series_upto(max_j, verify_trunc);

    let wc: CuspCombo;
    if equi {
        // every appearing crank moment vanishes on the progression; verify that
        for (&idx, _) in &col1.crank {
            if !(2..=(ell as u32 - 2)).contains(&idx) {
                return Err(QError::Pipeline(format!(
                    "step 2: crank index {idx} outside the equidistribution range"
                )));
            }
            checks.push(verify_ap_congruence(
                "crank-moment-vanishes",
                &crank_series[(idx / 2) as usize],
                &CuspCombo::new(ell),
                ell,
                beta,
                ap_terms,
            )?);
        }
        if !col1.cusp.is_zero() {
            return Err(QError::Pipeline(
                "step 2: unexpected cusp terms in the equidistributed case".into(),
            ));
        }
        wc = CuspCombo::new(ell);
    } else {
        for (&idx, &g) in &col1.crank {
            if idx != 2 && g != 0 {
                return Err(QError::Pipeline(format!(
                    "step 2: unreduced crank moment C_{idx} with coefficient {g}"
                )));
            }
        }
        let g1 = col1.crank.get(&2).copied().unwrap_or(0);
        if g1 == 0 {
            if !col1.cusp.is_zero() {
                return Err(QError::Pipeline(
                    "step 2: cusp terms without a C_2 term".into(),
                ));
            }
            wc = CuspCombo::new(ell);
        } else {
            // 0 == g1 U*(C_2) + U*(P cusp)  =>  U*(C_2) == U*(P * (-cusp/g1))
            let inv = ring.inv(&g1).unwrap();
            let factor = ring.mul(&ring.neg(&1), &inv);
            wc = col1.cusp.scaled(factor);
        }
    }
    checks.push(verify_ap_congruence(
        "step2-crank-congruence",
        &crank_series[1],
        &wc,
        ell,
        beta,
        ap_terms,
    )?);
    // cross-check: U*(C_2) == 2 beta U*(P) directly
    {
        let p = QSeries::partition_series(ModRing::new(ell), verify_trunc);
        let c2m = crank_series[1].truncate(verify_trunc).reduce_mod(ell);
        let witness = (0..ap_terms)
            .map(|n| ell as usize * n + beta as usize)
            .find(|&idx| c2m.coeff(idx) != ring.mul(&(2 * beta % ell), &p.coeff(idx)));
        checks.push(Check::scan(
            "c2-is-2beta-p-on-progression",
            serde_json::json!({"ell": ell}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    // ---- step 3: reduce the k = (ell+1)/2 identity mod ell ----
    assert_eq!(d2.k as u64, (ell + 1) / 2);
    for c in d2.t_coeffs.iter().chain(&d2.d_coeffs) {
        if val_p(c, ell) < 0 {
            return Err(QError::Pipeline(
                "step 3: coefficient with an ell denominator".into(),
            ));
        }
    }
    let residues2: Vec<Option<u64>> = d2
        .t_coeffs
        .iter()
        .map(|c| Some(residue_mod(c, ell)))
        .collect();
    let col2 = collapse(&d2.tags, &residues2, ell, beta);
    // R_{ell+1} == R_2 (mod ell) on the left; delta-terms collapse on the right
    let mut a_rank = 0u64;
    for (j, c) in d2.d_coeffs.iter().enumerate() {
        let r = residue_mod(c, ell);
        a_rank = ring.add(&a_rank, &ring.mul(&r, &crate::numt::pow_mod(beta, j as u64, ell)));
    }
    let lhs_coeff = ring.sub(&1, &a_rank);
    if lhs_coeff == 0 {
        return Err(QError::Pipeline("step 3: R_2 coefficient is not a unit".into()));
    }
    let mut g1_3 = 0u64;
    for (&idx, &g) in &col2.crank {
        if idx == 2 {
            g1_3 = g;
        } else if equi {
            if !(2..=(ell as u32 - 2)).contains(&idx) {
                return Err(QError::Pipeline(format!(
                    "step 3: crank index {idx} outside the equidistribution range"
                )));
            }
            checks.push(verify_ap_congruence(
                "crank-moment-vanishes",
                &crank_series[(idx / 2) as usize],
                &CuspCombo::new(ell),
                ell,
                beta,
                ap_terms,
            )?);
        } else if g != 0 {
            return Err(QError::Pipeline(format!(
                "step 3: unreduced crank moment C_{idx} with coefficient {g}"
            )));
        }
    }
    let mut wr_raw = col2.cusp.clone();
    if !equi && g1_3 != 0 {
        for (m, c) in &wc.terms {
            wr_raw.add(*m, ring.mul(&g1_3, c));
        }
    }
    let inv_lhs = ring.inv(&lhs_coeff).unwrap();
    let wr = wr_raw.scaled(inv_lhs);
    let r2 = r2_series_fast(verify_trunc);
    checks.push(verify_ap_congruence(
        "step3-rank-congruence",
        &r2,
        &wr,
        ell,
        beta,
        ap_terms,
    )?);

    if checks.iter().any(|c| !c.passed()) {
        return Err(QError::Pipeline("step 2/3 congruence verification failed".into()));
    }
    Ok(Step23 { ell, beta, wc, wr, checks })
}

/// A derived congruence SPT(ell, beta) == scalar * E^r(q) * F(tau) (mod ell).
#[derive(Clone, Debug)]
pub struct SptCongruence {
    pub ell: u64,
    pub beta: u64,
    pub r: u64,
    /// Residue mod ell; zero for the vanishing congruences.
    pub scalar: u64,
    /// Minimal-weight representative with coefficients in 0..ell; the lowest
    /// canonical basis monomial is normalized to coefficient 1.
    pub f: Level1Form,
}

impl SptCongruence {
    pub fn is_zero(&self) -> bool {
        self.scalar == 0
    }

    pub fn describe(&self) -> String {
        if self.is_zero() {
            format!("SPT({},{}) == 0 (mod {})", self.ell, self.beta, self.ell)
        } else {
            format!(
                "SPT({},{}) == {} * E(q)^{} * [{}] (mod {})",
                self.ell,
                self.beta,
                self.scalar,
                self.r,
                self.f.describe(),
                self.ell
            )
        }
    }
}

/// The printed generating-function congruences, as regression fixtures.
pub fn spt_fixture(ell: u64) -> QResult<SptCongruence> {
    let p = PfcongParams::new(ell)?;
    let e4 = Level1Form::e4();
    let e6 = Level1Form::e6();
    let (scalar, f): (u64, Level1Form) = match ell {
        5 | 7 | 13 => (0, Level1Form::zero(0)),
        11 => (4, Level1Form::one()),
        17 => (14, e6),
        19 => (10, e4.pow(2)),
        23 => (1, e4.pow(3).add(&Level1Form::delta().scale(&BigRational::from_integer(BigInt::from(7))))?),
        29 => (17, e6),
        31 => (30, e4.pow(2)),
        37 => (12, e4.pow(2).mul(&e6)),
    _ => {
            return Err(QError::InvalidArgument(format!(
                "no fixture for ell = {ell}"
            )))
        }
    };
    Ok(SptCongruence { ell, beta: p.beta, r: p.r, scalar, f })
}

/// Verify a SptCongruence against the spt series mod ell on `ap_terms`
/// progression coefficients.
pub fn verify_spt_congruence(c: &SptCongruence, ap_terms: usize) -> QResult<Check> {
    let ell = c.ell;
    let ring = ModRing::new(ell);
    let spt = oracle::spt_series_mod(ell as usize * ap_terms + c.beta as usize + 1, ell);
    let rhs = if c.is_zero() {
        QSeries::zero(ring, ap_terms)
    } else {
        let e_r = QSeries::euler_pow(ring, c.r, ap_terms);
        e_r.mul(&c.f.series_mod(ap_terms, ell)?)?.scale(&c.scalar)
    };
    let witness =
        (0..ap_terms).find(|&n| spt[ell as usize * n + c.beta as usize] != rhs.coeff(n));
    Ok(Check::scan(
        "spt-generating-function-congruence",
        serde_json::json!({"ell": ell, "beta": c.beta, "ap_terms": ap_terms, "form": c.describe()}),
        witness.map(|n| serde_json::json!(n)),
    ))
}

/// Full derivation record for one prime.
pub struct SptDerivation {
    pub congruence: SptCongruence,
    pub wc: CuspCombo,
    pub wr: CuspCombo,
    pub ws: CuspCombo,
    pub checks: Vec<Check>,
}

/// Reduce a mod-ell series known to agree with a modular form of some weight
/// in `class_weights` to its minimal-weight representative.
fn minimal_weight_rep(
    series: &QSeries<ModRing>,
    max_weight: u32,
    ell: u64,
) -> QResult<(u32, Level1Form)> {
    let base = max_weight % (ell as u32 - 1);
    let mut w = base;
    loop {
        if dim_modular(w as i64) > 0 {
            let need = dim_modular(w as i64) + 8;
            let basis = level1_basis(w, BasisKind::Full);
            if let Some(coords) = to_basis_mod(&series.truncate(need.min(series.trunc())), &basis) {
                let terms: Vec<(BigRational, Mono)> = coords
                    .into_iter()
                    .zip(&basis)
                    .map(|(c, b)| {
                        (
                            BigRational::from_integer(BigInt::from(c)),
                            *b.terms().next().unwrap().0,
                        )
                    })
                    .collect();
                return Ok((w, Level1Form::from_terms(w, terms)?));
            }
        }
        if w >= max_weight {
            return Err(QError::Pipeline(
                "no modular representative found up to the class weight".into(),
            ));
        }
        w += ell as u32 - 1;
    }
}

/// Steps 1-4 for one prime: derive SPT(ell, beta) == scalar E^r F (mod ell).
pub fn spt_derive(ell: u64, ap_terms: usize) -> QResult<SptDerivation> {
    let k1 = ((ell - 1) / 2) as u32;
    let k2 = ((ell + 1) / 2) as u32;
    let d1 = step1_solve(k1, None)?;
    let d2 = step1_solve(k2, None)?;
    let s23 = step23_reduce(ell, &d1, &d2, ap_terms)?;
    derive_from_step23(ell, s23, ap_terms)
}

/// Step 4 given the step 2/3 reductions.
pub fn derive_from_step23(
    ell: u64,
    s23: Step23,
    ap_terms: usize,
) -> QResult<SptDerivation> {
    let params = PfcongParams::new(ell)?;
    let ring = ModRing::new(ell);
    let mut checks = s23.checks.clone();

    // W_S = (W_C - W_R) / 2 mod ell
    let inv2 = ring.inv(&2).unwrap();
    let mut ws = CuspCombo::new(ell);
    for (m, c) in &s23.wc.terms {
        ws.add(*m, ring.mul(c, &inv2));
    }
    for (m, c) in &s23.wr.terms {
        ws.add(*m, ring.mul(&ring.neg(c), &inv2));
    }

    // push every cusp term through the Chua lift; group by weight mod ell-1
    let mut class_series: BTreeMap<u32, (QSeries<ModRing>, u32)> = BTreeMap::new();
    let rep_trunc = 64;
    for (mono, c) in &ws.terms {
        let f = Level1Form::monomial(*mono);
        let res = pfcong_g(ell, &f, ap_terms.min(40))?;
        if res.weight < 0 || res.g.is_zero() {
            continue;
        }
        let w = res.weight as u32;
        let cls = w % (ell as u32 - 1);
        let g_series = res.g.series_mod(rep_trunc, ell)?.scale(c);
        match class_series.remove(&cls) {
            None => {
                class_series.insert(cls, (g_series, w));
            }
            Some((prev, pw)) => {
                class_series.insert(cls, (prev.add(&g_series)?, pw.max(w)));
            }
        }
    }
    class_series.retain(|_, (s, _)| !s.is_zero_series());

    let congruence = match class_series.len() {
        0 => SptCongruence {
            ell,
            beta: params.beta,
            r: params.r,
            scalar: 0,
            f: Level1Form::zero(0),
        },
        1 => {
            let (_, (series, max_w)) = class_series.into_iter().next().unwrap();
            let (_, rep) = minimal_weight_rep(&series, max_w, ell)?;
            // normalize: leading canonical monomial gets coefficient 1
            let (mono0, c0) = rep
                .terms()
                .next()
                .map(|(m, c)| (*m, c.clone()))
                .expect("nonzero representative");
            let _ = mono0;
            let c0 = ring.reduce_bigint(&c0.to_integer());
            let inv = ring.inv(&c0).ok_or_else(|| {
                QError::Pipeline("leading coefficient not invertible".into())
            })?;
            let f = Level1Form::from_terms(
                rep.weight(),
                rep.terms()
                    .map(|(m, c)| {
                        let v = ring.reduce_bigint(&c.to_integer());
                        (
                            BigRational::from_integer(BigInt::from(ring.mul(&v, &inv))),
                            *m,
                        )
                    })
                    .collect(),
            )?;
            SptCongruence { ell, beta: params.beta, r: params.r, scalar: c0, f }
        }
        n => {
            return Err(QError::Pipeline(format!(
                "{n} weight classes survive; expected at most one"
            )))
        }
    };
    checks.push(verify_spt_congruence(&congruence, ap_terms)?);
    if let Some(bad) = checks.iter().find(|c| !c.passed()) {
        return Err(QError::Pipeline(format!(
            "derivation check failed: {}",
            bad.to_json_line()
        )));
    }
    Ok(SptDerivation { congruence, wc: s23.wc, wr: s23.wr, ws, checks })
}

/// Series for an inhomogeneous (mixed-weight) combination of monomials mod ell.
pub fn mixed_series_mod(
    terms: &[(u64, Mono)],
    trunc: usize,
    ell: u64,
) -> QSeries<ModRing> {
    let ring = ModRing::new(ell);
    let mut acc = QSeries::zero(ring, trunc);
    for (c, m) in terms {
        let s = mono_series(*m, trunc).reduce_mod(ell).scale(c);
        acc = acc.add(&s).unwrap();
    }
    acc
}

pub mod mod11;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crank_moment_series_matches_oracle() {
        let trunc = 40;
        let cranks = crank_moment_series_upto(3, trunc);
        let table = oracle::count_table(StatKind::Crank, trunc - 1, Method::Dp).unwrap();
        for (j, s) in cranks.iter().enumerate() {
            for n in 0..trunc {
                assert_eq!(s.coeff(n), table.moment(n, 2 * j as u32), "C_{} at {n}", 2 * j);
            }
        }
        // spec values: C_2 at q^4 is 40, at q^1 is 2
        assert_eq!(cranks[1].coeff(4), BigInt::from(40));
        assert_eq!(cranks[1].coeff(1), BigInt::from(2));
    }

    #[test]
    fn rank_moment_series_matches_oracle_examples() {
        let r2 = rank_moment_series(1, 40).unwrap();
        assert_eq!(r2.coeff(4), BigInt::from(20));
        // R_6(n) == R_2(n) (mod 5)
        let r6 = rank_moment_series(3, 101).unwrap();
        let r2 = rank_moment_series(1, 101).unwrap();
        for n in 0..101 {
            assert!(((r6.coeff(n) - r2.coeff(n)) % 5).is_zero(), "n={n}");
        }
    }

    #[test]
    fn r2_fast_route_agrees_with_table() {
        let fast = r2_series_fast(120);
        let table = rank_moment_series(1, 120).unwrap();
        assert_eq!(fast, table);
    }

    #[test]
    fn rcrel_small_k() {
        for k in [2u32, 3] {
            let c = rcrel_check(k, 40).unwrap();
            assert!(c.passed(), "k={k}: {}", c.to_json_line());
        }
    }

    #[test]
    fn t2k_sizes() {
        assert_eq!(t2k_size(2), 3);
        assert_eq!(t2k_size(8), 40);
        assert_eq!(t2k_size(9), 52);
    }

    #[test]
    fn moment_index_reduction_mod_ell() {
        // N_{ell+1} == N_2 and M_{ell+1} == M_2 (mod ell) for ell in {5,7}
        for ell in [5u64, 7] {
            let k = (ell as u32 + 1) / 2;
            let trunc = 80;
            let r = rank_moment_series(k, trunc).unwrap();
            let r2 = rank_moment_series(1, trunc).unwrap();
            let c = crank_moment_series(k, trunc);
            let c2 = crank_moment_series(1, trunc);
            for n in 0..trunc {
                assert!(((r.coeff(n) - r2.coeff(n)) % ell as i64).is_zero());
                assert!(((c.coeff(n) - c2.coeff(n)) % ell as i64).is_zero());
            }
        }
    }

    #[test]
    fn classical_reductions_small() {
        for t in [5u64, 7, 13] {
            let checks = classical_reductions(t, 60).unwrap();
            for c in checks {
                assert!(c.passed(), "t={t}: {}", c.to_json_line());
            }
        }
    }

    #[test]
    fn pipeline_ell_5_and_7_vanish() {
        for ell in [5u64, 7] {
            let d = spt_derive(ell, 30).unwrap();
            assert!(d.congruence.is_zero(), "ell={ell}");
            assert!(d.checks.iter().all(|c| c.passed()));
        }
    }

    #[test]
    fn fixtures_verify_directly() {
        for ell in [5u64, 7, 11, 13, 17, 19] {
            let fx = spt_fixture(ell).unwrap();
            let c = verify_spt_congruence(&fx, 25).unwrap();
            assert!(c.passed(), "ell={ell}: {}", c.to_json_line());
        }
    }
}
