//! The mod-11 rank-moment suite: congruences for N_{2k}(11n+6) and
//! N(r, 11, 11n+6) in terms of E(q)^13 times Eisenstein combinations, the
//! U11-relations with their quasimodular correction polynomials, and the
//! Psi = P(1 - E4 E6)/11 computation chain through weight 60/70 cusp bases.

use crate::error::QResult;
use crate::forms::{hecke_t_integer, Level1Form, Mono};
use crate::moments::mixed_series_mod;
use crate::oracle::{self, Method, StatKind};
use crate::report::Check;
use crate::ring::{IntRing, ModRing, RatRing, Ring};
use crate::series::QSeries;
use num_bigint::BigInt;
use num_rational::BigRational;

const ELL: u64 = 11;
const BETA: usize = 6;

fn m(e2: u32, e4: u32, e6: u32) -> Mono {
    Mono { e2, e4, e6, d: 0 }
}

/// Correction polynomials H^(m) in E2, E4, E6 with mod-11 coefficients.
fn h_poly(k2: u32) -> Vec<(u64, Mono)> {
    match k2 {
        4 => vec![(9, m(0, 0, 0)), (5, m(1, 0, 0)), (10, m(0, 1, 0)), (9, m(2, 0, 0))],
        6 => vec![
            (2, m(0, 0, 0)),
            (7, m(1, 0, 0)),
            (7, m(0, 1, 0)),
            (3, m(2, 0, 0)),
            (8, m(0, 0, 1)),
            (8, m(1, 1, 0)),
            (9, m(3, 0, 0)),
        ],
        8 => vec![
            (6, m(1, 0, 0)),
            (1, m(2, 0, 0)),
            (6, m(0, 1, 0)),
            (10, m(3, 0, 0)),
            (4, m(0, 0, 1)),
            (4, m(1, 1, 0)),
            (9, m(4, 0, 0)),
            (5, m(2, 1, 0)),
            (10, m(1, 0, 1)),
        ],
        10 => vec![
            (8, m(0, 0, 0)),
            (4, m(1, 0, 0)),
            (8, m(2, 0, 0)),
            (4, m(0, 1, 0)),
            (3, m(3, 0, 0)),
            (10, m(0, 0, 1)),
            (10, m(1, 1, 0)),
            (9, m(4, 0, 0)),
            (5, m(2, 1, 0)),
            (10, m(1, 0, 1)),
            (4, m(5, 0, 0)),
            (10, m(0, 1, 1)),
            (5, m(2, 0, 1)),
            (9, m(3, 1, 0)),
        ],
        _ => unreachable!(),
    }
}

/// Eisenstein combinations for the moment congruences
/// sum N_{2k}(11n+6) q^n == E^13 * combo (mod 11).
fn moment_combo(k2: u32) -> Vec<(u64, Mono)> {
    match k2 {
        2 => vec![(3, m(0, 0, 0))],
        4 => vec![(7, m(0, 0, 0))],
        6 => vec![(4, m(0, 0, 0)), (1, m(0, 1, 0))],
        8 => vec![(5, m(0, 0, 0)), (6, m(0, 1, 0)), (6, m(0, 0, 1))],
        10 => vec![
            (5, m(0, 0, 0)),
            (4, m(0, 1, 0)),
            (6, m(0, 0, 1)),
            (6, m(0, 2, 0)),
        ],
        _ => unreachable!(),
    }
}

/// Coefficients (a_r, b_r, c_r, d_r) with
/// sum N(r,11,11n+6) q^n == E^13 (a_r + b_r E4 + c_r E6 + d_r E4^2) (mod 11).
pub fn rank_class_combo(r: u32) -> [u64; 4] {
    match r {
        0 => [6, 7, 5, 5],
        1 => [9, 0, 10, 5],
        2 => [4, 0, 3, 5],
        3 => [8, 4, 6, 5],
        4 => [2, 7, 8, 5],
        5 => [7, 2, 9, 5],
        _ => unreachable!("classes 6..10 mirror 5..1"),
    }
}

fn combo_series(terms: &[(u64, Mono)], trunc: usize) -> QSeries<ModRing> {
    mixed_series_mod(terms, trunc, ELL)
}

fn e13(trunc: usize) -> QSeries<ModRing> {
    QSeries::euler_pow(ModRing::new(ELL), 13, trunc)
}

fn psi_series(trunc: usize) -> QResult<QSeries<RatRing>> {
    // P (1 - E4 E6) / 11
    let p = QSeries::partition_series(IntRing, trunc).to_rational();
    let e4e6 = Level1Form::e4().mul(&Level1Form::e6()).series(trunc);
    let one = QSeries::one(RatRing, trunc);
    let inner = one.sub(&e4e6)?;
    Ok(p
        .mul(&inner)?
        .scale(&BigRational::new(BigInt::from(1), BigInt::from(11))))
}

/// Run the full suite; `ap_terms` is the number of progression coefficients
/// checked in each congruence (the references use 20-30).
pub fn rank_mod11_suite(ap_terms: usize) -> QResult<Vec<Check>> {
    let mut checks = Vec::new();
    let trunc = ELL as usize * ap_terms + BETA + 1;
    let ring = ModRing::new(ELL);
    let rank = oracle::count_table(StatKind::Rank, trunc - 1, Method::Dp)?;
    let crank = oracle::count_table(StatKind::Crank, trunc - 1, Method::Dp)?;
    let modred = |x: BigInt| -> u64 { ring.reduce_bigint(&x) };

    // (a) N_2(11n+6) == 3 p_23(11n+5), and the crank-side relation
    // p_23(11n+5) == 4N_2 + 2M_2 + M_4 + M_6 + 10M_8 at 11n+6 (mod 11)
    {
        let e23 = QSeries::euler_pow(ring, 23, trunc);
        let witness = (0..ap_terms).find(|&n| {
            let arg = ELL as usize * n + BETA;
            modred(rank.moment(arg, 2)) != ring.mul(&3, &e23.coeff(arg - 1))
        });
        checks.push(Check::scan(
            "n2-equals-3-p23",
            serde_json::json!({"ap_terms": ap_terms}),
            witness.map(|n| serde_json::json!(n)),
        ));
        let witness = (0..ap_terms).find(|&n| {
            let arg = ELL as usize * n + BETA;
            let rhs = [
                (4u64, rank.moment(arg, 2)),
                (2, crank.moment(arg, 2)),
                (1, crank.moment(arg, 4)),
                (1, crank.moment(arg, 6)),
                (10, crank.moment(arg, 8)),
            ]
            .into_iter()
            .fold(0u64, |acc, (c, v)| ring.add(&acc, &ring.mul(&c, &modred(v))));
            e23.coeff(arg - 1) != rhs
        });
        checks.push(Check::scan(
            "p23-from-moments",
            serde_json::json!({"ap_terms": ap_terms}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    // (b) U11*(R_{2k}) == U11*(c R_2 [+ Psi] + P H^(2k)) (mod 11)
    {
        let p_mod = QSeries::partition_series(ring, trunc);
        let psi_mod = psi_series(trunc)?.reduce_mod(ELL)?;
        for (k2, c_r2, with_psi) in [(4u32, 6u64, false), (6, 5, false), (8, 9, false), (10, 9, true)] {
            let h = combo_series(&h_poly(k2), trunc);
            let mut rhs = p_mod.mul(&h)?;
            if with_psi {
                rhs = rhs.add(&psi_mod)?;
            }
            let witness = (0..ap_terms).find(|&n| {
                let arg = ELL as usize * n + BETA;
                let lhs = modred(rank.moment(arg, k2));
                let r2 = modred(rank.moment(arg, 2));
                lhs != ring.add(&ring.mul(&c_r2, &r2), &rhs.coeff(arg))
            });
            checks.push(Check::scan(
                "u11-moment-relation",
                serde_json::json!({"k": k2, "ap_terms": ap_terms}),
                witness.map(|n| serde_json::json!(n)),
            ));
        }
    }

    // (c) the five moment congruences N_{2k}(11n+6) series == E^13 * combo
    {
        let e = e13(ap_terms);
        for k2 in [2u32, 4, 6, 8, 10] {
            let rhs = e.mul(&combo_series(&moment_combo(k2), ap_terms))?;
            let witness = (0..ap_terms).find(|&n| {
                modred(rank.moment(ELL as usize * n + BETA, k2)) != rhs.coeff(n)
            });
            checks.push(Check::scan(
                "rank-moment-congruence-mod-11",
                serde_json::json!({"k": k2, "ap_terms": ap_terms}),
                witness.map(|n| serde_json::json!(n)),
            ));
        }
    }

    // (d) the six residue-class congruences N(r,11,11n+6)
    {
        let e = e13(ap_terms);
        for r in 0..=5u32 {
            let [a, b, c, d] = rank_class_combo(r);
            let combo = [
                (a, m(0, 0, 0)),
                (b, m(0, 1, 0)),
                (c, m(0, 0, 1)),
                (d, m(0, 2, 0)),
            ];
            let rhs = e.mul(&combo_series(&combo, ap_terms))?;
            let witness = (0..ap_terms).find(|&n| {
                let arg = ELL as usize * n + BETA;
                let counts = rank.residue_counts(arg, ELL);
                let lhs = counts[&(r as u64)].rem_euclid(ELL as i128) as u64;
                lhs != rhs.coeff(n)
            });
            checks.push(Check::scan(
                "rank-class-congruence-mod-11",
                serde_json::json!({"r": r, "ap_terms": ap_terms}),
                witness.map(|n| serde_json::json!(n)),
            ));
        }
    }

    // (e) crank moments vanish on the progression
    for k2 in [2u32, 4, 6, 8] {
        let witness = (0..ap_terms)
            .find(|&n| modred(crank.moment(ELL as usize * n + BETA, k2)) != 0);
        checks.push(Check::scan(
            "crank-moment-vanishes-mod-11",
            serde_json::json!({"k": k2, "ap_terms": ap_terms}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    // (f) the Psi chain
    checks.extend(psi_chain(ap_terms.min(20))?);

    Ok(checks)
}

/// The Psi computation chain: 11-integrality, U11 vs T(11) on Delta^5 and
/// E4 E6 Delta^5 mod 121, the 22 E4^2 Delta evaluation, and
/// U11*(Psi) == 2 E^13 E4^2 (mod 11).
pub fn psi_chain(ap_terms: usize) -> QResult<Vec<Check>> {
    let mut checks = Vec::new();
    let m121 = ModRing::new(121);
    let terms = ap_terms.max(12);
    let big = 11 * terms + 12;

    // (f1) Psi is 11-integral
    let psi = psi_series(big)?;
    let psi_ok = psi.reduce_mod(ELL).is_ok();
    checks.push(Check::scan(
        "psi-11-integral",
        serde_json::json!({"trunc": big}),
        (!psi_ok).then(|| serde_json::json!("denominator")),
    ));

    // exact weight 60/70 objects
    let d5 = Level1Form::delta().pow(5);
    let d5e4e6 = d5.mul(&Level1Form::e4()).mul(&Level1Form::e6());
    let d5_series = d5.series_int(big)?;
    let d5e_series = d5e4e6.series_int(big)?;

    // (f2) f | U(11) == f | T(11) (mod 121) for both
    for (name, form, series) in [
        ("delta5", &d5, &d5_series),
        ("delta5-e4e6", &d5e4e6, &d5e_series),
    ] {
        let t = hecke_t_integer(form, 11, terms)?.to_integer().unwrap();
        let u = series.u_op(11);
        let witness = (0..terms).find(|&n| {
            m121.reduce_bigint(&t.coeff(n)) != m121.reduce_bigint(&u.coeff(n))
        });
        checks.push(Check::scan(
            "u11-equals-t11-mod-121",
            serde_json::json!({"form": name, "terms": terms}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    // (f3) Delta^5 (1 - E4 E6) | U11 == 22 E4^2 Delta (mod 121)
    let diff = d5_series.sub(&d5e_series)?.u_op(11);
    let rhs = Level1Form::e4()
        .pow(2)
        .mul(&Level1Form::delta())
        .series_int(terms)?
        .scale(&BigInt::from(22));
    let witness = (0..terms).find(|&n| {
        m121.reduce_bigint(&diff.coeff(n)) != m121.reduce_bigint(&rhs.coeff(n))
    });
    checks.push(Check::scan(
        "delta5-u11-evaluation-mod-121",
        serde_json::json!({"terms": terms}),
        witness.map(|n| serde_json::json!(n)),
    ));

    // (f4) (E(q)^11 / E(q^11))^11 == 1 (mod 121)
    {
        let e = QSeries::euler(m121, big);
        let lhs = e.pow(121);
        let rhs = e.substitute_power(11).truncate(big).pow(11);
        let witness = (0..big).find(|&n| lhs.coeff(n) != rhs.coeff(n));
        checks.push(Check::scan(
            "euler-121-power-identity",
            serde_json::json!({"trunc": big}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    // (f5) U11*(Psi) == 2 E^13 E4^2 (mod 11)
    {
        let lhs = psi.reduce_mod(ELL)?.ap_extract(11, BETA);
        let rhs = e13(terms)
            .mul(&Level1Form::e4().pow(2).series_mod(terms, ELL)?)?
            .scale(&2);
        let witness = (0..terms.min(lhs.trunc())).find(|&n| lhs.coeff(n) != rhs.coeff(n));
        checks.push(Check::scan(
            "u11-psi-evaluation",
            serde_json::json!({"terms": terms}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    // (f6) q U11*(P (1-E4E6)) == [Delta^5 (1-E4E6) | U11] / E^11 (mod 121)
    {
        let p = QSeries::partition_series(IntRing, big).to_rational();
        let e4e6 = Level1Form::e4().mul(&Level1Form::e6()).series(big);
        let numer = p.mul(&QSeries::one(RatRing, big).sub(&e4e6)?)?;
        let extracted = numer.ap_extract(11, BETA);
        let lhs: QSeries<ModRing> = {
            // multiply by q: shift coefficients up one
            let base = extracted.reduce_mod(121)?;
            let mut s = QSeries::zero(m121, base.trunc() + 1);
            for (n, c) in base.iter_nonzero() {
                s.set(n + 1, *c);
            }
            s
        };
        let e11inv = QSeries::euler(m121, terms).pow(11).invert_unit()?;
        let rhs = d5_series
            .sub(&d5e_series)?
            .u_op(11)
            .reduce_mod(121)
            .mul(&e11inv)?;
        let upto = terms.min(lhs.trunc());
        let witness = (0..upto).find(|&n| lhs.coeff(n) != rhs.coeff(n));
        checks.push(Check::scan(
            "psi-u11-chain-mod-121",
            serde_json::json!({"terms": upto}),
            witness.map(|n| serde_json::json!(n)),
        ));
    }

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn suite_passes_at_small_scale() {
        let checks = rank_mod11_suite(8).unwrap();
        for c in &checks {
            assert_eq!(c.status, Status::Ok, "{}", c.to_json_line());
        }
        // every group is represented
        assert!(checks.len() >= 18);
    }
}
