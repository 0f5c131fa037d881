//! The probabilistic upper-bound machinery: Q(G,c) over prime-order classes
//! and the closed-form aggregation bound B(A/B)^c.

use super::BaseError;
use crate::permcore::{prime_order_class_data, PermGroup};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QMode {
    Exact,
    PartialLowerBound,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QRow {
    /// Class representative in cycle notation.
    pub rep: String,
    pub prime: u64,
    pub class_size: String,
    pub fixed_points: u64,
    /// fpr = fixed_points / |Omega| as an exact fraction "a/b".
    pub fpr: String,
    /// |x^G| * fpr^c as an exact fraction.
    pub contribution: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QReport {
    pub c: u32,
    pub degree: usize,
    pub rows: Vec<QRow>,
    /// Q(G,c) as an exact fraction "a/b".
    pub total: String,
    pub mode: QMode,
    /// Lemma: exact Q < 1 certifies b(G,H) <= c. Never set in partial mode.
    pub certifies_b_le_c: bool,
    #[serde(skip)]
    pub total_rational: BigRational,
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn show(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Q(G,c) = sum over prime-order classes of |x^G| * (fix(x)/|Omega|)^c,
/// computed on the given (faithful, transitive) action.
///
/// In exact mode (|G| <= cap) the row set covers all prime-order classes and
/// Q < 1 certifies b <= c. In partial mode the total is only a lower bound
/// on Q and certifies nothing.
pub fn q_bound(g: &PermGroup, c: u32, cap: u64, seed: u64) -> Result<QReport, BaseError> {
    let cds = prime_order_class_data(g, cap, seed)?;
    let degree = g.degree();
    let mut total = BigRational::zero();
    let mut rows = Vec::new();
    for cl in &cds.classes {
        let fpr = ratio(BigUint::from(cl.fixed_points), BigUint::from(degree as u64));
        let mut contribution = BigRational::from(BigInt::from(cl.class_size.clone()));
        for _ in 0..c {
            contribution *= &fpr;
        }
        if !cl.complete {
            // partial class: the true class is at least this large, and the
            // resulting contribution is still a valid lower-bound term
        }
        total += &contribution;
        rows.push(QRow {
            rep: cl.rep.cycle_string(),
            prime: cl.prime,
            class_size: cl.class_size.to_string(),
            fixed_points: cl.fixed_points,
            fpr: show(&fpr),
            contribution: show(&contribution),
        });
    }
    let mode = if cds.complete {
        QMode::Exact
    } else {
        QMode::PartialLowerBound
    };
    let certifies = mode == QMode::Exact && total < BigRational::one();
    Ok(QReport {
        c,
        degree,
        rows,
        total: show(&total),
        mode,
        certifies_b_le_c: certifies,
        total_rational: total,
    })
}

/// Lemma-style aggregation: if the classes have total intersection at most A
/// and each class size is at least B, the contribution is at most B*(A/B)^c.
pub fn lemma_calc_bound(a: &BigUint, b: &BigUint, c: u32) -> BigRational {
    assert!(!b.is_zero(), "B must be at least 1");
    let bq = BigRational::from(BigInt::from(b.clone()));
    let frac = ratio(a.clone(), b.clone());
    let mut out = bq;
    for _ in 0..c {
        out *= &frac;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::PermGroup;
    use std::str::FromStr;

    #[test]
    fn trivial_group_q_is_zero() {
        let t = PermGroup::trivial(4);
        for c in [1, 2, 3] {
            let r = q_bound(&t, c, 100, 1).unwrap();
            assert!(r.total_rational.is_zero());
            assert!(r.certifies_b_le_c); // 0 < 1
            assert_eq!(r.mode, QMode::Exact);
        }
    }

    #[test]
    fn lemma_calc_examples() {
        // A = B gives exactly B
        let b = BigUint::from(7u32);
        let r = lemma_calc_bound(&b.clone(), &b, 5);
        assert_eq!(r, BigRational::from(BigInt::from(7)));
        // A = 0 gives 0
        let r0 = lemma_calc_bound(&BigUint::zero(), &b, 2);
        assert!(r0.is_zero());
    }

    #[test]
    fn lemma_calc_u3_subfield_margin() {
        // the hand estimate a1^2/b1 with a1 = 432k, b1 = (q-1)(q^3+1): at
        // q = 2^7, k = 7 the exact value is 9144576/266338431, which is below
        // 1 but narrowly above 4/q; at k = 11 it drops below 4/q
        let a = BigUint::from(432u32 * 7);
        let b = BigUint::from((128u64 - 1) * (128u64 * 128 * 128 + 1));
        let v = lemma_calc_bound(&a, &b, 2);
        assert_eq!(
            v,
            BigRational::new(BigInt::from(9_144_576u64), BigInt::from(266_338_431u64))
        );
        assert!(v < BigRational::one());
        let four_over_q = BigRational::new(BigInt::from(4), BigInt::from(128));
        assert!(v > four_over_q);

        let q11: u64 = 2048;
        let a11 = BigUint::from(432u32 * 11);
        let b11 = BigUint::from((q11 - 1) * (q11 * q11 * q11 + 1));
        let v11 = lemma_calc_bound(&a11, &b11, 2);
        assert!(v11 < BigRational::new(BigInt::from(4), BigInt::from(q11)));
    }

    #[test]
    fn pgl2_7_line_q4_exact_value() {
        // PGL2(7) on the 8-point line: Q(G,4) = 174/512, which matches the
        // hand decomposition (q-1)/(q+1)^3 + 8q/(q+1)^3 + 16q/(q+1)^3 at q=7
        use crate::actions::{OuterClass, Psl2Context};
        let ctx = Psl2Context::new(7).unwrap();
        let g = ctx.group(OuterClass::Diagonal).unwrap();
        let r = q_bound(&g, 4, 100_000, 1).unwrap();
        assert_eq!(r.mode, QMode::Exact);
        let expect = BigRational::new(BigInt::from(174), BigInt::from(512));
        assert_eq!(r.total_rational, expect);
        assert!(r.certifies_b_le_c);

        // brute-force oracle: sum fpr(x)^4 over every prime-order element
        let mut oracle = BigRational::zero();
        for x in g.elements(1000).unwrap() {
            let o = x.order_u64().unwrap();
            if o >= 2 && crate::util::is_prime(o) {
                let f = BigRational::new(BigInt::from(x.fixed_point_count()), BigInt::from(8));
                let mut t = BigRational::one();
                for _ in 0..4 {
                    t *= &f;
                }
                oracle += t;
            }
        }
        assert_eq!(oracle, expect);

        let hand = BigRational::from_str("6/512").unwrap()
            + BigRational::from_str("56/512").unwrap()
            + BigRational::from_str("112/512").unwrap();
        assert_eq!(hand, expect);
    }
}
