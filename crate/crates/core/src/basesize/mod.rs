//! The base-size method stack: logarithmic lower bound, randomized search,
//! exact exhaustion over stabiliser-orbit representatives, the probabilistic
//! bound Q(G,c), exact and Monte Carlo base probabilities, and double-coset
//! non-regular-orbit certificates.

mod norego;
mod prob;
mod qbound;
mod search;

pub use norego::{no_regular_orbit_certificate, NoRegularOrbitCertificate, NoRegularOrbitOutcome};
pub use prob::{
    exact_base_probability, mc_base_probability, tuple_count_engine, McEstimate,
};
pub use qbound::{lemma_calc_bound, q_bound, QMode, QReport, QRow};
pub use search::{exact_base_size, random_base_search, BaseSizeResult, LoCertificate};

use crate::permcore::{Perm, PermGroup, PermError};
use crate::util::ceil_log;
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaseError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("partial class data cannot certify")]
    PartialData,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A claimed base together with its verification flag.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseCertificate {
    pub points: Vec<u32>,
    pub verified: bool,
}

impl BaseCertificate {
    /// Re-verify from the serialized points alone.
    pub fn replay(&self, g: &PermGroup) -> Result<bool, PermError> {
        is_base(g, &self.points)
    }
}

/// True iff the pointwise stabiliser of the points is trivial.
pub fn is_base(g: &PermGroup, points: &[u32]) -> Result<bool, PermError> {
    Ok(g.pointwise_stabiliser(points)?.order().is_one())
}

/// ceil(log |G| / log |Omega|) by exact integer comparison.
pub fn log_lower_bound(g: &PermGroup) -> u32 {
    let order = g.order();
    if g.degree() < 2 {
        return if order.is_one() { 0 } else { 1 };
    }
    ceil_log(&order, g.degree() as u64)
}

/// Fast trivial-stabiliser test for a tuple using certified orbit descent.
pub fn tuple_has_trivial_stabiliser(g: &PermGroup, points: &[u32]) -> Result<bool, PermError> {
    let mut cur = g.as_subgrp();
    for (i, &pt) in points.iter().enumerate() {
        if cur.is_trivial() {
            return Ok(true);
        }
        if i + 1 == points.len() {
            return Ok(cur.stabiliser_order(pt).is_one());
        }
        cur = cur.stabiliser(pt)?;
    }
    Ok(cur.is_trivial())
}

pub(crate) fn perm_to_string(p: &Perm) -> String {
    p.cycle_string()
}

pub(crate) fn big_to_string(b: &BigUint) -> String {
    b.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_base_examples() {
        let t = PermGroup::trivial(4);
        assert!(is_base(&t, &[]).unwrap());
        let s8 = PermGroup::symmetric(8);
        assert!(is_base(&s8, &[0, 1, 2, 3, 4, 5, 6]).unwrap());
        assert!(!is_base(&s8, &[0, 1, 2, 3, 4, 5]).unwrap());
    }

    #[test]
    fn log_bound_examples() {
        // regular action of C_n
        assert_eq!(log_lower_bound(&PermGroup::cyclic(12)), 1);
        // S5 on 5 points: 120 > 25, 120 <= 125
        assert_eq!(log_lower_bound(&PermGroup::symmetric(5)), 3);
        assert_eq!(log_lower_bound(&PermGroup::trivial(3)), 0);
    }

    #[test]
    fn tuple_stabiliser_fast_path_agrees() {
        let s6 = PermGroup::symmetric(6);
        for pts in [vec![0, 1, 2, 3, 4], vec![0, 1, 2], vec![5, 4, 3, 2, 1]] {
            assert_eq!(
                tuple_has_trivial_stabiliser(&s6, &pts).unwrap(),
                is_base(&s6, &pts).unwrap(),
                "{pts:?}"
            );
        }
    }
}
