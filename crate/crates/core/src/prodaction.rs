//! Product-action machinery: distinguishing numbers, regular orbit counts
//! reg(L,d), the wreath base-size bound, and anchored tuple counts.

use crate::basesize::{tuple_count_engine, BaseError};
use crate::permcore::PermGroup;
use crate::util::{big_pow, ceil_log2, floor_log2, wilson_interval};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProdError {
    #[error("degree {0} too large for exact colouring search (max 16)")]
    DegreeTooLarge(usize),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Perm(#[from] crate::permcore::PermError),
}

/// Distinguishing number: the least k such that some colouring of the points
/// with k colours has trivial setwise stabiliser in P.
///
/// Colourings are enumerated in canonical form (colour c may first appear
/// only after all smaller colours have appeared), which kills the
/// colour-relabelling symmetry.
pub fn distinguishing_number(p: &PermGroup) -> Result<u32, ProdError> {
    let m = p.degree();
    if m > 16 {
        return Err(ProdError::DegreeTooLarge(m));
    }
    if p.order() == BigUint::from(1u32) {
        return Ok(1);
    }
    let elements: Vec<_> = p
        .elements(25_000_000)
        .map_err(BaseError::from)?
        .filter(|g| !g.is_identity())
        .collect();

    fn distinguishes(col: &[u32], elements: &[crate::permcore::Perm]) -> bool {
        elements
            .iter()
            .all(|g| (0..col.len()).any(|i| col[g.apply(i as u32) as usize] != col[i]))
    }

    fn search(
        col: &mut Vec<u32>,
        used: u32,
        k: u32,
        m: usize,
        elements: &[crate::permcore::Perm],
    ) -> bool {
        if col.len() == m {
            return distinguishes(col, elements);
        }
        let limit = (used + 1).min(k);
        for c in 0..limit {
            col.push(c);
            if search(col, used.max(c + 1), k, m, elements) {
                return true;
            }
            col.pop();
        }
        false
    }

    for k in 1..=m as u32 {
        let mut col = Vec::with_capacity(m);
        if search(&mut col, 0, k, m, &elements) {
            return Ok(k);
        }
    }
    unreachable!("k = m always distinguishes");
}

/// Number of regular orbits of L on Gamma^d: base d-tuples divided by |L|.
pub fn regular_orbit_count(l: &PermGroup, d: u32, node_budget: u64) -> Result<BigUint, ProdError> {
    let degree = l.degree() as u64;
    let mut root = l.as_subgrp();
    let count = tuple_count_engine(&mut root, d, degree, node_budget)?;
    let order = l.order();
    let (q, r) = count.div_rem(&order);
    assert!(r.is_zero(), "base tuples split into regular orbits");
    Ok(q)
}

/// The wreath product bound
/// `b(G,H) <= ceil(ceil(log2 d(P)) / floor(log2 |Gamma|)) + b(L,K)`.
pub fn wreath_base_bound(gamma_size: u64, d_p: u64, b_lk: u32) -> u32 {
    assert!(gamma_size >= 2);
    let num = ceil_log2(d_p);
    if num == 0 {
        return b_lk;
    }
    let den = floor_log2(gamma_size);
    b_lk + num.div_ceil(den)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum AnchoredCount {
    Exact {
        count: String,
    },
    MonteCarlo {
        samples: u64,
        successes: u64,
        p_hat: f64,
        wilson_low: f64,
        wilson_high: f64,
        /// Interval scaled to tuple counts: p * |Gamma|^(d-1).
        count_low: f64,
        count_high: f64,
    },
}

/// Number of d-tuples (gamma, l_1, ..., l_{d-1}) whose pointwise stabiliser in
/// L is trivial; exact via orbit-pruned DFS inside the point stabiliser.
pub fn anchored_tuple_count_exact(
    l: &PermGroup,
    gamma: u32,
    d: u32,
    node_budget: u64,
) -> Result<BigUint, ProdError> {
    assert!(d >= 1);
    let degree = l.degree() as u64;
    let mut root = l.as_subgrp();
    let mut stab = root.stabiliser(gamma)?;
    Ok(tuple_count_engine(&mut stab, d - 1, degree, node_budget)?)
}

/// Monte Carlo estimate of the anchored count, sampling (d-1)-suffixes.
pub fn anchored_tuple_count_mc(
    l: &PermGroup,
    gamma: u32,
    d: u32,
    samples: u64,
    seed: u64,
) -> Result<AnchoredCount, ProdError> {
    assert!(d >= 2);
    let degree = l.degree() as u32;
    let mut root = l.as_subgrp();
    let anchor = root.stabiliser(gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0u64;
    for _ in 0..samples {
        let mut cur = anchor.clone();
        let mut ok = cur.is_trivial();
        for i in 0..d - 1 {
            if ok {
                break;
            }
            let pt = rng.gen_range(0..degree);
            if i + 1 == d - 1 {
                ok = cur.stabiliser_order(pt) == BigUint::from(1u32);
            } else {
                cur = cur.stabiliser(pt)?;
                ok = cur.is_trivial();
            }
        }
        if ok {
            successes += 1;
        }
    }
    let (lo, hi) = wilson_interval(successes, samples);
    let space = big_pow(degree as u64, d - 1).to_f64().unwrap_or(f64::INFINITY);
    Ok(AnchoredCount::MonteCarlo {
        samples,
        successes,
        p_hat: successes as f64 / samples as f64,
        wilson_low: lo,
        wilson_high: hi,
        count_low: lo * space,
        count_high: hi * space,
    })
}
