//! Base probabilities P(G,c): exact by weighted orbit DFS, and Monte Carlo
//! with Wilson intervals.

use super::BaseError;
use crate::permcore::{PermGroup, SubGrp};
use crate::util::wilson_interval;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Count tuples in Omega^c (optionally anchored by a fixed prefix-stabiliser)
/// whose pointwise stabiliser is trivial, by DFS over orbit representatives
/// weighted by orbit sizes. Once the running stabiliser is trivial every
/// extension counts, contributing |Omega|^(c - depth) at once.
pub fn tuple_count_engine(
    start: &mut SubGrp,
    c: u32,
    degree: u64,
    node_budget: u64,
) -> Result<BigUint, BaseError> {
    fn rec(
        sub: &mut SubGrp,
        remaining: u32,
        degree: u64,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<BigUint, BaseError> {
        *nodes += 1;
        if *nodes > budget {
            return Err(BaseError::Budget(format!("tuple DFS exceeded {budget} nodes")));
        }
        if sub.is_trivial() {
            return Ok(crate::util::big_pow(degree, remaining));
        }
        if remaining == 0 {
            return Ok(BigUint::zero());
        }
        let mut total = BigUint::zero();
        for (rep, len) in sub.orbit_reps() {
            let weight = BigUint::from(len);
            let contribution = if (&sub.order / BigUint::from(len)).is_one() {
                // child is trivial: all further extensions count
                crate::util::big_pow(degree, remaining - 1)
            } else {
                let mut child = sub.stabiliser(rep)?;
                rec(&mut child, remaining - 1, degree, nodes, budget)?
            };
            total += weight * contribution;
        }
        Ok(total)
    }
    let mut nodes = 0u64;
    rec(start, c, degree, &mut nodes, node_budget)
}

/// Exact P(G,c): the fraction of c-tuples that are bases.
pub fn exact_base_probability(
    g: &PermGroup,
    c: u32,
    node_budget: u64,
) -> Result<BigRational, BaseError> {
    let degree = g.degree() as u64;
    let mut root = g.as_subgrp();
    let count = tuple_count_engine(&mut root, c, degree, node_budget)?;
    let total = crate::util::big_pow(degree, c);
    Ok(BigRational::new(BigInt::from(count), BigInt::from(total)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McEstimate {
    pub samples: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

/// Monte Carlo P(G,c): uniform c-tuples tested for trivial pointwise
/// stabiliser, with first-level stabilisers cached per point.
pub fn mc_base_probability(
    g: &PermGroup,
    c: u32,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, BaseError> {
    assert!(samples >= 1);
    let degree = g.degree() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache: HashMap<u32, SubGrp> = HashMap::new();
    let mut root = g.as_subgrp();
    let mut successes = 0u64;
    for _ in 0..samples {
        let mut pts = Vec::with_capacity(c as usize);
        for _ in 0..c {
            pts.push(rng.gen_range(0..degree));
        }
        if c == 0 {
            if root.is_trivial() {
                successes += 1;
            }
            continue;
        }
        let first = pts[0];
        if !cache.contains_key(&first) {
            let sub = root.stabiliser(first)?;
            cache.insert(first, sub);
        }
        let mut cur = cache.get(&first).unwrap().clone();
        let mut ok = cur.is_trivial();
        let rest = &pts[1..];
        for (i, &pt) in rest.iter().enumerate() {
            if ok {
                break;
            }
            if i + 1 == rest.len() {
                // last point: the order alone decides, no generators needed
                ok = cur.stabiliser_order(pt).is_one();
            } else {
                cur = cur.stabiliser(pt)?;
                ok = cur.is_trivial();
            }
        }
        if ok {
            successes += 1;
        }
    }
    let p_hat = successes as f64 / samples as f64;
    let (lo, hi) = wilson_interval(successes, samples);
    Ok(McEstimate {
        samples,
        successes,
        p_hat,
        wilson_low: lo,
        wilson_high: hi,
    })
}
