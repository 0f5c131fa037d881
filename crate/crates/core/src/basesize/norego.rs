//! Double-coset certificates that H has no regular orbit on G/H.
//!
//! A set T of (H,H) double coset representatives with (a) |HxH| < |H|^2 for
//! all x in T and (b) sum |HxH| > |G| - |H|^2 proves that no coset lies in a
//! regular H-orbit, hence b(G,H) >= 3 for the coset action.

use super::BaseError;
use crate::permcore::{double_coset_size, in_double_coset, Perm, PermGroup};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoRegularOrbitCertificate {
    /// Double coset representatives as image lists.
    pub reps: Vec<Vec<u32>>,
    /// |HxH| per representative, decimal strings.
    pub sizes: Vec<String>,
    /// sum |HxH| - (|G| - |H|^2) > 0.
    pub slack: String,
    pub g_order: String,
    pub h_order: String,
}

#[derive(Debug)]
pub enum NoRegularOrbitOutcome {
    /// Certificate found: b(G,H) >= 3.
    Certified(NoRegularOrbitCertificate),
    /// The full double-coset decomposition contains a regular orbit, so no
    /// certificate can exist.
    RegularOrbitExists { regular_rep: Perm },
}

/// Greedy accumulation of double-coset representatives from seeded random
/// elements. Terminates with a certificate, or with proof that a regular
/// orbit exists (discovered on the way or after full decomposition).
pub fn no_regular_orbit_certificate(
    g: &PermGroup,
    h: &PermGroup,
    h_cap: u64,
    seed: u64,
) -> Result<NoRegularOrbitOutcome, BaseError> {
    let g_order = g.order();
    let h_order = h.order();
    let hh = &h_order * &h_order;
    // need sum > |G| - |H|^2, which may be negative
    let threshold = BigInt::from(g_order.clone()) - BigInt::from(hh.clone());

    let mut reps: Vec<Perm> = vec![Perm::identity(g.degree())];
    let mut sizes: Vec<BigUint> = vec![h_order.clone()]; // |H·1·H| = |H|
    let mut covered = h_order.clone();
    let mut stream = g.random_stream(seed);

    let mut stall = 0u64;
    while BigInt::from(covered.clone()) <= threshold {
        if covered == g_order {
            break;
        }
        let x = stream.next_element();
        let mut known = false;
        for r in &reps {
            if in_double_coset(h, r, &x, h_cap)? {
                known = true;
                break;
            }
        }
        if known {
            stall += 1;
            if stall > 20_000 {
                return Err(BaseError::Budget(
                    "double-coset sampling stalled before covering |G|".into(),
                ));
            }
            continue;
        }
        stall = 0;
        let size = double_coset_size(h, &x, h_cap)?;
        if size == hh {
            return Ok(NoRegularOrbitOutcome::RegularOrbitExists { regular_rep: x });
        }
        covered += &size;
        reps.push(x);
        sizes.push(size);
    }

    if BigInt::from(covered.clone()) <= threshold {
        // full decomposition without regular orbit still must exceed the
        // threshold, so reaching here means the arithmetic found one earlier
        return Err(BaseError::Budget("decomposition incomplete".into()));
    }
    // condition (a) for the identity coset needs |H| < |H|^2
    if h_order == BigUint::from(1u32) {
        return Ok(NoRegularOrbitOutcome::RegularOrbitExists {
            regular_rep: Perm::identity(g.degree()),
        });
    }
    let slack = BigInt::from(covered.clone()) - threshold;
    Ok(NoRegularOrbitOutcome::Certified(NoRegularOrbitCertificate {
        reps: reps.iter().map(|p| p.images().to_vec()).collect(),
        sizes: sizes.iter().map(|s| s.to_string()).collect(),
        slack: slack.to_string(),
        g_order: g_order.to_string(),
        h_order: h_order.to_string(),
    }))
}

impl NoRegularOrbitCertificate {
    /// Replay the certificate from serialized data alone: representatives in
    /// pairwise-distinct double cosets, each |HxH| < |H|^2, and the covering
    /// inequality.
    pub fn replay(&self, g: &PermGroup, h: &PermGroup, h_cap: u64) -> Result<bool, BaseError> {
        let g_order = g.order();
        let h_order = h.order();
        if self.g_order != g_order.to_string() || self.h_order != h_order.to_string() {
            return Ok(false);
        }
        let hh = &h_order * &h_order;
        let mut reps = Vec::new();
        for im in &self.reps {
            let p = Perm::from_images(im.clone()).map_err(BaseError::Perm)?;
            if !g.contains(&p) {
                return Ok(false);
            }
            reps.push(p);
        }
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if in_double_coset(h, &reps[i], &reps[j], h_cap)? {
                    return Ok(false);
                }
            }
        }
        let mut sum = BigUint::from(0u32);
        for (p, claimed) in reps.iter().zip(&self.sizes) {
            let size = double_coset_size(h, p, h_cap)?;
            if &size.to_string() != claimed || size >= hh {
                return Ok(false);
            }
            sum += size;
        }
        Ok(BigInt::from(sum) > BigInt::from(g_order) - BigInt::from(hh))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_h_never_certifies() {
        // every orbit of the trivial subgroup is regular
        let g = PermGroup::cyclic(5);
        let h = PermGroup::trivial(5);
        let out = no_regular_orbit_certificate(&g, &h, 100, 1).unwrap();
        assert!(matches!(out, NoRegularOrbitOutcome::RegularOrbitExists { .. }));
    }

    #[test]
    fn s4_point_stabiliser_in_s5_certifies() {
        // H = S4 on the 5-point action: |H| = 24 > 5, so no H-orbit can be
        // regular and the certificate must exist (trivially, |H|^2 > |G|)
        let g = PermGroup::symmetric(5);
        let h = g.stabiliser_of(4).unwrap();
        let out = no_regular_orbit_certificate(&g, &h, 1000, 3).unwrap();
        let NoRegularOrbitOutcome::Certified(cert) = out else {
            panic!("expected a certificate");
        };
        assert!(cert.replay(&g, &h, 1000).unwrap());
        // tampered certificate fails replay
        let mut bad = cert.clone();
        bad.sizes[0] = "1".into();
        assert!(!bad.replay(&g, &h, 1000).unwrap());
    }
}
