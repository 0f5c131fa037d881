//! Product actions of wreath products and induced actions on unordered pairs.

use super::ActionError;
use crate::permcore::{Perm, PermGroup};
use num_bigint::BigUint;
use num_traits::pow::pow;

/// Product action of L wr P on Gamma^m: base-group generators act in one
/// coordinate, top-group generators permute the coordinates. Point index is
/// mixed-radix little-endian in the coordinates.
pub fn product_action(
    l: &PermGroup,
    m: usize,
    p: &PermGroup,
    budget: u64,
) -> Result<PermGroup, ActionError> {
    assert_eq!(p.degree(), m, "top group must act on m points");
    assert!(m >= 1);
    let gamma = l.degree() as u64;
    let degree = gamma
        .checked_pow(m as u32)
        .filter(|&d| d <= budget)
        .ok_or(ActionError::DomainBudget {
            size: u64::MAX,
            budget,
        })?;
    let degree = degree as usize;

    let unrank = |mut idx: usize| -> Vec<u32> {
        let mut t = Vec::with_capacity(m);
        for _ in 0..m {
            t.push((idx as u64 % gamma) as u32);
            idx = (idx as u64 / gamma) as usize;
        }
        t
    };
    let rank = |t: &[u32]| -> usize {
        let mut idx = 0u64;
        for &c in t.iter().rev() {
            idx = idx * gamma + c as u64;
        }
        idx as usize
    };

    let mut gens = Vec::new();
    for g in l.generators() {
        let images: Vec<u32> = (0..degree)
            .map(|i| {
                let mut t = unrank(i);
                t[0] = g.apply(t[0]);
                rank(&t) as u32
            })
            .collect();
        gens.push(Perm::from_images(images).expect("coordinatewise action"));
    }
    for s in p.generators() {
        let images: Vec<u32> = (0..degree)
            .map(|i| {
                let t = unrank(i);
                let mut nt = vec![0u32; m];
                for (coord, &val) in t.iter().enumerate() {
                    nt[s.apply(coord as u32) as usize] = val;
                }
                rank(&nt) as u32
            })
            .collect();
        gens.push(Perm::from_images(images).expect("coordinate permutation"));
    }

    // |L|^m * |P|, valid when L acts faithfully and nontrivially
    let order = pow(l.order(), m) * p.order();
    Ok(PermGroup::with_known_order(degree, gens, order)?)
}

/// Domain of unordered pairs {i, j}, i < j, ordered lexicographically.
pub struct PairDomain {
    pub n: usize,
    pairs: Vec<(u32, u32)>,
    index: std::collections::HashMap<(u32, u32), usize>,
}

impl PairDomain {
    pub fn new(n: usize) -> PairDomain {
        let mut pairs = Vec::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                pairs.push((i, j));
            }
        }
        let index = pairs
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, k))
            .collect();
        PairDomain { n, pairs, index }
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, k: usize) -> (u32, u32) {
        self.pairs[k]
    }

    pub fn index_of(&self, a: u32, b: u32) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.index.get(&key).copied()
    }

    pub fn label(&self, k: usize) -> String {
        let (a, b) = self.pairs[k];
        format!("{{{a},{b}}}")
    }
}

/// Induced action on unordered pairs of points. The image order is computed
/// from scratch (the induced action can have a kernel, e.g. C2 on 2 points).
pub fn pair_action(g: &PermGroup, budget: u64) -> Result<(PermGroup, PairDomain), ActionError> {
    let n = g.degree();
    assert!(n >= 2);
    let size = (n as u64) * (n as u64 - 1) / 2;
    if size > budget {
        return Err(ActionError::DomainBudget { size, budget });
    }
    let dom = PairDomain::new(n);
    let gens: Vec<Perm> = g
        .generators()
        .iter()
        .map(|p| {
            let images: Vec<u32> = (0..dom.size())
                .map(|k| {
                    let (a, b) = dom.pair(k);
                    dom.index_of(p.apply(a), p.apply(b)).unwrap() as u32
                })
                .collect();
            Perm::from_images(images).expect("pair action")
        })
        .collect();
    let grp = PermGroup::new(dom.size(), gens)?;
    Ok((grp, dom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn s5_wr_c2_on_25_points() {
        let l = PermGroup::symmetric(5);
        let p = PermGroup::cyclic(2);
        let g = product_action(&l, 2, &p, 10_000_000).unwrap();
        assert_eq!(g.degree(), 25);
        assert_eq!(g.order().to_u64().unwrap(), 28_800);
    }

    #[test]
    fn m_equals_one_is_l() {
        let l = PermGroup::alternating(5);
        let p = PermGroup::trivial(1);
        let g = product_action(&l, 1, &p, 1000).unwrap();
        assert_eq!(g.degree(), 5);
        assert_eq!(g.order().to_u64().unwrap(), 60);
    }

    #[test]
    fn pair_action_examples() {
        // S3 on 3 points -> degree 3, image iso to S3
        let s3 = PermGroup::symmetric(3);
        let (g, dom) = pair_action(&s3, 1000).unwrap();
        assert_eq!(dom.size(), 3);
        assert_eq!(g.order().to_u64().unwrap(), 6);
        // C2 on 2 points -> degree 1
        let c2 = PermGroup::cyclic(2);
        let (g1, dom1) = pair_action(&c2, 1000).unwrap();
        assert_eq!(dom1.size(), 1);
        assert_eq!(g1.order().to_u64().unwrap(), 1);
    }

    #[test]
    fn budget_enforced() {
        let l = PermGroup::symmetric(5);
        let p = PermGroup::cyclic(12);
        assert!(matches!(
            product_action(&l, 12, &p, 10_000_000),
            Err(ActionError::DomainBudget { .. })
        ));
    }
}
