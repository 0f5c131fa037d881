//! Action of G on the right cosets of a subgroup H, built by orbit BFS on
//! representative permutations.
//!
//! Cosets are recognised through a canonical key: the lexicographically least
//! tuple of base images (beta_1, ..., beta_k)^(h x) over h in H, computed
//! greedily down H's stabiliser chain. Key equality is confirmed by one
//! membership sift, so hash collisions between distinct cosets cost a linear
//! scan of a tiny bucket instead of soundness.

use super::ActionError;
use crate::permcore::{Perm, PermGroup, StabChain};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::HashMap;
use std::sync::Arc;

pub struct CosetTable {
    /// One representative permutation per coset; reps[0] is the identity.
    pub reps: Vec<Perm>,
    pub degree: usize,
    /// Order of the kernel of the action (1 = faithful).
    pub kernel_order: BigUint,
}

impl CosetTable {
    pub fn label(&self, i: usize) -> String {
        format!("H*{}", self.reps[i].cycle_string())
    }
}

fn canonical_key(h: &StabChain, x: &Perm) -> Vec<u32> {
    let mut key = Vec::with_capacity(h.level_count());
    let mut cur = x.clone();
    for level in 0..h.level_count() {
        let orbit = h.orbit_points(level);
        let mut best_from = orbit[0];
        let mut best_to = cur.apply(orbit[0]);
        for &o in &orbit[1..] {
            let img = cur.apply(o);
            if img < best_to {
                best_to = img;
                best_from = o;
            }
        }
        key.push(best_to);
        if best_from != h.level_beta(level) {
            let u = h.urep(level, best_from);
            cur = u.compose(&cur);
        }
    }
    key
}

/// Construct the transitive action of G on the cosets G/H.
pub fn coset_action(
    g: &PermGroup,
    h: &PermGroup,
    budget: u64,
) -> Result<(PermGroup, CosetTable), ActionError> {
    if !g.contains_group(h) {
        return Err(ActionError::NotASubgroup);
    }
    let g_order = g.order();
    let h_order = h.order();
    let index = &g_order / &h_order;
    let index_u64 = index
        .to_u64()
        .filter(|&i| i <= budget)
        .ok_or(ActionError::DomainBudget {
            size: u64::MAX,
            budget,
        })?;
    if index_u64 > budget {
        return Err(ActionError::DomainBudget {
            size: index_u64,
            budget,
        });
    }

    let hch: Arc<StabChain> = h.chain().clone();
    let mut reps: Vec<Perm> = vec![Perm::identity(g.degree())];
    let mut lookup: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    lookup.insert(canonical_key(&hch, &reps[0]), vec![0]);

    // edges[k][i] = image of coset i under generator k
    let gens = g.generators().to_vec();
    let mut edges: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut head = 0usize;
    while head < reps.len() {
        let cur = reps[head].clone();
        for (k, gen) in gens.iter().enumerate() {
            let cand = cur.compose(gen);
            let key = canonical_key(&hch, &cand);
            let bucket = lookup.entry(key).or_default();
            let mut found: Option<usize> = None;
            for &i in bucket.iter() {
                // confirm H * cand == H * reps[i] with one sift
                if hch.contains(&cand.compose(&reps[i].inverse())) {
                    found = Some(i);
                    break;
                }
            }
            let target = match found {
                Some(i) => i,
                None => {
                    debug_assert!((reps.len() as u64) < index_u64, "more cosets than |G:H|");
                    reps.push(cand);
                    bucket.push(reps.len() - 1);
                    reps.len() - 1
                }
            };
            edges[k].push(target as u32);
        }
        head += 1;
    }
    debug_assert_eq!(BigUint::from(reps.len()), index);

    let images: Vec<Perm> = edges
        .into_iter()
        .map(|im| Perm::from_images(im).expect("coset action is a permutation"))
        .collect();
    let degree = reps.len();

    // certify the image order; the kernel order is |G| / |image|
    let image = PermGroup::new(degree, images.clone())?;
    let image_order = image.order();
    let kernel_order = &g_order / &image_order;
    let table = CosetTable {
        reps,
        degree,
        kernel_order,
    };
    let grp = PermGroup::with_known_order(degree, images, image_order)?;
    Ok((grp, table))
}

/// Homomorphism handle: precomputed key table for repeated coset images.
pub struct CosetHom<'a> {
    table: &'a CosetTable,
    hch: Arc<StabChain>,
    keys: HashMap<Vec<u32>, Vec<usize>>,
}

impl<'a> CosetHom<'a> {
    pub fn new(table: &'a CosetTable, h: &PermGroup) -> CosetHom<'a> {
        let hch = h.chain().clone();
        let mut keys: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for (i, r) in table.reps.iter().enumerate() {
            keys.entry(canonical_key(&hch, r)).or_default().push(i);
        }
        CosetHom { table, hch, keys }
    }

    pub fn image(&self, x: &Perm) -> Perm {
        let images: Vec<u32> = self
            .table
            .reps
            .iter()
            .map(|r| {
                let cand = r.compose(x);
                let key = canonical_key(&self.hch, &cand);
                let bucket = self.keys.get(&key).expect("image coset must exist");
                for &i in bucket {
                    if self.hch.contains(&cand.compose(&self.table.reps[i].inverse())) {
                        return i as u32;
                    }
                }
                panic!("image coset not found");
            })
            .collect();
        Perm::from_images(images).expect("coset image is a permutation")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::PermGroup;

    #[test]
    fn degree_one_for_whole_group() {
        let g = PermGroup::symmetric(4);
        let (act, table) = coset_action(&g, &g, 100).unwrap();
        assert_eq!(table.degree, 1);
        assert_eq!(act.order(), BigUint::from(1u32));
    }

    #[test]
    fn s4_on_cosets_of_s3() {
        let g = PermGroup::symmetric(4);
        let h = g.stabiliser_of(3).unwrap(); // S3 on {0,1,2}
        let (act, table) = coset_action(&g, &h, 100).unwrap();
        assert_eq!(table.degree, 4);
        assert_eq!(act.order(), BigUint::from(24u32));
        assert_eq!(table.kernel_order, BigUint::from(1u32));
        assert!(act.is_transitive());
    }

    #[test]
    fn not_a_subgroup_is_rejected() {
        let g = PermGroup::alternating(5);
        let h = PermGroup::new(5, vec![Perm::parse("(0 1)", 5).unwrap()]).unwrap();
        assert!(matches!(
            coset_action(&g, &h, 100),
            Err(ActionError::NotASubgroup)
        ));
    }

    #[test]
    fn point_stabiliser_of_coset_zero_contains_h() {
        // stabiliser of the trivial coset is H itself (core-free case)
        let g = PermGroup::symmetric(5);
        let h = g.setwise_pair_stabiliser(0, 1).unwrap(); // S2 x S3, order 12
        let (act, table) = coset_action(&g, &h, 100).unwrap();
        assert_eq!(table.degree, 10);
        let hom = CosetHom::new(&table, &h);
        for hg in h.generators() {
            assert_eq!(hom.image(hg).apply(0), 0);
        }
        let st = act.stabiliser_of(0).unwrap();
        assert_eq!(st.order() * BigUint::from(10u32), g.order());
    }

    #[test]
    fn coset_image_is_homomorphism() {
        let g = PermGroup::symmetric(5);
        let h = g.stabiliser_of(4).unwrap();
        let (_, table) = coset_action(&g, &h, 100).unwrap();
        let hom = CosetHom::new(&table, &h);
        let a = Perm::parse("(0 1 2 3 4)", 5).unwrap();
        let b = Perm::parse("(0 1)", 5).unwrap();
        assert_eq!(
            hom.image(&a.compose(&b)),
            hom.image(&a).compose(&hom.image(&b))
        );
    }
}
