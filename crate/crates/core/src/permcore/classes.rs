//! Conjugacy classes of prime-order elements, exact or sampled.

use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{HashMap, HashSet};

use super::perm::Perm;
use super::{PermError, PermGroup};
use crate::util::{hash128, is_prime};

#[derive(Clone, Debug)]
pub struct ClassData {
    pub rep: Perm,
    /// The prime r with rep^r = 1.
    pub prime: u64,
    pub class_size: BigUint,
    /// Fixed points of the class on the group's domain (conjugation-invariant).
    pub fixed_points: u64,
    /// Exact class size vs. capped enumeration.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct ClassDataSet {
    pub classes: Vec<ClassData>,
    /// True when every prime-order class is present with exact sizes.
    pub complete: bool,
    /// In exact mode, the number of prime-order elements of the group.
    pub prime_order_elements: BigUint,
}

fn perm_hash(p: &Perm) -> u128 {
    let mut bytes = Vec::with_capacity(p.degree() * 4);
    for &x in p.images() {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    hash128(&bytes)
}

/// Conjugation orbit of `x` under the group generators, as (size, hash set).
/// Stops early (complete = false) once `cap` elements have been seen.
fn class_orbit(gens: &[Perm], x: &Perm, cap: u64) -> (u64, HashSet<u128>, bool) {
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(perm_hash(x));
    let mut frontier = vec![x.clone()];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let c = g.conjugate_by(s);
            let h = perm_hash(&c);
            if seen.insert(h) {
                if seen.len() as u64 > cap {
                    return (seen.len() as u64, seen, false);
                }
                frontier.push(c);
            }
        }
    }
    (seen.len() as u64, seen, true)
}

struct Bucket {
    class_idx: Vec<usize>,
    hash_sets: Vec<HashSet<u128>>,
}

/// Exact mode when |G| <= cap: enumerate every element, bucket the prime-order
/// ones into conjugacy classes by conjugation-orbit search, and cross-check
/// that the class sizes add up to the direct count. Otherwise fall back to
/// sampling (usable only for lower bounds).
pub fn prime_order_class_data(
    g: &PermGroup,
    cap: u64,
    seed: u64,
) -> Result<ClassDataSet, PermError> {
    let order = g.order();
    if order <= BigUint::from(cap) {
        exact_classes(g, cap)
    } else {
        sampled_classes(g, cap, seed)
    }
}

fn exact_classes(g: &PermGroup, cap: u64) -> Result<ClassDataSet, PermError> {
    let gens = g.generators().to_vec();
    let mut classes: Vec<ClassData> = Vec::new();
    let mut buckets: HashMap<(u64, Vec<usize>), Bucket> = HashMap::new();
    let mut total: u64 = 0;

    for elem in g.elements(cap)? {
        let Some(o) = elem.order_u64() else { continue };
        if o < 2 || !is_prime(o) {
            continue;
        }
        total += 1;
        let key = (o, elem.cycle_type());
        let h = perm_hash(&elem);
        let bucket = buckets.entry(key).or_insert_with(|| Bucket {
            class_idx: Vec::new(),
            hash_sets: Vec::new(),
        });
        if bucket.hash_sets.iter().any(|s| s.contains(&h)) {
            continue;
        }
        let (size, set, complete) = class_orbit(&gens, &elem, u64::MAX);
        debug_assert!(complete);
        bucket.class_idx.push(classes.len());
        bucket.hash_sets.push(set);
        classes.push(ClassData {
            fixed_points: elem.fixed_point_count(),
            rep: elem,
            prime: o,
            class_size: BigUint::from(size),
            complete: true,
        });
    }

    // class partition must account for every prime-order element
    let sum: BigUint = classes.iter().map(|c| c.class_size.clone()).sum();
    assert_eq!(
        sum,
        BigUint::from(total),
        "class sizes must partition the prime-order elements"
    );
    sort_classes(&mut classes);
    Ok(ClassDataSet {
        classes,
        complete: true,
        prime_order_elements: BigUint::from(total),
    })
}

fn sampled_classes(g: &PermGroup, cap: u64, seed: u64) -> Result<ClassDataSet, PermError> {
    let gens = g.generators().to_vec();
    let mut classes: Vec<ClassData> = Vec::new();
    let mut sets: Vec<(u64, Vec<usize>, HashSet<u128>)> = Vec::new();
    let mut stream = g.random_stream(seed);
    let draws = 400usize;
    for _ in 0..draws {
        let r = stream.next_element();
        let Some(o) = r.order_u64() else { continue };
        if o < 2 {
            continue;
        }
        for p in crate::util::prime_factors(o) {
            let x = r.pow((o / p) as i64);
            if x.is_identity() {
                continue;
            }
            let h = perm_hash(&x);
            let key = (p, x.cycle_type());
            if sets
                .iter()
                .any(|(pp, ct, s)| *pp == p && *ct == key.1 && s.contains(&h))
            {
                continue;
            }
            let (size, set, complete) = class_orbit(&gens, &x, cap);
            sets.push((p, key.1.clone(), set));
            classes.push(ClassData {
                fixed_points: x.fixed_point_count(),
                rep: x,
                prime: p,
                class_size: BigUint::from(size),
                complete,
            });
        }
    }
    sort_classes(&mut classes);
    Ok(ClassDataSet {
        classes,
        complete: false,
        prime_order_elements: BigUint::zero(),
    })
}

fn sort_classes(classes: &mut [ClassData]) {
    classes.sort_by(|a, b| {
        (a.prime, &a.class_size, a.fixed_points, a.rep.images())
            .cmp(&(b.prime, &b.class_size, b.fixed_points, b.rep.images()))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn cyclic6_regular_action() {
        // C6 is abelian, so classes are singletons: one element of order 2,
        // two of order 3
        let g = PermGroup::cyclic(6);
        let cds = prime_order_class_data(&g, 1000, 1).unwrap();
        assert!(cds.complete);
        assert_eq!(cds.classes.len(), 3);
        let n2 = cds.classes.iter().filter(|c| c.prime == 2).count();
        let n3 = cds.classes.iter().filter(|c| c.prime == 3).count();
        assert_eq!((n2, n3), (1, 2));
        assert!(cds.classes.iter().all(|c| c.class_size == BigUint::one()));
        assert_eq!(cds.prime_order_elements, BigUint::from(3u32));
    }

    #[test]
    fn s5_natural_class_sizes() {
        // oracle: raw enumeration of all 120 permutations of 5 points
        let s5 = PermGroup::symmetric(5);
        let mut by_type: HashMap<Vec<usize>, u64> = HashMap::new();
        for p in s5.elements(200).unwrap() {
            let o = p.order_u64().unwrap();
            if o >= 2 && is_prime(o) {
                *by_type.entry(p.cycle_type()).or_insert(0) += 1;
            }
        }
        assert_eq!(by_type[&vec![2]], 10); // transpositions
        assert_eq!(by_type[&vec![3]], 20); // 3-cycles
        assert_eq!(by_type[&vec![2, 2]], 15); // double transpositions
        assert_eq!(by_type[&vec![5]], 24); // 5-cycles

        let cds = prime_order_class_data(&s5, 1000, 1).unwrap();
        assert_eq!(cds.classes.len(), 4);
        let mut sizes: Vec<u64> = cds
            .classes
            .iter()
            .map(|c| u64::try_from(&c.class_size).unwrap())
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![10, 15, 20, 24]);
    }

    #[test]
    fn sampled_mode_flags_incomplete() {
        let s9 = PermGroup::symmetric(9);
        let cds = prime_order_class_data(&s9, 1000, 5).unwrap();
        assert!(!cds.complete);
        assert!(!cds.classes.is_empty());
    }
}
