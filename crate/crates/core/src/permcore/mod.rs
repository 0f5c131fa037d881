//! Permutations, generated groups, stabiliser chains, membership, orders,
//! random elements and conjugacy data.

mod chain;
mod classes;
mod enumerate;
mod perm;
mod rand;
mod subgrp;

pub use chain::{BuildOpts, StabChain};
pub use classes::{prime_order_class_data, ClassData, ClassDataSet};
pub use enumerate::ElementsIter;
pub use perm::Perm;
pub use rand::RattleState;
pub use subgrp::SubGrp;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PermError {
    #[error("image sequence is not a bijection")]
    NotABijection,
    #[error("point out of range for the degree")]
    PointOutOfRange,
    #[error("degree mismatch")]
    DegreeMismatch,
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("declared order {declared} does not match computed order {actual}")]
    OrderMismatch { declared: BigUint, actual: BigUint },
    #[error("stabiliser chain construction stalled")]
    ConstructionStalled,
    #[error("element budget exceeded (|G| = {order} > cap {cap})")]
    BudgetExceeded { order: BigUint, cap: u64 },
    #[error("not a subgroup: a generator fails membership")]
    NotASubgroup,
}

/// A permutation group given by generators, with a lazily built verified
/// stabiliser chain.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    known_order: Option<BigUint>,
    chain: Arc<OnceLock<Arc<StabChain>>>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermGroup(degree {}, {} gens)", self.degree, self.gens.len())
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<PermGroup, PermError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch);
            }
        }
        let gens = if gens.is_empty() {
            vec![Perm::identity(degree)]
        } else {
            gens
        };
        Ok(PermGroup {
            degree,
            gens,
            known_order: None,
            chain: Arc::new(OnceLock::new()),
        })
    }

    /// Like `new`, but the order is already known from theory; the chain build
    /// certifies against it and fails loudly on mismatch.
    pub fn with_known_order(
        degree: usize,
        gens: Vec<Perm>,
        order: BigUint,
    ) -> Result<PermGroup, PermError> {
        let mut g = PermGroup::new(degree, gens)?;
        g.known_order = Some(order);
        Ok(g)
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::with_known_order(degree, vec![], BigUint::one()).unwrap()
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1]]).unwrap());
        }
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[(0..n as u32).collect()]).unwrap());
        }
        let mut order = BigUint::one();
        for k in 2..=n {
            order *= BigUint::from(k);
        }
        PermGroup::with_known_order(n, gens, order).unwrap()
    }

    pub fn alternating(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1, 2]]).unwrap());
        }
        if n >= 4 {
            let long: Vec<u32> = if n % 2 == 1 {
                (0..n as u32).collect()
            } else {
                (1..n as u32).collect()
            };
            gens.push(Perm::from_cycles(n, &[long]).unwrap());
        }
        let mut order = BigUint::one();
        for k in 3..=n {
            order *= BigUint::from(k);
        }
        PermGroup::with_known_order(n, gens, order).unwrap()
    }

    pub fn cyclic(n: usize) -> PermGroup {
        let gens = vec![Perm::from_cycles(n, &[(0..n as u32).collect()]).unwrap()];
        PermGroup::with_known_order(n, gens, BigUint::from(n)).unwrap()
    }

    /// Dihedral group of order 2n acting naturally on n points (n >= 3).
    pub fn dihedral(n: usize) -> PermGroup {
        assert!(n >= 3);
        let rot = Perm::from_cycles(n, &[(0..n as u32).collect()]).unwrap();
        let refl = Perm::from_images(
            (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect(),
        )
        .unwrap();
        PermGroup::with_known_order(n, vec![rot, refl], BigUint::from(2 * n)).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn try_chain(&self) -> Result<&Arc<StabChain>, PermError> {
        self.try_chain_seeded(0xBA5E)
    }

    pub fn try_chain_seeded(&self, seed: u64) -> Result<&Arc<StabChain>, PermError> {
        if let Some(c) = self.chain.get() {
            return Ok(c);
        }
        let built = StabChain::build(
            self.degree,
            &self.gens,
            BuildOpts {
                seed,
                base_hint: Vec::new(),
                target_order: self.known_order.clone(),
            },
        )?;
        let _ = self.chain.set(Arc::new(built));
        Ok(self.chain.get().unwrap())
    }

    pub fn chain(&self) -> &Arc<StabChain> {
        self.try_chain().expect("stabiliser chain construction failed")
    }

    pub fn order(&self) -> BigUint {
        self.chain().order().clone()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain().contains(g)
    }

    /// True iff every generator of `h` is a member.
    pub fn contains_group(&self, h: &PermGroup) -> bool {
        h.degree == self.degree && h.gens.iter().all(|g| self.contains(g))
    }

    pub fn random_stream(&self, seed: u64) -> RattleState {
        RattleState::new(&self.gens, self.degree, seed)
    }

    pub fn orbit_of(&self, pt: u32) -> Vec<u32> {
        orbit_of_gens(&self.gens, self.degree, pt)
    }

    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree as u32 {
            if seen[p as usize] {
                continue;
            }
            let orb = self.orbit_of(p);
            for &x in &orb {
                seen[x as usize] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && self.orbit_of(0).len() == self.degree
    }

    /// Subgroup fixing every listed point, with its own verified chain.
    /// An empty list returns the group itself.
    pub fn pointwise_stabiliser(&self, points: &[u32]) -> Result<PermGroup, PermError> {
        if points.is_empty() {
            return Ok(self.clone());
        }
        for &p in points {
            if p as usize >= self.degree {
                return Err(PermError::PointOutOfRange);
            }
        }
        let order = self.chain().order().clone();
        let ch = StabChain::build(
            self.degree,
            &self.gens,
            BuildOpts {
                seed: 0x57AB,
                base_hint: points.to_vec(),
                target_order: Some(order),
            },
        )?;
        let k = ch.hint_levels();
        let sub_order = ch.stabiliser_order(k);
        let gens = ch.stabiliser_gens(k);
        PermGroup::with_known_order(self.degree, gens, sub_order)
    }

    pub fn stabiliser_of(&self, pt: u32) -> Result<PermGroup, PermError> {
        self.pointwise_stabiliser(&[pt])
    }

    /// Setwise stabiliser of the unordered pair {a, b}.
    pub fn setwise_pair_stabiliser(&self, a: u32, b: u32) -> Result<PermGroup, PermError> {
        let pointwise = self.pointwise_stabiliser(&[a, b])?;
        // look for an element swapping a and b
        let chain = StabChain::build(
            self.degree,
            &self.gens,
            BuildOpts {
                seed: 0x5E7,
                base_hint: vec![a],
                target_order: Some(self.order()),
            },
        )?;
        if chain.orbit_pos(0, b).is_none() {
            return Ok(pointwise);
        }
        let u = chain.urep(0, b); // a^u = b
        let z = u.inverse().apply(a); // need s in G_a with b^s = z
        let ga_gens = chain.stabiliser_gens(1);
        let (orb, reps) = orbit_with_transversal(&ga_gens, self.degree, b);
        if !orb.contains(&z) {
            return Ok(pointwise);
        }
        let s = reps.get(&z).unwrap().clone();
        let swap = s.compose(&u);
        debug_assert_eq!(swap.apply(a), b);
        debug_assert_eq!(swap.apply(b), a);
        let mut gens = pointwise.generators().to_vec();
        gens.push(swap);
        let order = pointwise.order() * BigUint::from(2u32);
        PermGroup::with_known_order(self.degree, gens, order)
    }

    /// Stream every element via the chain transversals. Errors if the order
    /// exceeds `cap`.
    pub fn elements(&self, cap: u64) -> Result<ElementsIter<'_>, PermError> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(PermError::BudgetExceeded { order, cap });
        }
        Ok(ElementsIter::new(self.chain()))
    }

    /// Enumerate and keep the elements satisfying `pred`.
    pub fn element_filter(
        &self,
        cap: u64,
        mut pred: impl FnMut(&Perm) -> bool,
    ) -> Result<Vec<Perm>, PermError> {
        let mut out = Vec::new();
        for g in self.elements(cap)? {
            if pred(&g) {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// Normaliser of `sub` in `self` by the element filter fallback.
    pub fn normaliser_by_filter(&self, sub: &PermGroup, cap: u64) -> Result<PermGroup, PermError> {
        let sub_chain = sub.chain().clone();
        let sgens = sub.generators().to_vec();
        let members = self.element_filter(cap, |g| {
            sgens.iter().all(|s| sub_chain.contains(&s.conjugate_by(g)))
        })?;
        let order = BigUint::from(members.len());
        let gens = reduce_generating_set(self.degree, members, &order)?;
        PermGroup::with_known_order(self.degree, gens, order)
    }

    /// Centraliser of an element by the element filter fallback.
    pub fn centraliser_by_filter(&self, x: &Perm, cap: u64) -> Result<PermGroup, PermError> {
        let members = self.element_filter(cap, |g| {
            // commuting test without allocating: (xg)(i) == (gx)(i) for all i
            (0..self.degree as u32).all(|i| g.apply(x.apply(i)) == x.apply(g.apply(i)))
        })?;
        let order = BigUint::from(members.len());
        let gens = reduce_generating_set(self.degree, members, &order)?;
        PermGroup::with_known_order(self.degree, gens, order)
    }

    /// Subgroup of the even elements (index <= 2).
    pub fn even_subgroup(&self, cap: u64) -> Result<PermGroup, PermError> {
        if self.gens.iter().all(|g| g.is_even()) {
            return Ok(self.clone());
        }
        let members = self.element_filter(cap, |g| g.is_even())?;
        let order = BigUint::from(members.len());
        let gens = reduce_generating_set(self.degree, members, &order)?;
        PermGroup::with_known_order(self.degree, gens, order)
    }

    /// Root handle for the certified-subgroup engine.
    pub fn as_subgrp(&self) -> SubGrp {
        SubGrp::new(self.gens.clone(), self.degree, self.order())
    }
}

/// Orbit of `pt` under the given generators.
pub fn orbit_of_gens(gens: &[Perm], degree: usize, pt: u32) -> Vec<u32> {
    let mut seen = vec![false; degree];
    let mut orbit = vec![pt];
    seen[pt as usize] = true;
    let mut head = 0;
    while head < orbit.len() {
        let p = orbit[head];
        head += 1;
        for g in gens {
            let y = g.apply(p);
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
    }
    orbit
}

/// Orbit plus explicit representatives mapping `pt` to each orbit point.
pub fn orbit_with_transversal(
    gens: &[Perm],
    degree: usize,
    pt: u32,
) -> (Vec<u32>, HashMap<u32, Perm>) {
    let mut reps: HashMap<u32, Perm> = HashMap::new();
    reps.insert(pt, Perm::identity(degree));
    let mut orbit = vec![pt];
    let mut head = 0;
    while head < orbit.len() {
        let p = orbit[head];
        head += 1;
        let rp = reps.get(&p).unwrap().clone();
        for g in gens {
            let y = g.apply(p);
            if !reps.contains_key(&y) {
                reps.insert(y, rp.compose(g));
                orbit.push(y);
            }
        }
    }
    (orbit, reps)
}

/// Pick a small generating subset of `members` for a group of known order.
pub fn reduce_generating_set(
    degree: usize,
    members: Vec<Perm>,
    order: &BigUint,
) -> Result<Vec<Perm>, PermError> {
    if order.is_one() {
        return Ok(vec![Perm::identity(degree)]);
    }
    let mut gens: Vec<Perm> = Vec::new();
    let mut current: Option<StabChain> = None;
    for m in members {
        if m.is_identity() {
            continue;
        }
        if let Some(c) = &current {
            if c.contains(&m) {
                continue;
            }
        }
        gens.push(m);
        let c = StabChain::build(degree, &gens, BuildOpts::default())?;
        if c.order() == order {
            return Ok(gens);
        }
        current = Some(c);
    }
    Err(PermError::ConstructionStalled)
}

/// Exact |H ∩ x⁻¹Hx| by filtering the enumerated elements of H.
pub fn conjugates_and_intersection_order(
    h: &PermGroup,
    x: &Perm,
    cap: u64,
) -> Result<BigUint, PermError> {
    let chain = h.chain().clone();
    let xinv = x.inverse();
    let mut count: u64 = 0;
    for t in h.elements(cap)? {
        // t ∈ x⁻¹Hx  ⟺  x t x⁻¹ ∈ H
        if chain.contains(&t.conjugate_by(&xinv)) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// |HxH| = |H|² / |H ∩ xHx⁻¹|, the size of a double coset.
pub fn double_coset_size(h: &PermGroup, x: &Perm, cap: u64) -> Result<BigUint, PermError> {
    let chain = h.chain().clone();
    let mut inter: u64 = 0;
    for t in h.elements(cap)? {
        // t ∈ xHx⁻¹  ⟺  x⁻¹ t x ∈ H
        if chain.contains(&t.conjugate_by(x)) {
            inter += 1;
        }
    }
    let hh = h.order() * h.order();
    Ok(hh / BigUint::from(inter))
}

/// Membership y ∈ HxH, tested by scanning h ∈ H for x⁻¹ h y ∈ H.
pub fn in_double_coset(
    h: &PermGroup,
    x: &Perm,
    y: &Perm,
    cap: u64,
) -> Result<bool, PermError> {
    let chain = h.chain().clone();
    let xinv = x.inverse();
    for t in h.elements(cap)? {
        if chain.contains(&xinv.compose(&t).compose(y)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Fresh verified chain with an explicit seed; distinct seeds typically give
/// distinct bases, and orders must agree.
pub fn schreier_sims(g: &PermGroup, seed: u64) -> Result<StabChain, PermError> {
    StabChain::build(
        g.degree,
        g.generators(),
        BuildOpts {
            seed,
            base_hint: Vec::new(),
            target_order: None,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent oracle: enumerate a small group by BFS closure over the
    /// generators, with no stabiliser-chain machinery.
    pub(crate) fn closure_enumerate(gens: &[Perm], cap: usize) -> HashSet<Perm> {
        let degree = gens[0].degree();
        let mut set: HashSet<Perm> = HashSet::new();
        set.insert(Perm::identity(degree));
        let mut frontier: Vec<Perm> = vec![Perm::identity(degree)];
        while let Some(g) = frontier.pop() {
            for s in gens {
                let h = g.compose(s);
                if !set.contains(&h) {
                    assert!(set.len() <= cap, "closure exceeded cap");
                    set.insert(h.clone());
                    frontier.push(h);
                }
            }
        }
        set
    }

    #[test]
    fn order_matches_closure_oracle_on_random_groups() {
        use ::rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..20 {
            let degree = rng.gen_range(3..8usize);
            let k = rng.gen_range(1..3usize);
            let mut gens = Vec::new();
            for _ in 0..=k {
                let mut images: Vec<u32> = (0..degree as u32).collect();
                for i in (1..degree).rev() {
                    let j = rng.gen_range(0..=i);
                    images.swap(i, j);
                }
                gens.push(Perm::from_images(images).unwrap());
            }
            let g = PermGroup::new(degree, gens.clone()).unwrap();
            let expected = closure_enumerate(&gens, 100_000).len();
            assert_eq!(g.order(), BigUint::from(expected), "trial {trial}");
            // base independence: fresh chains with other seeds agree
            let c1 = schreier_sims(&g, 1 + trial).unwrap();
            let c2 = schreier_sims(&g, 1000 + trial).unwrap();
            assert_eq!(c1.order(), c2.order());
        }
    }

    #[test]
    fn sym_alt_cyclic_dihedral() {
        assert_eq!(PermGroup::symmetric(8).order(), BigUint::from(40320u32));
        assert_eq!(PermGroup::alternating(5).order(), BigUint::from(60u32));
        assert_eq!(PermGroup::cyclic(6).order(), BigUint::from(6u32));
        assert_eq!(PermGroup::dihedral(8).order(), BigUint::from(16u32));
        assert_eq!(PermGroup::trivial(4).order(), BigUint::one());
    }

    #[test]
    fn contains_examples() {
        let a5 = PermGroup::alternating(5);
        assert!(!a5.contains(&Perm::parse("(0 1)", 5).unwrap()));
        // a long product of generators stays inside
        let gens = a5.generators().to_vec();
        let mut w = Perm::identity(5);
        for i in 0..50 {
            w = w.compose(&gens[i % gens.len()]);
        }
        assert!(a5.contains(&w));
    }

    #[test]
    fn pointwise_stabiliser_examples() {
        let s8 = PermGroup::symmetric(8);
        assert_eq!(
            s8.pointwise_stabiliser(&[]).unwrap().order(),
            BigUint::from(40320u32)
        );
        let t = s8.pointwise_stabiliser(&[0, 1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(t.order(), BigUint::one());
        let a8 = PermGroup::alternating(8);
        assert_eq!(
            a8.pointwise_stabiliser(&[0, 1, 2, 3, 4, 5]).unwrap().order(),
            BigUint::one()
        );
        assert_eq!(
            a8.pointwise_stabiliser(&[0, 1, 2, 3, 4]).unwrap().order(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn setwise_pair_stabiliser_s4() {
        let s4 = PermGroup::symmetric(4);
        let st = s4.setwise_pair_stabiliser(0, 1).unwrap();
        // S2 x S2 = 4 elements
        assert_eq!(st.order(), BigUint::from(4u32));
        for g in st.elements(100).unwrap() {
            let (a, b) = (g.apply(0), g.apply(1));
            assert!((a == 0 && b == 1) || (a == 1 && b == 0));
        }
    }

    #[test]
    fn double_coset_arithmetic() {
        // H = S4 x S4 block subgroup inside S8 via S4 wr S2 would need actions;
        // here: x ∈ H gives |HxH| = |H| and |H ∩ H^x| = |H|
        let h = PermGroup::symmetric(4);
        let x = Perm::parse("(0 1 2)", 4).unwrap();
        assert_eq!(
            conjugates_and_intersection_order(&h, &x, 1000).unwrap(),
            BigUint::from(24u32)
        );
        assert_eq!(double_coset_size(&h, &x, 1000).unwrap(), BigUint::from(24u32));
        let triv = PermGroup::trivial(4);
        assert_eq!(
            conjugates_and_intersection_order(&triv, &x, 10).unwrap(),
            BigUint::one()
        );
    }

    #[test]
    fn normaliser_by_filter_d10_in_a5() {
        let a5 = PermGroup::alternating(5);
        let c5 = PermGroup::new(5, vec![Perm::parse("(0 1 2 3 4)", 5).unwrap()]).unwrap();
        let n = a5.normaliser_by_filter(&c5, 100).unwrap();
        assert_eq!(n.order(), BigUint::from(10u32));
        assert!(a5.contains_group(&n));
    }

    #[test]
    fn even_subgroup_of_s4wr() {
        let s4 = PermGroup::symmetric(4);
        let even = s4.even_subgroup(100).unwrap();
        assert_eq!(even.order(), BigUint::from(12u32));
    }
}
