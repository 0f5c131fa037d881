//! Certified subgroup handles for stabiliser descent.
//!
//! A `SubGrp` carries generators together with an exact order. Passing to a
//! point stabiliser divides the order by the orbit length; the generators of
//! the stabiliser are collected from sifted random elements until a chain of
//! exactly that order closes, so every handle stays certified.

use num_bigint::BigUint;
use num_traits::One;

use super::chain::{BuildOpts, StabChain};
use super::perm::Perm;
use super::rand::RattleState;
use super::PermError;

pub struct SubGrp {
    pub gens: Vec<Perm>,
    pub order: BigUint,
    degree: usize,
    rattle: Option<RattleState>,
    seed: u64,
}

impl Clone for SubGrp {
    fn clone(&self) -> Self {
        SubGrp {
            gens: self.gens.clone(),
            order: self.order.clone(),
            degree: self.degree,
            rattle: None,
            seed: self.seed,
        }
    }
}

struct OrbitData {
    points: Vec<u32>,
    pos: Vec<i32>,
    from_gen: Vec<u32>,
    from_pt: Vec<u32>,
}

impl SubGrp {
    pub fn new(gens: Vec<Perm>, degree: usize, order: BigUint) -> SubGrp {
        SubGrp {
            gens,
            order,
            degree,
            rattle: None,
            seed: 0x5B6,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.rattle = None;
    }

    fn orbit_data(&self, pt: u32) -> OrbitData {
        let mut od = OrbitData {
            points: vec![pt],
            pos: vec![-1; self.degree],
            from_gen: vec![0; self.degree],
            from_pt: vec![0; self.degree],
        };
        od.pos[pt as usize] = 0;
        let mut head = 0;
        while head < od.points.len() {
            let p = od.points[head];
            head += 1;
            for (gi, g) in self.gens.iter().enumerate() {
                let y = g.apply(p);
                if od.pos[y as usize] < 0 {
                    od.pos[y as usize] = od.points.len() as i32;
                    od.from_gen[y as usize] = gi as u32;
                    od.from_pt[y as usize] = p;
                    od.points.push(y);
                }
            }
        }
        od
    }

    /// Orbits of the group on the whole domain, as (representative, length).
    pub fn orbit_reps(&self) -> Vec<(u32, usize)> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree as u32 {
            if seen[p as usize] {
                continue;
            }
            let od = self.orbit_data(p);
            for &x in &od.points {
                seen[x as usize] = true;
            }
            out.push((p, od.points.len()));
        }
        out
    }

    pub fn orbit_len(&self, pt: u32) -> usize {
        self.orbit_data(pt).points.len()
    }

    /// Order of the stabiliser of `pt`, by orbit division alone.
    pub fn stabiliser_order(&self, pt: u32) -> BigUint {
        &self.order / BigUint::from(self.orbit_len(pt))
    }

    fn draw(&mut self) -> Perm {
        if self.rattle.is_none() {
            self.rattle = Some(RattleState::new(&self.gens, self.degree, self.seed));
        }
        self.rattle.as_mut().unwrap().next_element()
    }

    /// Stabiliser of `pt` as a certified handle. The order is |self|/|orbit|;
    /// generators are gathered until a chain of exactly that order closes.
    pub fn stabiliser(&mut self, pt: u32) -> Result<SubGrp, PermError> {
        let od = self.orbit_data(pt);
        let orbit_len = od.points.len();
        let target = &self.order / BigUint::from(orbit_len);
        if target.is_one() {
            return Ok(SubGrp::new(vec![], self.degree, BigUint::one()));
        }
        if orbit_len == 1 {
            let mut c = self.clone();
            c.seed = self.seed.wrapping_add(1);
            return Ok(c);
        }
        // incremental chain fed with sifted random stabiliser elements
        let mut chain = StabChain::build(self.degree, &[], BuildOpts::default())?;
        let gen_invs: Vec<Perm> = self.gens.iter().map(|g| g.inverse()).collect();
        let mut rounds = 0u64;
        loop {
            if chain.order() == &target {
                break;
            }
            rounds += 1;
            if rounds > 200_000 {
                return Err(PermError::ConstructionStalled);
            }
            let r = self.draw();
            let x = r.apply(pt);
            // u maps pt -> x along the Schreier tree; r·u⁻¹ stabilises pt
            let mut s = r;
            let mut cur = x;
            while cur != pt {
                let gi = od.from_gen[cur as usize] as usize;
                s = s.compose(&gen_invs[gi]);
                cur = od.from_pt[cur as usize];
            }
            debug_assert_eq!(s.apply(pt), pt);
            chain.insert_for_target(s, &target)?;
        }
        let mut sub = SubGrp::new(chain.stabiliser_gens(0), self.degree, target);
        sub.seed = self.seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(pt as u64);
        Ok(sub)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::PermGroup;

    #[test]
    fn descent_through_s5() {
        let s5 = PermGroup::symmetric(5);
        let mut root = s5.as_subgrp();
        assert_eq!(root.order, BigUint::from(120u32));
        let mut s0 = root.stabiliser(0).unwrap();
        assert_eq!(s0.order, BigUint::from(24u32));
        let mut s01 = s0.stabiliser(1).unwrap();
        assert_eq!(s01.order, BigUint::from(6u32));
        let s012 = s01.stabiliser(2).unwrap();
        assert_eq!(s012.order, BigUint::from(2u32));
        assert_eq!(s012.stabiliser_order(3), BigUint::one());
        // all collected generators really fix the points
        for g in &s01.gens {
            assert_eq!(g.apply(0), 0);
            assert_eq!(g.apply(1), 1);
        }
    }

    #[test]
    fn orbit_reps_cover_domain() {
        let g = PermGroup::new(
            6,
            vec![Perm::parse("(0 1 2)", 6).unwrap(), Perm::parse("(3 4)", 6).unwrap()],
        )
        .unwrap();
        let root = g.as_subgrp();
        let reps = root.orbit_reps();
        let total: usize = reps.iter().map(|(_, l)| l).sum();
        assert_eq!(total, 6);
        assert_eq!(reps.len(), 3); // {0,1,2}, {3,4}, {5}
    }
}
