//! Product-replacement ("rattle") random element generation.
//!
//! No uniformity guarantee is claimed; the distribution is adequate for the
//! search heuristics and the certified constructions never rely on it.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::perm::Perm;

pub struct RattleState {
    slots: Vec<Perm>,
    acc: Perm,
    rng: ChaCha8Rng,
}

const MIN_SLOTS: usize = 8;
const BURN_IN: usize = 60;

impl RattleState {
    pub fn new(gens: &[Perm], degree: usize, seed: u64) -> RattleState {
        let mut slots: Vec<Perm> = gens
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        if slots.is_empty() {
            slots.push(Perm::identity(degree));
        }
        let base_len = slots.len();
        while slots.len() < MIN_SLOTS {
            let g = slots[slots.len() % base_len].clone();
            slots.push(g);
        }
        let mut state = RattleState {
            slots,
            acc: Perm::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..BURN_IN {
            state.step();
        }
        state
    }

    fn step(&mut self) {
        let n = self.slots.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let invert: bool = self.rng.gen();
        let rhs = if invert {
            self.slots[j].inverse()
        } else {
            self.slots[j].clone()
        };
        self.slots[i] = self.slots[i].compose(&rhs);
        self.acc = self.acc.compose(&self.slots[i]);
    }

    pub fn next_element(&mut self) -> Perm {
        self.step();
        self.acc.clone()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stays_in_group_closure() {
        // elements generated for C6 = <(0 1 2 3 4 5)> are powers of the cycle
        let c = Perm::parse_cycles("(0 1 2 3 4 5)", 6).unwrap();
        let mut st = RattleState::new(&[c.clone()], 6, 7);
        let powers: Vec<Perm> = (0..6).map(|k| c.pow(k)).collect();
        for _ in 0..100 {
            let g = st.next_element();
            assert!(powers.contains(&g));
        }
    }

    #[test]
    fn c2_frequency_balanced() {
        // empirical frequency of the non-identity element over 10^4 draws
        let t = Perm::parse_cycles("(0 1)", 2).unwrap();
        let mut st = RattleState::new(&[t.clone()], 2, 123);
        let mut hits = 0u32;
        for _ in 0..10_000 {
            if st.next_element() == t {
                hits += 1;
            }
        }
        let freq = hits as f64 / 10_000.0;
        assert!((0.45..=0.55).contains(&freq), "freq = {freq}");
    }
}
