//! Randomized Schreier-Sims with a deterministic verification pass.
//!
//! A chain is either certified against a known target order (construction runs
//! until the product of orbit lengths reaches it) or, when no order is known,
//! closed under the full deterministic Schreier test. Either way the returned
//! chain is unconditionally correct.

use num_bigint::BigUint;
use num_traits::One;

use super::perm::Perm;
use super::rand::RattleState;
use super::PermError;

struct Level {
    beta: u32,
    /// Orbit of beta under the generators usable at this level, BFS order.
    orbit: Vec<u32>,
    /// Position of a point in `orbit`, or -1.
    pos: Vec<i32>,
    /// Global index of the generator whose edge reached the point (-1 at root).
    from_gen: Vec<i32>,
    from_pt: Vec<u32>,
    /// Explicit coset representatives by orbit position, built on demand.
    transversal: Option<Vec<Perm>>,
}

impl Level {
    fn new(beta: u32, degree: usize) -> Level {
        let mut pos = vec![-1i32; degree];
        pos[beta as usize] = 0;
        let mut from_gen = vec![-1i32; degree];
        from_gen[beta as usize] = -1;
        Level {
            beta,
            orbit: vec![beta],
            pos,
            from_gen,
            from_pt: vec![0; degree],
            transversal: None,
        }
    }

    fn contains(&self, x: u32) -> bool {
        self.pos[x as usize] >= 0
    }
}

impl std::fmt::Debug for StabChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "StabChain(degree {}, base {:?}, order {})",
            self.degree,
            self.base(),
            self.order
        )
    }
}

pub struct StabChain {
    degree: usize,
    strong_gens: Vec<Perm>,
    gen_invs: Vec<Perm>,
    /// Insertion level per strong generator; the generator fixes the first
    /// `gen_level[i]` base points, so it is usable at levels `<= gen_level[i]`.
    gen_level: Vec<usize>,
    levels: Vec<Level>,
    order: BigUint,
    /// Leading levels that came from the prescribed base prefix.
    hint_levels: usize,
}

#[derive(Clone, Debug)]
pub struct BuildOpts {
    pub seed: u64,
    pub base_hint: Vec<u32>,
    pub target_order: Option<BigUint>,
}

impl Default for BuildOpts {
    fn default() -> Self {
        BuildOpts {
            seed: 0xBA5E,
            base_hint: Vec::new(),
            target_order: None,
        }
    }
}

const SUCCESS_STREAK: u32 = 24;
const MAX_ROUNDS: u64 = 2_000_000;

impl StabChain {
    pub fn build(degree: usize, gens: &[Perm], opts: BuildOpts) -> Result<StabChain, PermError> {
        for g in gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch);
            }
        }
        let mut chain = StabChain {
            degree,
            strong_gens: Vec::new(),
            gen_invs: Vec::new(),
            gen_level: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
            hint_levels: 0,
        };
        // Prescribed base prefix: one level per distinct hint point, possibly
        // with a singleton orbit. The stabiliser of the prefix is then exactly
        // the group generated by the strong generators below it.
        for &b in &opts.base_hint {
            if b as usize >= degree {
                return Err(PermError::PointOutOfRange);
            }
            if chain.levels.iter().any(|l| l.beta == b) {
                continue;
            }
            chain.levels.push(Level::new(b, degree));
        }
        chain.hint_levels = chain.levels.len();

        let live: Vec<&Perm> = gens.iter().filter(|g| !g.is_identity()).collect();
        for g in &live {
            chain.insert_element((*g).clone());
        }
        if live.is_empty() {
            chain.recompute_order();
            return Ok(chain);
        }

        let mut rattle = RattleState::new(gens, degree, opts.seed);
        let mut streak = 0u32;
        let mut rounds = 0u64;
        loop {
            if let Some(t) = &opts.target_order {
                chain.recompute_order();
                match chain.order.cmp(t) {
                    std::cmp::Ordering::Equal => return Ok(chain),
                    std::cmp::Ordering::Greater => {
                        return Err(PermError::OrderMismatch {
                            declared: t.clone(),
                            actual: chain.order.clone(),
                        })
                    }
                    std::cmp::Ordering::Less => {}
                }
            }
            if streak >= SUCCESS_STREAK {
                // Deterministic closure; with a target this also resolves a
                // declared order that is too large.
                if chain.verify_schreier() {
                    chain.recompute_order();
                    if let Some(t) = &opts.target_order {
                        if &chain.order != t {
                            return Err(PermError::OrderMismatch {
                                declared: t.clone(),
                                actual: chain.order.clone(),
                            });
                        }
                    }
                    return Ok(chain);
                }
                streak = 0;
            }
            rounds += 1;
            if rounds > MAX_ROUNDS {
                return Err(PermError::ConstructionStalled);
            }
            let r = rattle.next_element();
            if chain.insert_element(r) {
                streak = 0;
            } else {
                streak += 1;
            }
        }
    }

    /// Feed one element into a chain that is being grown towards a known
    /// order; errors if the accumulated group overshoots the target.
    pub(crate) fn insert_for_target(&mut self, g: Perm, target: &BigUint) -> Result<(), PermError> {
        if self.insert_element(g) {
            self.recompute_order();
            if &self.order > target {
                return Err(PermError::OrderMismatch {
                    declared: target.clone(),
                    actual: self.order.clone(),
                });
            }
        }
        Ok(())
    }

    /// Sift `g` and insert the residue as a strong generator if nontrivial.
    /// Returns true if something was inserted.
    fn insert_element(&mut self, g: Perm) -> bool {
        match self.sift_from(0, g) {
            SiftOutcome::Member => false,
            SiftOutcome::Residue { level, residue } => {
                self.insert_at(level, residue);
                true
            }
        }
    }

    fn insert_at(&mut self, level: usize, residue: Perm) {
        debug_assert!(!residue.is_identity());
        if level == self.levels.len() {
            // need a fresh base point moved by the residue
            let beta = (0..self.degree as u32)
                .find(|&i| residue.apply(i) != i)
                .expect("nontrivial residue moves a point");
            self.levels.push(Level::new(beta, self.degree));
        }
        let idx = self.strong_gens.len();
        self.gen_invs.push(residue.inverse());
        self.strong_gens.push(residue);
        self.gen_level.push(level);
        for j in 0..=level {
            self.extend_orbit(j, idx);
        }
    }

    /// Grow the orbit at `level` after the generator `new_gen` became usable.
    fn extend_orbit(&mut self, level: usize, new_gen: usize) {
        let mut queue: Vec<u32> = Vec::new();
        {
            let g = &self.strong_gens[new_gen];
            let lv = &mut self.levels[level];
            lv.transversal = None;
            for i in 0..lv.orbit.len() {
                let p = lv.orbit[i];
                let y = g.apply(p);
                if lv.pos[y as usize] < 0 {
                    lv.pos[y as usize] = lv.orbit.len() as i32;
                    lv.orbit.push(y);
                    lv.from_gen[y as usize] = new_gen as i32;
                    lv.from_pt[y as usize] = p;
                    queue.push(y);
                }
            }
        }
        // close under every usable generator from the newly added points
        let usable: Vec<usize> = (0..self.strong_gens.len())
            .filter(|&i| self.gen_level[i] >= level)
            .collect();
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            for &gi in &usable {
                let y = self.strong_gens[gi].apply(p);
                let lv = &mut self.levels[level];
                if lv.pos[y as usize] < 0 {
                    lv.pos[y as usize] = lv.orbit.len() as i32;
                    lv.orbit.push(y);
                    lv.from_gen[y as usize] = gi as i32;
                    lv.from_pt[y as usize] = p;
                    queue.push(y);
                }
            }
        }
    }

    fn recompute_order(&mut self) {
        let mut o = BigUint::one();
        for l in &self.levels {
            o *= BigUint::from(l.orbit.len());
        }
        self.order = o;
    }

    /// Coset representative u with beta^u = x at `level`.
    pub fn urep(&self, level: usize, x: u32) -> Perm {
        let lv = &self.levels[level];
        debug_assert!(lv.contains(x));
        let mut path = Vec::new();
        let mut cur = x;
        while cur != lv.beta {
            let gi = lv.from_gen[cur as usize];
            path.push(gi as usize);
            cur = lv.from_pt[cur as usize];
        }
        let mut acc = Perm::identity(self.degree);
        for &gi in path.iter().rev() {
            acc = acc.compose(&self.strong_gens[gi]);
        }
        acc
    }

    /// Inverse coset representative at `level` for the point `x`.
    pub fn urep_inv(&self, level: usize, x: u32) -> Perm {
        let lv = &self.levels[level];
        debug_assert!(lv.contains(x));
        let mut acc = Perm::identity(self.degree);
        let mut cur = x;
        while cur != lv.beta {
            let gi = lv.from_gen[cur as usize] as usize;
            acc = acc.compose(&self.gen_invs[gi]);
            cur = lv.from_pt[cur as usize];
        }
        acc
    }

    fn sift_from(&self, start: usize, mut g: Perm) -> SiftOutcome {
        for j in start..self.levels.len() {
            let x = g.apply(self.levels[j].beta);
            if x == self.levels[j].beta {
                continue;
            }
            if !self.levels[j].contains(x) {
                return SiftOutcome::Residue { level: j, residue: g };
            }
            g = g.compose(&self.urep_inv(j, x));
        }
        if g.is_identity() {
            SiftOutcome::Member
        } else {
            SiftOutcome::Residue {
                level: self.levels.len(),
                residue: g,
            }
        }
    }

    /// One full deterministic Schreier pass; inserts the first failing
    /// Schreier generator and reports false, or returns true when clean.
    fn verify_schreier(&mut self) -> bool {
        for j in (0..self.levels.len()).rev() {
            let usable: Vec<usize> = (0..self.strong_gens.len())
                .filter(|&i| self.gen_level[i] >= j)
                .collect();
            for oi in 0..self.levels[j].orbit.len() {
                let x = self.levels[j].orbit[oi];
                let ux = self.urep(j, x);
                for &gi in &usable {
                    let y = self.strong_gens[gi].apply(x);
                    debug_assert!(self.levels[j].contains(y), "orbit closed by construction");
                    let schreier = ux
                        .compose(&self.strong_gens[gi])
                        .compose(&self.urep_inv(j, y));
                    if let SiftOutcome::Residue { level, residue } =
                        self.sift_from(j + 1, schreier)
                    {
                        self.insert_at(level.max(j + 1), residue);
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.beta).collect()
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit_len(&self, level: usize) -> usize {
        self.levels[level].orbit.len()
    }

    pub fn orbit_points(&self, level: usize) -> &[u32] {
        &self.levels[level].orbit
    }

    pub fn level_beta(&self, level: usize) -> u32 {
        self.levels[level].beta
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        matches!(self.sift_from(0, g.clone()), SiftOutcome::Member)
    }

    /// Residue of `g` after sifting; identity iff `g` is a member.
    pub fn sift(&self, g: &Perm) -> Perm {
        match self.sift_from(0, g.clone()) {
            SiftOutcome::Member => Perm::identity(self.degree),
            SiftOutcome::Residue { residue, .. } => residue,
        }
    }

    /// Strong generators fixing the first `level` base points.
    pub fn stabiliser_gens(&self, level: usize) -> Vec<Perm> {
        (0..self.strong_gens.len())
            .filter(|&i| self.gen_level[i] >= level)
            .map(|i| self.strong_gens[i].clone())
            .collect()
    }

    /// Order of the pointwise stabiliser of the first `level` base points.
    pub fn stabiliser_order(&self, level: usize) -> BigUint {
        let mut o = BigUint::one();
        for l in &self.levels[level.min(self.levels.len())..] {
            o *= BigUint::from(l.orbit.len());
        }
        o
    }

    pub fn hint_levels(&self) -> usize {
        self.hint_levels
    }

    /// Precompute explicit transversal permutations when the total size is
    /// reasonable; speeds up element enumeration and canonical coset keys.
    pub fn ensure_transversals(&mut self, cell_limit: usize) {
        for j in 0..self.levels.len() {
            if self.levels[j].transversal.is_some() {
                continue;
            }
            if self.levels[j].orbit.len() * self.degree > cell_limit {
                continue;
            }
            let reps: Vec<Perm> = self.levels[j]
                .orbit
                .clone()
                .iter()
                .map(|&x| self.urep(j, x))
                .collect();
            self.levels[j].transversal = Some(reps);
        }
    }

    /// Explicit transversal rep by orbit position, if precomputed.
    pub fn transversal_rep(&self, level: usize, orbit_pos: usize) -> Option<&Perm> {
        self.levels[level]
            .transversal
            .as_ref()
            .map(|t| &t[orbit_pos])
    }

    pub fn orbit_pos(&self, level: usize, x: u32) -> Option<usize> {
        let p = self.levels[level].pos[x as usize];
        (p >= 0).then_some(p as usize)
    }
}

enum SiftOutcome {
    Member,
    Residue { level: usize, residue: Perm },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_of(gens: &[&str], degree: usize) -> StabChain {
        let gens: Vec<Perm> = gens
            .iter()
            .map(|s| Perm::parse_cycles(s, degree).unwrap())
            .collect();
        StabChain::build(degree, &gens, BuildOpts::default()).unwrap()
    }

    #[test]
    fn s8_order() {
        let c = chain_of(&["(0 1)", "(0 1 2 3 4 5 6 7)"], 8);
        assert_eq!(c.order(), &BigUint::from(40320u32));
        assert!(c.contains(&Perm::parse_cycles("(3 5)", 8).unwrap()));
    }

    #[test]
    fn a5_membership() {
        let c = chain_of(&["(0 1 2)", "(0 1 2 3 4)"], 5);
        assert_eq!(c.order(), &BigUint::from(60u32));
        // a transposition is odd, hence outside A5
        assert!(!c.contains(&Perm::parse_cycles("(0 1)", 5).unwrap()));
    }

    #[test]
    fn trivial_group() {
        let c = StabChain::build(4, &[Perm::identity(4)], BuildOpts::default()).unwrap();
        assert_eq!(c.order(), &BigUint::one());
        assert!(c.contains(&Perm::identity(4)));
        assert!(!c.contains(&Perm::parse_cycles("(0 1)", 4).unwrap()));
    }

    #[test]
    fn base_hint_prefix() {
        let gens = vec![
            Perm::parse_cycles("(0 1)", 8).unwrap(),
            Perm::parse_cycles("(0 1 2 3 4 5 6 7)", 8).unwrap(),
        ];
        let c = StabChain::build(
            8,
            &gens,
            BuildOpts {
                base_hint: vec![0, 1, 2, 3, 4, 5, 6],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(c.order(), &BigUint::from(40320u32));
        // stabiliser of 7 points of S8 is trivial
        assert_eq!(c.stabiliser_order(7), BigUint::one());
        assert_eq!(&c.base()[..7], &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn known_order_target() {
        let gens = vec![
            Perm::parse_cycles("(0 1)", 8).unwrap(),
            Perm::parse_cycles("(0 1 2 3 4 5 6 7)", 8).unwrap(),
        ];
        let c = StabChain::build(
            8,
            &gens,
            BuildOpts {
                target_order: Some(BigUint::from(40320u32)),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(c.order(), &BigUint::from(40320u32));
        // wrong declared order is rejected loudly
        let err = StabChain::build(
            8,
            &gens,
            BuildOpts {
                target_order: Some(BigUint::from(40321u32)),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, PermError::OrderMismatch { .. }));
    }

    #[test]
    fn urep_maps_beta() {
        let c = chain_of(&["(0 1)", "(0 1 2 3 4 5 6 7)"], 8);
        for j in 0..c.level_count() {
            let beta = c.level_beta(j);
            for &x in c.orbit_points(j) {
                assert_eq!(c.urep(j, x).apply(beta), x);
                assert_eq!(c.urep_inv(j, x).apply(x), beta);
            }
        }
    }
}
