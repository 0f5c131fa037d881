//! Streaming enumeration of all group elements from a stabiliser chain.

use super::chain::StabChain;
use super::perm::Perm;
use std::sync::Arc;

/// Iterates every element exactly once as a product of transversal
/// representatives, one per level, deepest level first.
pub struct ElementsIter<'a> {
    chain: &'a Arc<StabChain>,
    /// Odometer over orbit positions, level 0 fastest.
    idx: Vec<usize>,
    /// pre[j] = u_{k-1} · ... · u_j for the current odometer state.
    pre: Vec<Perm>,
    started: bool,
    done: bool,
}

impl<'a> ElementsIter<'a> {
    pub fn new(chain: &'a Arc<StabChain>) -> ElementsIter<'a> {
        let k = chain.level_count();
        ElementsIter {
            chain,
            idx: vec![0; k],
            pre: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn rep(&self, level: usize, pos: usize) -> Perm {
        if let Some(r) = self.chain.transversal_rep(level, pos) {
            return r.clone();
        }
        let x = self.chain.orbit_points(level)[pos];
        self.chain.urep(level, x)
    }

    fn rebuild_pre_from(&mut self, level: usize) {
        let k = self.chain.level_count();
        for j in (0..=level.min(k.saturating_sub(1))).rev() {
            let upper = if j + 1 < k {
                self.pre[j + 1].clone()
            } else {
                Perm::identity(self.chain.degree())
            };
            self.pre[j] = upper.compose(&self.rep(j, self.idx[j]));
        }
    }
}

impl<'a> Iterator for ElementsIter<'a> {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if self.done {
            return None;
        }
        let k = self.chain.level_count();
        if !self.started {
            self.started = true;
            if k == 0 {
                self.done = true;
                return Some(Perm::identity(self.chain.degree()));
            }
            self.pre = vec![Perm::identity(self.chain.degree()); k];
            self.rebuild_pre_from(k - 1);
            return Some(self.pre[0].clone());
        }
        // advance odometer, level 0 fastest
        let mut j = 0;
        loop {
            if j == k {
                self.done = true;
                return None;
            }
            self.idx[j] += 1;
            if self.idx[j] < self.chain.orbit_len(j) {
                break;
            }
            self.idx[j] = 0;
            j += 1;
        }
        self.rebuild_pre_from(j);
        Some(self.pre[0].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::PermGroup;
    use std::collections::HashSet;

    #[test]
    fn enumerates_s4_once_each() {
        let s4 = PermGroup::symmetric(4);
        let elems: Vec<Perm> = s4.elements(100).unwrap().collect();
        assert_eq!(elems.len(), 24);
        let set: HashSet<Perm> = elems.into_iter().collect();
        assert_eq!(set.len(), 24);
        assert!(set.contains(&Perm::identity(4)));
    }

    #[test]
    fn enumerates_trivial() {
        let t = PermGroup::trivial(3);
        let elems: Vec<Perm> = t.elements(10).unwrap().collect();
        assert_eq!(elems, vec![Perm::identity(3)]);
    }

    #[test]
    fn budget_respected() {
        let s8 = PermGroup::symmetric(8);
        assert!(s8.elements(100).is_err());
    }
}
