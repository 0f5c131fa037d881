//! Actions on m-dimensional subspaces of F_q^n, labelled canonically by
//! reduced row-echelon bases.

use super::ActionError;
use crate::gf::Field;
use crate::matgrp::{ClassicalForm, Matrix};
use crate::permcore::{Perm, PermGroup};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceConstraint {
    All,
    TotallyIsotropic,
    Nondegenerate,
}

/// The m-subspaces satisfying a constraint, with canonical RREF labels.
pub struct SubspaceDomain {
    pub field: Arc<Field>,
    pub n: usize,
    pub m: usize,
    /// Canonical labels: RREF basis rows flattened to length m*n.
    keys: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SubspaceDomain {
    pub fn size(&self) -> usize {
        self.keys.len()
    }

    pub fn label(&self, i: usize) -> String {
        let rows: Vec<String> = self.keys[i]
            .chunks(self.n)
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("<{}>", rows.join(","))
    }

    /// Index of the span of the given row vectors, if it lies in the domain.
    pub fn index_of_span(&self, rows: &[Vec<u32>]) -> Option<usize> {
        let key = rref_key(&self.field, rows, self.n)?;
        self.index.get(&key).copied()
    }

    pub fn key(&self, i: usize) -> &[u32] {
        &self.keys[i]
    }

    pub fn basis_rows(&self, i: usize) -> Vec<Vec<u32>> {
        self.keys[i].chunks(self.n).map(|c| c.to_vec()).collect()
    }
}

/// Reduced row echelon form of the span; None if the rows are dependent.
fn rref_key(field: &Arc<Field>, rows: &[Vec<u32>], n: usize) -> Option<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let k = m.len();
    let mut pivot_row = 0usize;
    for col in 0..n {
        let Some(r) = (pivot_row..k).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = field.inv(m[pivot_row][col]).unwrap();
        for j in 0..n {
            m[pivot_row][j] = field.mul(m[pivot_row][j], inv);
        }
        for r2 in 0..k {
            if r2 == pivot_row || m[r2][col] == 0 {
                continue;
            }
            let f = m[r2][col];
            for j in 0..n {
                let s = field.mul(f, m[pivot_row][j]);
                m[r2][j] = field.sub(m[r2][j], s);
            }
        }
        pivot_row += 1;
        if pivot_row == k {
            break;
        }
    }
    if pivot_row < k {
        return None; // dependent rows
    }
    Some(m.into_iter().flatten().collect())
}

/// Gaussian binomial [n choose m]_q by the rank-generating recursion
/// [n,m] = [n-1,m-1] + q^m [n-1,m]; used as an independent count oracle.
pub fn gaussian_binomial(n: usize, m: usize, q: u64) -> u64 {
    if m > n {
        return 0;
    }
    if m == 0 || m == n {
        return 1;
    }
    gaussian_binomial(n - 1, m - 1, q) + q.pow(m as u32) * gaussian_binomial(n - 1, m, q)
}

fn enumerate_rref(field: &Arc<Field>, n: usize, m: usize, budget: u64) -> Result<Vec<Vec<u32>>, ActionError> {
    let total = gaussian_binomial(n, m, field.q() as u64);
    if total > budget {
        return Err(ActionError::DomainBudget {
            size: total,
            budget,
        });
    }
    // choose pivot columns, then fill free entries
    let mut out = Vec::with_capacity(total as usize);
    let mut pivots: Vec<usize> = (0..m).collect();
    loop {
        // free positions: row i, columns after pivots[i] that are not pivots
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for col in p + 1..n {
                if !pivots.contains(&col) {
                    free.push((i, col));
                }
            }
        }
        let q = field.q() as u64;
        let combos = q.pow(free.len() as u32);
        for code in 0..combos {
            let mut rows = vec![vec![0u32; n]; m];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            let mut c = code;
            for &(i, col) in &free {
                rows[i][col] = (c % q) as u32;
                c /= q;
            }
            out.push(rows.into_iter().flatten().collect());
        }
        // next pivot combination in lexicographic order
        let mut i = m;
        loop {
            if i == 0 {
                debug_assert_eq!(out.len() as u64, total);
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < n - (m - i) {
                pivots[i] += 1;
                for j in i + 1..m {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn satisfies(
    field: &Arc<Field>,
    key: &[u32],
    n: usize,
    m: usize,
    constraint: SubspaceConstraint,
    form: Option<&ClassicalForm>,
) -> Result<bool, ActionError> {
    match constraint {
        SubspaceConstraint::All => Ok(true),
        SubspaceConstraint::TotallyIsotropic => {
            let form = form.ok_or(ActionError::FormRequired)?;
            let rows: Vec<&[u32]> = key.chunks(n).collect();
            for (i, r) in rows.iter().enumerate() {
                if !form.is_isotropic_vec(r) {
                    return Ok(false);
                }
                for r2 in rows.iter().skip(i + 1) {
                    if form.bilinear(r, r2) != 0 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        SubspaceConstraint::Nondegenerate => {
            let form = form.ok_or(ActionError::FormRequired)?;
            // Gram matrix of the restriction must be nonsingular
            let rows: Vec<&[u32]> = key.chunks(n).collect();
            let mut gram_rows = Vec::with_capacity(m);
            for r in &rows {
                let mut row = Vec::with_capacity(m);
                for r2 in &rows {
                    row.push(form.bilinear(r, r2));
                }
                gram_rows.push(row);
            }
            let g = Matrix::from_rows(field, &gram_rows);
            Ok(g.det() != 0)
        }
    }
}

/// Build the permutation action of the generators on qualifying m-subspaces.
pub fn subspace_action(
    gens: &[Matrix],
    m: usize,
    constraint: SubspaceConstraint,
    form: Option<&ClassicalForm>,
    budget: u64,
) -> Result<(Vec<Perm>, SubspaceDomain), ActionError> {
    assert!(!gens.is_empty());
    let field = gens[0].field().clone();
    let n = gens[0].dim();
    let all = enumerate_rref(&field, n, m, budget)?;
    let mut keys = Vec::new();
    for key in all {
        if satisfies(&field, &key, n, m, constraint, form)? {
            keys.push(key);
        }
    }
    let index: HashMap<Vec<u32>, usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    let domain = SubspaceDomain {
        field: field.clone(),
        n,
        m,
        keys,
        index,
    };
    let perms = gens
        .iter()
        .map(|g| matrix_perm(&domain, g))
        .collect::<Option<Vec<Perm>>>()
        .ok_or_else(|| ActionError::Unsupported("matrix does not preserve the domain".into()))?;
    Ok((perms, domain))
}

fn matrix_perm(domain: &SubspaceDomain, g: &Matrix) -> Option<Perm> {
    let n = domain.n;
    let images: Option<Vec<u32>> = domain
        .keys
        .iter()
        .map(|key| {
            let rows: Vec<Vec<u32>> = key.chunks(n).map(|r| g.apply_row(r)).collect();
            let newkey = rref_key(&domain.field, &rows, n)?;
            domain.index.get(&newkey).map(|&i| i as u32)
        })
        .collect();
    Perm::from_images(images?).ok()
}

/// Semilinear map: entrywise Frobenius iterate on subspace labels.
pub fn frobenius_perm_on_subspaces(domain: &SubspaceDomain, j: u32) -> Perm {
    let n = domain.n;
    let field = &domain.field;
    let images: Vec<u32> = domain
        .keys
        .iter()
        .map(|key| {
            let rows: Vec<Vec<u32>> = key
                .chunks(n)
                .map(|r| r.iter().map(|&c| field.frobenius(c, j)).collect())
                .collect();
            let newkey = rref_key(field, &rows, n).expect("frobenius preserves rank");
            domain.index[&newkey] as u32
        })
        .collect();
    Perm::from_images(images).expect("frobenius permutes the domain")
}

/// Duality map U -> U^perp with respect to the standard dot product; only a
/// permutation of the domain when m = n - m domains coincide as index sets
/// requires m*2 = n.
pub fn perp_perm_on_subspaces(domain: &SubspaceDomain) -> Option<Perm> {
    if 2 * domain.m != domain.n {
        return None;
    }
    let n = domain.n;
    let field = &domain.field;
    let images: Option<Vec<u32>> = domain
        .keys
        .iter()
        .map(|key| {
            let rows: Vec<&[u32]> = key.chunks(n).collect();
            let perp = kernel_basis(field, &rows, n);
            let newkey = rref_key(field, &perp, n)?;
            domain.index.get(&newkey).map(|&i| i as u32)
        })
        .collect();
    Perm::from_images(images?).ok()
}

/// Basis of {v : v . r = 0 for all rows r}.
fn kernel_basis(field: &Arc<Field>, rows: &[&[u32]], n: usize) -> Vec<Vec<u32>> {
    // bring the rows to RREF, then read off the free-variable solutions
    let owned: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
    let key = rref_key(field, &owned, n).expect("independent rows");
    let m = rows.len();
    let rref: Vec<&[u32]> = key.chunks(n).collect();
    let mut pivots = Vec::new();
    for r in &rref {
        let p = r.iter().position(|&c| c != 0).unwrap();
        pivots.push(p);
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![0u32; n];
        v[fc] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            // v[p] = -rref[i][fc]
            v[p] = field.neg(rref[i][fc]);
        }
        debug_assert_eq!(m + free.len(), n);
        basis.push(v);
    }
    basis
}

/// Permutation group on subspaces with a known matrix-group order divided by
/// the scalar kernel.
pub fn projective_group(
    perms: Vec<Perm>,
    domain: &SubspaceDomain,
    matrix_order: &num_bigint::BigUint,
    scalar_count: &num_bigint::BigUint,
) -> Result<PermGroup, ActionError> {
    let order = matrix_order / scalar_count;
    Ok(PermGroup::with_known_order(domain.size(), perms, order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::{classical_generators, MatGroupSpec};
    use num_traits::ToPrimitive;

    #[test]
    fn projective_line_sl2_7() {
        let mg = classical_generators(&"SL-2-7".parse::<MatGroupSpec>().unwrap()).unwrap();
        let (perms, dom) =
            subspace_action(&mg.gens, 1, SubspaceConstraint::All, None, 1000).unwrap();
        assert_eq!(dom.size(), 8); // q + 1 points
        let g = projective_group(perms, &dom, &mg.expected_order, &mg.scalar_count).unwrap();
        assert_eq!(g.order().to_u64().unwrap(), 168); // PSL(2,7)
    }

    #[test]
    fn gaussian_binomial_matches_enumeration() {
        let f3 = crate::gf::Field::new(3, 1).unwrap();
        for (n, m) in [(4, 2), (4, 1), (5, 2)] {
            let count = enumerate_rref(&f3, n, m, 10_000_000).unwrap().len() as u64;
            assert_eq!(count, gaussian_binomial(n, m, 3), "n={n} m={m}");
        }
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
    }

    #[test]
    fn two_subspaces_f3_4_sl4_3() {
        let mg = classical_generators(&"SL-4-3".parse::<MatGroupSpec>().unwrap()).unwrap();
        let (perms, dom) =
            subspace_action(&mg.gens, 2, SubspaceConstraint::All, None, 1000000).unwrap();
        assert_eq!(dom.size(), 130);
        let g = projective_group(perms, &dom, &mg.expected_order, &mg.scalar_count).unwrap();
        // PSL(4,3) has order 6065280 and acts faithfully here
        assert_eq!(g.order().to_u64().unwrap(), 6_065_280);
    }

    #[test]
    fn isotropic_points_su5_2() {
        let mg = classical_generators(&"SU-5-2".parse::<MatGroupSpec>().unwrap()).unwrap();
        let (perms, dom) = subspace_action(
            &mg.gens,
            1,
            SubspaceConstraint::TotallyIsotropic,
            mg.form.as_ref(),
            1000000,
        )
        .unwrap();
        assert_eq!(dom.size(), 165);
        let g = projective_group(perms, &dom, &mg.expected_order, &mg.scalar_count).unwrap();
        assert_eq!(g.order().to_u64().unwrap(), 13_685_760);
    }

    #[test]
    fn homomorphism_on_random_words() {
        use ::rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mg = classical_generators(&"SL-2-7".parse::<MatGroupSpec>().unwrap()).unwrap();
        let (perms, dom) =
            subspace_action(&mg.gens, 1, SubspaceConstraint::All, None, 1000).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let i = rng.gen_range(0..mg.gens.len());
            let j = rng.gen_range(0..mg.gens.len());
            let prod = mg.gens[i].mul(&mg.gens[j]).unwrap();
            let prod_perm = matrix_perm(&dom, &prod).unwrap();
            assert_eq!(prod_perm, perms[i].compose(&perms[j]));
        }
    }

    #[test]
    fn perp_is_involution_on_l4_3() {
        let mg = classical_generators(&"SL-4-3".parse::<MatGroupSpec>().unwrap()).unwrap();
        let (_, dom) =
            subspace_action(&mg.gens, 2, SubspaceConstraint::All, None, 1000000).unwrap();
        let tau = perp_perm_on_subspaces(&dom).unwrap();
        assert!(tau.compose(&tau).is_identity());
        assert!(!tau.is_identity());
    }
}
