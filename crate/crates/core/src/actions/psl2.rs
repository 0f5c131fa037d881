//! The projective line for L2(q) and PGL2(q), outer extensions by diagonal and
//! field automorphisms, and the explicit soluble subgroups the tables need:
//! Borel subgroups, split and nonsplit torus normalisers, subfield and
//! extraspecial normalisers.

use super::subspaces::{frobenius_perm_on_subspaces, subspace_action, SubspaceConstraint, SubspaceDomain};
use super::ActionError;
use crate::gf::Field;
use crate::matgrp::Matrix;
use crate::permcore::{Perm, PermGroup};
use num_bigint::BigUint;
use num_integer::Integer;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Psl2Subgroup {
    /// Stabiliser of <e1>: the Borel subgroup.
    P1,
    /// Normaliser of the diagonal torus, type GL1(q) wr S2.
    SplitTorusNormaliser,
    /// Normaliser of a nonsplit torus, type GL1(q^2).
    NonsplitTorusNormaliser,
    /// Normaliser of the subfield subgroup L2(3), type GL2(3); q = 3^k only.
    SubfieldGl23,
    /// Normaliser of a Klein four-group, type 2^{1+2}_-.O2^-(2); q = p only.
    ExtraspecialNormaliser,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Psl2Ambient {
    Psl,
    Pgl,
}

/// Which subgroup of Out(L2(q)) = C_d x C_f a group realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterClass {
    /// G = L2(q)
    Socle,
    /// G = PGL2(q)
    Diagonal,
    /// G = <G0, phi^j>
    FieldPow(u32),
    /// G = <G0, delta * phi^j>
    DeltaFieldPow(u32),
    /// G = PGammaL2(q)
    Full,
}

impl OuterClass {
    pub fn label(&self, q: u64) -> String {
        match self {
            OuterClass::Socle => format!("L2({q})"),
            OuterClass::Diagonal => format!("PGL2({q})"),
            OuterClass::FieldPow(j) => format!("L2({q}).f{j}"),
            OuterClass::DeltaFieldPow(j) => format!("L2({q}).df{j}"),
            OuterClass::Full => format!("PGammaL2({q})"),
        }
    }
}

/// Everything needed to build the Table "L2(q)" rows for one q: the line
/// domain, the socle and PGL images, and the outer generators delta and phi.
pub struct Psl2Context {
    pub q: u64,
    pub p: u64,
    pub f: u32,
    /// d = gcd(2, q-1)
    pub d: u64,
    pub field: Arc<Field>,
    pub domain: SubspaceDomain,
    pub psl: PermGroup,
    pub pgl: PermGroup,
    pub delta: Perm,
    pub phi: Perm,
}

impl Psl2Context {
    pub fn new(q: u64) -> Result<Psl2Context, ActionError> {
        let (p, f) = crate::matgrp::prime_power(q)
            .ok_or_else(|| ActionError::Unsupported(format!("q = {q} is not a prime power")))?;
        if q > 128 {
            return Err(ActionError::Unsupported(format!("q = {q} exceeds 128")));
        }
        let field = Field::new(p, f)?;
        let d = if q % 2 == 0 { 1 } else { 2 };
        let mu = field.primitive();

        // SL2(q) generators
        let t1 = Matrix::from_rows(&field, &[vec![1, 1], vec![0, 1]]);
        let t2 = Matrix::from_rows(&field, &[vec![1, 0], vec![1, 1]]);
        let w = Matrix::from_rows(&field, &[vec![0, 1], vec![field.neg(1), 0]]);
        let mut sl_gens = vec![t1, t2, w];
        if q > 3 {
            sl_gens.push(Matrix::from_rows(
                &field,
                &[vec![mu, 0], vec![0, field.inv(mu).unwrap()]],
            ));
        }
        let diag_mu = Matrix::from_rows(&field, &[vec![mu, 0], vec![0, 1]]);

        let mut all = sl_gens.clone();
        all.push(diag_mu);
        let (perms, domain) = subspace_action(&all, 1, SubspaceConstraint::All, None, 10_000)?;
        let delta = perms[perms.len() - 1].clone();
        let psl_perms = perms[..perms.len() - 1].to_vec();
        let phi = frobenius_perm_on_subspaces(&domain, 1);

        let psl_order = BigUint::from(q) * BigUint::from(q * q - 1) / BigUint::from(d);
        let pgl_order = BigUint::from(q) * BigUint::from(q * q - 1);
        let psl = PermGroup::with_known_order(domain.size(), psl_perms.clone(), psl_order)?;
        let mut pgl_gens = psl_perms;
        pgl_gens.push(delta.clone());
        let pgl = PermGroup::with_known_order(domain.size(), pgl_gens, pgl_order)?;

        Ok(Psl2Context {
            q,
            p,
            f,
            d,
            field,
            domain,
            psl,
            pgl,
            delta,
            phi,
        })
    }

    /// Index of the 1-subspace spanned by (a, b).
    pub fn point(&self, a: u32, b: u32) -> u32 {
        self.domain
            .index_of_span(&[vec![a, b]])
            .expect("nonzero vector spans a line") as u32
    }

    pub fn ambient_group(&self, amb: Psl2Ambient) -> &PermGroup {
        match amb {
            Psl2Ambient::Psl => &self.psl,
            Psl2Ambient::Pgl => &self.pgl,
        }
    }

    /// The group G0.<outer> on the projective line, with its certified order.
    pub fn group(&self, outer: OuterClass) -> Result<PermGroup, ActionError> {
        let mut gens = self.psl.generators().to_vec();
        let index: u64 = match outer {
            OuterClass::Socle => 1,
            OuterClass::Diagonal => {
                gens.push(self.delta.clone());
                self.d
            }
            OuterClass::FieldPow(j) => {
                gens.push(self.phi.pow(j as i64));
                (self.f / self.f.gcd(&j)) as u64
            }
            OuterClass::DeltaFieldPow(j) => {
                gens.push(self.delta.compose(&self.phi.pow(j as i64)));
                let field_part = (self.f / self.f.gcd(&j)) as u64;
                field_part.lcm(&self.d)
            }
            OuterClass::Full => {
                gens.push(self.delta.clone());
                gens.push(self.phi.clone());
                self.d * self.f as u64
            }
        };
        let order = self.psl.order() * BigUint::from(index);
        Ok(PermGroup::with_known_order(self.domain.size(), gens, order)?)
    }

    /// Point stabiliser of <e1> in g: the Borel/parabolic subgroup.
    pub fn borel(&self, g: &PermGroup) -> Result<PermGroup, ActionError> {
        Ok(g.stabiliser_of(self.point(1, 0))?)
    }

    /// Setwise stabiliser of {<e1>, <e2>}: the split torus normaliser.
    pub fn split_torus_normaliser(&self, g: &PermGroup) -> Result<PermGroup, ActionError> {
        Ok(g.setwise_pair_stabiliser(self.point(1, 0), self.point(0, 1))?)
    }

    /// A cyclic subgroup of PGL of order q+1 acting irreducibly: the image of
    /// the companion matrix of an irreducible quadratic whose root generates
    /// F_{q^2}^x modulo F_q^x.
    fn nonsplit_torus_gen(&self) -> Result<Perm, ActionError> {
        let q = self.field.q();
        for t in 0..q {
            for n in 1..q {
                // x^2 - t x + n must have no roots in F_q
                let has_root = (0..q).any(|x| {
                    let x2 = self.field.mul(x, x);
                    let tx = self.field.mul(t, x);
                    self.field.add(self.field.sub(x2, tx), n) == 0
                });
                if has_root {
                    continue;
                }
                let m = Matrix::from_rows(
                    &self.field,
                    &[vec![0, 1], vec![self.field.neg(n), t]],
                );
                let perm = self.perm_of_matrix(&m)?;
                if perm.order_u64() == Some(self.q + 1) {
                    return Ok(perm);
                }
            }
        }
        Err(ActionError::Unsupported(format!(
            "no irreducible torus generator found for q = {}",
            self.q
        )))
    }

    /// Induced permutation of an invertible matrix on the line.
    pub fn perm_of_matrix(&self, m: &Matrix) -> Result<Perm, ActionError> {
        let images: Option<Vec<u32>> = (0..self.domain.size())
            .map(|i| {
                let rows: Vec<Vec<u32>> =
                    self.domain.basis_rows(i).iter().map(|r| m.apply_row(r)).collect();
                self.domain.index_of_span(&rows).map(|x| x as u32)
            })
            .collect();
        let images = images.ok_or_else(|| ActionError::Unsupported("singular matrix".into()))?;
        Ok(Perm::from_images(images)?)
    }

    /// Normaliser in g of the socle part of the nonsplit torus.
    pub fn nonsplit_torus_normaliser(&self, g: &PermGroup) -> Result<PermGroup, ActionError> {
        let torus = self.nonsplit_torus_gen()?;
        let socle_part = torus.pow(self.d as i64);
        let t0 = PermGroup::with_known_order(
            self.domain.size(),
            vec![socle_part],
            BigUint::from((self.q + 1) / self.d),
        )?;
        Ok(g.normaliser_by_filter(&t0, 200_000)?)
    }

    /// Normaliser in g of the subfield subgroup L2(3); only for q = 3^k.
    pub fn subfield_normaliser(&self, g: &PermGroup) -> Result<PermGroup, ActionError> {
        if self.p != 3 || self.f < 3 {
            return Err(ActionError::Unsupported(
                "subfield GL2(3) type requires q = 3^k, k >= 3".into(),
            ));
        }
        // SL2(3) generators have entries in the prime field {0,1,2}
        let a = Matrix::from_rows(&self.field, &[vec![1, 1], vec![0, 1]]);
        let b = Matrix::from_rows(&self.field, &[vec![0, 1], vec![self.field.neg(1), 0]]);
        let sub = PermGroup::with_known_order(
            self.domain.size(),
            vec![self.perm_of_matrix(&a)?, self.perm_of_matrix(&b)?],
            BigUint::from(12u32),
        )?;
        Ok(g.normaliser_by_filter(&sub, 200_000)?)
    }

    /// Normaliser in g of the image of the quaternion group: the 2^{1+2}_-
    /// type; only for prime q.
    pub fn extraspecial_normaliser(&self, g: &PermGroup) -> Result<PermGroup, ActionError> {
        if self.f != 1 || self.p < 3 {
            return Err(ActionError::Unsupported(
                "extraspecial type requires odd prime q".into(),
            ));
        }
        // x = [[0,1],[-1,0]], y = [[a,b],[b,-a]] with a^2 + b^2 = -1
        let minus1 = self.field.neg(1);
        let (a, b) = (0..self.field.q())
            .flat_map(|a| (0..self.field.q()).map(move |b| (a, b)))
            .find(|&(a, b)| {
                self.field.add(self.field.mul(a, a), self.field.mul(b, b)) == minus1
            })
            .expect("a^2 + b^2 = -1 is solvable over any prime field");
        let x = Matrix::from_rows(&self.field, &[vec![0, 1], vec![minus1, 0]]);
        let y = Matrix::from_rows(&self.field, &[vec![a, b], vec![b, self.field.neg(a)]]);
        let e = PermGroup::with_known_order(
            self.domain.size(),
            vec![self.perm_of_matrix(&x)?, self.perm_of_matrix(&y)?],
            BigUint::from(4u32),
        )?;
        Ok(g.normaliser_by_filter(&e, 200_000)?)
    }

    pub fn subgroup(
        &self,
        kind: Psl2Subgroup,
        g: &PermGroup,
    ) -> Result<PermGroup, ActionError> {
        match kind {
            Psl2Subgroup::P1 => self.borel(g),
            Psl2Subgroup::SplitTorusNormaliser => self.split_torus_normaliser(g),
            Psl2Subgroup::NonsplitTorusNormaliser => self.nonsplit_torus_normaliser(g),
            Psl2Subgroup::SubfieldGl23 => self.subfield_normaliser(g),
            Psl2Subgroup::ExtraspecialNormaliser => self.extraspecial_normaliser(g),
        }
    }
}

/// Spec-level constructor: the named subgroup inside the PSL or PGL line
/// action.
pub fn psl2_subgroup(
    q: u64,
    kind: Psl2Subgroup,
    ambient: Psl2Ambient,
) -> Result<PermGroup, ActionError> {
    let ctx = Psl2Context::new(q)?;
    let g = ctx.ambient_group(ambient);
    ctx.subgroup(kind, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn line_orders() {
        let ctx = Psl2Context::new(7).unwrap();
        assert_eq!(ctx.domain.size(), 8);
        assert_eq!(ctx.psl.order().to_u64().unwrap(), 168);
        assert_eq!(ctx.pgl.order().to_u64().unwrap(), 336);
        let ctx8 = Psl2Context::new(8).unwrap();
        assert_eq!(ctx8.psl.order().to_u64().unwrap(), 504);
        // PGammaL2(8) = L2(8).3
        let full = ctx8.group(OuterClass::Full).unwrap();
        assert_eq!(full.order().to_u64().unwrap(), 1512);
    }

    #[test]
    fn split_normaliser_orders() {
        // q = 7, PGL: dihedral of order 2(q-1) = 12
        let h = psl2_subgroup(7, Psl2Subgroup::SplitTorusNormaliser, Psl2Ambient::Pgl).unwrap();
        assert_eq!(h.order().to_u64().unwrap(), 12);
        // q = 13, PSL: order 2(q-1)/2 = 12
        let h13 = psl2_subgroup(13, Psl2Subgroup::SplitTorusNormaliser, Psl2Ambient::Psl).unwrap();
        assert_eq!(h13.order().to_u64().unwrap(), 12);
    }

    #[test]
    fn nonsplit_normaliser_orders() {
        // q = 7, PGL: dihedral of order 2(q+1) = 16
        let h = psl2_subgroup(7, Psl2Subgroup::NonsplitTorusNormaliser, Psl2Ambient::Pgl).unwrap();
        assert_eq!(h.order().to_u64().unwrap(), 16);
        // q = 11, PSL: order 2(q+1)/2 = 12
        let h11 =
            psl2_subgroup(11, Psl2Subgroup::NonsplitTorusNormaliser, Psl2Ambient::Psl).unwrap();
        assert_eq!(h11.order().to_u64().unwrap(), 12);
    }

    #[test]
    fn borel_order_q8() {
        // order q(q-1)/d with d = 1: 56
        let h = psl2_subgroup(8, Psl2Subgroup::P1, Psl2Ambient::Psl).unwrap();
        assert_eq!(h.order().to_u64().unwrap(), 56);
    }

    #[test]
    fn extraspecial_normaliser_q7_in_psl() {
        let h =
            psl2_subgroup(7, Psl2Subgroup::ExtraspecialNormaliser, Psl2Ambient::Psl).unwrap();
        assert_eq!(h.order().to_u64().unwrap(), 24); // S4
        let hp =
            psl2_subgroup(11, Psl2Subgroup::ExtraspecialNormaliser, Psl2Ambient::Pgl).unwrap();
        assert_eq!(hp.order().to_u64().unwrap(), 24); // S4, meeting L2(11) in A4
    }

    #[test]
    fn subfield_normaliser_q27() {
        let ctx = Psl2Context::new(27).unwrap();
        let h = ctx.subfield_normaliser(&ctx.psl).unwrap();
        assert_eq!(h.order().to_u64().unwrap(), 12); // A4 self-normalising
        let hp = ctx.subfield_normaliser(&ctx.pgl).unwrap();
        assert_eq!(hp.order().to_u64().unwrap(), 24); // S4
        let full = ctx.group(OuterClass::Full).unwrap();
        let hf = ctx.subfield_normaliser(&full).unwrap();
        assert_eq!(hf.order().to_u64().unwrap(), 72);
    }

    #[test]
    fn outer_class_orders_q16() {
        let ctx = Psl2Context::new(16).unwrap();
        let g2 = ctx.group(OuterClass::FieldPow(2)).unwrap();
        assert_eq!(g2.order().to_u64().unwrap(), 4080 * 2);
        let g4 = ctx.group(OuterClass::Full).unwrap();
        assert_eq!(g4.order().to_u64().unwrap(), 4080 * 4);
    }
}
