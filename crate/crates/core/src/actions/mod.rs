//! Turning matrix groups and abstract data into permutation groups:
//! projective/subspace/isotropic actions, coset actions, unordered-pair
//! actions, product actions of wreath products, and explicit subgroup
//! constructors inside L2(q) and PGL2(q).

mod cosets;
mod product;
mod psl2;
mod subspaces;

pub use cosets::{coset_action, CosetTable};
pub use product::{pair_action, product_action, PairDomain};
pub use psl2::{psl2_subgroup, OuterClass, Psl2Ambient, Psl2Context, Psl2Subgroup};
pub use subspaces::{
    frobenius_perm_on_subspaces, perp_perm_on_subspaces, subspace_action, SubspaceConstraint,
    SubspaceDomain,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("domain too large: {size} exceeds budget {budget}")]
    DomainBudget { size: u64, budget: u64 },
    #[error("a form is required for this constraint")]
    FormRequired,
    #[error("H is not a subgroup of G")]
    NotASubgroup,
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Perm(#[from] crate::permcore::PermError),
    #[error(transparent)]
    Mat(#[from] crate::matgrp::MatError),
    #[error(transparent)]
    Field(#[from] crate::gf::GfError),
}
