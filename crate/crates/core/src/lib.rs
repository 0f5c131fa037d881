//! Construction and certified base-size analysis of finite permutation groups.
//!
//! The crate builds symmetric/alternating groups, classical matrix groups over
//! small finite fields in their natural and coset actions, and wreath products
//! in product action, then computes and certifies base sizes through a stack of
//! methods: the logarithmic lower bound, randomized base search, exact
//! stabiliser-chain exhaustion, the probabilistic bound `Q(G,c)`, exact and
//! Monte Carlo base probabilities, and double-coset non-regular-orbit
//! certificates.

pub mod actions;
pub mod basesize;
pub mod catalog;
pub mod gf;
pub mod matgrp;
pub mod permcore;
pub mod prodaction;
pub mod util;

pub use gf::{Field, FieldElem};

pub use permcore::{Perm, PermGroup, StabChain};
