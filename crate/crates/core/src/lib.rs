//! A workbench for finite aperiodic semigroups and the representation of
//! omega-terms as labeled linear orders (cluster words).
//!
//! The crate has three layers:
//!
//! * finite-semigroup machinery: multiplication tables, Green's relations,
//!   classification predicates, chain expansions and unambiguous covers
//!   ([`semigroup`], [`green`], [`expansion`], [`corpus`]);
//! * the quasi-order of 2-factorizations of an element, its transition
//!   category and stabilizer data ([`factorization`]);
//! * omega-terms and their symbolic linear orders: parsing, rewriting to a
//!   canonical form, cluster expressions, order types, and the recognition
//!   predicate tying the two worlds together ([`term`], [`cluster`],
//!   [`recognition`]);
//!
//! plus a small symbolic-dynamics toolkit for factor complexity, entropy
//! estimates and beta-shift languages ([`subshift`]).

pub mod cluster;
pub mod corpus;
pub mod error;
pub mod expansion;
pub mod factorization;
pub mod fixtures;
pub mod green;
pub mod ordertype;
pub mod recognition;
pub mod semigroup;
pub mod subshift;
pub mod term;

pub use error::{Error, Result};
pub use semigroup::FiniteSemigroup;
