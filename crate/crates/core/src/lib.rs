//! Exact symbolic toolkit for the additive structure of the natural numbers.
//!
//! The crate is organized around five subsystems:
//!
//! - [`syntax`]: formulas of the extended language (`<=`, `=`, congruences,
//!   quantifiers and a counting quantifier), parsing, printing and direct
//!   evaluation.
//! - [`solve`]: quantifier elimination, sentence decision, elimination of
//!   counting quantifiers and definable finiteness tests.
//! - [`semilin`]: normal forms of definable sets as disjoint unions of
//!   fundamental lattices, dimension, and verified definable bijections.
//! - [`cardinal`]: cardinality functions of definable families as piecewise
//!   polynomials.
//! - [`interp`]: interpretations of first-order structures, ranks of
//!   interpreted linear orders, and synthesis of verified isomorphisms.

pub mod cardinal;
pub mod interp;
pub(crate) mod linalg;
pub mod semilin;
pub mod solve;
pub mod syntax;

pub use syntax::{Assignment, Atom, Formula, LinearForm};
