//! Finitely presented commutative monoids and the fine faces of their charts.
//!
//! A presentation `F/R` is a free monoid `F = N^E` on a finite generator set
//! together with finitely many relations `a = b`. This crate computes
//! monoidal Gröbner bases and normal forms, prime ideals and faces,
//! integralizations `(R : x^∞)`, saturations, and the extended-cone
//! combinatorics governing faces of fiber products of toric charts.
//!
//! The crate is `no_std` and only needs `alloc`; all arithmetic is exact.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exponent;
pub mod extcone;
pub mod intsat;
pub mod lattice;
pub mod limits;
pub mod order;
pub mod pipeline;
pub mod presentation;
pub mod rewriting;
pub mod structure;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use limits::Limits;
pub use order::{MonomialOrder, OrderKind};
pub use presentation::{GeneratorSet, MonoidMap, Presentation, Relation};
pub use rewriting::{GroebnerBasis, Rule};
