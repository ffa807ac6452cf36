//! Finite lattices and their congruence lattices.
//!
//! The crate builds finite lattices from Hasse diagrams, computes congruence
//! lattices exactly, checks lattice laws, and implements several
//! constructions that realize a finite distributive lattice `D` as the
//! congruence lattice of a lattice with extra structure (sectionally
//! complemented, planar, semimodular), along with congruence-preserving
//! extensions built from Boolean triples and products of simple lattices.

#![allow(clippy::needless_range_loop)]

pub mod chopped;
pub mod cli;
pub mod congruence;
pub mod extension;
pub mod format;
pub mod laws;
pub mod order;
pub mod planar;
