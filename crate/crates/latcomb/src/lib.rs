//! Workbench for combinatorial structures on finite toroidal grids:
//! charge calculus and discrete divergence identities, partial matchings of
//! strips with conserved currents, marker hierarchies and their
//! decompositions, toast structures, proper 3-colorings, perfect matchings
//! and spanning Hamiltonian paths — every construction paired with audits
//! and brute-force oracles.

pub mod error;
pub mod grid;
pub mod markers;
pub mod matching;
pub mod stokes;

pub use grid::{Point, Rect, Region, TorusContext};
