//! Desk-scale engine for Steiner triple systems and triangle decompositions.
//!
//! The crate is organized around a handful of carriers: [`TripleSystem`] for
//! 3-uniform (multi-)hypergraphs, [`PairGraph`] for ordinary graphs and
//! 2-shadows, [`Family`] for indexed colored collections, and exact-rational
//! weight functions for fractional decompositions. On top of those sit the
//! exact-cover search engines, the extremal no-STS construction, the
//! flow/LP-based fractional solvers, absorber and transformer gadgets,
//! nested vortex sampling, and the cover-down orchestration.
//!
//! Everything is deterministic for a fixed seed, and every construction is
//! validated by an independent checker rather than trusted by construction.

pub mod coverdown;
pub mod designs;
pub mod extremal;
pub mod fractional;
pub mod gadgets;
pub mod generate;
pub mod hypercore;
pub mod io;
pub mod pipeline;
pub mod vortex;

pub use hypercore::{Bits, DegreeReport, Family, PairGraph, TripleSystem};
