//! Exact, finite-window models of nets of symplectic subspaces on causal
//! posets of the real line, their cohomology and their sectors.
//!
//! All arithmetic is over arbitrary-precision rationals; every equality
//! reported by this crate is exact.

pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod nets;
pub mod piecewise;
pub mod poset;
pub mod rational;
pub mod scenario;
pub mod sectors;
pub mod simplicial;
pub mod weyl;

pub use error::{Error, Result};
pub use piecewise::{ChargePair, Charges, Isometry, PiecewiseLinear, SpaceTag, TestPair};
pub use poset::{CausalPoset, IndexElement, PosetKind};
pub use rational::Rational;
