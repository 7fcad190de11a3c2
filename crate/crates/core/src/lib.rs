//! Deterministic rounded-Gaussian errors derived from simulated Gaussian
//! channels, and the constructions built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! * [`channel`] simulates star-shaped interconnection networks, Gaussian
//!   channels and the message exchanges that produce regression datasets.
//! * [`regression`] fits modular linear-regression hypotheses by grid search
//!   and turns a hypothesis into an immutable error oracle.
//! * [`lwlr`] samples learning-with-linear-regression instances and the
//!   learning-with-rounding baseline.
//! * [`gadget`] and [`prf`] implement gadget decomposition, the binary-tree
//!   matrix recursion and the star-specific key-homomorphic PRF.
//! * [`setfam`] covers constructions, verifiers, bounds and exhaustive search
//!   for at most `t`-intersecting `k`-uniform set families.
//! * [`mutinfo`] computes entropies and mutual information between
//!   regression hypotheses trained on overlapping designs.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod gadget;
pub mod lwlr;
pub mod modular;
pub mod mutinfo;
pub mod prf;
pub mod regression;
pub mod rng;
pub mod setfam;
pub mod stats;

pub use error::{Error, Result};
