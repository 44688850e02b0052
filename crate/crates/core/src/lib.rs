//! Automatic sequences and arrays, their stammering periodic approximants,
//! and the Diophantine bookkeeping around the series
//! `α = Σ c(n_1, …, n_r) a_1^{-n_1} ⋯ a_r^{-n_r}`.
//!
//! Layers, bottom up:
//!
//! - [`words`]: alphabets, words, uniform morphisms and their fixed points.
//! - [`automata`]: DFAOs, base-`k` digits, kernels, products and the
//!   morphism/automaton bridge.
//! - [`stammering`]: repeated factors in fixed points and the eventually
//!   periodic words they produce.
//! - [`series`]: array specifications, the value `α`, approximants `α_n`,
//!   error bounds and the numerator polynomial `P_n`.
//! - [`diophantine`]: places, absolute values, heights, witness vectors and
//!   multiplicative independence of bases.
//! - [`experiment`]: batch runs and the invariant suite used by the CLI.

pub mod automata;
pub mod diophantine;
pub mod enclosure;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod logs;
pub mod series;
pub mod spec;
pub mod stammering;
pub mod words;

pub use error::{Error, Result};
