//! Copy-composition of probabilistic graphical models over finite sets.
//!
//! Directed models are spans of finite sets decorated with stochastic
//! sections and composed by pull-push ([`dspan`]). Undirected models are open
//! factor graphs: cospans decorated with nonnegative factors and composed by
//! pushout followed by copying the shared variables ([`ofg`]). Both rest on
//! [`finset`] for the set-level (co)limits, on [`matcat`] for the
//! copy-discard category of tables and on [`krnfib`] for fibrewise kernels.
//! [`oracle`] holds brute-force references that share no code with the rest.

pub mod dspan;
pub mod error;
pub mod finset;
pub mod gen;
pub mod krnfib;
pub mod laws;
pub mod limits;
pub mod matcat;
pub mod ofg;
pub mod oracle;

pub use error::{Error, Result};
