//! Interleaving distances built from monoid actions, 2-functors and weighted
//! 2-categories, together with the brute-force oracles used to check them.

pub mod f2;
pub mod interleave;
pub mod matching;
pub mod metricgh;
pub mod pipeline;
pub mod poset;
pub mod pmod;
pub mod twocat;
pub mod weight;

pub use weight::{AuditReport, Weight, DEFAULT_TOL};
