//! Connected allocations of indivisible items on an item graph.
//!
//! Polynomial solvers for paths and stars, a moving-knife routine for
//! non-nested interval approvals, brute-force oracles for Pareto optimality,
//! EF1 and maximin shares, and generators for exact-cover gadgets.

pub mod budget;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod reductions;
pub mod value;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{ItemGraph, Topology};
pub use model::{Allocation, Bundle, Instance, Metadata, MmsMethod, MmsProfile, Valuation};
pub use value::{int, Value};
