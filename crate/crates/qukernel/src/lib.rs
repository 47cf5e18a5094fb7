//! Exact symbolic computation with half small quasi-quantum groups, their
//! Majid duals, Drinfeld doubles and the associated 3-cocycles.

pub mod cartan;
pub mod cohomology;
pub mod double;
pub mod error;
pub mod genuine;
pub mod grouptensors;
pub mod halfqg;
pub mod majid;
pub mod rewrite;
pub mod scalars;
pub mod suites;

pub use error::{Error, Result};
