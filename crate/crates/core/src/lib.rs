//! Finite embedding problems over Cayley-table groups, p-adic decomposition
//! criteria over the rationals, and existential solvability formulas over
//! Galois-algebra witnesses.

pub mod cli;
pub mod embed;
pub mod error;
pub mod extension;
pub mod factor;
pub mod field;
pub mod formula;
pub mod freeprod;
pub mod group;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod sexp;
pub mod valuation;
pub mod witness;
pub mod zassenhaus;

pub use error::{Error, Result};
pub use par::ExecMode;
