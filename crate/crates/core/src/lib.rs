pub mod closed_forms;
pub mod cohomology;
pub mod error;
pub mod oracle;
pub mod types;
pub mod verifier;

pub use error::{Error, Result};
pub use types::{ExactInt, ExactRat, Modulus, PartSeq, SeriesPrefix, SolutionVec};
