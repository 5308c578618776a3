pub mod arpa;
pub mod cli;
pub mod corpus;
pub mod counts;
pub mod error;
pub mod eval;
pub mod postproc;
pub mod smoothing;
pub mod stem_rules;
pub mod stem_unsup;
pub mod synthetic;

pub use error::{Error, Result};
