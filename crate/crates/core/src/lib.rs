pub mod error;
pub mod backend;
pub mod expr;
pub mod formalq;
pub mod harness;
pub mod identities;
pub mod qcore;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
