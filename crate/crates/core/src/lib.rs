pub mod arith;
pub mod bounds;
pub mod error;
pub mod lucas;
pub mod pipeline;
pub mod reduction;
pub mod report;
pub mod search;

pub use error::{Error, Result};
