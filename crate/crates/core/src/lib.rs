pub mod error;
pub mod tfcore;
pub mod windows;
pub mod operators;
pub mod identify;
pub mod recover;
pub mod reference;
pub mod experiments;

pub use error::{Error, Result};
