pub mod error;
pub mod estimators;
pub mod experiment;
pub mod game;
pub mod learner;
pub mod oracle;

pub use error::{Error, Result};
