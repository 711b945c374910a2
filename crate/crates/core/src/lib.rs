pub mod analysis;
pub mod cli;
pub mod error;
pub mod field_model;
pub mod linops;
pub mod matrix_models;

pub use error::{Error, Result};
