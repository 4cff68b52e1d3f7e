pub mod chainmaps;
pub mod chart;
pub mod cli;
pub mod collectors;
pub mod error;
pub mod f2linalg;
pub mod io_formats;
pub mod milnor;
pub mod resolution;

pub use error::{Error, Result};
