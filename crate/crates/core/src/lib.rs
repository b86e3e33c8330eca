pub mod adapt;
pub mod bands;
pub mod eom;
pub mod error;
pub mod fci;
pub mod lattice;
pub mod linalg;
pub mod noise;
pub mod ops;
pub mod sim;

pub use error::{Error, Result};
