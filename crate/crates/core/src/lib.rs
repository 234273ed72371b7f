//! Exact identifiability certificates for networked dynamic systems.

pub mod distance;
pub mod error;
pub mod ident;
pub mod model;
pub mod pencil;
pub mod polymat;
pub mod ratpoly;

pub use error::{Error, Result};
