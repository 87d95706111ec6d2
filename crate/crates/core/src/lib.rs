//! Exact algebra for equivariant stable-linearizability certificates.

pub mod error;
pub mod catalog;
pub mod cohomology;
pub mod cyclo;
pub mod groups;
pub mod lattice;
pub mod linalg;
pub mod obstructions;
pub mod poly;

pub use error::{Error, Result};
