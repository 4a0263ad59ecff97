//! Cohomological index of symmetry-protected phases in finite spin chains.

extern crate blas_src;

pub mod circuits;
pub mod cli;
pub mod diagnostics;
pub mod cocycle;
pub mod cohomology;
pub mod error;
pub mod extraction;
pub mod fixtures;
pub mod group;
pub mod io;
pub mod linalg;
pub mod mps;
pub mod projective;
pub mod snf;
pub mod state;

pub use error::{Error, Result};
