//! Computations in framed mesh categories and the strata of graded quiver
//! varieties they describe.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod config;
pub mod derived;
pub mod error;
pub mod fiber;
pub mod field;
pub mod kan;
pub mod linalg;
pub mod mesh;
pub mod quiver;
pub mod rep;
pub mod resolve;
pub mod sing;

pub use error::{Error, Result};
pub use field::{Field, FiniteField, Fp, Q};
pub use linalg::Matrix;
pub use mesh::{Flavor, HomFunctor, MeshCategory};
pub use quiver::{ArrowKind, Configuration, Quiver, RepArrow, RepQuiver, RepVertex, Window};
