//! Exact computation of normal reduction numbers and related invariants for
//! two-dimensional cone-like singularities.

pub mod acceptance;
pub mod closure;
pub mod curve;
pub mod cycle;
pub mod error;
pub mod field;
pub mod graph_file;
pub mod ideal;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod qseq;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
