//! Exact construction and certification of twisted orthogonal product
//! bases, unextendible product bases and unextendible biseparable bases on
//! the `d × d × d` block cube, `d ≥ 3`.

pub mod analysis;
pub mod basis;
pub mod certify;
pub mod cube;
pub mod export;
pub mod linalg;
pub mod parties;
pub mod report;

mod error;

pub use error::{Error, Result};
