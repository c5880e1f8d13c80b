//! Exact construction and verification of extremal Type II codes over the
//! integers mod 4.

pub mod bincodes;
pub mod error;
pub mod construct;
pub mod gf2;
pub mod paperdata;
pub mod z4;

pub use bincodes::{BinaryCode, WeightDistribution};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use z4::{Z4Code, Z4Vector};
