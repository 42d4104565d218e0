//! Computational toolkit for exceptional zeros of two-variable p-adic
//! L-functions attached to big Heegner points.

pub mod error;
pub mod heegner;
pub mod iwasawa_ez;
pub mod catalog;
pub mod curve;
pub mod kubota_leopoldt;
pub mod linvariants;
pub mod padic;
pub mod qseries;
pub mod quadfield;
pub mod series;

pub use error::{Error, Result};
pub use padic::{PadicContext, PadicNumber};
pub use series::TwoVarSeries;
