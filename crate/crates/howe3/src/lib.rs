//! Genus-3 Howe curves over finite fields: constructions, decomposed Richelot
//! codomains and enumeration of superspecial curves in small characteristic.

// index loops read closer to the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod elliptic;
pub mod error;
pub mod field_tower;
pub mod howe_construct;
pub mod hyperelliptic;
pub mod invariants;
pub mod polynomials;
pub mod quartic;
pub mod richelot_g2;

pub use error::{Error, Result};
pub mod cli;
pub mod enumeration;
