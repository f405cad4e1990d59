//! Precision-tracked p-adic power series, Lubin-Tate formal groups and
//! commuting families of p-adic dynamical systems.

#![allow(clippy::needless_range_loop)]

pub mod dynamics;
pub mod error;
pub mod exec;
pub mod lubin_tate;
pub mod padic;
pub mod series;

pub use error::{Error, Result};
