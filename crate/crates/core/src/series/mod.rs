//! Truncated power series in one and two variables over K with
//! per-coefficient precision.

pub(crate) mod compose;
mod literal;
mod newton;
pub(crate) mod raw;
mod residue;
mod series1;
mod series2;
pub(crate) mod solve;
pub(crate) mod table;

use serde::{Deserialize, Serialize};

pub use newton::{NewtonPolygon, Rational, Segment, Vertex};
pub use residue::{residue_decompose, ResidueSeries};
pub use series1::{Series1, Wideg};
pub use series2::Series2;

/// Integrality verdict of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Integrality<I> {
    Integral,
    /// A coefficient with decidably negative valuation.
    NonIntegral { index: I, valuation: i32 },
    /// A coefficient indistinguishable from zero below precision 1.
    Unknown { index: I, precision: i32 },
}

impl<I> Integrality<I> {
    pub fn is_integral(&self) -> bool {
        matches!(self, Integrality::Integral)
    }
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement<I> {
    /// First coefficient (in degree order) where the two sides differ at
    /// known precision.
    pub first_difference: Option<I>,
    /// Smallest precision among the compared differences.
    pub precision: i32,
}

impl<I> Agreement<I> {
    pub fn holds(&self) -> bool {
        self.first_difference.is_none()
    }
}

pub(crate) fn integrality_of<'a, I: Clone>(
    items: impl Iterator<Item = (I, &'a crate::padic::Coeff)>,
) -> Integrality<I> {
    let mut unknown = None;
    for (idx, c) in items {
        match c.valuation() {
            crate::padic::Valuation::Finite(v) if v < 0 => {
                return Integrality::NonIntegral {
                    index: idx,
                    valuation: v,
                }
            }
            crate::padic::Valuation::AtLeast(p) if p < 1 && unknown.is_none() => {
                unknown = Some((idx, p));
            }
            _ => {}
        }
    }
    match unknown {
        Some((index, precision)) => Integrality::Unknown { index, precision },
        None => Integrality::Integral,
    }
}
