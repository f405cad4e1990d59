//! Lubin-Tate series, their formal group laws and endomorphisms, and
//! formal logarithms.

mod construct;
mod group;
mod log;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::series::Series1;

pub use construct::{lt_endo, lt_endo_with, lt_group_law, lt_group_law_with};
pub use group::{AxiomReport, GroupLaw};
pub(crate) use group::decided;
pub use log::{formal_exp, formal_log, group_from_log, log_defect, LogSeries, RecoveredLaw};

/// First coefficient breaking the Lubin-Tate congruences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtViolation {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtCheck {
    pub holds: bool,
    pub violation: Option<LtViolation>,
}

/// Does f ≡ uT mod deg 2 for a uniformizer u, and f ≡ T^q mod π, up to the
/// truncation degree?
pub fn is_lt_series(f: &Series1) -> Result<LtCheck> {
    let r = f.ring();
    let cs = f.coeffs();
    if !cs[0].is_zero_at_prec() {
        return Err(Error::Precondition("f(0) must vanish".into()));
    }
    if let crate::series::Integrality::NonIntegral { index, valuation } = f.integrality() {
        return Err(Error::NonIntegral {
            index: index.to_string(),
            detail: format!("valuation {valuation}"),
        });
    }
    let fail = |index: usize, reason: String| {
        Ok(LtCheck {
            holds: false,
            violation: Some(LtViolation { index, reason }),
        })
    };
    let undecidable = |index: usize, p: i32| Error::Undecidable {
        index,
        detail: format!("coefficient known only modulo π^{p}"),
    };
    if f.degree() >= 1 {
        match cs[1].valuation() {
            Valuation::Finite(1) => {}
            Valuation::Finite(v) => {
                return fail(1, format!("linear coefficient has valuation {v}, not 1"))
            }
            Valuation::AtLeast(p) if p >= 2 => {
                return fail(1, format!("linear coefficient has valuation at least {p}"))
            }
            Valuation::AtLeast(p) => return Err(undecidable(1, p)),
        }
    }
    let q = r.q() as usize;
    let one = r.residue_one();
    for (i, c) in cs.iter().enumerate().skip(2) {
        let want_unit = i == q;
        match c.valuation() {
            Valuation::Finite(0) if want_unit => {
                let res = r.residue_from_coords(&r.residue_coords(&c.mant()));
                if res != one {
                    return fail(i, format!("coefficient of T^{q} reduces to {res}, not 1"));
                }
            }
            Valuation::Finite(0) => {
                return fail(i, format!("reduction has a T^{i} term; expected T^{q}"))
            }
            Valuation::Finite(_) if want_unit => {
                return fail(i, format!("coefficient of T^{q} is divisible by π"))
            }
            Valuation::Finite(_) => {}
            Valuation::AtLeast(p) if p < 1 => return Err(undecidable(i, p)),
            Valuation::AtLeast(_) if want_unit => {
                return fail(i, format!("coefficient of T^{q} is divisible by π"))
            }
            Valuation::AtLeast(_) => {}
        }
    }
    Ok(LtCheck {
        holds: true,
        violation: None,
    })
}

pub(crate) fn require_lt(f: &Series1, what: &str) -> Result<()> {
    let c = is_lt_series(f)?;
    match c.violation {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "{what} is not a Lubin-Tate series: index {}: {}",
            v.index, v.reason
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn lt_series_examples() {
        let z2 = make_ring(2, &[0, 1], &[-2, 1], 10).unwrap();
        assert!(is_lt_series(&Series1::from_ints(&z2, 8, &[0, 2, 1])).unwrap().holds);
        let bad = is_lt_series(&Series1::from_ints(&z2, 8, &[0, 2, 0, 1])).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.violation.unwrap().index, 2);
        let z5 = make_ring(5, &[0, 1], &[-5, 1], 10).unwrap();
        let f = Series1::from_ints(&z5, 12, &[1, 1])
            .pow(5)
            .sub(&Series1::from_ints(&z5, 12, &[1]))
            .unwrap();
        assert!(is_lt_series(&f).unwrap().holds);
        let unit_linear = Series1::from_ints(&z5, 6, &[0, 1, 0, 0, 0, 1]);
        assert_eq!(is_lt_series(&unit_linear).unwrap().violation.unwrap().index, 1);
    }
}
