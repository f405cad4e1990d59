//! Formal logarithms and exponentials, and recovery of a group law from a
//! logarithm.

use super::GroupLaw;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::Coeff;
use crate::series::solve::{solve_outer, Solved};
use crate::series::{Agreement, Integrality, Series1, Series2};

/// A series L = T + O(T^2) over K.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries(Series1);

impl LogSeries {
    pub fn new(l: Series1) -> Result<LogSeries> {
        let r = l.ring();
        if !l.raw_coeff(0).is_zero_at_prec() {
            return Err(Error::Precondition("a logarithm has no constant term".into()));
        }
        if l.degree() >= 1 {
            let one = Coeff::integral(r, r.one(), r.cap());
            if !l.raw_coeff(1).agrees(r, &one) {
                return Err(Error::Precondition("a logarithm has linear coefficient 1".into()));
            }
        }
        Ok(LogSeries(l))
    }

    pub fn series(&self) -> &Series1 {
        &self.0
    }

    pub fn into_series(self) -> Series1 {
        self.0
    }
}

/// L with L'(T) = 1 / ∂_X G(0, T).
pub fn formal_log(g: &GroupLaw) -> Result<LogSeries> {
    let r = g.ring();
    let d = g.degree();
    if d == 0 {
        return LogSeries::new(Series1::zero(r, 0));
    }
    let s = g.series();
    let dx = Series1::from_coeffs(r, (0..d).map(|j| s.get(1, j)).collect());
    LogSeries::new(dx.recip()?.integrate()?)
}

/// Compositional inverse of a logarithm (coefficients may be non-integral).
pub fn formal_exp(l: &LogSeries) -> Result<Series1> {
    l.series().comp_inverse()
}

/// Result of rebuilding G = exp(L(X) + L(Y)).
#[derive(Clone, Debug)]
pub struct RecoveredLaw {
    /// The law, truncated below the first non-integral degree if any.
    pub law: GroupLaw,
    pub integrality: Integrality<(usize, usize)>,
}

/// Solve L(G) = L(X) + L(Y) degree by degree. Stops at the first degree
/// with a coefficient of negative valuation.
pub fn group_from_log(l: &LogSeries) -> Result<RecoveredLaw> {
    let s = l.series();
    let r = s.ring();
    let d = s.degree();
    let zero = Coeff::zero(r.cap());
    let mut rhs: Vec<Vec<Coeff>> = (0..=d).map(|k| vec![zero; k + 1]).collect();
    for (k, comp) in rhs.iter_mut().enumerate().skip(1) {
        comp[k] = s.raw_coeff(k);
        comp[0] = s.raw_coeff(k);
    }
    if d == 0 {
        return Ok(RecoveredLaw {
            law: GroupLaw::new(Series2::zero(r, 0)),
            integrality: Integrality::Integral,
        });
    }
    match solve_outer(r, s.coeffs(), &rhs, 2, Exec::default())? {
        Solved::Complete { comps, table } => Ok(RecoveredLaw {
            law: GroupLaw::with_table(Series2::from_comps(r, comps), table),
            integrality: Integrality::Integral,
        }),
        Solved::NonIntegral {
            degree,
            position,
            valuation,
            partial,
        } => Ok(RecoveredLaw {
            law: GroupLaw::new(Series2::from_comps(r, partial)),
            integrality: Integrality::NonIntegral {
                index: (position, degree - position),
                valuation,
            },
        }),
    }
}

/// L(G(X, Y)) against L(X) + L(Y).
pub fn log_defect(l: &LogSeries, g: &GroupLaw) -> Result<Agreement<(usize, usize)>> {
    let s = l.series();
    let r = s.ring();
    let lhs = s.compose2(g.series())?;
    let d = lhs.degree();
    let mut comps: Vec<Vec<Coeff>> = (0..=d).map(|k| vec![Coeff::zero(r.cap()); k + 1]).collect();
    for (k, comp) in comps.iter_mut().enumerate().skip(1) {
        comp[k] = s.raw_coeff(k);
        comp[0] = s.raw_coeff(k);
    }
    lhs.agreement(&Series2::from_comps(r, comps))
}
