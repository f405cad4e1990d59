//! Recovery of the formal group behind a full commuting family.

use serde::{Deserialize, Serialize};

use super::family::Family;
use super::log::{solve_log, verify_log};
use super::SampleCheck;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lubin_tate::{group_from_log, AxiomReport, GroupLaw, LogSeries};
use crate::padic::{Coeff, KValue, OKValue};
use crate::series::solve::{solve_outer, Solved};
use crate::series::{Agreement, Integrality, Series1};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub degree: usize,
    /// L∘F_α = α·L
    pub functional_equation: Vec<SampleCheck<usize>>,
    pub axioms: AxiomReport,
    /// F_α(G(X, Y)) = G(F_α(X), F_α(Y))
    pub endo_checks: Vec<SampleCheck<(usize, usize)>>,
    /// L^{-1}(α·L) = F_α
    pub exp_checks: Vec<SampleCheck<usize>>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub law: GroupLaw,
    pub log: LogSeries,
    pub report: RecoveryReport,
}

/// G = L^{-1}(L(X) + L(Y)) for the logarithm L of the family, required to be
/// integral, followed by the endomorphism checks on the samples.
pub fn recover_group(fam: &Family, samples: &[OKValue]) -> Result<Recovery> {
    let l = solve_log(fam)?;
    let rec = group_from_log(&l)?;
    match rec.integrality {
        Integrality::Integral => {}
        Integrality::NonIntegral { index: (i, j), valuation } => {
            return Err(Error::NonIntegral {
                index: format!("x{i}y{j}"),
                detail: format!(
                    "group law coefficient has valuation {valuation}; the family is not the endomorphism family of a formal group"
                ),
            })
        }
        Integrality::Unknown { index: (i, j), precision } => {
            return Err(Error::Undecidable {
                index: i + j,
                detail: format!("group law coefficient x{i}y{j} known only to precision {precision}"),
            })
        }
    }
    let law = rec.law;
    let functional_equation = verify_log(fam, &l, samples)?;
    let axioms = law.check_axioms()?;
    let endo_checks = samples
        .iter()
        .map(|a| {
            let fa = fam.eval(a)?;
            Ok(SampleCheck::from_agreement(a, law.endo_check(&fa)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let exp_checks = samples
        .iter()
        .map(|a| {
            let fa = fam.eval(a)?;
            Ok(SampleCheck::from_agreement(a, exp_check(&l, a, &fa)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = functional_equation.iter().all(|c| c.holds)
        && axioms.holds()
        && endo_checks.iter().all(|c| c.holds)
        && exp_checks.iter().all(|c| c.holds);
    Ok(Recovery {
        report: RecoveryReport {
            degree: law.degree(),
            functional_equation,
            axioms,
            endo_checks,
            exp_checks,
            passed,
        },
        law,
        log: l,
    })
}

/// Solve L(H) = α·L(T) for integral H and compare with F_α.
fn exp_check(l: &LogSeries, alpha: &OKValue, fa: &Series1) -> Result<Agreement<usize>> {
    let s = l.series();
    let r = s.ring();
    let rhs: Vec<Vec<Coeff>> = s
        .scale(&KValue::from_ok(alpha))?
        .coeffs()
        .iter()
        .map(|c| vec![*c])
        .collect();
    match solve_outer(r, s.coeffs(), &rhs, 1, Exec::default())? {
        Solved::Complete { comps, .. } => {
            let h = Series1::from_coeffs(r, comps.into_iter().flatten().collect());
            crate::lubin_tate::decided(h.agreement(fa)?)
        }
        Solved::NonIntegral { degree, .. } => Ok(Agreement {
            first_difference: Some(degree),
            precision: 0,
        }),
    }
}
