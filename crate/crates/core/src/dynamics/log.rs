//! The logarithm of a full family: L = T + O(T^2) with L∘F_α = α·L.

use serde::{Deserialize, Serialize};

use super::family::Family;
use super::SampleCheck;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lubin_tate::{decided, LogSeries};
use crate::padic::{Coeff, KValue, OKValue};
use crate::series::compose::compose_on_table;
use crate::series::raw::RawSeries;
use crate::series::table::PowTable;
use crate::series::Series1;

/// Solve L∘F_π = π·L degree by degree:
/// a_m (π - π^m) = Σ_{j<m} a_j [F_π^j]_m.
pub fn solve_log(fam: &Family) -> Result<LogSeries> {
    let r = fam.ring();
    let f = fam.eval(&OKValue::pi(r))?;
    let d = f.degree();
    if d < 1 {
        return Err(Error::Precondition("family degree must be at least 1".into()));
    }
    let pi = OKValue::pi(r);
    let mut powers: Vec<Series1> = vec![Series1::from_ints(r, d, &[1]), (*f).clone()];
    let mut a: Vec<Coeff> = vec![Coeff::zero(r.cap()), OKValue::one(r).coeff()];
    for m in 2..=d {
        let mut s = Coeff::zero(r.cap());
        for (j, aj) in a.iter().enumerate().skip(1) {
            s = s.add(r, &aj.mul(r, &powers[j].raw_coeff(m)));
        }
        let den = pi.checked_sub(&pi.pow(m as u64))?.coeff();
        let am = s.mul(r, &den.inv(r)?);
        if am.is_zero_at_prec() && am.prec() <= 0 {
            return Err(Error::PrecisionExhausted {
                index: m,
                detail: format!("log coefficient known only to precision {}", am.prec()),
            });
        }
        a.push(am);
        let next = powers[m - 1].mul(&f)?;
        powers.push(next);
    }
    LogSeries::new(Series1::from_coeffs(r, a))
}

/// L∘F_α against α·L for each sample.
pub fn verify_log(fam: &Family, l: &LogSeries, samples: &[OKValue]) -> Result<Vec<SampleCheck<usize>>> {
    let checks = Exec::default().map(0..samples.len(), |k| {
        let alpha = &samples[k];
        let fa = fam.eval(alpha)?;
        let lhs = l.series().compose(&fa)?;
        let rhs = l.series().scale(&KValue::from_ok(alpha))?;
        let a = decided(lhs.agreement(&rhs)?)?;
        Ok(SampleCheck::from_agreement(alpha, a))
    });
    checks.into_iter().collect()
}

/// Solve for L and verify L∘F_α = α·L on the samples.
pub fn lubin_log(fam: &Family, samples: &[OKValue]) -> Result<LogSeries> {
    let l = solve_log(fam)?;
    for c in verify_log(fam, &l, samples)? {
        if let Some(i) = c.first_difference {
            return Err(Error::Verification(format!(
                "L(F_alpha) differs from alpha*L at degree {i} for alpha = {}",
                c.alpha
            )));
        }
    }
    Ok(l)
}

/// L estimated as π^{-n} F_π^{∘n} for growing n.
#[derive(Clone, Debug)]
pub struct IteratedLog {
    /// best estimate; each coefficient carries the precision at which the
    /// iterates had stabilized
    pub series: Series1,
    /// the iterate each coefficient was taken from
    pub iterate: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationSummary {
    pub iterations: usize,
    pub min_precision: i32,
}

impl IteratedLog {
    pub fn summary(&self) -> IterationSummary {
        IterationSummary {
            iterations: self.iterate.iter().copied().max().unwrap_or(0),
            min_precision: self.series.precision_floor(),
        }
    }
}

/// Consecutive differences an estimate must survive.
const WINDOW: usize = 3;

/// Independent estimate of the logarithm from the iterates L_n = π^{-n} F_π^{∘n}.
/// The precision of coefficient k is the best over n with q^n > k of the
/// minimum of prec L_n[k] and val(L_m[k] - L_{m+1}[k]) for n ≤ m < n + WINDOW.
pub fn log_by_iteration(fam: &Family) -> Result<IteratedLog> {
    let r = fam.ring();
    let f = fam.eval(&OKValue::pi(r))?;
    let d = f.degree();
    let raw = RawSeries::from_series1(&f)
        .ok_or_else(|| Error::Precondition("F_pi must be integral".into()))?;
    let table = PowTable::build(r, &raw, d, Exec::default());
    let max_n = r.precision() as usize + 2;

    let mut iterates: Vec<Series1> = Vec::with_capacity(max_n + 1);
    let mut it = (*f).clone();
    for n in 1..=max_n + WINDOW {
        let scaled = it.scale(&KValue::new(-(n as i32), &OKValue::one(r)))?;
        iterates.push(scaled);
        let comps = compose_on_table(r, it.coeffs(), &table);
        it = Series1::from_coeffs(r, comps.into_iter().flatten().collect());
    }

    let q = r.q() as usize;
    let mut coeffs = vec![Coeff::zero(r.cap()); d + 1];
    let mut best = vec![i32::MIN; d + 1];
    let mut from = vec![0usize; d + 1];
    for n in 0..max_n {
        // F^{∘(n+1)} ≡ T^{q^{n+1}} mod π: below that reach the iterate says nothing
        let reach = q.saturating_pow(n as u32 + 1);
        let window = &iterates[n..n + WINDOW + 1];
        for k in 0..=d.min(reach.saturating_sub(1)) {
            let x = window[0].raw_coeff(k);
            let est = window
                .windows(2)
                .map(|w| w[0].raw_coeff(k).sub(r, &w[1].raw_coeff(k)).vlow())
                .fold(x.prec(), i32::min);
            if est > best[k] {
                best[k] = est;
                coeffs[k] = x.with_prec_at_most(r, est);
                from[k] = n + 1;
            }
        }
    }
    if let Some(k) = best.iter().position(|&b| b == i32::MIN) {
        return Err(Error::PrecisionExhausted {
            index: k,
            detail: "iterates do not reach this degree".into(),
        });
    }
    Ok(IteratedLog {
        series: Series1::from_coeffs(r, coeffs),
        iterate: from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{default_samples, family_conjugate, family_from_lt};
    use crate::padic::{make_ring, Ring};
    use std::sync::Arc;

    fn z(p: u64, n: u32) -> Ring {
        make_ring(p, &[0, 1], &[-(p as i64), 1], n).unwrap()
    }

    fn log1p(r: &Ring, d: usize) -> Series1 {
        Series1::from_ints(r, d - 1, &[1, 1]).recip().unwrap().integrate().unwrap()
    }

    #[test]
    fn multiplicative_log_is_log1p() {
        let r = z(3, 16);
        let fam = family_from_lt(&Series1::from_ints(&r, 24, &[0, 3, 3, 1])).unwrap();
        let l = lubin_log(&fam, &default_samples(&r)).unwrap();
        let a = l.series().agreement(&log1p(&r, 24)).unwrap();
        assert!(a.holds() && a.precision >= 1, "{a:?}");
    }

    #[test]
    fn one_step_by_hand() {
        // f = 2T + T^2: a_2 = -1 / (2 - 4) ... = -1/2
        let r = z(2, 16);
        let fam = family_from_lt(&Series1::from_ints(&r, 8, &[0, 2, 1])).unwrap();
        let l = solve_log(&fam).unwrap();
        let half = KValue::new(-1, &OKValue::from_int(&r, -1));
        assert!(l.series().coeff(2).checked_sub(&half).unwrap().val().lower_bound() >= 10);
        let a = l.series().agreement(&log1p(&r, 8)).unwrap();
        assert!(a.holds());
    }

    #[test]
    fn conjugated_log_is_l_of_u() {
        let r = z(2, 16);
        let base = Arc::new(family_from_lt(&Series1::from_ints(&r, 16, &[0, 2, 1])).unwrap());
        let u = Series1::from_ints(&r, 16, &[0, 1, 1]);
        let conj = family_conjugate(&u, base.clone()).unwrap();
        let l = solve_log(&base).unwrap();
        let lc = lubin_log(&conj, &default_samples(&r)).unwrap();
        let a = lc.series().agreement(&l.series().compose(&u).unwrap()).unwrap();
        assert!(a.holds() && a.precision >= 1, "{a:?}");
    }

    #[test]
    fn iteration_agrees_with_recurrence() {
        let r = z(3, 16);
        let fam = family_from_lt(&Series1::from_ints(&r, 20, &[0, 3, 0, 1])).unwrap();
        let l = solve_log(&fam).unwrap();
        let it = log_by_iteration(&fam).unwrap();
        let a = l.series().agreement(&it.series).unwrap();
        assert!(a.holds(), "{a:?}");
        assert!(it.series.precision_floor() >= 3, "{:?}", it.summary());
    }

    #[test]
    fn wrong_table_fails_verification() {
        let r = z(3, 12);
        let fam = family_from_lt(&Series1::from_ints(&r, 12, &[0, 3, 3, 1])).unwrap();
        let pi = OKValue::pi(&r);
        let two = OKValue::from_int(&r, 2);
        let bad = Series1::from_ints(&r, 12, &[0, 2, 0, 1]);
        let t = crate::dynamics::family_tabulated(
            &r,
            vec![(pi.clone(), (*fam.eval(&pi).unwrap()).clone()), (two.clone(), bad)],
        )
        .unwrap();
        assert!(matches!(lubin_log(&t, &[two]), Err(Error::Verification(_))));
    }
}
