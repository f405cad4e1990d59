//! Commuting families of p-adic dynamical systems: verification of
//! commutation and fullness, the logarithm of a full family, counting of
//! torsion-like points via Newton polygons, fixed-point profiles, recovery
//! of a formal group, and the search for μ with F_μ ≡ T^q mod π.

mod checks;
mod family;
mod log;
mod mu;
mod recover;
mod stats;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{OKValue, Ring, Valuation};

pub use checks::{
    check_commuting, check_commuting_with, check_full, CommutingReport, DerivativeCheck, FullReport,
    ResidueReport, Witness,
};
pub use family::{
    family_conjugate, family_from_lt, family_tabulated, random_conjugator, Backend, Family,
    FamilyDescriptor, TableEntry,
};
pub use log::{log_by_iteration, lubin_log, solve_log, verify_log, IteratedLog, IterationSummary};
pub use mu::{mu_search, mu_verify, MuCertificate, MuSearch, MuVerification};
pub use recover::{recover_group, Recovery, RecoveryReport};
pub use stats::{fixedpoint_profile, lambda_stats, FixedPointProfile, LambdaStats};

/// Outcome of one per-sample check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCheck<I> {
    pub alpha: String,
    pub holds: bool,
    pub first_difference: Option<I>,
    pub precision: i32,
}

impl<I> SampleCheck<I> {
    pub(crate) fn from_agreement(alpha: &OKValue, a: crate::series::Agreement<I>) -> Self {
        SampleCheck {
            alpha: alpha.to_string(),
            holds: a.first_difference.is_none(),
            first_difference: a.first_difference,
            precision: a.precision,
        }
    }
}

/// Parse a value of O_K: a decimal integer, `pi`, `pi^k`, sums such as
/// `1+pi^2` or `3*pi-2`, or `#` followed by an element literal.
pub fn parse_value(ring: &Ring, s: &str) -> Result<OKValue> {
    let s = s.trim();
    if let Some(lit) = s.strip_prefix('#') {
        return Ok(OKValue::new(ring, ring.parse_elem(lit)?));
    }
    let bad = || Error::Parse(format!("bad value {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && i == 0 {
            neg = true;
        } else if ch != '+' || i != 0 {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    let mut total = OKValue::zero(ring);
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(bad());
        }
        let (coef, rest) = match t.split_once('*') {
            Some((c, r)) => (c.parse::<i64>().map_err(|_| bad())?, Some(r)),
            None if t.starts_with("pi") => (1, Some(t.as_str())),
            None => (t.parse::<i64>().map_err(|_| bad())?, None),
        };
        let mut v = OKValue::from_int(ring, coef);
        if let Some(r) = rest {
            let k = match r.strip_prefix("pi") {
                Some("") => 1,
                Some(e) => e
                    .strip_prefix('^')
                    .and_then(|e| e.parse::<u64>().ok())
                    .ok_or_else(bad)?,
                None => return Err(bad()),
            };
            v = v.checked_mul(&OKValue::pi(ring).pow(k))?;
        }
        total = if neg {
            total.checked_sub(&v)?
        } else {
            total.checked_add(&v)?
        };
    }
    Ok(total)
}

/// Element literal form `#…` accepted by [`parse_value`].
pub fn format_value(a: &OKValue) -> String {
    format!("#{}", a.ring().format_elem(&a.elem()))
}

/// n(α): the largest n with α ∈ 1 + π^n O_K.
pub fn n_alpha(alpha: &OKValue) -> Result<u32> {
    if !alpha.is_unit() {
        return Err(Error::Precondition(format!("{alpha} is not a unit")));
    }
    let d = alpha.checked_sub(&OKValue::one(alpha.ring()))?;
    match d.val() {
        Valuation::Finite(n) => Ok(n as u32),
        Valuation::AtLeast(p) => Err(Error::Precondition(format!(
            "alpha is indistinguishable from 1 modulo pi^{p}"
        ))),
    }
}

/// At most this many Teichmüller units enter the default samples.
const MAX_TEICHMULLER_SAMPLES: usize = 16;

/// {π} ∪ Teichmüller units ∪ {1 + π^k : k ≤ 3} ∪ {-1, 2, 3}, without repeats.
pub fn default_samples(ring: &Ring) -> Vec<OKValue> {
    let mut out: Vec<OKValue> = vec![OKValue::pi(ring)];
    let mut push = |x: OKValue| {
        if x.val().finite().is_some() && !out.contains(&x) {
            out.push(x);
        }
    };
    for c in ring
        .residue_elements()
        .into_iter()
        .filter(|c| !c.is_zero())
        .take(MAX_TEICHMULLER_SAMPLES)
    {
        push(OKValue::teichmuller(ring, &c));
    }
    for k in 1..=3 {
        push(&OKValue::one(ring) + &OKValue::pi(ring).pow(k));
    }
    for c in [-1, 2, 3] {
        push(OKValue::from_int(ring, c));
    }
    out
}

/// The unit members of [`default_samples`].
pub fn default_unit_samples(ring: &Ring) -> Vec<OKValue> {
    default_samples(ring).into_iter().filter(|a| a.is_unit()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn value_syntax() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 10).unwrap();
        assert_eq!(parse_value(&r, "4").unwrap(), OKValue::from_int(&r, 4));
        assert_eq!(parse_value(&r, "-1").unwrap(), OKValue::from_int(&r, -1));
        assert_eq!(parse_value(&r, "1+pi^2").unwrap(), OKValue::from_int(&r, 10));
        assert_eq!(parse_value(&r, "2*pi - 1").unwrap(), OKValue::from_int(&r, 5));
        assert_eq!(parse_value(&r, "pi").unwrap(), OKValue::pi(&r));
        assert_eq!(parse_value(&r, "#11").unwrap(), OKValue::from_int(&r, 4));
        let x = OKValue::from_int(&r, -7);
        assert_eq!(parse_value(&r, &format_value(&x)).unwrap(), x);
        assert!(parse_value(&r, "pi^").is_err());
        assert!(parse_value(&r, "x").is_err());
    }

    #[test]
    fn n_alpha_examples() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 10).unwrap();
        assert_eq!(n_alpha(&OKValue::from_int(&r, 4)).unwrap(), 1);
        assert_eq!(n_alpha(&OKValue::from_int(&r, 10)).unwrap(), 2);
        assert_eq!(n_alpha(&OKValue::from_int(&r, 2)).unwrap(), 0);
        assert!(n_alpha(&OKValue::one(&r)).is_err());
        assert!(n_alpha(&OKValue::from_int(&r, 3)).is_err());
    }

    #[test]
    fn samples_are_distinct() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 10).unwrap();
        let s = default_samples(&r);
        // pi, teich(1), teich(2) = -1, 1+3, 1+9, 1+27, 2; 3 = pi
        assert_eq!(s.len(), 7);
        assert!(default_unit_samples(&r).iter().all(|a| a.is_unit()));
    }
}
