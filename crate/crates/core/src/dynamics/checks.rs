//! Commutation and fullness checks on a sample set.

use serde::{Deserialize, Serialize};

use super::family::Family;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lubin_tate::decided;
use crate::padic::OKValue;
use crate::series::{residue_decompose, Wideg};

/// A pair (α, β) with F_α∘F_β ≠ F_β∘F_α.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub alpha: String,
    pub beta: String,
    /// first degree where the two compositions differ
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutingReport {
    pub passed: bool,
    pub pairs_checked: usize,
    /// first failing pair in sample order
    pub witness: Option<Witness>,
    /// smallest precision among the compared coefficients
    pub precision: i32,
}

/// Checks F_α∘F_β = F_β∘F_α up to the family degree for all pairs of samples.
pub fn check_commuting(fam: &Family, samples: &[OKValue]) -> Result<CommutingReport> {
    check_commuting_with(fam, samples, Exec::default())
}

pub fn check_commuting_with(
    fam: &Family,
    samples: &[OKValue],
    exec: Exec,
) -> Result<CommutingReport> {
    let members = samples
        .iter()
        .map(|a| fam.eval(a))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..samples.len())
        .flat_map(|i| (i + 1..samples.len()).map(move |j| (i, j)))
        .collect();
    let results = exec.map(0..pairs.len(), |k| {
        let (i, j) = pairs[k];
        let ab = members[i].compose_with(&members[j], exec)?;
        let ba = members[j].compose_with(&members[i], exec)?;
        decided(ab.agreement(&ba)?)
    });
    let mut witness = None;
    let mut precision = i32::MAX;
    for (k, res) in results.into_iter().enumerate() {
        let a = res?;
        precision = precision.min(a.precision);
        if witness.is_none() {
            if let Some(index) = a.first_difference {
                let (i, j) = pairs[k];
                witness = Some(Witness {
                    alpha: samples[i].to_string(),
                    beta: samples[j].to_string(),
                    index,
                });
            }
        }
    }
    Ok(CommutingReport {
        passed: witness.is_none(),
        pairs_checked: pairs.len(),
        witness,
        precision: if pairs.is_empty() { fam.ring().precision() } else { precision },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    pub alpha: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Decomposition of F_π mod π as Ḡ(T^{p^d}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub d: u32,
    pub p_pow_d: u64,
    pub q: u64,
    /// Ḡ, or F_π mod π itself when no decomposition exists
    pub g_bar: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub passed: bool,
    /// F_α'(0) = α on the samples
    pub derivatives: Vec<DerivativeCheck>,
    pub wideg_f_pi: Wideg,
    pub q: u64,
    pub wideg_ok: bool,
    /// F_π'/π integral with a unit constant term
    pub unit_derivative: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unit_derivative_detail: Option<String>,
    pub residue: ResidueReport,
}

/// Fullness checks: derivatives on the samples, wideg(F_π) = q, F_π'/π a
/// unit series, and the residue decomposition of F_π with p^d = q.
pub fn check_full(fam: &Family, unit_samples: &[OKValue]) -> Result<FullReport> {
    let r = fam.ring();
    let q = r.q();
    let derivatives = unit_samples
        .iter()
        .map(|a| match fam.eval(a) {
            Ok(_) => Ok(DerivativeCheck {
                alpha: a.to_string(),
                holds: true,
                detail: None,
            }),
            Err(Error::Verification(m)) => Ok(DerivativeCheck {
                alpha: a.to_string(),
                holds: false,
                detail: Some(m),
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;

    let f_pi = fam.eval(&OKValue::pi(r))?;
    let wideg = f_pi.wideg()?;
    let wideg_ok = wideg == Wideg::Finite(q as usize);

    let pi_inv = crate::padic::KValue::new(-1, &OKValue::one(r));
    let dq = f_pi.derivative().scale(&pi_inv)?;
    let unit_detail = match dq.integrality() {
        crate::series::Integrality::Integral => {
            let c0 = dq.raw_coeff(0);
            match c0.valuation() {
                crate::padic::Valuation::Finite(0) => None,
                crate::padic::Valuation::Finite(v) => {
                    Some(format!("constant term has valuation {v}"))
                }
                crate::padic::Valuation::AtLeast(p) => {
                    return Err(Error::Undecidable {
                        index: 0,
                        detail: format!("constant term of F_pi'/pi known only to precision {p}"),
                    })
                }
            }
        }
        crate::series::Integrality::NonIntegral { index, valuation } => Some(format!(
            "coefficient {index} has valuation {valuation}"
        )),
        crate::series::Integrality::Unknown { index, precision } => {
            return Err(Error::Undecidable {
                index,
                detail: format!("F_pi'/pi known only to precision {precision}"),
            })
        }
    };

    let fbar = f_pi.residue_reduce()?;
    let residue = match residue_decompose(&fbar) {
        Ok((g, d)) => {
            let p_pow_d = r.p().pow(d);
            ResidueReport {
                d,
                p_pow_d,
                q,
                g_bar: g.to_string(),
                holds: p_pow_d == q,
            }
        }
        Err(Error::Verification(_)) | Err(Error::Precondition(_)) => ResidueReport {
            d: 0,
            p_pow_d: 1,
            q,
            g_bar: fbar.to_string(),
            holds: false,
        },
        Err(e) => return Err(e),
    };

    let passed = derivatives.iter().all(|c| c.holds) && wideg_ok && unit_detail.is_none() && residue.holds;
    Ok(FullReport {
        passed,
        derivatives,
        wideg_f_pi: wideg,
        q,
        wideg_ok,
        unit_derivative: unit_detail.is_none(),
        unit_derivative_detail: unit_detail,
        residue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{default_samples, family_from_lt, family_tabulated};
    use crate::padic::{make_ring, Ring};
    use crate::series::Series1;

    fn z(p: u64, n: u32) -> Ring {
        make_ring(p, &[0, 1], &[-(p as i64), 1], n).unwrap()
    }

    fn multiplicative(r: &Ring, d: usize) -> Series1 {
        let p = r.p() as usize;
        let mut c = vec![0i64; p + 1];
        for (k, x) in c.iter_mut().enumerate().skip(1) {
            *x = binom(p, k);
        }
        Series1::from_ints(r, d, &c)
    }

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }

    #[test]
    fn multiplicative_family_is_full_and_commuting() {
        let r = z(3, 12);
        let fam = family_from_lt(&multiplicative(&r, 20)).unwrap();
        let samples = default_samples(&r);
        let c = check_commuting(&fam, &samples).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(c.pairs_checked, samples.len() * (samples.len() - 1) / 2);
        let f = check_full(&fam, &samples).unwrap();
        assert!(f.passed, "{f:?}");
        assert_eq!(f.wideg_f_pi, Wideg::Finite(3));
        assert_eq!(f.residue.d, 1);
        let single = check_commuting(&fam, &samples[..1]).unwrap();
        assert!(single.passed);
        assert_eq!(single.pairs_checked, 0);
    }

    #[test]
    fn corrupted_table_fails_with_witness() {
        let r = z(3, 12);
        let fam = family_from_lt(&multiplicative(&r, 16)).unwrap();
        let keys = [OKValue::pi(&r), OKValue::from_int(&r, 2), OKValue::from_int(&r, 4)];
        let mut entries: Vec<_> = keys
            .iter()
            .map(|a| (a.clone(), (*fam.eval(a).unwrap()).clone()))
            .collect();
        let mut bad = entries[1].1.clone();
        let c = bad.coeff(4);
        let pi = crate::padic::KValue::from_ok(&OKValue::pi(&r));
        bad.set_coeff(4, &(c.checked_add(&pi).unwrap()));
        entries[1].1 = bad;
        let t = family_tabulated(&r, entries).unwrap();
        let c = check_commuting(&t, &keys).unwrap();
        assert!(!c.passed);
        let w = c.witness.unwrap();
        assert_eq!(w.alpha, keys[0].to_string());
        assert_eq!(w.beta, keys[1].to_string());
    }
}
