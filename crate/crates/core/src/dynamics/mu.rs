//! Digit search for μ = π·u with F_μ ≡ T^q mod π.
//!
//! With the digits u_0, …, u_k of u fixed, changing u_{k+1} and later digits
//! multiplies μ by an element of 1 + π^{k+1} O_K, which moves F_μ mod π only
//! in degrees ≥ q^{k+2}. A violation below that degree therefore rules out
//! every extension of the prefix.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::family::Family;
use super::{format_value, SampleCheck};
use crate::error::{Error, Result};
use crate::lubin_tate::{is_lt_series, lt_group_law, LtCheck};
use crate::padic::{OKValue, ResidueValue, Valuation};
use crate::series::{Series1, Wideg};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuCertificate {
    /// μ as an element literal
    pub mu: String,
    /// residues of the Teichmüller digits of u = μ/π
    pub digits: Vec<String>,
    /// number of digits of u fixed by the search
    pub digits_determined: usize,
    /// F_μ ≡ T^q mod π verified for all coefficients up to this degree
    pub congruence_degree: usize,
    pub wideg: Wideg,
    pub wideg_ok: bool,
    pub lt_check: LtCheck,
    pub candidates_tried: usize,
}

#[derive(Clone, Debug)]
pub struct MuSearch {
    pub mu: OKValue,
    pub f_mu: Arc<Series1>,
    pub certificate: MuCertificate,
}

struct State<'a> {
    fam: &'a Family,
    residues: Vec<ResidueValue>,
    max_digits: usize,
    tried: usize,
    outside_table: usize,
    /// (first violating degree, candidate) of the closest miss
    best: Option<(usize, String)>,
}

/// First degree i ≤ D where F_μ - T^q has a unit (or worse) coefficient.
fn first_violation(f: &Series1, q: usize) -> Result<Option<usize>> {
    let r = f.ring();
    let one = OKValue::one(r).coeff();
    for (i, c) in f.coeffs().iter().enumerate() {
        let c = if i == q { c.sub(r, &one) } else { *c };
        match c.valuation() {
            Valuation::Finite(v) if v < 1 => return Ok(Some(i)),
            Valuation::AtLeast(p) if p < 1 => {
                return Err(Error::Undecidable {
                    index: i,
                    detail: format!("coefficient of F_mu known only to precision {p}"),
                })
            }
            _ => {}
        }
    }
    Ok(None)
}

impl State<'_> {
    fn search(
        &mut self,
        k: usize,
        u: &OKValue,
        digits: &mut Vec<ResidueValue>,
    ) -> Result<Option<(OKValue, Arc<Series1>)>> {
        let r = self.fam.ring().clone();
        let q = r.q() as usize;
        let pik = OKValue::pi(&r).pow(k as u64);
        let mut order: Vec<ResidueValue> = Vec::with_capacity(self.residues.len());
        if k == 0 {
            order.push(r.residue_one());
            order.extend(
                self.residues
                    .iter()
                    .filter(|c| !c.is_zero() && **c != r.residue_one())
                    .cloned(),
            );
        } else {
            order.push(r.residue_zero());
            order.extend(self.residues.iter().filter(|c| !c.is_zero()).cloned());
        }
        // degrees below q^{k+2} are frozen once digit k is fixed
        let frozen = (q as u64).saturating_pow(k as u32 + 2);
        for c in order {
            let u2 = u.checked_add(&OKValue::teichmuller(&r, &c).checked_mul(&pik)?)?;
            let mu = OKValue::pi(&r).checked_mul(&u2)?;
            self.tried += 1;
            let f = match self.fam.eval(&mu) {
                Ok(f) => f,
                Err(Error::NotInTable(_)) => {
                    self.outside_table += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            digits.push(c);
            match first_violation(&f, q)? {
                None => return Ok(Some((mu, f))),
                Some(v) => {
                    if self.best.as_ref().is_none_or(|(b, _)| v > *b) {
                        self.best = Some((v, mu.to_string()));
                    }
                    if k + 1 < self.max_digits && (v as u64) >= frozen {
                        if let Some(found) = self.search(k + 1, &u2, digits)? {
                            return Ok(Some(found));
                        }
                    }
                }
            }
            digits.pop();
        }
        Ok(None)
    }
}

/// Search μ = π·(u_0 + u_1 π + …) over Teichmüller digits, at most
/// `max_digits` of them, such that F_μ ≡ T^q mod π up to the family degree.
pub fn mu_search(fam: &Family, max_digits: usize) -> Result<MuSearch> {
    if max_digits == 0 {
        return Err(Error::Precondition("max_digits must be positive".into()));
    }
    let r = fam.ring();
    let mut st = State {
        fam,
        residues: r.residue_elements(),
        max_digits,
        tried: 0,
        outside_table: 0,
        best: None,
    };
    let mut digits = Vec::new();
    let found = st.search(0, &OKValue::zero(r), &mut digits)?;
    let Some((mu, f_mu)) = found else {
        let best = match &st.best {
            Some((v, m)) => format!(
                "best candidate mu = {m} satisfies the congruence only below degree {v}"
            ),
            None => "no candidate could be evaluated".into(),
        };
        return Err(Error::SearchExhausted(format!(
            "no mu with at most {max_digits} digits gives F_mu = T^{} mod pi up to degree {}; {best}; {} candidates tried, {} outside the family table",
            r.q(),
            fam.degree(),
            st.tried,
            st.outside_table
        )));
    };
    let wideg = f_mu.wideg()?;
    let lt_check = is_lt_series(&f_mu)?;
    Ok(MuSearch {
        certificate: MuCertificate {
            mu: format_value(&mu),
            digits: digits.iter().map(|c| c.to_string()).collect(),
            digits_determined: digits.len(),
            congruence_degree: f_mu.degree(),
            wideg_ok: wideg == Wideg::Finite(r.q() as usize),
            wideg,
            lt_check,
            candidates_tried: st.tried,
        },
        mu,
        f_mu,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuVerification {
    pub law_degree: usize,
    pub endo_checks: Vec<SampleCheck<(usize, usize)>>,
    pub passed: bool,
}

/// Builds the Lubin-Tate group of F_μ and checks every sampled F_α against it.
pub fn mu_verify(fam: &Family, found: &MuSearch, samples: &[OKValue]) -> Result<MuVerification> {
    let law = lt_group_law(&found.f_mu)?;
    let endo_checks = samples
        .iter()
        .map(|a| {
            let fa = fam.eval(a)?;
            Ok(SampleCheck::from_agreement(a, law.endo_check(&fa)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MuVerification {
        law_degree: law.degree(),
        passed: endo_checks.iter().all(|c| c.holds),
        endo_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{default_samples, family_conjugate, family_from_lt, family_tabulated};
    use crate::padic::make_ring;

    #[test]
    fn lt_family_gives_pi() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 12).unwrap();
        let f = Series1::from_ints(&r, 20, &[0, 3, 0, 1]);
        let fam = family_from_lt(&f).unwrap();
        let s = mu_search(&fam, 4).unwrap();
        assert_eq!(s.mu, OKValue::pi(&r));
        assert_eq!(*s.f_mu, f);
        assert_eq!(s.certificate.digits_determined, 1);
        assert!(s.certificate.wideg_ok && s.certificate.lt_check.holds);
    }

    #[test]
    fn conjugated_family_and_verification() {
        let r = make_ring(2, &[0, 1], &[-2, 1], 12).unwrap();
        let base = Arc::new(family_from_lt(&Series1::from_ints(&r, 16, &[0, 2, 1])).unwrap());
        let u = Series1::from_ints(&r, 16, &[0, 1, 1]);
        let conj = family_conjugate(&u, base).unwrap();
        let s = mu_search(&conj, 4).unwrap();
        assert!(s.certificate.lt_check.holds);
        let v = mu_verify(&conj, &s, &default_samples(&r)).unwrap();
        assert!(v.passed);
    }

    #[test]
    fn corrupted_family_exhausts() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 12).unwrap();
        let fam = family_from_lt(&Series1::from_ints(&r, 12, &[0, 3, 0, 1])).unwrap();
        let bump = Series1::from_ints(&r, 12, &[0, 0, 0, 0, 1]);
        let entries = [OKValue::pi(&r), OKValue::from_int(&r, -3)]
            .into_iter()
            .map(|a| {
                let f = fam.eval(&a).unwrap().add(&bump).unwrap();
                (a, f)
            })
            .collect();
        let t = family_tabulated(&r, entries).unwrap();
        let e = mu_search(&t, 4).unwrap_err();
        assert!(matches!(e, Error::SearchExhausted(_)), "{e}");
    }
}
