//! Reduction of integral series modulo π and the decomposition
//! F̄ = Ḡ(T^{p^d}) with Ḡ'(0) ≠ 0.

use std::fmt;

use super::Series1;
use crate::error::{Error, Result};
use crate::padic::{ResidueValue, Ring, Valuation};

/// Truncated power series over the residue field k.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSeries {
    ring: Ring,
    coeffs: Vec<ResidueValue>,
}

impl ResidueSeries {
    pub fn new(ring: &Ring, coeffs: Vec<ResidueValue>) -> ResidueSeries {
        assert!(!coeffs.is_empty());
        let coeffs = coeffs
            .into_iter()
            .map(|c| ring.residue_from_coords(&c.coords))
            .collect();
        ResidueSeries {
            ring: ring.clone(),
            coeffs,
        }
    }

    /// Coefficients in the prime field; c_i given as integers.
    pub fn from_ints(ring: &Ring, deg: usize, coeffs: &[i64]) -> ResidueSeries {
        let p = ring.p() as i64;
        let cs = (0..=deg)
            .map(|i| {
                let c = coeffs.get(i).copied().unwrap_or(0).rem_euclid(p) as u64;
                ring.residue_from_coords(&[c])
            })
            .collect();
        ResidueSeries::new(ring, cs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ResidueValue] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    /// Ḡ(T^k) truncated at `deg`.
    pub fn inflate(&self, k: usize, deg: usize) -> ResidueSeries {
        let mut cs = vec![self.ring.residue_zero(); deg + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k <= deg {
                cs[i * k] = c.clone();
            }
        }
        ResidueSeries {
            ring: self.ring.clone(),
            coeffs: cs,
        }
    }
}

impl fmt::Display for ResidueSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = self.ring.residue_one();
        let terms: Vec<String> = self
            .support()
            .map(|i| {
                let c = &self.coeffs[i];
                let mono = match i {
                    0 => String::new(),
                    1 => "T".to_string(),
                    _ => format!("T^{i}"),
                };
                match (c == &one, i) {
                    (true, 0) => "1".to_string(),
                    (true, _) => mono,
                    (false, 0) => format!("({c})"),
                    (false, _) => format!("({c})*{mono}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for ResidueSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(T^{})", self.degree() + 1)
    }
}

impl Series1 {
    /// Coefficientwise reduction modulo π; needs an integral series whose
    /// coefficients are known to at least one digit.
    pub fn residue_reduce(&self) -> Result<ResidueSeries> {
        let r = self.ring();
        let mut cs = Vec::with_capacity(self.degree() + 1);
        for (i, c) in self.coeffs().iter().enumerate() {
            let res = match c.valuation() {
                Valuation::Finite(v) if v < 0 => {
                    return Err(Error::NonIntegral {
                        index: i.to_string(),
                        detail: format!("valuation {v}; reduction needs an integral series"),
                    })
                }
                Valuation::Finite(0) => r.residue_from_coords(&r.residue_coords(&c.mant())),
                Valuation::Finite(_) => r.residue_zero(),
                Valuation::AtLeast(p) if p >= 1 => r.residue_zero(),
                Valuation::AtLeast(p) => {
                    return Err(Error::Undecidable {
                        index: i,
                        detail: format!("coefficient known only modulo π^{p}"),
                    })
                }
            };
            cs.push(res);
        }
        Ok(ResidueSeries {
            ring: r.clone(),
            coeffs: cs,
        })
    }
}

/// Largest d with F̄ = Ḡ(T^{p^d}), together with Ḡ; Ḡ'(0) must be nonzero.
pub fn residue_decompose(fbar: &ResidueSeries) -> Result<(ResidueSeries, u32)> {
    if !fbar.coeffs[0].is_zero() {
        return Err(Error::Precondition("residue series has a constant term".into()));
    }
    if fbar.is_zero() {
        return Err(Error::Precondition("residue series is zero".into()));
    }
    let p = fbar.ring.p() as usize;
    let mut d = 0u32;
    let mut step = 1usize;
    while fbar.support().all(|i| i % (step * p) == 0) {
        step *= p;
        d += 1;
    }
    if fbar.coeffs.get(step).is_none_or(|c| c.is_zero()) {
        return Err(Error::Verification(format!(
            "no decomposition G(T^{step}) with G'(0) != 0 below degree {}",
            fbar.degree() + 1
        )));
    }
    let g: Vec<ResidueValue> = fbar.coeffs.iter().step_by(step).cloned().collect();
    Ok((
        ResidueSeries {
            ring: fbar.ring.clone(),
            coeffs: g,
        },
        d,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn reduction_examples() {
        let z2 = make_ring(2, &[0, 1], &[-2, 1], 8).unwrap();
        let f = Series1::from_ints(&z2, 4, &[0, 2, 1]);
        assert_eq!(f.residue_reduce().unwrap(), ResidueSeries::from_ints(&z2, 4, &[0, 0, 1]));
        let z3 = make_ring(3, &[0, 1], &[-3, 1], 8).unwrap();
        let f = Series1::from_ints(&z3, 12, &[1, 1]).pow(9).sub(&Series1::from_ints(&z3, 12, &[1])).unwrap();
        let mut want = vec![0; 10];
        want[9] = 1;
        assert_eq!(f.residue_reduce().unwrap(), ResidueSeries::from_ints(&z3, 12, &want));
    }

    #[test]
    fn decomposition_examples() {
        let z3 = make_ring(3, &[0, 1], &[-3, 1], 8).unwrap();
        let t3 = ResidueSeries::from_ints(&z3, 10, &[0, 0, 0, 1]);
        let (g, d) = residue_decompose(&t3).unwrap();
        assert_eq!((d, g.coeffs()[1].is_zero()), (1, false));
        assert_eq!(g.inflate(3, 10), t3);

        let f = ResidueSeries::from_ints(&z3, 10, &[0, 1, 0, 1]);
        let (g, d) = residue_decompose(&f).unwrap();
        assert_eq!((d, g.clone()), (0, f));

        let mut c = vec![0; 10];
        c[9] = 1;
        let t9 = ResidueSeries::from_ints(&z3, 20, &c);
        let (g, d) = residue_decompose(&t9).unwrap();
        assert_eq!(d, 2);
        assert_eq!(g.inflate(9, 20), t9);

        let bad = ResidueSeries::from_ints(&z3, 10, &[0, 0, 1, 1]);
        assert!(matches!(residue_decompose(&bad), Err(Error::Verification(_))));
    }
}
