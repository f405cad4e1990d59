use std::fmt;

use super::{integrality_of, Agreement, Integrality};
use crate::error::{Error, Result};
use crate::padic::{Coeff, KValue, OKValue, Ring};

/// Truncated two-variable series Σ c_{ij} X^i Y^j, i + j ≤ D, stored by
/// total degree: `comps[d][i]` is the coefficient of X^i Y^(d-i).
#[derive(Clone)]
pub struct Series2 {
    ring: Ring,
    comps: Vec<Vec<Coeff>>,
}

impl Series2 {
    pub fn from_comps(ring: &Ring, comps: Vec<Vec<Coeff>>) -> Series2 {
        assert!(!comps.is_empty());
        let comps = comps
            .into_iter()
            .enumerate()
            .map(|(d, comp)| {
                assert_eq!(comp.len(), d + 1, "component {d} has wrong length");
                comp.into_iter().map(|c| c.user(ring)).collect()
            })
            .collect();
        Series2 {
            ring: ring.clone(),
            comps,
        }
    }

    pub fn zero(ring: &Ring, deg: usize) -> Series2 {
        Series2 {
            ring: ring.clone(),
            comps: (0..=deg)
                .map(|d| vec![Coeff::zero(ring.precision()); d + 1])
                .collect(),
        }
    }

    /// Integer coefficients given as (i, j, c) for X^i Y^j.
    pub fn from_terms(ring: &Ring, deg: usize, terms: &[(usize, usize, i64)]) -> Series2 {
        let mut s = Series2::zero(ring, deg);
        for &(i, j, c) in terms {
            if i + j <= deg {
                s.comps[i + j][i] = OKValue::from_int(ring, c).coeff();
            }
        }
        s
    }

    /// X + Y.
    pub fn additive(ring: &Ring, deg: usize) -> Series2 {
        Series2::from_terms(ring, deg, &[(1, 0, 1), (0, 1, 1)])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn comps(&self) -> &[Vec<Coeff>] {
        &self.comps
    }

    /// Coefficient of X^i Y^j (zero at full precision beyond the truncation
    /// is not assumed: callers must stay within the degree).
    pub(crate) fn get(&self, i: usize, j: usize) -> Coeff {
        self.comps[i + j][i]
    }

    pub fn coeff(&self, i: usize, j: usize) -> KValue {
        KValue::from_coeff(&self.ring, self.get(i, j))
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: &KValue) {
        self.comps[i + j][i] = c.coeff().user(&self.ring);
    }

    pub fn truncate(&self, deg: usize) -> Series2 {
        Series2 {
            ring: self.ring.clone(),
            comps: self.comps[..=deg.min(self.degree())].to_vec(),
        }
    }

    pub fn precision_floor(&self) -> i32 {
        self.comps
            .iter()
            .flatten()
            .map(|c| c.prec())
            .min()
            .unwrap_or(0)
    }

    pub(crate) fn iter_indexed(&self) -> impl Iterator<Item = ((usize, usize), &Coeff)> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(d, comp)| comp.iter().enumerate().map(move |(i, c)| ((i, d - i), c)))
    }

    pub fn integrality(&self) -> Integrality<(usize, usize)> {
        integrality_of(self.iter_indexed())
    }

    pub fn is_integral(&self) -> bool {
        self.integrality().is_integral()
    }

    fn check_ring(&self, o: &Series2) -> Result<()> {
        if self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.label(), o.ring.label()))
        }
    }

    fn zip(&self, o: &Series2, f: impl Fn(&Coeff, &Coeff) -> Coeff) -> Result<Series2> {
        self.check_ring(o)?;
        let d = self.degree().min(o.degree());
        let comps = (0..=d)
            .map(|k| (0..=k).map(|i| f(&self.comps[k][i], &o.comps[k][i])).collect())
            .collect();
        Ok(Series2::from_comps(&self.ring, comps))
    }

    pub fn add(&self, o: &Series2) -> Result<Series2> {
        let r = self.ring.clone();
        self.zip(o, |a, b| a.add(&r, b))
    }

    pub fn sub(&self, o: &Series2) -> Result<Series2> {
        let r = self.ring.clone();
        self.zip(o, |a, b| a.sub(&r, b))
    }

    /// G(Y, X).
    pub fn swap(&self) -> Series2 {
        let comps = self
            .comps
            .iter()
            .map(|c| c.iter().rev().copied().collect())
            .collect();
        Series2 {
            ring: self.ring.clone(),
            comps,
        }
    }

    /// Naive product (used only off the integral fast paths).
    pub fn mul(&self, o: &Series2) -> Result<Series2> {
        self.check_ring(o)?;
        let r = &self.ring;
        let d = self.degree().min(o.degree());
        let mut comps: Vec<Vec<Option<Coeff>>> = (0..=d).map(|k| vec![None; k + 1]).collect();
        for da in 0..=d {
            for db in 0..=(d - da) {
                for (ia, a) in self.comps[da].iter().enumerate() {
                    for (ib, b) in o.comps[db].iter().enumerate() {
                        let t = a.mul(r, b);
                        let slot = &mut comps[da + db][ia + ib];
                        *slot = Some(match slot {
                            Some(acc) => acc.add(r, &t),
                            None => t,
                        });
                    }
                }
            }
        }
        let comps = comps
            .into_iter()
            .map(|c| c.into_iter().map(|x| x.expect("every slot is reached")).collect())
            .collect();
        Ok(Series2::from_comps(r, comps))
    }

    pub fn agreement(&self, o: &Series2) -> Result<Agreement<(usize, usize)>> {
        self.check_ring(o)?;
        let r = &self.ring;
        let d = self.degree().min(o.degree());
        let mut first = None;
        let mut prec = i32::MAX;
        for k in 0..=d {
            for i in 0..=k {
                let diff = self.comps[k][i].sub(r, &o.comps[k][i]);
                prec = prec.min(diff.prec());
                if first.is_none() && !diff.is_zero_at_prec() {
                    first = Some((i, k - i));
                }
            }
        }
        Ok(Agreement {
            first_difference: first,
            precision: prec,
        })
    }

    pub fn to_literal(&self) -> String {
        super::literal::format_series2(self)
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Series2> {
        super::literal::parse_series2(ring, s)
    }
}

impl PartialEq for Series2 {
    fn eq(&self, o: &Series2) -> bool {
        matches!(self.agreement(o), Ok(a) if a.holds())
    }
}

impl fmt::Debug for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series2({})", self.to_literal())
    }
}

impl fmt::Display for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn product_and_swap() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 10).unwrap();
        let s = Series2::additive(&r, 4);
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq, Series2::from_terms(&r, 4, &[(2, 0, 1), (1, 1, 2), (0, 2, 1)]));
        let g = Series2::from_terms(&r, 4, &[(2, 1, 5), (0, 1, 1)]);
        assert_eq!(g.swap(), Series2::from_terms(&r, 4, &[(1, 2, 5), (1, 0, 1)]));
    }
}
