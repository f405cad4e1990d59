use std::fmt;

use serde::{Deserialize, Serialize};

use super::{integrality_of, Agreement, Integrality};
use crate::error::{Error, Result};
use crate::padic::{Coeff, KValue, OKValue, Ring, Valuation};

/// Truncated power series c_0 + c_1 T + … + c_D T^D over K.
#[derive(Clone)]
pub struct Series1 {
    ring: Ring,
    coeffs: Vec<Coeff>,
}

/// Weierstrass degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Wideg {
    Finite(usize),
    /// No unit coefficient up to the truncation degree.
    AtLeast(usize),
}

impl fmt::Display for Wideg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wideg::Finite(n) => write!(f, "{n}"),
            Wideg::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

impl Series1 {
    /// Build from coefficients c_0..c_D; relative precision is clamped to N.
    pub fn from_coeffs(ring: &Ring, coeffs: Vec<Coeff>) -> Series1 {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        let coeffs = coeffs.into_iter().map(|c| c.user(ring)).collect();
        Series1 {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn zero(ring: &Ring, deg: usize) -> Series1 {
        Series1 {
            ring: ring.clone(),
            coeffs: vec![Coeff::zero(ring.precision()); deg + 1],
        }
    }

    /// The series T.
    pub fn identity(ring: &Ring, deg: usize) -> Series1 {
        Series1::from_ints(ring, deg, &[0, 1])
    }

    /// Integer coefficients c_0, c_1, … (exact to N); the rest zero.
    pub fn from_ints(ring: &Ring, deg: usize, coeffs: &[i64]) -> Series1 {
        let mut s = Series1::zero(ring, deg);
        for (i, &c) in coeffs.iter().enumerate().take(deg + 1) {
            s.coeffs[i] = OKValue::from_int(ring, c).coeff();
        }
        s
    }

    /// Coefficients from O_K values with their precisions; the rest zero.
    pub fn from_values(ring: &Ring, deg: usize, values: &[OKValue]) -> Series1 {
        let mut s = Series1::zero(ring, deg);
        for (i, v) in values.iter().enumerate().take(deg + 1) {
            s.coeffs[i] = v.coeff();
        }
        s
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Truncation degree D.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> KValue {
        KValue::from_coeff(&self.ring, self.coeffs[i])
    }

    pub(crate) fn raw_coeff(&self, i: usize) -> Coeff {
        self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: &KValue) {
        self.coeffs[i] = c.coeff().user(&self.ring);
    }

    pub fn truncate(&self, deg: usize) -> Series1 {
        Series1 {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..=deg.min(self.degree())].to_vec(),
        }
    }

    /// Smallest coefficient precision.
    pub fn precision_floor(&self) -> i32 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap_or(0)
    }

    pub fn integrality(&self) -> Integrality<usize> {
        integrality_of(self.coeffs.iter().enumerate())
    }

    pub fn is_integral(&self) -> bool {
        self.integrality().is_integral()
    }

    /// Lowest index whose coefficient is decidably nonzero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_at_prec())
    }

    fn check_ring(&self, o: &Series1) -> Result<()> {
        if self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.label(), o.ring.label()))
        }
    }

    pub(crate) fn map_coeffs(&self, f: impl Fn(usize, &Coeff) -> Coeff) -> Series1 {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| f(i, c)).collect();
        Series1::from_coeffs(&self.ring, coeffs)
    }

    pub fn add(&self, o: &Series1) -> Result<Series1> {
        self.check_ring(o)?;
        let d = self.degree().min(o.degree());
        let r = &self.ring;
        Ok(Series1::from_coeffs(
            r,
            (0..=d).map(|i| self.coeffs[i].add(r, &o.coeffs[i])).collect(),
        ))
    }

    pub fn sub(&self, o: &Series1) -> Result<Series1> {
        self.check_ring(o)?;
        let d = self.degree().min(o.degree());
        let r = &self.ring;
        Ok(Series1::from_coeffs(
            r,
            (0..=d).map(|i| self.coeffs[i].sub(r, &o.coeffs[i])).collect(),
        ))
    }

    pub fn neg(&self) -> Series1 {
        let r = &self.ring;
        self.map_coeffs(|_, c| c.neg(r))
    }

    pub fn mul(&self, o: &Series1) -> Result<Series1> {
        self.check_ring(o)?;
        let d = self.degree().min(o.degree());
        let r = &self.ring;
        let coeffs = (0..=d)
            .map(|n| {
                let mut acc = self.coeffs[0].mul(r, &o.coeffs[n]);
                for i in 1..=n {
                    acc = acc.add(r, &self.coeffs[i].mul(r, &o.coeffs[n - i]));
                }
                acc
            })
            .collect();
        Ok(Series1::from_coeffs(r, coeffs))
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, a: &KValue) -> Result<Series1> {
        if a.ring() != &self.ring {
            return Err(Error::RingMismatch(self.ring.label(), a.ring().label()));
        }
        let r = &self.ring;
        let c = a.coeff();
        Ok(self.map_coeffs(|_, x| x.mul(r, &c)))
    }

    pub fn pow(&self, n: u32) -> Series1 {
        let mut acc = Series1::from_ints(&self.ring, self.degree(), &[1]);
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Formal derivative (degree drops by one).
    pub fn derivative(&self) -> Series1 {
        let r = &self.ring;
        let d = self.degree();
        if d == 0 {
            return Series1::zero(r, 0);
        }
        let coeffs = (1..=d)
            .map(|i| {
                let m = OKValue::from_int(r, i as i64).coeff();
                self.coeffs[i].mul(r, &m)
            })
            .collect();
        Series1::from_coeffs(r, coeffs)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Result<Series1> {
        let r = &self.ring;
        let a0_inv = self.coeffs[0].inv(r)?;
        let mut b: Vec<Coeff> = Vec::with_capacity(self.coeffs.len());
        b.push(a0_inv);
        for n in 1..=self.degree() {
            let mut acc = Coeff::zero(r.cap());
            for k in 1..=n {
                acc = acc.add(r, &self.coeffs[k].mul(r, &b[n - k]));
            }
            b.push(acc.neg(r).mul(r, &a0_inv));
        }
        Ok(Series1::from_coeffs(r, b))
    }

    /// Termwise antiderivative with zero constant term (degree grows by one).
    pub fn integrate(&self) -> Result<Series1> {
        let r = &self.ring;
        let mut coeffs = vec![Coeff::zero(r.cap())];
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = Coeff::integral(r, r.from_int(i as i64 + 1), r.cap()).inv(r)?;
            coeffs.push(c.mul(r, &m));
        }
        Ok(Series1::from_coeffs(r, coeffs))
    }

    /// F(T)/T for F(0) = 0 (degree drops by one).
    pub fn div_t(&self) -> Result<Series1> {
        if !self.coeffs[0].is_zero_at_prec() {
            return Err(Error::Precondition("F(0) ≠ 0: F/T is not a series".into()));
        }
        if self.degree() == 0 {
            return Ok(Series1::zero(&self.ring, 0));
        }
        Ok(Series1::from_coeffs(&self.ring, self.coeffs[1..].to_vec()))
    }

    /// Coefficientwise precision-aware comparison up to the common degree.
    pub fn agreement(&self, o: &Series1) -> Result<Agreement<usize>> {
        self.check_ring(o)?;
        let r = &self.ring;
        let d = self.degree().min(o.degree());
        let mut first = None;
        let mut prec = i32::MAX;
        for i in 0..=d {
            let diff = self.coeffs[i].sub(r, &o.coeffs[i]);
            prec = prec.min(diff.prec());
            if first.is_none() && !diff.is_zero_at_prec() {
                first = Some(i);
            }
        }
        Ok(Agreement {
            first_difference: first,
            precision: prec,
        })
    }

    /// Comparison that refuses to call a match unless every compared
    /// coefficient is known to at least `required` digits.
    pub fn agreement_decided(&self, o: &Series1, required: i32) -> Result<Agreement<usize>> {
        let a = self.agreement(o)?;
        if a.holds() && a.precision < required {
            let r = &self.ring;
            let idx = (0..=self.degree().min(o.degree()))
                .find(|&i| self.coeffs[i].sub(r, &o.coeffs[i]).prec() < required)
                .unwrap_or(0);
            return Err(Error::Undecidable {
                index: idx,
                detail: format!("agreement known only to precision {}", a.precision),
            });
        }
        Ok(a)
    }

    /// Smallest i with a unit coefficient.
    pub fn wideg(&self) -> Result<Wideg> {
        for (i, c) in self.coeffs.iter().enumerate() {
            match c.valuation() {
                Valuation::Finite(v) if v < 0 => {
                    return Err(Error::NonIntegral {
                        index: i.to_string(),
                        detail: "wideg needs an integral series".into(),
                    })
                }
                Valuation::Finite(0) => return Ok(Wideg::Finite(i)),
                Valuation::Finite(_) => {}
                Valuation::AtLeast(p) if p < 1 => {
                    return Err(Error::Undecidable {
                        index: i,
                        detail: format!("cannot tell whether the coefficient is a unit (precision {p})"),
                    })
                }
                Valuation::AtLeast(_) => {}
            }
        }
        Ok(Wideg::AtLeast(self.degree() + 1))
    }

    /// Literal text (see the series literal format).
    pub fn to_literal(&self) -> String {
        super::literal::format_series1(self)
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Series1> {
        super::literal::parse_series1(ring, s)
    }
}

impl PartialEq for Series1 {
    fn eq(&self, o: &Series1) -> bool {
        matches!(self.agreement(o), Ok(a) if a.holds())
    }
}

impl fmt::Debug for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series1({})", self.to_literal())
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}
