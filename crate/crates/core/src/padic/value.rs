//! Precision-carrying values of O_K and K.

use std::fmt;

use super::ring::{Elem, Ring, RingSpec};
use crate::error::{Error, Result};

/// Valuation of a value known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i32),
    /// Indistinguishable from zero: the valuation is at least this.
    AtLeast(i32),
}

impl Valuation {
    pub fn finite(self) -> Option<i32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// A guaranteed lower bound for the true valuation.
    pub fn lower_bound(self) -> i32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// Ring-free element of K: value π^shift · mant, known modulo π^prec.
///
/// Invariant: prec ≤ shift + rel_cap, the relative precision the raw
/// representation carries. Values handed to users are further clamped to
/// shift + N. Zero at precision P is stored as (shift = P, mant = 0, prec = P).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub(crate) shift: i32,
    pub(crate) mant: Elem,
    pub(crate) prec: i32,
}

impl Coeff {
    pub fn zero(prec: i32) -> Coeff {
        Coeff {
            shift: prec,
            mant: Elem::ZERO,
            prec,
        }
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }
    pub fn mant(&self) -> Elem {
        self.mant
    }
    pub fn prec(&self) -> i32 {
        self.prec
    }

    /// Integral value from a raw representative known modulo π^prec.
    pub(crate) fn integral(r: &RingSpec, x: Elem, prec: i32) -> Coeff {
        Coeff::from_parts(r, 0, x, prec)
    }

    /// π^shift · mant known modulo π^prec, normalized.
    pub(crate) fn from_parts(r: &RingSpec, shift: i32, mant: Elem, prec: i32) -> Coeff {
        let prec = prec.min(shift.saturating_add(r.rel_cap()));
        Coeff { shift, mant, prec }.normalized(r)
    }

    pub(crate) fn normalized(self, r: &RingSpec) -> Coeff {
        let v = r.val(&self.mant);
        if self.shift.saturating_add(v) >= self.prec {
            return Coeff::zero(self.prec);
        }
        if v == 0 {
            return self;
        }
        Coeff {
            shift: self.shift + v,
            mant: r.div_pi_pow(&self.mant, v),
            prec: self.prec,
        }
    }

    pub fn is_zero_at_prec(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.mant.is_zero() {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Finite(self.shift)
        }
    }

    /// Guaranteed lower bound of the true valuation.
    pub fn vlow(&self) -> i32 {
        self.valuation().lower_bound()
    }

    pub(crate) fn mul(&self, r: &RingSpec, o: &Coeff) -> Coeff {
        let prec = (self.prec.saturating_add(o.vlow())).min(o.prec.saturating_add(self.vlow()));
        if self.mant.is_zero() || o.mant.is_zero() {
            return Coeff::zero(prec);
        }
        let shift = self.shift + o.shift;
        Coeff::from_parts(r, shift, r.mul(&self.mant, &o.mant), prec)
    }

    pub(crate) fn add(&self, r: &RingSpec, o: &Coeff) -> Coeff {
        let prec = self.prec.min(o.prec);
        if o.mant.is_zero() {
            return Coeff { prec, ..*self }.clamp(r);
        }
        if self.mant.is_zero() {
            return Coeff { prec, ..*o }.clamp(r);
        }
        let s = self.shift.min(o.shift);
        let a = r.mul_pi_pow(&self.mant, self.shift - s);
        let b = r.mul_pi_pow(&o.mant, o.shift - s);
        Coeff::from_parts(r, s, r.add(&a, &b), prec)
    }

    fn clamp(self, r: &RingSpec) -> Coeff {
        if self.mant.is_zero() || self.shift >= self.prec {
            Coeff::zero(self.prec)
        } else {
            Coeff::from_parts(r, self.shift, self.mant, self.prec)
        }
    }

    pub(crate) fn neg(&self, r: &RingSpec) -> Coeff {
        Coeff {
            mant: r.neg(&self.mant),
            ..*self
        }
    }

    pub(crate) fn sub(&self, r: &RingSpec, o: &Coeff) -> Coeff {
        self.add(r, &o.neg(r))
    }

    /// Clamp to relative precision N.
    pub(crate) fn user(&self, r: &RingSpec) -> Coeff {
        if self.mant.is_zero() {
            return *self;
        }
        self.with_prec_at_most(r, self.shift + r.precision())
    }

    /// Lower the stated precision (never raises it).
    pub(crate) fn with_prec_at_most(&self, r: &RingSpec, prec: i32) -> Coeff {
        if prec >= self.prec {
            return *self;
        }
        Coeff { prec, ..*self }.clamp(r)
    }

    pub(crate) fn inv(&self, r: &RingSpec) -> Result<Coeff> {
        if self.mant.is_zero() {
            return Err(Error::NotAUnit(format!(
                "value indistinguishable from 0 at precision {}",
                self.prec
            )));
        }
        let u = r.inv_unit_elem(&self.mant)?;
        // relative precision is preserved
        let rel = self.prec - self.shift;
        Ok(Coeff::from_parts(r, -self.shift, u, -self.shift + rel))
    }

    /// The value as an integral raw element (requires shift ≥ 0 or zero).
    pub(crate) fn to_integral_elem(self, r: &RingSpec) -> Elem {
        if self.mant.is_zero() {
            Elem::ZERO
        } else {
            debug_assert!(self.shift >= 0);
            r.mul_pi_pow(&self.mant, self.shift)
        }
    }

    /// Precision-aware agreement: the difference vanishes modulo π^min(prec).
    pub(crate) fn agrees(&self, r: &RingSpec, o: &Coeff) -> bool {
        self.sub(r, o).is_zero_at_prec()
    }

    /// Canonical mantissa with the digits beyond the precision cleared.
    pub(crate) fn canonical(&self, r: &RingSpec) -> Coeff {
        if self.mant.is_zero() {
            return *self;
        }
        Coeff {
            mant: r.truncate_pi(&self.mant, self.prec - self.shift),
            ..*self
        }
    }

    pub(crate) fn format(&self, r: &RingSpec) -> String {
        if self.mant.is_zero() {
            return "0".into();
        }
        let c = self.canonical(r);
        let body = r.format_elem(&c.mant);
        if c.shift == 0 {
            body
        } else {
            format!("{body}@{}", c.shift)
        }
    }
}

/// Element of O_K with a guaranteed absolute precision (in π-digits).
#[derive(Clone)]
pub struct OKValue {
    ring: Ring,
    elem: Elem,
    prec: i32,
}

/// Element of K = O_K[1/π]: π^shift times an O_K mantissa.
#[derive(Clone)]
pub struct KValue {
    ring: Ring,
    c: Coeff,
}

fn check_ring(a: &Ring, b: &Ring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(a.label(), b.label()))
    }
}

impl OKValue {
    /// Exact (to the ring precision) element from a raw representative.
    pub fn new(ring: &Ring, elem: Elem) -> OKValue {
        let prec = ring.precision();
        OKValue::with_prec(ring, elem, prec)
    }

    pub fn with_prec(ring: &Ring, elem: Elem, prec: i32) -> OKValue {
        let prec = prec.clamp(0, ring.precision());
        OKValue {
            ring: ring.clone(),
            elem: ring.truncate_pi(&elem, prec),
            prec,
        }
    }

    pub fn from_int(ring: &Ring, c: i64) -> OKValue {
        OKValue::new(ring, ring.from_int(c))
    }

    pub fn zero(ring: &Ring) -> OKValue {
        OKValue::from_int(ring, 0)
    }

    pub fn one(ring: &Ring) -> OKValue {
        OKValue::from_int(ring, 1)
    }

    /// The distinguished uniformizer π.
    pub fn pi(ring: &Ring) -> OKValue {
        OKValue::new(ring, ring.pi_elem())
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<OKValue> {
        Ok(OKValue::new(ring, ring.parse_elem(s)?))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn elem(&self) -> Elem {
        self.elem
    }
    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub(crate) fn coeff(&self) -> Coeff {
        Coeff::integral(&self.ring, self.elem, self.prec)
    }

    pub(crate) fn from_coeff(ring: &Ring, c: &Coeff) -> OKValue {
        let prec = c.prec.min(ring.precision());
        let elem = if c.mant.is_zero() || c.shift >= prec {
            Elem::ZERO
        } else {
            c.to_integral_elem(ring)
        };
        OKValue::with_prec(ring, elem, prec.max(0))
    }

    pub fn val(&self) -> Valuation {
        let v = self.ring.val(&self.elem);
        if v >= self.prec {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Finite(v)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.val() == Valuation::Finite(0)
    }

    pub fn checked_add(&self, o: &OKValue) -> Result<OKValue> {
        check_ring(&self.ring, &o.ring)?;
        let elem = self.ring.add(&self.elem, &o.elem);
        Ok(OKValue::with_prec(&self.ring, elem, self.prec.min(o.prec)))
    }

    pub fn checked_sub(&self, o: &OKValue) -> Result<OKValue> {
        check_ring(&self.ring, &o.ring)?;
        let elem = self.ring.sub(&self.elem, &o.elem);
        Ok(OKValue::with_prec(&self.ring, elem, self.prec.min(o.prec)))
    }

    pub fn checked_mul(&self, o: &OKValue) -> Result<OKValue> {
        check_ring(&self.ring, &o.ring)?;
        let elem = self.ring.mul(&self.elem, &o.elem);
        let prec = (self.prec + o.val().lower_bound()).min(o.prec + self.val().lower_bound());
        Ok(OKValue::with_prec(&self.ring, elem, prec))
    }

    pub fn neg(&self) -> OKValue {
        OKValue::with_prec(&self.ring, self.ring.neg(&self.elem), self.prec)
    }

    pub fn pow(&self, exp: u64) -> OKValue {
        let mut acc = OKValue::one(&self.ring);
        for _ in 0..exp {
            acc = acc.checked_mul(self).expect("same ring");
        }
        acc
    }

    /// Inverse of a unit, to the same precision.
    pub fn inv_unit(&self) -> Result<OKValue> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self} is not a unit")));
        }
        let inv = self.ring.inv_unit_elem(&self.elem)?;
        Ok(OKValue::with_prec(&self.ring, inv, self.prec))
    }

    /// Reduction modulo π.
    pub fn residue(&self) -> super::ResidueValue {
        self.ring.residue_from_coords(&self.ring.residue_coords(&self.elem))
    }

    /// Teichmüller lift: the unique t with t^q = t and residue c.
    pub fn teichmuller(ring: &Ring, c: &super::ResidueValue) -> OKValue {
        OKValue::new(ring, ring.teichmuller_elem(&c.coords))
    }

    /// Decide agreement when the precision allows it: `Ok(false)` when the
    /// values differ at known precision, `Ok(true)` when they agree and both
    /// are known to at least `required` digits, an error otherwise.
    pub fn try_eq(&self, o: &OKValue, required: i32) -> Result<bool> {
        check_ring(&self.ring, &o.ring)?;
        if self != o {
            return Ok(false);
        }
        let p = self.prec.min(o.prec);
        if p >= required {
            Ok(true)
        } else {
            Err(Error::Undecidable {
                index: 0,
                detail: format!("values agree only to {p} digits, {required} required"),
            })
        }
    }

    /// Largest n with self ∈ 1 + π^n O_K (0 when self - 1 is a unit).
    pub fn one_unit_level(&self) -> Valuation {
        let d = self.checked_sub(&OKValue::one(&self.ring)).expect("same ring");
        d.val()
    }
}

impl PartialEq for OKValue {
    fn eq(&self, o: &OKValue) -> bool {
        if self.ring != o.ring {
            return false;
        }
        let d = self.ring.sub(&self.elem, &o.elem);
        self.ring.val(&d) >= self.prec.min(o.prec)
    }
}

impl fmt::Display for OKValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(pi^{})", self.ring.format_elem(&self.elem), self.prec)
    }
}

impl fmt::Debug for OKValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OKValue({self})")
    }
}

impl std::ops::Add for &OKValue {
    type Output = OKValue;
    fn add(self, o: &OKValue) -> OKValue {
        self.checked_add(o).expect("ring mismatch")
    }
}

impl std::ops::Sub for &OKValue {
    type Output = OKValue;
    fn sub(self, o: &OKValue) -> OKValue {
        self.checked_sub(o).expect("ring mismatch")
    }
}

impl std::ops::Mul for &OKValue {
    type Output = OKValue;
    fn mul(self, o: &OKValue) -> OKValue {
        self.checked_mul(o).expect("ring mismatch")
    }
}

impl KValue {
    pub fn from_ok(x: &OKValue) -> KValue {
        KValue {
            ring: x.ring.clone(),
            c: x.coeff(),
        }
    }

    pub(crate) fn from_coeff(ring: &Ring, c: Coeff) -> KValue {
        KValue {
            ring: ring.clone(),
            c,
        }
    }

    pub(crate) fn coeff(&self) -> Coeff {
        self.c
    }

    /// π^shift · mantissa.
    pub fn new(shift: i32, mantissa: &OKValue) -> KValue {
        let r = &mantissa.ring;
        KValue {
            ring: r.clone(),
            c: Coeff::from_parts(r, shift, mantissa.elem, shift + mantissa.prec),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Power of π in the normalized form (equals the valuation when nonzero).
    pub fn shift(&self) -> i32 {
        self.c.shift
    }

    /// Unit mantissa (or zero) with its relative precision.
    pub fn mantissa(&self) -> OKValue {
        OKValue::with_prec(&self.ring, self.c.mant, self.c.prec - self.c.shift)
    }

    /// Absolute precision.
    pub fn prec(&self) -> i32 {
        self.c.prec
    }

    pub fn val(&self) -> Valuation {
        self.c.valuation()
    }

    pub fn checked_add(&self, o: &KValue) -> Result<KValue> {
        check_ring(&self.ring, &o.ring)?;
        Ok(KValue::from_coeff(&self.ring, self.c.add(&self.ring, &o.c)))
    }

    pub fn checked_sub(&self, o: &KValue) -> Result<KValue> {
        check_ring(&self.ring, &o.ring)?;
        Ok(KValue::from_coeff(&self.ring, self.c.sub(&self.ring, &o.c)))
    }

    pub fn checked_mul(&self, o: &KValue) -> Result<KValue> {
        check_ring(&self.ring, &o.ring)?;
        Ok(KValue::from_coeff(&self.ring, self.c.mul(&self.ring, &o.c)))
    }

    pub fn inv(&self) -> Result<KValue> {
        Ok(KValue::from_coeff(&self.ring, self.c.inv(&self.ring)?))
    }

    /// The value as an O_K element when it is integral at its precision.
    pub fn to_ok(&self) -> Option<OKValue> {
        if self.c.vlow() >= 0 {
            Some(OKValue::from_coeff(&self.ring, &self.c))
        } else {
            None
        }
    }
}

impl PartialEq for KValue {
    fn eq(&self, o: &KValue) -> bool {
        self.ring == o.ring && self.c.agrees(&self.ring, &o.c)
    }
}

impl fmt::Display for KValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(pi^{})", self.c.format(&self.ring), self.c.prec)
    }
}

impl fmt::Debug for KValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KValue({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    fn z(p: u64, n: u32) -> Ring {
        make_ring(p, &[0, 1], &[-(p as i64), 1], n).unwrap()
    }

    #[test]
    fn small_integer_arithmetic_mod_81() {
        let r = z(3, 4);
        let two = OKValue::from_int(&r, 2);
        assert_eq!(&two + &two, OKValue::from_int(&r, 4));
        let a = OKValue::from_int(&r, 4);
        let b = OKValue::from_int(&r, -2);
        assert_eq!(&a * &b, OKValue::from_int(&r, 73));
    }

    #[test]
    fn valuations() {
        let r = z(3, 10);
        assert_eq!(OKValue::from_int(&r, 6).val(), Valuation::Finite(1));
        assert_eq!(OKValue::zero(&r).val(), Valuation::AtLeast(10));
        let rr = make_ring(3, &[0, 1], &[-3, 0, 1], 10).unwrap();
        assert_eq!(OKValue::from_int(&rr, 3).val(), Valuation::Finite(2));
    }

    #[test]
    fn unit_inverse_mod_256() {
        let r = z(2, 8);
        let three = OKValue::from_int(&r, 3);
        let inv = three.inv_unit().unwrap();
        assert_eq!(inv, OKValue::from_int(&r, 171));
        assert_eq!(OKValue::one(&r).inv_unit().unwrap(), OKValue::one(&r));
        let err = OKValue::from_int(&r, 2).inv_unit().unwrap_err();
        assert!(matches!(err, Error::NotAUnit(_)));
    }

    #[test]
    fn teichmuller_and_residue() {
        let r = z(5, 6);
        let c = r.residue_from_coords(&[2]);
        let t = OKValue::teichmuller(&r, &c);
        assert_eq!(t.elem().0[0] % 25, 7);
        assert_eq!(t.residue(), c);
        assert_eq!(OKValue::from_int(&z(3, 5), 7).residue().coords, vec![1]);
        assert!(OKValue::pi(&r).residue().is_zero());
    }

    #[test]
    fn precision_aware_equality() {
        let r = z(3, 10);
        let a = OKValue::with_prec(&r, r.from_int(1), 2);
        let b = OKValue::from_int(&r, 10); // 1 + 9
        assert_eq!(a, b);
        assert!(a.try_eq(&b, 5).is_err());
        assert_eq!(b.try_eq(&OKValue::from_int(&r, 10), 5), Ok(true));
        assert_eq!(b.try_eq(&OKValue::from_int(&r, 11), 5), Ok(false));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = OKValue::one(&z(3, 5));
        let b = OKValue::one(&z(5, 5));
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_, _))));
    }

    #[test]
    fn kvalue_shift_and_inverse() {
        let r = z(3, 10);
        let nine = KValue::from_ok(&OKValue::from_int(&r, 18));
        assert_eq!(nine.val(), Valuation::Finite(2));
        let inv = nine.inv().unwrap();
        assert_eq!(inv.val(), Valuation::Finite(-2));
        let prod = inv.checked_mul(&nine).unwrap();
        assert_eq!(prod, KValue::from_ok(&OKValue::one(&r)));
        assert_eq!(prod.prec(), 8);
    }
}
