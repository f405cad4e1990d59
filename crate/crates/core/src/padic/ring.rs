//! The ring O_K = Z_p[x]/(u(x)) [π]/(E(π)) truncated at a fixed precision.
//!
//! Elements are coordinate vectors on the basis x^i π^j (i < f, j < e), each
//! coordinate a residue modulo p^M where M is the largest exponent with
//! p^M < 2^60 (and at least ceil(N/e) + 1). The digits beyond N are guard
//! digits: raw arithmetic is exact modulo p^M, and precision bookkeeping never
//! claims more than N.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fp_poly::{self, mulmod_u64};
use crate::error::{Error, Result};

/// Largest supported e·f.
pub const MAX_DIM: usize = 6;
const WIDE_SLOTS: usize = 16;
/// Moduli p^M must stay below this bound so that products fit in 120 bits.
pub const MODULUS_LIMIT: u64 = 1 << 60;

/// Raw coordinates of an element of O_K modulo p^M. Meaningless without its ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Elem(pub(crate) [u64; MAX_DIM]);

impl Elem {
    pub const ZERO: Elem = Elem([0; MAX_DIM]);

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[u64; MAX_DIM] {
        &self.0
    }
}

/// Serializable ring descriptor: polynomials are integer coefficient lists,
/// little-endian by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub p: u64,
    pub unram_poly: Vec<i64>,
    pub eis_poly: Vec<i64>,
    #[serde(rename = "N")]
    pub n: u32,
}

impl RingDescriptor {
    /// Z_p at precision N.
    pub fn zp(p: u64, n: u32) -> Self {
        RingDescriptor {
            p,
            unram_poly: vec![0, 1],
            eis_poly: vec![-(p as i64), 1],
            n,
        }
    }

    pub fn build(&self) -> Result<Ring> {
        make_ring(self.p, &self.unram_poly, &self.eis_poly, self.n)
    }
}

/// A validated ring handle. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Ring(Arc<RingSpec>);

impl std::ops::Deref for Ring {
    type Target = RingSpec;
    fn deref(&self) -> &RingSpec {
        &self.0
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}
impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.label())
    }
}

pub struct RingSpec {
    descriptor: RingDescriptor,
    p: u64,
    f: usize,
    e: usize,
    n: i32,
    digits: u32,
    modulus: u64,
    p_pows: Vec<u64>,
    /// monic, reduced mod p^M, length f + 1
    unram: Vec<u64>,
    /// monic, reduced mod p^M, length e + 1
    eis: Vec<u64>,
    /// monic, reduced mod p, length f + 1
    unram_res: Vec<u64>,
    pi: Elem,
    pi_pows: Vec<Elem>,
    eps_inv_pows: Vec<Elem>,
    q: u64,
    acc_budget: u64,
}

fn reduce_signed(c: i64, m: u64) -> u64 {
    let r = (c as i128).rem_euclid(m as i128);
    r as u64
}

fn vp_u64(mut c: u64, p: u64, cap: u32) -> u32 {
    if c == 0 {
        return cap;
    }
    let mut v = 0;
    while c.is_multiple_of(p) && v < cap {
        c /= p;
        v += 1;
    }
    v
}

/// Inverse of an integer unit modulo p^M by Newton iteration.
fn inv_mod_prime_power(a: u64, p: u64, m: u64) -> u64 {
    let mut x = fp_poly::inv_mod_prime(a % p, p) % m;
    // x <- x (2 - a x); precision doubles each round
    for _ in 0..7 {
        let ax = mulmod_u64(a % m, x, m);
        let two_minus = (2 % m + m - ax) % m;
        x = mulmod_u64(x, two_minus, m);
    }
    x
}

/// Validate the presentation and build a ring handle.
pub fn make_ring(p: u64, unram_poly: &[i64], eis_poly: &[i64], n: u32) -> Result<Ring> {
    if !fp_poly::is_prime(p) {
        return Err(Error::ring("p is prime", format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::ring("N >= 1", "precision must be positive"));
    }
    let unram_i = trim_signed(unram_poly);
    let eis_i = trim_signed(eis_poly);
    if unram_i.len() < 2 {
        return Err(Error::ring(
            "unramified polynomial has degree >= 1",
            format!("{unram_poly:?}"),
        ));
    }
    if eis_i.len() < 2 {
        return Err(Error::ring(
            "Eisenstein polynomial has degree >= 1",
            format!("{eis_poly:?}"),
        ));
    }
    let f = unram_i.len() - 1;
    let e = eis_i.len() - 1;
    if f * e > MAX_DIM {
        return Err(Error::ring(
            "e*f within supported dimension",
            format!("e*f = {} exceeds {MAX_DIM}", e * f),
        ));
    }
    let unram_mod_p: Vec<u64> = unram_i.iter().map(|&c| reduce_signed(c, p)).collect();
    if unram_mod_p[f] == 0 {
        return Err(Error::ring(
            "unramified polynomial has unit leading coefficient",
            format!("{unram_poly:?}"),
        ));
    }
    if !fp_poly::is_irreducible(&unram_mod_p, p) {
        return Err(Error::ring(
            "unramified polynomial irreducible mod p",
            format!("{unram_poly:?} is reducible mod {p}"),
        ));
    }
    let pi128 = p as i128;
    let lead = eis_i[e] as i128;
    let c0 = eis_i[0] as i128;
    let eis_ok = lead.rem_euclid(pi128) != 0
        && eis_i[..e].iter().all(|&c| (c as i128).rem_euclid(pi128) == 0)
        && c0 != 0
        && c0.rem_euclid(pi128 * pi128) != 0;
    if !eis_ok {
        return Err(Error::ring(
            "Eisenstein polynomial",
            format!("{eis_poly:?} is not Eisenstein at {p}"),
        ));
    }

    // At least one spare p-digit beyond N; then as many guard digits as fit.
    let needed = n.div_ceil(e as u32) + 1;
    let mut modulus: u128 = 1;
    let mut p_pows = vec![1u64];
    let mut digits = 0u32;
    while modulus * (p as u128) < MODULUS_LIMIT as u128 {
        modulus *= p as u128;
        p_pows.push(modulus as u64);
        digits += 1;
    }
    if digits < needed {
        return Err(Error::ring(
            "p^M fits the 60-bit word",
            format!("p = {p}, N = {n}: p^{needed} is too large; lower N"),
        ));
    }
    let m = modulus as u64;

    let normalize = |coeffs: &[i64]| -> Vec<u64> {
        let d = coeffs.len() - 1;
        let lead_inv = inv_mod_prime_power(reduce_signed(coeffs[d], m), p, m);
        coeffs
            .iter()
            .map(|&c| mulmod_u64(reduce_signed(c, m), lead_inv, m))
            .collect()
    };
    let unram = normalize(&unram_i);
    let eis = normalize(&eis_i);
    let unram_res: Vec<u64> = unram.iter().map(|&c| c % p).collect();

    let q = (p as u128).pow(f as u32);
    if q > u64::MAX as u128 / 4 {
        return Err(Error::ring("q fits a word", format!("p^f = {q}")));
    }

    let mut spec = RingSpec {
        descriptor: RingDescriptor {
            p,
            unram_poly: unram_poly.to_vec(),
            eis_poly: eis_poly.to_vec(),
            n,
        },
        p,
        f,
        e,
        n: n as i32,
        digits,
        modulus: m,
        p_pows,
        unram,
        eis,
        unram_res,
        pi: Elem::ZERO,
        pi_pows: Vec::new(),
        eps_inv_pows: Vec::new(),
        q: q as u64,
        acc_budget: 0,
    };
    let dim = (e * f) as u128;
    let sq = (m as u128 - 1).max(1).pow(2);
    spec.acc_budget = ((u128::MAX - m as u128) / (sq * dim)).min(u64::MAX as u128) as u64;

    // π and ε with π^e = p·ε
    let lead_inv = inv_mod_prime_power(reduce_signed(eis_i[e], m), p, m);
    let mut pi = Elem::ZERO;
    if e == 1 {
        pi.0[0] = mulmod_u64(reduce_signed(-eis_i[0], m), lead_inv, m);
    } else {
        pi.0[f] = 1 % m;
    }
    let mut eps = Elem::ZERO;
    for (t, &c) in eis_i.iter().take(e).enumerate() {
        let c_over_p = reduce_signed(-(c / p as i64), m);
        eps.0[t * f] = mulmod_u64(c_over_p, lead_inv, m);
    }
    spec.pi = pi;
    let full = spec.e * spec.digits as usize;
    let mut pows = vec![spec.one()];
    for k in 1..=full {
        let next = spec.mul(&pows[k - 1], &pi);
        pows.push(next);
    }
    spec.pi_pows = pows;
    let eps_inv = spec.inv_unit_elem(&eps)?;
    let mut eps_pows = vec![spec.one()];
    for k in 1..=(spec.digits as usize + 1) {
        let next = spec.mul(&eps_pows[k - 1], &eps_inv);
        eps_pows.push(next);
    }
    spec.eps_inv_pows = eps_pows;
    debug_assert_eq!(
        spec.val(&spec.sub(&spec.pi_pows[e], &spec.scale(&eps, p))),
        spec.cap()
    );
    Ok(Ring(Arc::new(spec)))
}

fn trim_signed(v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

impl RingSpec {
    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    /// Residue degree.
    pub fn f(&self) -> usize {
        self.f
    }
    /// Ramification index.
    pub fn e(&self) -> usize {
        self.e
    }
    /// Residue field size p^f.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Working precision in π-digits.
    pub fn precision(&self) -> i32 {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.e * self.f
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub(crate) fn unram_res(&self) -> &[u64] {
        &self.unram_res
    }
    /// Number of π-digits the raw representation resolves (e·M).
    pub(crate) fn cap(&self) -> i32 {
        (self.e as i32) * self.digits as i32
    }
    /// Relative precision a normalized mantissa can carry reliably.
    pub(crate) fn rel_cap(&self) -> i32 {
        self.cap() - self.e as i32
    }
    pub(crate) fn acc_budget(&self) -> u64 {
        self.acc_budget
    }

    /// Short label used as the ring reference in literals.
    pub fn label(&self) -> String {
        format!("p{}f{}e{}N{}", self.p, self.f, self.e, self.n)
    }

    pub fn pi_elem(&self) -> Elem {
        self.pi
    }

    pub fn one(&self) -> Elem {
        let mut x = Elem::ZERO;
        x.0[0] = 1 % self.modulus;
        x
    }

    pub fn from_int(&self, c: i64) -> Elem {
        let mut x = Elem::ZERO;
        x.0[0] = reduce_signed(c, self.modulus);
        x
    }

    pub fn from_coords(&self, coords: &[i64]) -> Elem {
        let mut x = Elem::ZERO;
        for (k, &c) in coords.iter().take(self.dim()).enumerate() {
            x.0[k] = reduce_signed(c, self.modulus);
        }
        x
    }

    #[inline]
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let m = self.modulus;
        let mut out = Elem::ZERO;
        for k in 0..self.dim() {
            let s = a.0[k] + b.0[k];
            out.0[k] = if s >= m { s - m } else { s };
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let m = self.modulus;
        let mut out = Elem::ZERO;
        for k in 0..self.dim() {
            out.0[k] = if a.0[k] >= b.0[k] {
                a.0[k] - b.0[k]
            } else {
                a.0[k] + m - b.0[k]
            };
        }
        out
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.sub(&Elem::ZERO, a)
    }

    /// Multiply by an integer scalar.
    pub fn scale(&self, a: &Elem, c: u64) -> Elem {
        let m = self.modulus;
        let c = c % m;
        let mut out = Elem::ZERO;
        for k in 0..self.dim() {
            out.0[k] = mulmod_u64(a.0[k], c, m);
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if self.dim() == 1 {
            let mut out = Elem::ZERO;
            out.0[0] = mulmod_u64(a.0[0], b.0[0], self.modulus);
            return out;
        }
        let mut wide = [0u128; WIDE_SLOTS];
        self.wide_mul_acc(&mut wide, a, b);
        self.reduce_wide(&wide)
    }

    pub fn pow(&self, a: &Elem, mut exp: u64) -> Elem {
        let mut acc = self.one();
        let mut base = *a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn wide_width(&self) -> usize {
        2 * self.f - 1
    }

    /// Number of u128 slots per element in an unreduced accumulator.
    #[inline]
    pub(crate) fn wide_slots(&self) -> usize {
        if self.dim() == 1 {
            1
        } else {
            (2 * self.f - 1) * (2 * self.e - 1)
        }
    }

    /// Add the unreduced product a·b into `wide`.
    #[inline]
    pub(crate) fn wide_mul_acc(&self, wide: &mut [u128], a: &Elem, b: &Elem) {
        let (f, e) = (self.f, self.e);
        if f == 1 || e == 1 {
            // one tower level: a plain polynomial product
            let n = f * e;
            for (i, &x) in a.0[..n].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u128;
                for (w, &y) in wide[i..i + n].iter_mut().zip(&b.0[..n]) {
                    *w += x * y as u128;
                }
            }
            return;
        }
        let w = self.wide_width();
        for j1 in 0..e {
            for i1 in 0..f {
                let x = a.0[j1 * f + i1];
                if x == 0 {
                    continue;
                }
                for j2 in 0..e {
                    let row = (j1 + j2) * w + i1;
                    for i2 in 0..f {
                        wide[row + i2] += x as u128 * b.0[j2 * f + i2] as u128;
                    }
                }
            }
        }
    }

    /// Reduce unreduced slots modulo m in place, keeping them accumulable.
    #[inline]
    pub(crate) fn wide_fold(&self, wide: &mut [u128]) {
        let m = self.modulus as u128;
        for s in wide.iter_mut() {
            *s %= m;
        }
    }

    pub(crate) fn reduce_wide(&self, wide: &[u128]) -> Elem {
        let m = self.modulus;
        if self.dim() == 1 {
            let mut out = Elem::ZERO;
            out.0[0] = (wide[0] % m as u128) as u64;
            return out;
        }
        let f = self.f;
        let e = self.e;
        let w = self.wide_width();
        let rows = 2 * e - 1;
        let mut c = [0u64; WIDE_SLOTS];
        for (k, slot) in c.iter_mut().enumerate().take(w * rows) {
            *slot = (wide[k] % m as u128) as u64;
        }
        // π^e = -Σ eis[s] π^s
        for j in (e..rows).rev() {
            for i in 0..w {
                let t = c[j * w + i];
                if t == 0 {
                    continue;
                }
                c[j * w + i] = 0;
                for s in 0..e {
                    let idx = (j - e + s) * w + i;
                    let d = mulmod_u64(t, self.eis[s], m);
                    c[idx] = if c[idx] >= d { c[idx] - d } else { c[idx] + m - d };
                }
            }
        }
        // x^f = -Σ unram[s] x^s
        for j in 0..e {
            for i in (f..w).rev() {
                let t = c[j * w + i];
                if t == 0 {
                    continue;
                }
                c[j * w + i] = 0;
                for s in 0..f {
                    let idx = j * w + i - f + s;
                    let d = mulmod_u64(t, self.unram[s], m);
                    c[idx] = if c[idx] >= d { c[idx] - d } else { c[idx] + m - d };
                }
            }
        }
        let mut out = Elem::ZERO;
        for j in 0..e {
            for i in 0..f {
                out.0[j * f + i] = c[j * w + i];
            }
        }
        out
    }

    /// π-adic valuation of the raw representative, capped at the representation limit.
    pub fn val(&self, x: &Elem) -> i32 {
        let cap = self.cap();
        let mut best = cap;
        for j in 0..self.e {
            let mut vp = self.digits;
            for i in 0..self.f {
                vp = vp.min(vp_u64(x.0[j * self.f + i], self.p, self.digits));
            }
            if vp < self.digits {
                best = best.min(self.e as i32 * vp as i32 + j as i32);
            }
        }
        best
    }

    /// x·π^k.
    pub fn mul_pi_pow(&self, x: &Elem, k: i32) -> Elem {
        debug_assert!(k >= 0);
        if k as usize >= self.pi_pows.len() {
            return Elem::ZERO;
        }
        if k == 0 {
            return *x;
        }
        self.mul(x, &self.pi_pows[k as usize])
    }

    /// x / π^v for x divisible by π^v (the caller guarantees it). The result
    /// representative is reliable to e·(M-1) - v π-digits at least.
    pub fn div_pi_pow(&self, x: &Elem, v: i32) -> Elem {
        debug_assert!(v >= 0);
        if v == 0 {
            return *x;
        }
        let e = self.e as i32;
        let a = v / e;
        let b = v % e;
        let shift = (a + 1) as usize;
        if shift > self.digits as usize {
            return Elem::ZERO;
        }
        let t = self.mul_pi_pow(x, e - b);
        let t = self.mul(&t, &self.eps_inv_pows[shift]);
        let pk = self.p_pows[shift];
        let mut out = Elem::ZERO;
        for k in 0..self.dim() {
            debug_assert_eq!(t.0[k] % pk, 0, "div_pi_pow on a non-divisible element");
            out.0[k] = t.0[k] / pk;
        }
        out
    }

    /// Residue-field coordinates of x mod π.
    pub fn residue_coords(&self, x: &Elem) -> Vec<u64> {
        (0..self.f).map(|i| x.0[i] % self.p).collect()
    }

    /// Lift residue-field coordinates to the unramified layer.
    pub fn lift_residue(&self, coords: &[u64]) -> Elem {
        let mut x = Elem::ZERO;
        for (i, &c) in coords.iter().take(self.f).enumerate() {
            x.0[i] = c % self.p;
        }
        x
    }

    pub(crate) fn inv_unit_elem(&self, x: &Elem) -> Result<Elem> {
        let r = self.residue_coords(x);
        if r.iter().all(|&c| c == 0) {
            return Err(Error::NotAUnit(self.format_elem(x)));
        }
        let rinv = self.residue_inv(&r);
        let mut y = self.lift_residue(&rinv);
        let two = self.from_int(2);
        let mut good = 1;
        while good < self.cap() {
            let xy = self.mul(x, &y);
            y = self.mul(&y, &self.sub(&two, &xy));
            good *= 2;
        }
        Ok(y)
    }

    /// Teichmüller representative of a residue class.
    pub fn teichmuller_elem(&self, coords: &[u64]) -> Elem {
        let mut y = self.lift_residue(coords);
        for _ in 0..=self.cap() {
            let next = self.pow(&y, self.q);
            if next == y {
                break;
            }
            y = next;
        }
        y
    }

    /// Base-p digit rendering of the raw coordinates, most significant digit first.
    pub fn format_elem(&self, x: &Elem) -> String {
        (0..self.dim())
            .map(|k| super::literal::format_digits(x.0[k], self.p, self.digits))
            .collect::<Vec<_>>()
            .join("/")
    }

    /// Keep exactly the information modulo π^prec (prec ≤ cap): zero out
    /// everything the representative claims beyond it.
    pub(crate) fn truncate_pi(&self, x: &Elem, prec: i32) -> Elem {
        if prec <= 0 {
            return Elem::ZERO;
        }
        if prec >= self.cap() {
            return *x;
        }
        // coordinate of π^j is known mod p^ceil((prec - j)/e)
        let e = self.e as i32;
        let mut out = *x;
        for j in 0..self.e {
            let need = (prec - j as i32 + e - 1).div_euclid(e).max(0) as u32;
            let pk = self.p_pows[need.min(self.digits) as usize];
            for i in 0..self.f {
                out.0[j * self.f + i] %= pk;
            }
        }
        out
    }
}
