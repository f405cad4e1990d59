//! Integral series as raw representatives with per-degree error floors, and
//! the unreduced accumulators used by the kernels.

use super::{Series1, Series2};
use crate::padic::{Coeff, Elem, RingSpec};

/// Number of coefficients in the homogeneous component of degree d.
#[inline]
pub(crate) fn comp_len(vars: usize, d: usize) -> usize {
    if vars == 1 {
        1
    } else {
        d + 1
    }
}

/// Integral series stored by homogeneous degree. `prec[d]` bounds the error
/// of every coefficient of degree d.
#[derive(Clone, Debug)]
pub(crate) struct RawSeries {
    pub vars: usize,
    pub comps: Vec<Vec<Elem>>,
    pub prec: Vec<i32>,
}

impl RawSeries {
    pub fn deg(&self) -> usize {
        self.comps.len() - 1
    }

    fn from_comps<'a>(
        r: &RingSpec,
        vars: usize,
        comps: impl Iterator<Item = &'a [Coeff]>,
    ) -> Option<RawSeries> {
        let mut out = RawSeries {
            vars,
            comps: Vec::new(),
            prec: Vec::new(),
        };
        for comp in comps {
            let mut elems = Vec::with_capacity(comp.len());
            let mut p = i32::MAX;
            for c in comp {
                if c.vlow() < 0 {
                    return None;
                }
                elems.push(c.to_integral_elem(r));
                p = p.min(c.prec());
            }
            out.comps.push(elems);
            out.prec.push(p.min(r.cap()));
        }
        Some(out)
    }

    /// None unless every coefficient is decidably integral.
    pub fn from_series1(s: &Series1) -> Option<RawSeries> {
        Self::from_comps(s.ring(), 1, s.coeffs().chunks(1))
    }

    pub fn from_series2(s: &Series2) -> Option<RawSeries> {
        Self::from_comps(s.ring(), 2, s.comps().iter().map(|c| c.as_slice()))
    }
}

/// Unreduced u128 accumulator for a vector of `len` ring elements.
pub(crate) struct Acc {
    slots: usize,
    budget: u64,
    /// products added to each element since its last fold
    count: Vec<u64>,
    buf: Vec<u128>,
}

impl Acc {
    pub fn new(r: &RingSpec, len: usize) -> Acc {
        let slots = r.wide_slots();
        Acc {
            slots,
            budget: r.acc_budget(),
            count: vec![0; len],
            buf: vec![0; len * slots],
        }
    }

    #[inline]
    fn reserve(&mut self, r: &RingSpec, k: usize, n: u64) {
        if self.count[k] + n > self.budget {
            let s = self.slots;
            r.wide_fold(&mut self.buf[k * s..(k + 1) * s]);
            self.count[k] = 0;
        }
        self.count[k] += n;
    }

    /// buf[k] += a·b
    #[inline]
    pub fn mul_acc(&mut self, r: &RingSpec, k: usize, a: &Elem, b: &Elem) {
        self.reserve(r, k, 1);
        let s = self.slots;
        r.wide_mul_acc(&mut self.buf[k * s..(k + 1) * s], a, b);
    }

    /// buf[i + j] += a[i]·b[j] (product of homogeneous components).
    pub fn conv_acc(&mut self, r: &RingSpec, a: &[Elem], b: &[Elem]) {
        if a.is_empty() || b.is_empty() {
            return;
        }
        let n = a.len().min(b.len()) as u64;
        for k in 0..a.len() + b.len() - 1 {
            self.reserve(r, k, n);
        }
        let s = self.slots;
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let k = i + j;
                r.wide_mul_acc(&mut self.buf[k * s..(k + 1) * s], x, y);
            }
        }
    }

    pub fn get(&self, r: &RingSpec, k: usize) -> Elem {
        let s = self.slots;
        r.reduce_wide(&self.buf[k * s..(k + 1) * s])
    }

    pub fn finish(self, r: &RingSpec) -> Vec<Elem> {
        let n = self.buf.len() / self.slots;
        (0..n).map(|k| self.get(r, k)).collect()
    }
}

/// Coefficients c_m = π^{-h} raw_m of an outer series, with their error
/// floors and valuation lower bounds.
pub(crate) struct Scaled {
    pub h: i32,
    pub raw: Vec<Elem>,
    pub prec: Vec<i32>,
    pub vl: Vec<i32>,
}

impl Scaled {
    pub fn new(r: &RingSpec, coeffs: &[Coeff], min_vl: i32) -> Scaled {
        let lowest = coeffs.iter().map(|c| c.vlow()).min().unwrap_or(0).min(min_vl);
        let h = (-lowest).max(0);
        Scaled {
            h,
            raw: coeffs
                .iter()
                .map(|c| {
                    if c.is_zero_at_prec() {
                        Elem::ZERO
                    } else {
                        r.mul_pi_pow(&c.mant(), h + c.shift())
                    }
                })
                .collect(),
            prec: coeffs.iter().map(|c| c.prec()).collect(),
            vl: coeffs.iter().map(|c| c.vlow()).collect(),
        }
    }

    /// Lift a raw sum π^h·x back to K with the given error floor.
    pub fn unscale(&self, r: &RingSpec, x: Elem, floor: i32) -> Coeff {
        Coeff::from_parts(r, -self.h, x, floor)
    }

    /// π^h·c as a raw element; requires vlow(c) ≥ -h.
    pub fn scale_one(&self, r: &RingSpec, c: &Coeff) -> Elem {
        if c.is_zero_at_prec() {
            Elem::ZERO
        } else {
            debug_assert!(self.h + c.shift() >= 0);
            r.mul_pi_pow(&c.mant(), self.h + c.shift())
        }
    }
}

/// Raw valuation of a component (capped at the representation limit).
pub(crate) fn comp_val(r: &RingSpec, c: &[Elem]) -> i32 {
    c.iter().map(|x| r.val(x)).min().unwrap_or(r.cap())
}

/// e·v_p(m): valuation of the integer m.
pub(crate) fn int_val(r: &RingSpec, mut m: u64) -> i32 {
    if m == 0 {
        return r.cap();
    }
    let mut v = 0;
    while m.is_multiple_of(r.p()) {
        m /= r.p();
        v += 1;
    }
    v * r.e() as i32
}
