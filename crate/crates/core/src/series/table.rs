//! Homogeneous power tables [H^m]_d of an integral series H with H(0) = 0.
//!
//! Raw entries are exact modulo p^M for the stored representative of H. The
//! error floor of an entry bounds the difference to the power of the true H:
//! (H + δ)^m - H^m = m·H^{m-1}·δ + (terms with δ^2), where the first-order
//! term is estimated from the stored powers themselves.

use super::raw::{comp_len, comp_val, int_val, Acc, RawSeries};
use crate::exec::Exec;
use crate::padic::{Elem, Ring};

#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub c: Vec<Elem>,
    /// error floor
    pub prec: i32,
    /// minimum raw valuation over the component
    pub vraw: i32,
}

impl Entry {
    /// Lower bound for the valuation of the true entry.
    #[inline]
    pub fn vl(&self) -> i32 {
        self.vraw.min(self.prec)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct PowTable {
    ring: Ring,
    vars: usize,
    deg: usize,
    max_pow: usize,
    /// rows[m][d - m] = [H^m]_d for 1 ≤ m ≤ max_pow
    rows: Vec<Vec<Entry>>,
    eps_min: i32,
}

impl PowTable {
    pub fn new(ring: &Ring, vars: usize, deg: usize, max_pow: usize) -> PowTable {
        let max_pow = max_pow.min(deg).max(1);
        PowTable {
            ring: ring.clone(),
            vars,
            deg,
            max_pow,
            rows: vec![Vec::new(); max_pow + 1],
            eps_min: ring.cap(),
        }
    }

    /// Full table of a known series (H(0) must vanish).
    pub fn build(ring: &Ring, h: &RawSeries, max_pow: usize, exec: Exec) -> PowTable {
        let mut t = PowTable::new(ring, h.vars, h.deg(), max_pow);
        for r in 1..=h.deg() {
            t.advance(r, exec);
            t.set_linear(r, h.comps[r].clone(), h.prec[r]);
        }
        t
    }

    pub fn deg(&self) -> usize {
        self.deg
    }
    pub fn vars(&self) -> usize {
        self.vars
    }
    pub fn max_pow(&self) -> usize {
        self.max_pow
    }

    /// Degrees 1..=filled() of H are known.
    pub fn filled(&self) -> usize {
        self.rows[1].len()
    }

    /// [H^m]_d for 1 ≤ m ≤ d; None when not (yet) available.
    #[inline]
    pub fn get(&self, m: usize, d: usize) -> Option<&Entry> {
        if m == 0 || m > self.max_pow || d < m {
            return None;
        }
        self.rows[m].get(d - m)
    }

    pub fn set_linear(&mut self, r: usize, c: Vec<Elem>, prec: i32) {
        debug_assert_eq!(self.rows[1].len() + 1, r);
        let prec = prec.min(self.ring.cap());
        self.eps_min = self.eps_min.min(prec);
        let vraw = comp_val(&self.ring, &c);
        self.rows[1].push(Entry { c, prec, vraw });
    }

    /// Compute [H^m]_r for 2 ≤ m ≤ min(r, max_pow); degrees < r of H must be set.
    pub fn advance(&mut self, r: usize, exec: Exec) {
        debug_assert_eq!(self.filled() + 1, r);
        let top = r.min(self.max_pow);
        if top < 2 {
            return;
        }
        let this = &*self;
        let entries = exec.map(2..top + 1, |m| this.power_entry(m, r));
        for (k, e) in entries.into_iter().enumerate() {
            let m = k + 2;
            debug_assert_eq!(self.rows[m].len(), r - m);
            self.rows[m].push(e);
        }
    }

    fn power_entry(&self, m: usize, r: usize) -> Entry {
        let ring = &self.ring;
        let len = comp_len(self.vars, r);
        let cap = ring.cap();
        let mut acc = Acc::new(ring, len);
        let mut first = i32::MAX;
        for s in 1..=(r + 1 - m) {
            let hs = &self.rows[1][s - 1];
            let prev = &self.rows[m - 1][r - s - (m - 1)];
            first = first.min(hs.prec.saturating_add(prev.vraw));
            if hs.vraw >= cap || prev.vraw >= cap {
                continue;
            }
            acc.conv_acc(ring, &hs.c, &prev.c);
        }
        let c = acc.finish(ring);
        let vraw = comp_val(ring, &c);
        let first = first.saturating_add(int_val(ring, m as u64));
        let higher = self.eps_min.saturating_mul(2);
        Entry {
            c,
            prec: first.min(higher).min(cap),
            vraw,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn powers_of_one_plus_t_minus_one() {
        // H = T + T^2: [H^2]_3 = 2, [H^3]_4 = 3
        let r = make_ring(5, &[0, 1], &[-5, 1], 8).unwrap();
        let mut comps = vec![vec![Elem::ZERO]; 7];
        comps[1] = vec![r.one()];
        comps[2] = vec![r.one()];
        let h = RawSeries {
            vars: 1,
            comps,
            prec: vec![8; 7],
        };
        let t = PowTable::build(&r, &h, 6, Exec::Sequential);
        assert_eq!(t.get(2, 3).unwrap().c[0], r.from_int(2));
        assert_eq!(t.get(3, 4).unwrap().c[0], r.from_int(3));
        assert_eq!(t.get(6, 6).unwrap().c[0], r.one());
        assert!(t.get(2, 5).unwrap().c[0].is_zero());
        // multiplying by 5 = 5 gains one digit
        assert!(t.get(5, 6).unwrap().prec >= 9);
    }

    #[test]
    fn bivariate_powers() {
        // H = X + Y: [H^3]_3 = (1, 3, 3, 1)
        let r = make_ring(7, &[0, 1], &[-7, 1], 6).unwrap();
        let mut comps: Vec<Vec<Elem>> = (0..=4).map(|d| vec![Elem::ZERO; d + 1]).collect();
        comps[1] = vec![r.one(), r.one()];
        let h = RawSeries {
            vars: 2,
            comps,
            prec: vec![6; 5],
        };
        let t = PowTable::build(&r, &h, 4, Exec::Sequential);
        let e = t.get(3, 3).unwrap();
        let want: Vec<Elem> = [1, 3, 3, 1].iter().map(|&c| r.from_int(c)).collect();
        assert_eq!(e.c, want);
    }
}
