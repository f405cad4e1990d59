//! Composition, substitution and compositional inversion.
//!
//! Integral inner series go through raw power tables with first-order error
//! floors; anything else falls back to coefficientwise arithmetic.

use super::raw::{comp_len, comp_val, Acc, RawSeries, Scaled};
use super::solve::{solve_outer, Solved};
use super::table::PowTable;
use super::{Series1, Series2};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{Coeff, Elem, Ring, RingSpec};

fn check_rings(a: &Ring, b: &Ring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(a.label(), b.label()))
    }
}

fn check_no_constant(c: &Coeff, what: &str) -> Result<()> {
    if c.is_zero_at_prec() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} has a nonzero constant term")))
    }
}

fn exact_zero1(r: &Ring, deg: usize) -> Series1 {
    Series1::from_coeffs(r, vec![Coeff::zero(r.cap()); deg + 1])
}

fn exact_zero2(r: &Ring, deg: usize) -> Series2 {
    Series2::from_comps(r, (0..=deg).map(|d| vec![Coeff::zero(r.cap()); d + 1]).collect())
}

/// Degree-r component of Σ_{m ≥ 1} c_m H^m from a power table.
pub(crate) fn combine(r: &RingSpec, sc: &Scaled, t: &PowTable, deg: usize) -> Vec<Coeff> {
    let len = comp_len(t.vars(), deg);
    let mut acc = Acc::new(r, len);
    let mut floor = i32::MAX;
    let top = deg.min(t.max_pow()).min(sc.raw.len() - 1);
    for m in 1..=top {
        let e = t.get(m, deg).expect("table covers the degree");
        floor = floor
            .min(sc.prec[m].saturating_add(e.vl()))
            .min(sc.vl[m].saturating_add(e.prec));
        if sc.raw[m].is_zero() {
            continue;
        }
        for (k, x) in e.c.iter().enumerate() {
            acc.mul_acc(r, k, &sc.raw[m], x);
        }
    }
    acc.finish(r)
        .into_iter()
        .map(|x| sc.unscale(r, x, floor))
        .collect()
}

/// Σ c_m H^m for an integral H given by its table; degree = table degree.
pub(crate) fn compose_on_table(r: &Ring, outer: &[Coeff], t: &PowTable) -> Vec<Vec<Coeff>> {
    let deg = t.deg().min(outer.len() - 1);
    let sc = Scaled::new(r, &outer[..=deg], 0);
    let mut comps = Vec::with_capacity(deg + 1);
    comps.push(vec![outer[0]]);
    for d in 1..=deg {
        comps.push(combine(r, &sc, t, d));
    }
    comps
}

impl Series1 {
    /// F∘G truncated at the common degree. G(0) must vanish.
    pub fn compose(&self, g: &Series1) -> Result<Series1> {
        self.compose_with(g, Exec::default())
    }

    pub fn compose_with(&self, g: &Series1, exec: Exec) -> Result<Series1> {
        check_rings(self.ring(), g.ring())?;
        check_no_constant(&g.raw_coeff(0), "inner series")?;
        let deg = self.degree().min(g.degree());
        let r = self.ring();
        match RawSeries::from_series1(&g.truncate(deg)) {
            Some(raw) => {
                let t = PowTable::build(r, &raw, deg, exec);
                let comps = compose_on_table(r, &self.coeffs()[..=deg], &t);
                Ok(Series1::from_coeffs(r, comps.into_iter().map(|c| c[0]).collect()))
            }
            None => self.truncate(deg).compose_naive(&g.truncate(deg)),
        }
    }

    fn compose_naive(&self, g: &Series1) -> Result<Series1> {
        let r = self.ring();
        let deg = self.degree();
        let mut acc = exact_zero1(r, deg);
        for m in (0..=deg).rev() {
            acc = acc.mul(g)?;
            let mut cs = acc.coeffs().to_vec();
            cs[0] = cs[0].add(r, &self.raw_coeff(m));
            acc = Series1::from_coeffs(r, cs);
        }
        Ok(acc)
    }

    /// Compositional inverse: F∘H = H∘F = T. Needs F(0) = 0 and F'(0) ≠ 0;
    /// the inverse is integral exactly when F is integral with unit F'(0).
    pub fn comp_inverse(&self) -> Result<Series1> {
        let r = self.ring();
        check_no_constant(&self.raw_coeff(0), "series")?;
        if self.degree() == 0 {
            return Ok(Series1::zero(r, 0));
        }
        if self.raw_coeff(1).is_zero_at_prec() {
            return Err(Error::Precondition(
                "F'(0) is zero or indistinguishable from zero".into(),
            ));
        }
        let deg = self.degree();
        let mut rhs: Vec<Vec<Coeff>> = vec![vec![Coeff::zero(r.cap())]; deg + 1];
        rhs[1][0] = Coeff::integral(r, r.one(), r.cap());
        match solve_outer(r, self.coeffs(), &rhs, 1, Exec::default())? {
            Solved::Complete { comps, .. } => Ok(Series1::from_coeffs(
                r,
                comps.into_iter().map(|c| c[0]).collect(),
            )),
            Solved::NonIntegral { .. } => self.inverse_naive(),
        }
    }

    /// Coefficientwise recurrence H_r = (δ_{r1} - [Σ_{m≥2} c_m H^m]_r) / c_1.
    fn inverse_naive(&self) -> Result<Series1> {
        let r = self.ring();
        let deg = self.degree();
        let c1_inv = self.raw_coeff(1).inv(r)?;
        let exact_zero = Coeff::zero(r.cap());
        let mut h = vec![exact_zero; deg + 1];
        // pw[m][d] = [H^m]_d
        let mut pw: Vec<Vec<Coeff>> = vec![vec![exact_zero; deg + 1]; deg + 1];
        for rr in 1..=deg {
            for m in 2..=rr {
                let mut acc = exact_zero;
                for s in 1..=(rr + 1 - m) {
                    acc = acc.add(r, &h[s].mul(r, &pw[m - 1][rr - s]));
                }
                pw[m][rr] = acc;
            }
            let mut num = if rr == 1 {
                Coeff::integral(r, r.one(), r.cap())
            } else {
                exact_zero
            };
            for m in 2..=rr {
                num = num.sub(r, &self.raw_coeff(m).mul(r, &pw[m][rr]));
            }
            h[rr] = num.mul(r, &c1_inv);
            pw[1][rr] = h[rr];
        }
        Ok(Series1::from_coeffs(r, h))
    }

    /// F∘G for a two-variable G with G(0, 0) = 0.
    pub fn compose2(&self, g: &Series2) -> Result<Series2> {
        check_rings(self.ring(), g.ring())?;
        check_no_constant(&g.get(0, 0), "inner series")?;
        let r = self.ring();
        let deg = self.degree().min(g.degree());
        let g = g.truncate(deg);
        match RawSeries::from_series2(&g) {
            Some(raw) => {
                let t = PowTable::build(r, &raw, deg, Exec::default());
                Ok(Series2::from_comps(r, compose_on_table(r, &self.coeffs()[..=deg], &t)))
            }
            None => {
                let mut acc = exact_zero2(r, deg);
                for m in (0..=deg).rev() {
                    acc = acc.mul(&g)?;
                    let mut comps = acc.comps().to_vec();
                    comps[0][0] = comps[0][0].add(r, &self.raw_coeff(m));
                    acc = Series2::from_comps(r, comps);
                }
                Ok(acc)
            }
        }
    }
}

/// Raw (scaled) Σ_b g_{ab} [B^b]_d per a, with floors and valuation bounds.
struct Inner {
    raw: Vec<Elem>,
    floor: i32,
    vl: i32,
}

fn inner_sums(r: &RingSpec, g: &Series2, sc: &Scaled, tb: &PowTable, a: usize, deg: usize) -> Vec<Inner> {
    let gdeg = g.degree();
    let vars = tb.vars();
    (0..=deg)
        .map(|d| {
            let len = comp_len(vars, d);
            let mut acc = Acc::new(r, len);
            let mut floor = i32::MAX;
            if d == 0 {
                let c = g.get(a, 0);
                floor = c.prec();
                acc.mul_acc(r, 0, &sc.scale_one(r, &c), &r.one());
            } else {
                for b in 1..=d.min(gdeg - a.min(gdeg)) {
                    if a + b > gdeg {
                        break;
                    }
                    let c = g.get(a, b);
                    let e = tb.get(b, d).expect("table covers the degree");
                    floor = floor
                        .min(c.prec().saturating_add(e.vl()))
                        .min(c.vlow().saturating_add(e.prec));
                    let x = sc.scale_one(r, &c);
                    if x.is_zero() {
                        continue;
                    }
                    for (k, y) in e.c.iter().enumerate() {
                        acc.mul_acc(r, k, &x, y);
                    }
                }
            }
            let raw = acc.finish(r);
            let vl = (comp_val(r, &raw) - sc.h).min(floor);
            Inner { raw, floor, vl }
        })
        .collect()
}

impl Series2 {
    /// G(A(T), B(T)) for one-variable A, B without constant terms.
    pub fn subst(&self, a: &Series1, b: &Series1) -> Result<Series1> {
        check_rings(self.ring(), a.ring())?;
        check_rings(self.ring(), b.ring())?;
        check_no_constant(&a.raw_coeff(0), "first argument")?;
        check_no_constant(&b.raw_coeff(0), "second argument")?;
        let r = self.ring();
        let deg = self.degree().min(a.degree()).min(b.degree());
        let g = self.truncate(deg);
        let (ra, rb) = match (
            RawSeries::from_series1(&a.truncate(deg)),
            RawSeries::from_series1(&b.truncate(deg)),
        ) {
            (Some(x), Some(y)) => (x, y),
            _ => return self.subst_naive(&a.truncate(deg), &b.truncate(deg)),
        };
        let ta = PowTable::build(r, &ra, deg, Exec::default());
        let tb = PowTable::build(r, &rb, deg, Exec::default());
        let all: Vec<Coeff> = g.iter_indexed().map(|(_, c)| *c).collect();
        let sc = Scaled::new(r, &all, 0);
        let inner: Vec<Vec<Inner>> = (0..=deg).map(|i| inner_sums(r, &g, &sc, &tb, i, deg)).collect();
        let mut out = Vec::with_capacity(deg + 1);
        for d in 0..=deg {
            let mut acc = Acc::new(r, 1);
            let c0 = &inner[0][d];
            let mut floor = c0.floor;
            acc.mul_acc(r, 0, &c0.raw[0], &r.one());
            for aa in 1..=d {
                for i in aa..=d {
                    let e = ta.get(aa, i).expect("table covers the degree");
                    let c = &inner[aa][d - i];
                    floor = floor
                        .min(c.floor.saturating_add(e.vl()))
                        .min(c.vl.saturating_add(e.prec));
                    acc.mul_acc(r, 0, &e.c[0], &c.raw[0]);
                }
            }
            out.push(sc.unscale(r, acc.get(r, 0), floor));
        }
        Ok(Series1::from_coeffs(r, out))
    }

    fn subst_naive(&self, a: &Series1, b: &Series1) -> Result<Series1> {
        let r = self.ring();
        let deg = self.degree();
        let mut total = exact_zero1(r, deg);
        let mut apow = Series1::from_ints(r, deg, &[1]);
        for i in 0..=deg {
            let mut inner = exact_zero1(r, deg);
            for j in (0..=(deg - i)).rev() {
                inner = inner.mul(b)?;
                let mut cs = inner.coeffs().to_vec();
                cs[0] = cs[0].add(r, &self.get(i, j));
                inner = Series1::from_coeffs(r, cs);
            }
            total = total.add(&apow.mul(&inner)?)?;
            apow = apow.mul(a)?;
        }
        Ok(total)
    }

    /// G(A(X, Y), B(X, Y)) for two-variable A, B without constant terms.
    pub fn subst2(&self, a: &Series2, b: &Series2) -> Result<Series2> {
        check_rings(self.ring(), a.ring())?;
        check_rings(self.ring(), b.ring())?;
        check_no_constant(&a.get(0, 0), "first argument")?;
        check_no_constant(&b.get(0, 0), "second argument")?;
        let r = self.ring();
        let deg = self.degree().min(a.degree()).min(b.degree());
        let g = self.truncate(deg);
        let (a, b) = (a.truncate(deg), b.truncate(deg));
        let (ra, rb) = match (RawSeries::from_series2(&a), RawSeries::from_series2(&b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return self.subst2_naive(&a, &b),
        };
        let exec = Exec::default();
        let ta = PowTable::build(r, &ra, deg, exec);
        let tb = PowTable::build(r, &rb, deg, exec);
        let all: Vec<Coeff> = g.iter_indexed().map(|(_, c)| *c).collect();
        let sc = Scaled::new(r, &all, 0);
        let inner: Vec<Vec<Inner>> = exec.map(0..deg + 1, |i| inner_sums(r, &g, &sc, &tb, i, deg));
        let comps = exec.map(0..deg + 1, |d| {
            let mut acc = Acc::new(r, d + 1);
            let c0 = &inner[0][d];
            let mut floor = c0.floor;
            for (k, x) in c0.raw.iter().enumerate() {
                acc.mul_acc(r, k, x, &r.one());
            }
            for aa in 1..=d {
                for i in aa..=d {
                    let e = ta.get(aa, i).expect("table covers the degree");
                    let c = &inner[aa][d - i];
                    floor = floor
                        .min(c.floor.saturating_add(e.vl()))
                        .min(c.vl.saturating_add(e.prec));
                    acc.conv_acc(r, &e.c, &c.raw);
                }
            }
            acc.finish(r)
                .into_iter()
                .map(|x| sc.unscale(r, x, floor))
                .collect::<Vec<_>>()
        });
        Ok(Series2::from_comps(r, comps))
    }

    fn subst2_naive(&self, a: &Series2, b: &Series2) -> Result<Series2> {
        let r = self.ring();
        let deg = self.degree();
        let one = Series2::from_terms(r, deg, &[(0, 0, 1)]);
        let mut total = exact_zero2(r, deg);
        let mut apow = one.clone();
        for i in 0..=deg {
            let mut inner = exact_zero2(r, deg);
            for j in (0..=(deg - i)).rev() {
                inner = inner.mul(b)?;
                let mut comps = inner.comps().to_vec();
                comps[0][0] = comps[0][0].add(r, &self.get(i, j));
                inner = Series2::from_comps(r, comps);
            }
            total = total.add(&apow.mul(&inner)?)?;
            apow = apow.mul(a)?;
        }
        Ok(total)
    }

    /// G(A(X), B(Y)) for one-variable A, B without constant terms.
    pub fn subst_xy(&self, a: &Series1, b: &Series1) -> Result<Series2> {
        check_rings(self.ring(), a.ring())?;
        check_rings(self.ring(), b.ring())?;
        check_no_constant(&a.raw_coeff(0), "first argument")?;
        check_no_constant(&b.raw_coeff(0), "second argument")?;
        let deg = self.degree().min(a.degree()).min(b.degree());
        let r = self.ring();
        let (ra, rb) = match (
            RawSeries::from_series1(&a.truncate(deg)),
            RawSeries::from_series1(&b.truncate(deg)),
        ) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(Error::Precondition(
                    "G(A(X), B(Y)) needs integral arguments".into(),
                ))
            }
        };
        let exec = Exec::default();
        let ta = PowTable::build(r, &ra, deg, exec);
        let tb = PowTable::build(r, &rb, deg, exec);
        Ok(Series2::from_comps(
            r,
            subst_xy_tables(r, &self.truncate(deg), &ta, &tb, deg, exec),
        ))
    }
}

pub(crate) fn subst_xy_component(
    r: &Ring,
    g: &Series2,
    sc: &Scaled,
    below: usize,
    ta: &PowTable,
    tb: &PowTable,
    d: usize,
) -> Vec<Coeff> {
    let gdeg = g.degree();
    let one = r.one();
    let mut acc = Acc::new(r, d + 1);
    let mut floors = vec![i32::MAX; d + 1];
    // a = 0 or b = 0 use [A^0] = 1 at degree 0
    let fetch = |t: &PowTable, m: usize, i: usize| -> Option<(Elem, i32, i32)> {
        if m == 0 {
            return if i == 0 { Some((one, i32::MAX / 4, 0)) } else { None };
        }
        t.get(m, i).map(|e| (e.c[0], e.prec, e.vl()))
    };
    for i in 0..=d {
        let j = d - i;
        for a in 0..=i {
            let Some((x, px, vx)) = fetch(ta, a, i) else { continue };
            for b in 0..=j {
                if a + b >= below || a + b > gdeg {
                    break;
                }
                let Some((y, py, vy)) = fetch(tb, b, j) else { continue };
                let c = g.get(a, b);
                let vc = c.vlow();
                let f = c
                    .prec()
                    .saturating_add(vx)
                    .saturating_add(vy)
                    .min(vc.saturating_add(px).saturating_add(vy))
                    .min(vc.saturating_add(vx).saturating_add(py));
                floors[i] = floors[i].min(f);
                let gc = sc.scale_one(r, &c);
                if gc.is_zero() || x.is_zero() || y.is_zero() {
                    continue;
                }
                let xy = r.mul(&x, &y);
                acc.mul_acc(r, i, &gc, &xy);
            }
        }
    }
    acc.finish(r)
        .into_iter()
        .zip(floors)
        .map(|(x, f)| sc.unscale(r, x, f))
        .collect()
}

/// G(A(X), B(Y)) from the power tables of A and B, via
/// H_a(Y) = Σ_b g_ab B(Y)^b and [G(A, B)]_{i,j} = Σ_a [A^a]_i [H_a]_j.
pub(crate) fn subst_xy_tables(
    r: &Ring,
    g: &Series2,
    ta: &PowTable,
    tb: &PowTable,
    deg: usize,
    exec: Exec,
) -> Vec<Vec<Coeff>> {
    const EXACT: i32 = i32::MAX / 4;
    let all: Vec<Coeff> = g.iter_indexed().map(|(_, c)| *c).collect();
    let sc = Scaled::new(r, &all, 0);
    let gdeg = g.degree();
    let one = r.one();
    let fetch = |t: &PowTable, m: usize, i: usize| -> Option<(Elem, i32, i32)> {
        if m == 0 {
            return if i == 0 { Some((one, EXACT, 0)) } else { None };
        }
        t.get(m, i).map(|e| (e.c[0], e.prec, e.vl()))
    };
    // h[a][j] = (raw, error floor, valuation lower bound)
    let h: Vec<Vec<(Elem, i32, i32)>> = exec.map(0..deg + 1, |a| {
        let mut acc = Acc::new(r, deg - a + 1);
        let mut meta = vec![(EXACT, EXACT); deg - a + 1];
        for (j, m) in meta.iter_mut().enumerate() {
            for b in 0..=j.min(gdeg.saturating_sub(a)) {
                if a + b > gdeg {
                    break;
                }
                let Some((y, py, vy)) = fetch(tb, b, j) else { continue };
                let c = g.get(a, b);
                let vc = c.vlow();
                m.0 = m
                    .0
                    .min(c.prec().saturating_add(vy))
                    .min(vc.saturating_add(py));
                m.1 = m.1.min(vc.saturating_add(vy));
                let gc = sc.scale_one(r, &c);
                if !gc.is_zero() && !y.is_zero() {
                    acc.mul_acc(r, j, &gc, &y);
                }
            }
        }
        acc.finish(r)
            .into_iter()
            .zip(meta)
            .map(|(x, (f, v))| (x, f, v))
            .collect()
    });
    exec.map(0..deg + 1, |d| {
        let mut acc = Acc::new(r, d + 1);
        let mut floors = vec![i32::MAX; d + 1];
        for (i, fl) in floors.iter_mut().enumerate() {
            let j = d - i;
            for (a, row) in h.iter().enumerate().take(i + 1) {
                let Some((x, px, vx)) = fetch(ta, a, i) else { continue };
                let (y, hf, hv) = row[j];
                *fl = (*fl).min(hf.saturating_add(vx)).min(hv.saturating_add(px));
                if !x.is_zero() && !y.is_zero() {
                    acc.mul_acc(r, i, &x, &y);
                }
            }
        }
        acc.finish(r)
            .into_iter()
            .zip(floors)
            .map(|(x, f)| sc.unscale(r, x, f))
            .collect()
    })
}
