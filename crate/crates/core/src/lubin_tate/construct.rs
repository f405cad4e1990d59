//! Successive approximation: degree by degree, the homogeneous part of
//! degree r is fixed by dividing a defect by c_1 - c_1^r.

use super::{require_lt, GroupLaw};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{Coeff, OKValue, Ring, Valuation};
use crate::series::compose::subst_xy_component;
use crate::series::raw::{Acc, RawSeries, Scaled};
use crate::series::table::PowTable;
use crate::series::{Series1, Series2};

/// c_1 - c_1^r for r = 0..=deg (entries 0 and 1 unused).
fn divisors(r: &Ring, c1: &Coeff, deg: usize) -> Vec<Coeff> {
    let mut out = vec![Coeff::zero(r.cap()); deg + 1];
    let mut pw = *c1;
    for slot in out.iter_mut().skip(2) {
        pw = pw.mul(r, c1);
        *slot = c1.sub(r, &pw);
    }
    out
}

/// Σ_{m ≥ 2} c_m [H^m]_d as coefficients, from a scaled outer series.
fn higher_terms(r: &Ring, sc: &Scaled, t: &PowTable, d: usize) -> Vec<Coeff> {
    let len = if t.vars() == 1 { 1 } else { d + 1 };
    let mut acc = Acc::new(r, len);
    let mut floor = i32::MAX;
    let top = d.min(t.max_pow()).min(sc.raw.len() - 1);
    for m in 2..=top {
        let e = t.get(m, d).expect("lower degrees are known");
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

/// defect / div, refusing non-divisible defects and exhausted precision.
fn divide(r: &Ring, defect: &Coeff, div: &Coeff, d: usize, at: &str) -> Result<Coeff> {
    let v = div.shift();
    match defect.valuation() {
        Valuation::Finite(w) if w < v => Err(Error::Verification(format!(
            "not a Lubin-Tate series: defect at {at} has valuation {w}, \
             expected at least {v}"
        ))),
        _ => {
            let q = defect.mul(r, &div.inv(r)?);
            if q.prec() < 1 {
                Err(Error::PrecisionExhausted {
                    index: d,
                    detail: format!(
                        "coefficient {at} known only modulo π^{}; raise the precision",
                        q.prec()
                    ),
                })
            } else {
                Ok(q)
            }
        }
    }
}

fn raw_of(f: &Series1) -> RawSeries {
    RawSeries::from_series1(f).expect("Lubin-Tate series are integral")
}

pub fn lt_group_law(f: &Series1) -> Result<GroupLaw> {
    lt_group_law_with(f, Exec::default())
}

/// The formal group law G with f∘G = G(f, f) and G ≡ X + Y mod degree 2.
pub fn lt_group_law_with(f: &Series1, exec: Exec) -> Result<GroupLaw> {
    require_lt(f, "f")?;
    let r = f.ring();
    let deg = f.degree();
    let exact = |x: i64| Coeff::integral(r, r.from_int(x), r.cap());
    let mut comps: Vec<Vec<Coeff>> = vec![vec![exact(0)]];
    if deg == 0 {
        return Ok(GroupLaw::new(Series2::from_comps(r, comps)));
    }
    comps.push(vec![exact(1), exact(1)]);
    let tf = PowTable::build(r, &raw_of(f), deg, exec);
    let fsc = Scaled::new(r, f.coeffs(), 0);
    let c1 = f.raw_coeff(1);
    let divs = divisors(r, &c1, deg);
    let mut tg = PowTable::new(r, 2, deg, deg);
    tg.advance(1, exec);
    tg.set_linear(1, vec![r.one(), r.one()], r.cap());
    for d in 2..=deg {
        tg.advance(d, exec);
        let part = Series2::from_comps(r, comps.clone());
        let all: Vec<Coeff> = part.iter_indexed().map(|(_, c)| *c).collect();
        let gsc = Scaled::new(r, &all, 0);
        let lhs = subst_xy_component(r, &part, &gsc, d, &tf, &tf, d);
        let rhs = higher_terms(r, &fsc, &tg, d);
        let mut comp = Vec::with_capacity(d + 1);
        for (i, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
            let at = format!("X^{i} Y^{}", d - i);
            comp.push(divide(r, &a.sub(r, b), &divs[d], d, &at)?);
        }
        let prec = comp.iter().map(|c| c.prec()).min().unwrap_or(r.cap());
        tg.set_linear(d, comp.iter().map(|c| c.to_integral_elem(r)).collect(), prec);
        comps.push(comp);
    }
    Ok(GroupLaw::with_table(Series2::from_comps(r, comps), tg))
}

pub fn lt_endo(a: &OKValue, f: &Series1, g: &Series1) -> Result<Series1> {
    lt_endo_with(a, f, g, Exec::default())
}

/// The unique [a] ≡ aT mod degree 2 with f∘[a] = [a]∘g.
pub fn lt_endo_with(a: &OKValue, f: &Series1, g: &Series1, exec: Exec) -> Result<Series1> {
    require_lt(f, "f")?;
    require_lt(g, "g")?;
    let r = f.ring();
    if g.ring() != r || a.ring() != r {
        return Err(Error::RingMismatch(r.label(), g.ring().label()));
    }
    let deg = f.degree().min(g.degree());
    let c1 = f.raw_coeff(1);
    if deg >= 1 && !c1.agrees(r, &g.raw_coeff(1)) {
        return Err(Error::Precondition(
            "f and g must have the same linear coefficient".into(),
        ));
    }
    let mut out = vec![Coeff::zero(r.cap()); deg + 1];
    if deg == 0 {
        return Ok(Series1::from_coeffs(r, out));
    }
    out[1] = a.coeff();
    let f = f.truncate(deg);
    let g = g.truncate(deg);
    let tg = PowTable::build(r, &raw_of(&g), deg, exec);
    let fsc = Scaled::new(r, f.coeffs(), 0);
    let divs = divisors(r, &c1, deg);
    let mut ta = PowTable::new(r, 1, deg, deg);
    ta.advance(1, exec);
    ta.set_linear(1, vec![out[1].to_integral_elem(r)], out[1].prec());
    for d in 2..=deg {
        ta.advance(d, exec);
        let mut acc = Acc::new(r, 1);
        let mut floor = i32::MAX;
        for s in 1..d {
            let e = tg.get(s, d).expect("table of g");
            let c = &out[s];
            floor = floor
                .min(c.prec().saturating_add(e.vl()))
                .min(c.vlow().saturating_add(e.prec));
            acc.mul_acc(r, 0, &c.to_integral_elem(r), &e.c[0]);
        }
        let lhs = Coeff::integral(r, acc.get(r, 0), floor);
        let rhs = higher_terms(r, &fsc, &ta, d)[0];
        let c = divide(r, &lhs.sub(r, &rhs), &divs[d], d, &format!("T^{d}"))?;
        ta.set_linear(d, vec![c.to_integral_elem(r)], c.prec());
        out[d] = c;
    }
    Ok(Series1::from_coeffs(r, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    fn z(p: u64, n: u32) -> Ring {
        make_ring(p, &[0, 1], &[-(p as i64), 1], n).unwrap()
    }

    fn binom(r: &Ring, deg: usize, a: u32) -> Series1 {
        Series1::from_ints(r, deg, &[1, 1])
            .pow(a)
            .sub(&Series1::from_ints(r, deg, &[1]))
            .unwrap()
    }

    #[test]
    fn multiplicative_group_is_recovered() {
        for p in [2u64, 3, 5] {
            let r = z(p, 20);
            let f = binom(&r, 12, p as u32);
            let g = lt_group_law(&f).unwrap();
            let mult = Series2::from_terms(&r, 12, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)]);
            assert_eq!(g.series(), &mult, "p = {p}");
        }
    }

    #[test]
    fn endomorphism_examples() {
        let r = z(2, 20);
        let f = binom(&r, 12, 2);
        let one = OKValue::one(&r);
        assert_eq!(lt_endo(&one, &f, &f).unwrap(), Series1::identity(&r, 12));
        let two = OKValue::from_int(&r, 2);
        assert_eq!(lt_endo(&two, &f, &f).unwrap(), f);
        let minus_one = OKValue::from_int(&r, -1);
        let inv = lt_endo(&minus_one, &f, &f).unwrap();
        let want: Vec<i64> = (0..=12).map(|i| if i == 0 { 0 } else if i % 2 == 1 { -1 } else { 1 }).collect();
        assert_eq!(inv, Series1::from_ints(&r, 12, &want));
    }

    #[test]
    fn rejects_non_lt_input() {
        let r = z(2, 10);
        let f = Series1::from_ints(&r, 6, &[0, 2, 0, 1]);
        assert!(matches!(lt_group_law(&f), Err(Error::Precondition(_))));
        let f = Series1::from_ints(&r, 6, &[0, 2, 1]);
        let g = Series1::from_ints(&r, 6, &[0, 6, 1]);
        let one = OKValue::one(&r);
        assert!(matches!(lt_endo(&one, &f, &g), Err(Error::Precondition(_))));
    }
}
