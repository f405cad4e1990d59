//! The structured solver for Outer(H) = S with H integral and H(0) = 0.
//!
//! Degree by degree, c_1 H_r = S_r - Σ_{m≥2} c_m [H^m]_r where the right side
//! only involves lower degrees of H. Everything is computed on raw integral
//! representatives scaled by π^h so that K-valued outer coefficients fit.

use super::raw::{comp_len, comp_val, Acc, Scaled};
use super::table::PowTable;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{Coeff, Ring};

pub(crate) enum Solved {
    Complete {
        comps: Vec<Vec<Coeff>>,
        table: PowTable,
    },
    /// H_r has a coefficient of negative valuation; `partial` holds the
    /// degrees below r.
    NonIntegral {
        degree: usize,
        position: usize,
        valuation: i32,
        partial: Vec<Vec<Coeff>>,
    },
}

/// Solve Σ_m outer[m] H^m = rhs for H with vars ∈ {1, 2}. `rhs[d]` is the
/// degree-d component; rhs[0] is ignored and H(0) = 0.
pub(crate) fn solve_outer(
    r: &Ring,
    outer: &[Coeff],
    rhs: &[Vec<Coeff>],
    vars: usize,
    exec: Exec,
) -> Result<Solved> {
    let deg = (outer.len() - 1).min(rhs.len() - 1);
    let c1 = outer[1];
    if c1.is_zero_at_prec() {
        return Err(Error::Precondition(
            "linear coefficient is zero or indistinguishable from zero".into(),
        ));
    }
    let v1 = c1.shift();
    let p1 = c1.prec();
    let u1_inv = r.inv_unit_elem(&c1.mant())?;
    let rhs_low = rhs[1..=deg]
        .iter()
        .flatten()
        .map(|c| c.vlow())
        .min()
        .unwrap_or(0);
    let sc = Scaled::new(r, &outer[..=deg], rhs_low);
    let h = sc.h;
    let cap = r.cap() - r.e() as i32 - h;

    let mut table = PowTable::new(r, vars, deg, deg);
    let mut comps: Vec<Vec<Coeff>> = vec![vec![Coeff::zero(r.cap()); comp_len(vars, 0)]];
    for d in 1..=deg {
        table.advance(d, exec);
        let len = comp_len(vars, d);
        let mut acc = Acc::new(r, len);
        let mut err = rhs[d].iter().map(|c| c.prec()).min().unwrap_or(i32::MAX);
        for m in 2..=d {
            let e = table.get(m, d).expect("power of lower degrees");
            err = err
                .min(sc.prec[m].saturating_add(e.vl()))
                .min(sc.vl[m].saturating_add(e.prec));
            if sc.raw[m].is_zero() {
                continue;
            }
            for (k, x) in e.c.iter().enumerate() {
                acc.mul_acc(r, k, &sc.raw[m], x);
            }
        }
        let err = err.min(cap);
        let sums = acc.finish(r);
        let mut hs = Vec::with_capacity(len);
        for (k, s) in sums.iter().enumerate() {
            let numer = r.sub(&sc.scale_one(r, &rhs[d][k]), s);
            let vnum = r.val(&numer) - h;
            if vnum >= v1 {
                hs.push(r.mul(&r.div_pi_pow(&numer, h + v1), &u1_inv));
            } else if vnum < err {
                return Ok(Solved::NonIntegral {
                    degree: d,
                    position: k,
                    valuation: vnum - v1,
                    partial: comps,
                });
            } else {
                return Err(Error::Undecidable {
                    index: d,
                    detail: format!(
                        "integrality of the degree-{d} coefficient needs more than {err} digits"
                    ),
                });
            }
        }
        let vh = comp_val(r, &hs);
        let eps = (err - v1).min(vh.saturating_add(p1) - v1);
        if eps < 1 {
            return Err(Error::PrecisionExhausted {
                index: d,
                detail: format!("degree-{d} coefficients are known to precision {eps}"),
            });
        }
        comps.push(hs.iter().map(|x| Coeff::integral(r, *x, eps)).collect());
        table.set_linear(d, hs, eps);
    }
    Ok(Solved::Complete { comps, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn inverse_of_t_plus_t_squared() {
        // H + H^2 = T
        let r = make_ring(5, &[0, 1], &[-5, 1], 10).unwrap();
        let one = Coeff::integral(&r, r.one(), r.cap());
        let zero = Coeff::zero(r.cap());
        let outer = vec![zero, one, one, zero, zero, zero];
        let mut rhs = vec![vec![zero]; 6];
        rhs[1][0] = one;
        let Solved::Complete { comps, .. } =
            solve_outer(&r, &outer, &rhs, 1, Exec::Sequential).unwrap()
        else {
            panic!("integral");
        };
        let got = Series1::from_coeffs(&r, comps.iter().map(|c| c[0]).collect());
        assert_eq!(got, Series1::from_ints(&r, 5, &[0, 1, -1, 2, -5, 14]));
    }

    #[test]
    fn detects_non_integrality() {
        // 3H = T over Z_3
        let r = make_ring(3, &[0, 1], &[-3, 1], 10).unwrap();
        let three = Coeff::integral(&r, r.from_int(3), r.cap());
        let zero = Coeff::zero(r.cap());
        let one = Coeff::integral(&r, r.one(), r.cap());
        let rhs = vec![vec![zero], vec![one], vec![zero]];
        match solve_outer(&r, &[zero, three, zero], &rhs, 1, Exec::Sequential).unwrap() {
            Solved::NonIntegral {
                degree, valuation, ..
            } => assert_eq!((degree, valuation), (1, -1)),
            Solved::Complete { .. } => panic!("1/3 is not integral"),
        }
    }

    use crate::series::Series1;
}
