use lubin_core::padic::{make_ring, KValue, OKValue, Ring};
use lubin_core::series::{residue_decompose, ResidueSeries, Series1, Wideg};
use proptest::prelude::*;

const D: usize = 12;

fn rings() -> Vec<Ring> {
    vec![
        make_ring(2, &[0, 1], &[-2, 1], 16).unwrap(),
        make_ring(3, &[0, 1], &[-3, 1], 16).unwrap(),
        make_ring(3, &[1, 0, 1], &[-3, 1], 12).unwrap(),
        make_ring(3, &[0, 1], &[-3, 0, 1], 16).unwrap(),
    ]
}

fn series(r: &Ring, coeffs: &[Vec<i64>]) -> Series1 {
    let vals: Vec<OKValue> = coeffs
        .iter()
        .map(|c| OKValue::new(r, r.from_coords(&c[..r.dim()])))
        .collect();
    Series1::from_values(r, D, &vals)
}

fn coeffs() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-50i64..50, 2), D + 1)
}

fn pi_times(r: &Ring, s: &Series1, k: u64) -> Series1 {
    s.scale(&KValue::from_ok(&OKValue::pi(r).pow(k))).unwrap()
}

/// Integral series with zero constant term whose first unit coefficient is at w.
fn with_wideg(r: &Ring, c: &[Vec<i64>], w: usize) -> Series1 {
    let mut s = series(r, c);
    let zero = KValue::from_ok(&OKValue::zero(r));
    s.set_coeff(0, &zero);
    for i in 1..w {
        let v = s.coeff(i).checked_mul(&KValue::from_ok(&OKValue::pi(r))).unwrap();
        s.set_coeff(i, &v);
    }
    let unit = KValue::from_ok(&OKValue::one(r)).checked_add(&pi_times(r, &s, 1).coeff(w)).unwrap();
    s.set_coeff(w, &unit);
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(i in 0..4usize, a in coeffs(), b in coeffs(), c in coeffs()) {
        let r = &rings()[i];
        let zero = KValue::from_ok(&OKValue::zero(r));
        let mk = |x: &[Vec<i64>]| {
            let mut s = series(r, x);
            s.set_coeff(0, &zero);
            s
        };
        let (f, g, h) = (mk(&a), mk(&b), mk(&c));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(left.agreement(&right).unwrap().holds());
    }

    #[test]
    fn inverse_round_trips(i in 0..4usize, a in coeffs()) {
        let r = &rings()[i];
        let f = with_wideg(r, &a, 1);
        let g = f.comp_inverse().unwrap();
        let t = Series1::identity(r, D);
        prop_assert!(f.compose(&g).unwrap().agreement(&t).unwrap().holds());
        prop_assert!(g.compose(&f).unwrap().agreement(&t).unwrap().holds());
    }

    #[test]
    fn wideg_is_multiplicative(i in 0..4usize, a in coeffs(), b in coeffs(), w1 in 1..4usize, w2 in 1..4usize) {
        let r = &rings()[i];
        let f = with_wideg(r, &a, w1);
        let g = with_wideg(r, &b, w2);
        prop_assert_eq!(f.wideg().unwrap(), Wideg::Finite(w1));
        prop_assert_eq!(f.compose(&g).unwrap().wideg().unwrap(), Wideg::Finite(w1 * w2));
    }

    #[test]
    fn polygon_counts_roots(i in 0..4usize, a in coeffs(), w in 1..D, ord in 1..4usize) {
        let r = &rings()[i];
        prop_assume!(ord <= w);
        let mut f = with_wideg(r, &a, w);
        let zero = KValue::from_ok(&OKValue::zero(r));
        for k in 1..ord {
            f.set_coeff(k, &zero);
        }
        // keep the lowest coefficient nonzero
        if ord < w {
            let c = KValue::from_ok(&OKValue::pi(r));
            f.set_coeff(ord, &c);
        }
        let poly = f.newton_polygon().unwrap();
        prop_assert_eq!(f.order(), Some(ord));
        prop_assert_eq!(poly.total_length(), w - ord);
        let slopes: Vec<_> = poly.segments.iter().map(|s| s.slope).collect();
        prop_assert!(slopes.windows(2).all(|s| s[0] < s[1]));
    }

    #[test]
    fn residue_decomposition_round_trips(i in 0..4usize, a in prop::collection::vec(0i64..7, 10), d in 0u32..3) {
        let r = &rings()[i];
        let p = r.p() as usize;
        let deg = 40;
        let mut g: Vec<i64> = a.clone();
        g[0] = 0;
        g[1] = 1;
        let gbar = ResidueSeries::from_ints(r, g.len() - 1, &g);
        let k = p.pow(d);
        let fbar = gbar.inflate(k, deg);
        let (h, e) = residue_decompose(&fbar).unwrap();
        prop_assert_eq!(e, d);
        prop_assert_eq!(h.inflate(k, deg), fbar);
    }

    #[test]
    fn literals_round_trip(i in 0..4usize, a in coeffs(), shift in -2i32..2) {
        let r = &rings()[i];
        let f = series(r, &a).scale(&KValue::new(shift, &OKValue::one(r))).unwrap();
        let back = Series1::parse(r, &f.to_literal()).unwrap();
        prop_assert_eq!(back, f);
    }
}
