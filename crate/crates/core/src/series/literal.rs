//! Text literals for series.
//!
//! `deg D; ring-ref; term, term, ...` where ring-ref is a ring label such as
//! `p3f1e1N20` or `*` (any ring). A one-variable term is `i:digits`, a
//! two-variable term `x{i}y{j}:digits`. The digits give the unit part on the
//! element literal syntax; `@s` multiplies by π^s and `~k` states the
//! absolute precision (default: s + N). Omitted terms are zero.

use super::{Series1, Series2};
use crate::error::{Error, Result};
use crate::padic::{Coeff, Ring};

fn format_coeff(r: &Ring, c: &Coeff) -> Option<String> {
    if c.is_zero_at_prec() {
        return (c.prec() < r.precision()).then(|| format!("0~{}", c.prec()));
    }
    let mut s = c.format(r);
    if c.prec() != c.shift() + r.precision() {
        s.push_str(&format!("~{}", c.prec()));
    }
    Some(s)
}

fn parse_coeff(r: &Ring, s: &str) -> Result<Coeff> {
    let (body, prec) = match s.split_once('~') {
        Some((b, p)) => (
            b,
            Some(
                p.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad precision in {s:?}")))?,
            ),
        ),
        None => (s, None),
    };
    let (digits, shift) = match body.split_once('@') {
        Some((d, sh)) => (
            d,
            sh.trim()
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad shift in {s:?}")))?,
        ),
        None => (body, 0),
    };
    let mant = r.parse_elem(digits.trim())?;
    let prec = prec.unwrap_or(shift + r.precision());
    if prec > shift + r.precision() {
        return Err(Error::Parse(format!(
            "precision {prec} exceeds the working precision in {s:?}"
        )));
    }
    Ok(Coeff::from_parts(r, shift, mant, prec))
}

fn header(r: &Ring, deg: usize) -> String {
    format!("deg {deg}; {}; ", r.label())
}

/// Split into (degree, terms) after checking the ring reference.
fn split_header<'a>(r: &Ring, s: &'a str) -> Result<(usize, Vec<&'a str>)> {
    let mut parts = s.splitn(3, ';');
    let deg_part = parts.next().unwrap_or("").trim();
    let ring_part = parts
        .next()
        .ok_or_else(|| Error::Parse("series literal needs `deg D; ring; terms`".into()))?
        .trim();
    let terms = parts.next().unwrap_or("");
    let deg = deg_part
        .strip_prefix("deg")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("bad degree header {deg_part:?}")))?;
    if ring_part != "*" && ring_part != r.label() {
        return Err(Error::RingMismatch(ring_part.to_string(), r.label()));
    }
    let terms = terms
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    Ok((deg, terms))
}

pub(crate) fn format_series1(s: &Series1) -> String {
    let r = s.ring();
    let terms: Vec<String> = s
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| format_coeff(r, c).map(|t| format!("{i}:{t}")))
        .collect();
    format!("{}{}", header(r, s.degree()), terms.join(", "))
}

pub(crate) fn parse_series1(r: &Ring, s: &str) -> Result<Series1> {
    let (deg, terms) = split_header(r, s)?;
    let mut coeffs = vec![Coeff::zero(r.precision()); deg + 1];
    let mut seen = vec![false; deg + 1];
    for t in terms {
        let (idx, val) = t
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("term {t:?} lacks `index:`")))?;
        let i: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {t:?}")))?;
        if i > deg {
            return Err(Error::Parse(format!("index {i} beyond degree {deg}")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Parse(format!("index {i} given twice")));
        }
        coeffs[i] = parse_coeff(r, val)?;
    }
    Ok(Series1::from_coeffs(r, coeffs))
}

pub(crate) fn format_series2(s: &Series2) -> String {
    let r = s.ring();
    let terms: Vec<String> = s
        .iter_indexed()
        .filter_map(|((i, j), c)| format_coeff(r, c).map(|t| format!("x{i}y{j}:{t}")))
        .collect();
    format!("{}{}", header(r, s.degree()), terms.join(", "))
}

fn parse_xy(idx: &str) -> Option<(usize, usize)> {
    let rest = idx.trim().strip_prefix('x')?;
    let (i, j) = rest.split_once('y')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

pub(crate) fn parse_series2(r: &Ring, s: &str) -> Result<Series2> {
    let (deg, terms) = split_header(r, s)?;
    let mut comps: Vec<Vec<Coeff>> = (0..=deg)
        .map(|d| vec![Coeff::zero(r.precision()); d + 1])
        .collect();
    let mut seen = std::collections::HashSet::new();
    for t in terms {
        let (idx, val) = t
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("term {t:?} lacks `x<i>y<j>:`")))?;
        let (i, j) =
            parse_xy(idx).ok_or_else(|| Error::Parse(format!("bad index {idx:?}")))?;
        if i + j > deg {
            return Err(Error::Parse(format!("x{i}y{j} beyond degree {deg}")));
        }
        if !seen.insert((i, j)) {
            return Err(Error::Parse(format!("x{i}y{j} given twice")));
        }
        comps[i + j][i] = parse_coeff(r, val)?;
    }
    Ok(Series2::from_comps(r, comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn literal_round_trips() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 6).unwrap();
        let f = Series1::parse(&r, "deg 4; p3f1e1N6; 1:10, 3:2@-1, 4:1~2").unwrap();
        assert_eq!(f.coeff(1).val().finite(), Some(1));
        assert_eq!(f.coeff(3).val().finite(), Some(-1));
        assert_eq!(f.coeff(4).prec(), 2);
        let text = f.to_literal();
        let g = Series1::parse(&r, &text).unwrap();
        assert_eq!(g.to_literal(), text);
        assert_eq!(f, g);

        let any = Series1::parse(&r, "deg 2; *; 1:1").unwrap();
        assert_eq!(any, Series1::identity(&r, 2));
        assert!(Series1::parse(&r, "deg 2; p5f1e1N6; 1:1").is_err());
        assert!(Series1::parse(&r, "deg 2; *; 3:1").is_err());
        assert!(Series1::parse(&r, "deg 2; *; 1:1, 1:2").is_err());
        assert!(Series1::parse(&r, "deg 2; *; 1:5").is_err());

        let g2 = Series2::parse(&r, "deg 3; *; x1y0:1, x0y1:1, x1y1:2@1").unwrap();
        let back = Series2::parse(&r, &g2.to_literal()).unwrap();
        assert_eq!(g2, back);
        assert_eq!(g2.coeff(1, 1).val().finite(), Some(1));
    }
}
