//! Base-p digit literals for elements of O_K.
//!
//! A coordinate is written most significant digit first, `0-9a-z` for p ≤ 36
//! and dot-separated decimal digits otherwise (`3.0.17`). An optional leading
//! `-` negates. Coordinates on the basis x^i π^j (index j·f + i) are
//! separated by `/`; missing trailing coordinates are zero.

use super::ring::{Elem, RingSpec};
use crate::error::{Error, Result};

pub fn format_digits(mut c: u64, p: u64, max_digits: u32) -> String {
    if c == 0 {
        return "0".to_string();
    }
    let mut digits = Vec::new();
    let mut n = 0;
    while c > 0 && n < max_digits {
        digits.push(c % p);
        c /= p;
        n += 1;
    }
    digits.reverse();
    if p <= 36 {
        digits
            .iter()
            .map(|&d| std::char::from_digit(d as u32, 36).unwrap())
            .collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Parse one coordinate; the result is reduced modulo `modulus`.
pub fn parse_digits(s: &str, p: u64, modulus: u64) -> Result<u64> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("empty digit string in {s:?}")));
    }
    let digits: Vec<u64> = if body.contains('.') || p > 36 {
        body.split('.')
            .map(|d| {
                d.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad digit {d:?} in {s:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        body.chars()
            .map(|ch| {
                ch.to_digit(36)
                    .map(|d| d as u64)
                    .ok_or_else(|| Error::Parse(format!("bad digit {ch:?} in {s:?}")))
            })
            .collect::<Result<_>>()?
    };
    let m = modulus as u128;
    let mut acc: u128 = 0;
    for d in digits {
        if d >= p {
            return Err(Error::Parse(format!("digit {d} out of range for p = {p}")));
        }
        acc = (acc * p as u128 + d as u128) % m;
    }
    let v = acc as u64;
    Ok(if neg && v != 0 { modulus - v } else { v })
}

impl RingSpec {
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() > self.dim() {
            return Err(Error::Parse(format!(
                "{} coordinates given, ring has {}",
                parts.len(),
                self.dim()
            )));
        }
        let mut x = Elem::ZERO;
        for (k, part) in parts.iter().enumerate() {
            x.0[k] = parse_digits(part, self.p(), self.modulus())?;
        }
        Ok(x)
    }
}
