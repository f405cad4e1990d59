//! Newton polygon statistics: the sets Λ_n and fixed points of F_α.

use serde::{Deserialize, Serialize};

use super::family::Family;
use super::n_alpha;
use crate::error::{Error, Result};
use crate::padic::OKValue;
use crate::series::{NewtonPolygon, Rational, Series1, Vertex, Wideg};

/// Roots of F_π^{∘n} that are not roots of F_π^{∘(n-1)}, read off the
/// Newton polygon of the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaStats {
    pub n: u32,
    /// roots of positive valuation of the quotient
    pub count: usize,
    /// common root valuation, if the polygon has a single slope
    pub valuation: Option<Rational>,
    pub polygon: NewtonPolygon,
    pub expected_count: u64,
    pub expected_valuation: Rational,
    /// roots of F_π^{∘n}/T of positive valuation
    pub total_roots: usize,
    pub expected_total: u64,
    pub holds: bool,
}

fn checked_pow(q: u64, n: u32) -> Option<u64> {
    q.checked_pow(n)
}

/// Statistics of Λ_n for n ≥ 1. Requires q^n ≤ D.
pub fn lambda_stats(fam: &Family, n: u32) -> Result<LambdaStats> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let r = fam.ring();
    let q = r.q();
    let d = fam.degree() as u64;
    let qn = checked_pow(q, n).filter(|&x| x <= d).ok_or_else(|| {
        Error::Precondition(format!("q^n exceeds the truncation degree {d} (q = {q}, n = {n})"))
    })?;
    let f = fam.eval(&OKValue::pi(r))?;
    // F^{∘n} / F^{∘(n-1)} = (F/T)∘F^{∘(n-1)}
    let mut prev = Series1::identity(r, f.degree());
    for _ in 1..n {
        prev = prev.compose(&f)?;
    }
    let full = prev.compose(&f)?;
    let quotient = f.div_t()?.compose(&prev.truncate(f.degree() - 1))?;
    let polygon = quotient.newton_polygon()?;
    let count = polygon.total_length();
    let valuation = match polygon.segments.as_slice() {
        [s] => Some(s.root_valuation()),
        _ => None,
    };
    let total_roots = full.div_t()?.newton_polygon()?.total_length();
    let expected_count = qn / q * (q - 1);
    let expected_valuation = Rational::new(1, expected_count as i64);
    let holds = count as u64 == expected_count
        && valuation.as_ref() == Some(&expected_valuation)
        && total_roots as u64 == qn - 1;
    Ok(LambdaStats {
        n,
        count,
        valuation,
        polygon,
        expected_count,
        expected_valuation,
        total_roots,
        expected_total: qn - 1,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointProfile {
    pub alpha: String,
    pub n_alpha: u32,
    pub wideg_of_difference: Wideg,
    pub polygon: NewtonPolygon,
    pub expected_wideg: u64,
    /// (q^k, n - k) for 0 ≤ k ≤ n
    pub expected_vertices: Vec<Vertex>,
    pub matches_prediction: bool,
}

/// Newton polygon of F_α - T for a unit α; compared against the vertices
/// (q^k, n - k), 0 ≤ k ≤ n = n(α).
pub fn fixedpoint_profile(fam: &Family, alpha: &OKValue) -> Result<FixedPointProfile> {
    let r = fam.ring();
    let q = r.q();
    let n = n_alpha(alpha)?;
    let d = fam.degree() as u64;
    let qn = checked_pow(q, n).filter(|&x| x <= d).ok_or_else(|| {
        Error::Precondition(format!(
            "q^n(alpha) exceeds the truncation degree {d} (q = {q}, n(alpha) = {n})"
        ))
    })?;
    let fa = fam.eval(alpha)?;
    let diff = fa.sub(&Series1::identity(r, fa.degree()))?;
    let wideg = diff.wideg()?;
    let polygon = diff.newton_polygon()?;
    let expected_vertices: Vec<Vertex> = (0..=n)
        .map(|k| Vertex {
            index: q.pow(k) as usize,
            valuation: Rational::int((n - k) as i64),
        })
        .collect();
    let matches_prediction = wideg == Wideg::Finite(qn as usize)
        && polygon.vertices == expected_vertices
        && polygon.segments.iter().all(|s| s.height() == Rational::int(1));
    Ok(FixedPointProfile {
        alpha: alpha.to_string(),
        n_alpha: n,
        wideg_of_difference: wideg,
        polygon,
        expected_wideg: qn,
        expected_vertices,
        matches_prediction,
    })
}
