//! Newton polygons of one-variable series with exact rational slopes.

use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Series1;
use crate::error::{Error, Result};
use crate::padic::Valuation;

/// Exact rational, serialized as `"n"` or `"n/d"`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub Ratio<i64>);

impl Rational {
    pub fn new(n: i64, d: i64) -> Rational {
        Rational(Ratio::new(n, d))
    }

    pub fn int(n: i64) -> Rational {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub index: usize,
    pub valuation: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Rational,
    pub length: usize,
}

impl Segment {
    /// Vertical drop of the segment (−slope·length).
    pub fn height(&self) -> Rational {
        Rational(-self.slope.0 * Ratio::from_integer(self.length as i64))
    }

    /// Valuation of each of the `length` roots the segment accounts for.
    pub fn root_valuation(&self) -> Rational {
        Rational(-self.slope.0)
    }
}

/// Lower convex hull of the points (i, val c_i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<Vertex>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Hull of the given points, sorted by index with distinct indices.
    pub fn from_points(points: &[(usize, i64)]) -> NewtonPolygon {
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in points {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // drop b unless it lies strictly below the chord a–pt
                let cross = (b.0 as i64 - a.0 as i64) * (pt.1 - a.1)
                    - (b.1 - a.1) * (pt.0 as i64 - a.0 as i64);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let vertices = hull
            .iter()
            .map(|&(i, v)| Vertex {
                index: i,
                valuation: Rational::int(v),
            })
            .collect();
        let segments = hull
            .windows(2)
            .map(|w| {
                let dx = (w[1].0 - w[0].0) as i64;
                Segment {
                    slope: Rational::new(w[1].1 - w[0].1, dx),
                    length: dx as usize,
                }
            })
            .collect();
        NewtonPolygon { vertices, segments }
    }

    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Height of the hull above index i (None outside the polygon).
    pub fn height_at(&self, i: usize) -> Option<Rational> {
        let first = self.vertices.first()?;
        if i == first.index {
            return Some(first.valuation);
        }
        for (w, s) in self.vertices.windows(2).zip(&self.segments) {
            if i > w[0].index && i <= w[1].index {
                let dx = Ratio::from_integer((i - w[0].index) as i64);
                return Some(Rational(w[0].valuation.0 + s.slope.0 * dx));
            }
        }
        None
    }

    /// Number of roots of each valuation, from the segments with negative
    /// slope.
    pub fn root_counts(&self) -> Vec<(Rational, usize)> {
        self.segments
            .iter()
            .filter(|s| s.slope.is_negative())
            .map(|s| (s.root_valuation(), s.length))
            .collect()
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({}, {})", v.index, v.valuation))
            .collect();
        write!(f, "{}", vs.join(" -> "))
    }
}

impl Series1 {
    /// Newton polygon from the lowest nonzero coefficient to the first unit
    /// coefficient (or to the truncation degree when there is none).
    ///
    /// Leading coefficients indistinguishable from zero are taken as zero.
    /// Later unknown coefficients must be known to lie on or above the hull.
    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        let cs = self.coeffs();
        let ord = cs
            .iter()
            .position(|c| !c.is_zero_at_prec())
            .ok_or_else(|| {
                Error::Precondition("all coefficients are indistinguishable from zero".into())
            })?;
        let integral = self.is_integral();
        let end = if integral {
            (ord..cs.len())
                .find(|&i| c_val(cs[i].valuation()) == Some(0))
                .unwrap_or(cs.len() - 1)
        } else {
            cs.len() - 1
        };
        let points: Vec<(usize, i64)> = (ord..=end)
            .filter_map(|i| c_val(cs[i].valuation()).map(|v| (i, v as i64)))
            .collect();
        let poly = NewtonPolygon::from_points(&points);
        for (i, c) in cs.iter().enumerate().take(end + 1).skip(ord) {
            if let Valuation::AtLeast(p) = c.valuation() {
                let h = poly.height_at(i).unwrap_or(Rational::int(i64::MIN));
                if Rational::int(p as i64) < h {
                    return Err(Error::Undecidable {
                        index: i,
                        detail: format!(
                            "coefficient known only modulo π^{p}, below the hull height {h}"
                        ),
                    });
                }
            }
        }
        Ok(poly)
    }
}

fn c_val(v: Valuation) -> Option<i32> {
    v.finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    fn z(p: u64) -> crate::padic::Ring {
        make_ring(p, &[0, 1], &[-(p as i64), 1], 10).unwrap()
    }

    #[test]
    fn polygon_examples() {
        let r = z(3);
        let f = Series1::from_ints(&r, 6, &[0, 3, 0, 1]);
        let np = f.newton_polygon().unwrap();
        assert_eq!(
            np.vertices,
            vec![
                Vertex { index: 1, valuation: Rational::int(1) },
                Vertex { index: 3, valuation: Rational::int(0) }
            ]
        );
        assert_eq!(np.segments, vec![Segment { slope: Rational::new(-1, 2), length: 2 }]);

        let r2 = z(2);
        let f = Series1::from_ints(&r2, 6, &[0, 2, 3, 1]);
        let np = f.newton_polygon().unwrap();
        assert_eq!(np.segments, vec![Segment { slope: Rational::int(-1), length: 1 }]);
        assert_eq!(np.root_counts(), vec![(Rational::int(1), 1)]);

        // [4](T) - T over Z_3
        let f = Series1::from_ints(&r, 8, &[0, 3, 6, 4, 1]);
        let np = f.newton_polygon().unwrap();
        assert_eq!(np.vertices[0], Vertex { index: 1, valuation: Rational::int(1) });
        assert_eq!(np.segments, vec![Segment { slope: Rational::new(-1, 2), length: 2 }]);
    }

    #[test]
    fn collinear_points_are_not_vertices() {
        let np = NewtonPolygon::from_points(&[(0, 4), (1, 3), (2, 2), (4, 0)]);
        assert_eq!(np.vertices.len(), 2);
        assert_eq!(np.total_length(), 4);
        assert_eq!(np.height_at(3), Some(Rational::int(1)));
    }

    #[test]
    fn unknown_coefficient_below_hull_is_undecidable() {
        let r = z(3);
        let f = Series1::parse(&r, "deg 4; *; 1:1@4, 2:0~1, 3:1").unwrap();
        assert!(matches!(f.newton_polygon(), Err(Error::Undecidable { index: 2, .. })));
    }

    #[test]
    fn rational_serde() {
        let x = Rational::new(-1, 6);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"-1/6\"");
        assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), x);
    }
}
