//! The residue field k = F_q = F_p[x]/(ū).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::fp_poly;
use super::ring::RingSpec;

/// An element of F_q as f coordinates mod p on the basis 1, x, …, x^{f-1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub struct ResidueValue {
    pub coords: Vec<u64>,
}

impl ResidueValue {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ResidueValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("/"))
    }
}

impl RingSpec {
    fn res_normalize(&self, mut v: Vec<u64>) -> ResidueValue {
        let m = self.unram_res();
        let mut r = fp_poly::rem(&v, m, self.p());
        v.clear();
        r.resize(self.f(), 0);
        ResidueValue { coords: r }
    }

    pub fn residue_from_coords(&self, coords: &[u64]) -> ResidueValue {
        self.res_normalize(coords.iter().map(|&c| c % self.p()).collect())
    }

    pub fn residue_zero(&self) -> ResidueValue {
        ResidueValue {
            coords: vec![0; self.f()],
        }
    }

    pub fn residue_one(&self) -> ResidueValue {
        self.residue_from_coords(&[1])
    }

    pub fn residue_add(&self, a: &ResidueValue, b: &ResidueValue) -> ResidueValue {
        let p = self.p();
        let v = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| (x + y) % p)
            .collect();
        self.res_normalize(v)
    }

    pub fn residue_neg(&self, a: &ResidueValue) -> ResidueValue {
        let p = self.p();
        ResidueValue {
            coords: a.coords.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn residue_mul(&self, a: &ResidueValue, b: &ResidueValue) -> ResidueValue {
        let prod = fp_poly::mulmod(&a.coords, &b.coords, self.unram_res(), self.p());
        self.res_normalize(prod)
    }

    pub fn residue_pow(&self, a: &ResidueValue, mut exp: u64) -> ResidueValue {
        let mut acc = self.residue_one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.residue_mul(&acc, &base);
            }
            base = self.residue_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse in F_q of a nonzero element (given by coordinates).
    pub(crate) fn residue_inv(&self, coords: &[u64]) -> Vec<u64> {
        let a = self.residue_from_coords(coords);
        self.residue_pow(&a, self.q() - 2).coords
    }

    /// All q elements of F_q in lexicographic coordinate order (0 first).
    pub fn residue_elements(&self) -> Vec<ResidueValue> {
        let p = self.p();
        let f = self.f();
        let mut out = Vec::with_capacity(self.q() as usize);
        for mut idx in 0..self.q() {
            let mut coords = vec![0u64; f];
            for c in coords.iter_mut() {
                *c = idx % p;
                idx /= p;
            }
            out.push(ResidueValue { coords });
        }
        out
    }
}
