//! Families α ↦ F_α of power series with F_α'(0) = α.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lubin_tate::{lt_endo, require_lt};
use crate::padic::{Coeff, OKValue, Ring};
use crate::series::Series1;

#[derive(Clone, Debug)]
pub enum Backend {
    /// F_α = [α]_f, the endomorphisms of the Lubin-Tate group of f.
    LubinTate { f: Series1 },
    /// F_α = U^{-1} ∘ inner(α) ∘ U.
    Conjugated {
        u: Series1,
        u_inv: Series1,
        inner: Arc<Family>,
    },
    /// Explicit table; lookups outside it fail.
    Tabulated { entries: Vec<(OKValue, Series1)> },
}

/// A family of series indexed by O_K, evaluated lazily and memoized.
pub struct Family {
    ring: Ring,
    degree: usize,
    backend: Backend,
    memo: Mutex<HashMap<String, Arc<Series1>>>,
}

impl std::fmt::Debug for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Family")
            .field("ring", &self.ring)
            .field("degree", &self.degree)
            .field("backend", &self.backend)
            .finish()
    }
}

impl Family {
    fn new(ring: &Ring, degree: usize, backend: Backend) -> Family {
        Family {
            ring: ring.clone(),
            degree,
            backend,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// Keys of a tabulated family (None for the other backends).
    pub fn table_keys(&self) -> Option<Vec<OKValue>> {
        match &self.backend {
            Backend::Tabulated { entries } => Some(entries.iter().map(|(a, _)| a.clone()).collect()),
            _ => None,
        }
    }

    /// F_α, checked to satisfy F_α(0) = 0 and F_α'(0) = α.
    pub fn eval(&self, alpha: &OKValue) -> Result<Arc<Series1>> {
        if alpha.ring() != &self.ring {
            return Err(Error::RingMismatch(self.ring.label(), alpha.ring().label()));
        }
        let key = alpha.to_string();
        if let Some(s) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(s.clone());
        }
        let s = self.compute(alpha)?;
        check_member(&s, alpha)?;
        let mut memo = self.memo.lock().expect("memo lock");
        Ok(memo.entry(key).or_insert_with(|| Arc::new(s)).clone())
    }

    fn compute(&self, alpha: &OKValue) -> Result<Series1> {
        match &self.backend {
            Backend::LubinTate { f } => lt_endo(alpha, f, f),
            Backend::Conjugated { u, u_inv, inner } => {
                let fa = inner.eval(alpha)?;
                u_inv.compose(&fa.compose(u)?)
            }
            Backend::Tabulated { entries } => entries
                .iter()
                .find(|(a, _)| a == alpha)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| Error::NotInTable(format!("no entry for alpha = {alpha}"))),
        }
    }

    /// A tabulated copy holding F_α for the given α.
    pub fn tabulate(&self, alphas: &[OKValue]) -> Result<Family> {
        let entries = alphas
            .iter()
            .map(|a| Ok((a.clone(), (*self.eval(a)?).clone())))
            .collect::<Result<Vec<_>>>()?;
        family_tabulated(&self.ring, entries)
    }
}

fn check_member(s: &Series1, alpha: &OKValue) -> Result<()> {
    let r = s.ring();
    if !s.raw_coeff(0).is_zero_at_prec() {
        return Err(Error::Verification(format!("F_{alpha}(0) is not 0")));
    }
    if s.degree() >= 1 && !s.raw_coeff(1).agrees(r, &alpha.coeff()) {
        return Err(Error::Verification(format!(
            "F_{alpha}'(0) = {} differs from alpha",
            s.coeff(1)
        )));
    }
    Ok(())
}

/// The endomorphism family of the Lubin-Tate group attached to f.
pub fn family_from_lt(f: &Series1) -> Result<Family> {
    require_lt(f, "f")?;
    Ok(Family::new(
        f.ring(),
        f.degree(),
        Backend::LubinTate { f: f.clone() },
    ))
}

/// α ↦ U^{-1} ∘ F_α ∘ U for an integral U with U(0) = 0 and U'(0) a unit.
pub fn family_conjugate(u: &Series1, fam: Arc<Family>) -> Result<Family> {
    let r = &fam.ring().clone();
    if u.ring() != r {
        return Err(Error::RingMismatch(r.label(), u.ring().label()));
    }
    if !u.raw_coeff(0).is_zero_at_prec() {
        return Err(Error::Precondition("U(0) must vanish".into()));
    }
    if !u.is_integral() {
        return Err(Error::Precondition("U must be integral".into()));
    }
    if u.degree() < 1 || u.raw_coeff(1).valuation().finite() != Some(0) {
        return Err(Error::Precondition("U'(0) must be a unit".into()));
    }
    let degree = fam.degree().min(u.degree());
    let u = u.truncate(degree);
    let u_inv = u.comp_inverse()?;
    Ok(Family::new(r, degree, Backend::Conjugated { u, u_inv, inner: fam }))
}

pub fn family_tabulated(ring: &Ring, entries: Vec<(OKValue, Series1)>) -> Result<Family> {
    if entries.is_empty() {
        return Err(Error::Precondition("empty family table".into()));
    }
    for (a, s) in &entries {
        if a.ring() != ring || s.ring() != ring {
            return Err(Error::RingMismatch(ring.label(), s.ring().label()));
        }
    }
    let degree = entries.iter().map(|(_, s)| s.degree()).min().unwrap_or(0);
    Ok(Family::new(ring, degree, Backend::Tabulated { entries }))
}

/// Seeded pseudo-random U = u_1 T + … + u_k T^k with u_1 a unit and integral
/// coefficients, k = min(deg, 5).
pub fn random_conjugator(ring: &Ring, deg: usize, seed: u64) -> Series1 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = (ring.p() as i64).pow(4);
    let dim = ring.dim();
    let random_elem = |rng: &mut ChaCha8Rng| {
        let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..bound)).collect();
        ring.from_coords(&coords)
    };
    let mut coeffs = vec![Coeff::zero(ring.precision()); deg + 1];
    loop {
        let x = random_elem(&mut rng);
        if ring.val(&x) == 0 {
            coeffs[1] = Coeff::integral(ring, x, ring.precision());
            break;
        }
    }
    for c in coeffs.iter_mut().take(deg.min(5) + 1).skip(2) {
        *c = Coeff::integral(ring, random_elem(&mut rng), ring.precision());
    }
    Series1::from_coeffs(ring, coeffs)
}

/// Serializable family description; series are given as literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case")]
pub enum FamilyDescriptor {
    LubinTate {
        f: String,
    },
    Conjugated {
        u: String,
        inner: Box<FamilyDescriptor>,
    },
    Tabulated {
        entries: Vec<TableEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub alpha: String,
    pub series: String,
}

impl FamilyDescriptor {
    /// Build the family, truncating every series at `degree` if given.
    pub fn build(&self, ring: &Ring, degree: Option<usize>) -> Result<Family> {
        let parse = |s: &str| -> Result<Series1> {
            let f = Series1::parse(ring, s)?;
            Ok(match degree {
                Some(d) if d < f.degree() => f.truncate(d),
                _ => f,
            })
        };
        match self {
            FamilyDescriptor::LubinTate { f } => family_from_lt(&parse(f)?),
            FamilyDescriptor::Conjugated { u, inner } => {
                let inner = Arc::new(inner.build(ring, degree)?);
                family_conjugate(&parse(u)?, inner)
            }
            FamilyDescriptor::Tabulated { entries } => {
                let entries = entries
                    .iter()
                    .map(|e| Ok((super::parse_value(ring, &e.alpha)?, parse(&e.series)?)))
                    .collect::<Result<Vec<_>>>()?;
                family_tabulated(ring, entries)
            }
        }
    }

    /// Descriptor of an existing family.
    pub fn of(fam: &Family) -> FamilyDescriptor {
        match fam.backend() {
            Backend::LubinTate { f } => FamilyDescriptor::LubinTate { f: f.to_literal() },
            Backend::Conjugated { u, inner, .. } => FamilyDescriptor::Conjugated {
                u: u.to_literal(),
                inner: Box::new(FamilyDescriptor::of(inner)),
            },
            Backend::Tabulated { entries } => FamilyDescriptor::Tabulated {
                entries: entries
                    .iter()
                    .map(|(a, s)| TableEntry {
                        alpha: super::format_value(a),
                        series: s.to_literal(),
                    })
                    .collect(),
            },
        }
    }
}
