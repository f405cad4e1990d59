//! One-dimensional formal group laws with cached power tables.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::log::{formal_log, LogSeries};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{Coeff, Ring};
use crate::series::compose::compose_on_table;
use crate::series::raw::{RawSeries, Scaled};
use crate::series::table::PowTable;
use crate::series::{Agreement, Series1, Series2};

/// A formal group law G(X, Y) truncated at total degree D.
pub struct GroupLaw {
    g: Series2,
    table: OnceLock<Option<Arc<PowTable>>>,
    log: OnceLock<Result<LogSeries>>,
}

impl Clone for GroupLaw {
    fn clone(&self) -> Self {
        GroupLaw {
            g: self.g.clone(),
            table: self.table.clone(),
            log: self.log.clone(),
        }
    }
}

impl std::fmt::Debug for GroupLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupLaw({:?})", self.g)
    }
}

/// Axiom checks; each agreement lists the first failing coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// G(X, 0) = X and G(0, Y) = Y
    pub identity: Agreement<(usize, usize)>,
    pub commutativity: Agreement<(usize, usize)>,
    /// coefficient index (a, b, c) of X^a Y^b Z^c
    pub associativity: Agreement<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.identity.holds() && self.commutativity.holds() && self.associativity.holds()
    }
}

impl GroupLaw {
    pub fn new(g: Series2) -> GroupLaw {
        GroupLaw {
            g,
            table: OnceLock::new(),
            log: OnceLock::new(),
        }
    }

    pub(crate) fn with_table(g: Series2, t: PowTable) -> GroupLaw {
        let law = GroupLaw::new(g);
        let _ = law.table.set(Some(Arc::new(t)));
        law
    }

    pub fn series(&self) -> &Series2 {
        &self.g
    }

    pub fn ring(&self) -> &Ring {
        self.g.ring()
    }

    pub fn degree(&self) -> usize {
        self.g.degree()
    }

    /// Powers [G^m] for integral G; None otherwise.
    pub(crate) fn powers(&self) -> Option<Arc<PowTable>> {
        self.table
            .get_or_init(|| {
                RawSeries::from_series2(&self.g).map(|raw| {
                    Arc::new(PowTable::build(self.ring(), &raw, self.degree(), Exec::default()))
                })
            })
            .clone()
    }

    /// Cached formal logarithm.
    pub fn log(&self) -> Result<LogSeries> {
        self.log.get_or_init(|| formal_log(self)).clone()
    }

    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let r = self.ring();
        let d = self.degree();
        let exact = |x: i64| Coeff::integral(r, r.from_int(x), r.cap());
        let mut first = None;
        let mut prec = i32::MAX;
        for k in 0..=d {
            let want = exact(i64::from(k == 1));
            for idx in [(k, 0), (0, k)] {
                let diff = self.g.get(idx.0, idx.1).sub(r, &want);
                prec = prec.min(diff.prec());
                if first.is_none() && !diff.is_zero_at_prec() {
                    first = Some(idx);
                }
            }
        }
        let identity = Agreement {
            first_difference: first,
            precision: prec,
        };
        let commutativity = self.g.agreement(&self.g.swap())?;
        let associativity = self.associativity()?;
        Ok(AxiomReport {
            identity,
            commutativity,
            associativity,
        })
    }

    /// Compare G(G(X,Y),Z) and G(X,G(Y,Z)) coefficientwise.
    fn associativity(&self) -> Result<Agreement<(usize, usize, usize)>> {
        let t = self.powers().ok_or_else(|| {
            Error::Precondition("associativity is checked for integral laws only".into())
        })?;
        let r = self.ring();
        let g = &self.g;
        let d = self.degree();
        let all: Vec<Coeff> = g.iter_indexed().map(|(_, c)| *c).collect();
        let sc = Scaled::new(r, &all, 0);
        let one = r.one();
        // [G^i] at X^a Y^b, with [G^0] = 1
        let entry = |i: usize, a: usize, b: usize| -> Option<(crate::padic::Elem, i32, i32)> {
            if i == 0 {
                return (a + b == 0).then_some((one, r.cap(), 0));
            }
            t.get(i, a + b).map(|e| (e.c[a], e.prec, e.vl()))
        };
        // g_{i,j} scaled once: (raw, prec, vlow)
        let gs: Vec<Vec<(crate::padic::Elem, i32, i32)>> = (0..=d)
            .map(|i| {
                (0..=d - i)
                    .map(|j| {
                        let c = g.get(i, j);
                        (sc.scale_one(r, &c), c.prec(), c.vlow())
                    })
                    .collect()
            })
            .collect();
        let side = |terms: &mut dyn Iterator<Item = ((crate::padic::Elem, i32, i32), usize, usize, usize)>| -> Coeff {
            let mut acc = crate::series::raw::Acc::new(r, 1);
            let mut floor = i32::MAX;
            for ((c, cp, cv), i, a, b) in terms {
                let Some((x, px, vx)) = entry(i, a, b) else { continue };
                floor = floor.min(cp.saturating_add(vx)).min(cv.saturating_add(px));
                if !c.is_zero() && !x.is_zero() {
                    acc.mul_acc(r, 0, &c, &x);
                }
            }
            sc.unscale(r, acc.get(r, 0), floor)
        };
        let cells: Vec<(usize, usize, usize)> = (0..=d)
            .flat_map(|n| (0..=n).flat_map(move |a| (0..=n - a).map(move |b| (a, b, n - a - b))))
            .collect();
        let diffs: Vec<Coeff> = Exec::default().map(0..cells.len(), |k| {
            let (a, b, c) = cells[k];
            // Σ_i g_{i,c} [G^i]_{a,b}
            let lhs = side(&mut (0..=(a + b)).filter(|i| i + c <= d).map(|i| (gs[i][c], i, a, b)));
            // Σ_j g_{a,j} [G^j]_{b,c}
            let rhs = side(&mut (0..=(b + c)).filter(|j| a + j <= d).map(|j| (gs[a][j], j, b, c)));
            lhs.sub(r, &rhs)
        });
        let mut first = None;
        let mut prec = i32::MAX;
        for (k, diff) in diffs.iter().enumerate() {
            prec = prec.min(diff.prec());
            if first.is_none() && !diff.is_zero_at_prec() {
                first = Some(cells[k]);
            }
        }
        Ok(Agreement {
            first_difference: first,
            precision: prec,
        })
    }

    /// Is F an endomorphism: F(G(X,Y)) = G(F(X), F(Y))?
    pub fn endo_check(&self, f: &Series1) -> Result<Agreement<(usize, usize)>> {
        let r = self.ring();
        if f.ring() != r {
            return Err(Error::RingMismatch(r.label(), f.ring().label()));
        }
        if !f.raw_coeff(0).is_zero_at_prec() {
            return Err(Error::Precondition("F(0) must vanish".into()));
        }
        if !f.is_integral() {
            return Err(Error::Precondition("endomorphism candidates must be integral".into()));
        }
        let d = self.degree().min(f.degree());
        let t = self.powers().ok_or_else(|| {
            Error::Precondition("endomorphism checks need an integral law".into())
        })?;
        let lhs = Series2::from_comps(r, compose_on_table(r, &f.coeffs()[..=d], &t));
        let rhs = self.g.truncate(d).subst_xy(f, f)?;
        decided(lhs.agreement(&rhs)?)
    }

    /// Transport check U(G'(X,Y)) = G(U(X), U(Y)) for an integral U.
    pub fn transport_check(&self, u: &Series1, other: &GroupLaw) -> Result<Agreement<(usize, usize)>> {
        let r = self.ring();
        let d = self.degree().min(other.degree()).min(u.degree());
        let t = other.powers().ok_or_else(|| {
            Error::Precondition("transport checks need an integral law".into())
        })?;
        let lhs = Series2::from_comps(r, compose_on_table(r, &u.coeffs()[..=d], &t));
        let rhs = self.g.truncate(d).subst_xy(u, u)?;
        decided(lhs.agreement(&rhs)?)
    }
}

/// A claimed agreement must be backed by at least one digit everywhere.
pub(crate) fn decided<I: Clone>(a: Agreement<I>) -> Result<Agreement<I>> {
    if a.holds() && a.precision < 1 {
        return Err(Error::Undecidable {
            index: 0,
            detail: format!("agreement known only to precision {}", a.precision),
        });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lubin_tate::lt_group_law;
    use crate::padic::make_ring;

    #[test]
    fn multiplicative_law_axioms_and_endomorphisms() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 12).unwrap();
        let g = GroupLaw::new(Series2::from_terms(&r, 10, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)]));
        assert!(g.check_axioms().unwrap().holds());
        let cube = Series1::from_ints(&r, 10, &[0, 3, 3, 1]);
        assert!(g.endo_check(&cube).unwrap().holds());
        assert!(g.endo_check(&Series1::identity(&r, 10)).unwrap().holds());
        let bad = Series1::from_ints(&r, 10, &[0, 1, 1]);
        let a = g.endo_check(&bad).unwrap();
        assert_eq!(a.first_difference.map(|(i, j)| i + j), Some(2));
    }

    #[test]
    fn non_associative_law_is_caught() {
        let r = make_ring(5, &[0, 1], &[-5, 1], 10).unwrap();
        let g = GroupLaw::new(Series2::from_terms(&r, 5, &[(1, 0, 1), (0, 1, 1), (1, 1, 1), (2, 2, 1)]));
        let rep = g.check_axioms().unwrap();
        assert!(rep.identity.holds() && rep.commutativity.holds());
        assert!(!rep.associativity.holds());
    }

    #[test]
    fn lt_law_satisfies_axioms() {
        let r = make_ring(3, &[0, 1], &[-3, 1], 20).unwrap();
        let f = Series1::from_ints(&r, 14, &[0, 3, 0, 1]);
        let g = lt_group_law(&f).unwrap();
        let rep = g.check_axioms().unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(g.endo_check(&f).unwrap().holds());
    }
}
