//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails. All runs use truncation degree D and precision N.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use lubin_core::dynamics::{
    check_commuting, check_full, default_samples, family_conjugate, family_from_lt,
    family_tabulated, fixedpoint_profile, lambda_stats, log_by_iteration, lubin_log, mu_search,
    mu_verify, n_alpha, random_conjugator, recover_group, solve_log, Family, FamilyDescriptor,
};
use lubin_core::lubin_tate::{group_from_log, lt_endo, lt_group_law, LogSeries};
use lubin_core::padic::{make_ring, KValue, OKValue, Ring, Valuation};
use lubin_core::series::{Integrality, Rational, Series1, Series2, Vertex, Wideg};
use lubin_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: usize = 64;
const N: u32 = 24;
/// Digits every claimed agreement must be backed by.
const MIN_DIGITS: i32 = 8;
const CONJUGATORS: u64 = 10;
const SEED: u64 = 20_231_017;
const RANDOM_PAIRS: usize = 5;
const MAX_DIGITS: usize = 4;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

struct Base {
    name: &'static str,
    /// True for the multiplicative-group families of criterion 1.
    multiplicative: bool,
    f: Series1,
}

impl Base {
    fn ring(&self) -> &Ring {
        self.f.ring()
    }
}

fn zp(p: u64) -> Ring {
    make_ring(p, &[0, 1], &[-(p as i64), 1], N).unwrap()
}

fn bases() -> Vec<Base> {
    let mult = |name, p: u64, binom: &[i64]| Base {
        name,
        multiplicative: true,
        f: Series1::from_ints(&zp(p), D, binom),
    };
    let lt = |name, p: u64| {
        let mut c = vec![0; p as usize + 1];
        c[1] = p as i64;
        c[p as usize] = 1;
        Base {
            name,
            multiplicative: false,
            f: Series1::from_ints(&zp(p), D, &c),
        }
    };
    let unram9 = make_ring(3, &[1, 0, 1], &[-3, 1], N).unwrap();
    let mut c9 = vec![0; 10];
    c9[1] = 3;
    c9[9] = 1;
    let sqrt3 = make_ring(3, &[0, 1], &[-3, 0, 1], N).unwrap();
    let pi = OKValue::pi(&sqrt3);
    let zero = OKValue::zero(&sqrt3);
    vec![
        mult("mult Z2", 2, &[0, 2, 1]),
        mult("mult Z3", 3, &[0, 3, 3, 1]),
        mult("mult Z5", 5, &[0, 5, 10, 10, 5, 1]),
        lt("2T+T^2 Z2", 2),
        lt("3T+T^3 Z3", 3),
        lt("5T+T^5 Z5", 5),
        Base {
            name: "3T+T^9 unram. quadratic",
            multiplicative: false,
            f: Series1::from_ints(&unram9, D, &c9),
        },
        Base {
            name: "piT+T^3 Q3(sqrt3)",
            multiplicative: false,
            f: Series1::from_values(
                &sqrt3,
                D,
                &[zero.clone(), pi, zero, OKValue::one(&sqrt3)],
            ),
        },
    ]
}

fn family(b: &Base) -> Family {
    family_from_lt(&b.f).unwrap()
}

struct Conjugated {
    base: usize,
    u: Series1,
    fam: Family,
}

fn conjugated(bases: &[Base]) -> Vec<Conjugated> {
    let mut out = Vec::new();
    for (i, b) in bases.iter().enumerate() {
        let inner = Arc::new(family(b));
        for j in 0..CONJUGATORS {
            let u = random_conjugator(b.ring(), D, SEED + 100 * i as u64 + j);
            let fam = family_conjugate(&u, inner.clone()).unwrap();
            out.push(Conjugated { base: i, u, fam });
        }
    }
    out
}

fn random_value(r: &Ring, rng: &mut ChaCha8Rng) -> OKValue {
    let coords: Vec<i64> = (0..r.dim()).map(|_| rng.gen_range(-500..500)).collect();
    OKValue::new(r, r.from_coords(&coords))
}

// (-1)^(k+1) / k
fn log1p_coeff(r: &Ring, k: usize) -> KValue {
    let inv = KValue::from_ok(&OKValue::from_int(r, k as i64)).inv().unwrap();
    if k % 2 == 1 {
        inv
    } else {
        KValue::from_ok(&OKValue::zero(r)).checked_sub(&inv).unwrap()
    }
}

fn agrees_to_known_precision(a: &KValue, b: &KValue) -> bool {
    matches!(a.checked_sub(b).map(|d| d.val()), Ok(Valuation::AtLeast(_)))
}

fn criterion_1(bases: &[Base]) -> Outcome {
    let mut lines = Vec::new();
    for b in bases.iter().filter(|b| b.multiplicative) {
        let r = b.ring();
        let p = r.p() as i64;
        let fam = family(b);
        let samples = default_samples(r);
        let c = check_commuting(&fam, &samples).map_err(err(b.name))?;
        ensure(c.passed, || format!("{}: not commuting ({:?})", b.name, c.witness))?;
        let full = check_full(&fam, &samples).map_err(err(b.name))?;
        ensure(full.passed, || format!("{}: not full", b.name))?;

        let l = lubin_log(&fam, &samples).map_err(err(b.name))?;
        ensure(l.series().precision_floor() >= MIN_DIGITS, || {
            format!("{}: log known to {} digits", b.name, l.series().precision_floor())
        })?;
        for k in 1..=D {
            ensure(agrees_to_known_precision(&l.series().coeff(k), &log1p_coeff(r, k)), || {
                format!("{}: log coefficient {k} differs from (-1)^(k+1)/k", b.name)
            })?;
        }

        let rec = recover_group(&fam, &samples).map_err(err(b.name))?;
        ensure(rec.report.passed, || format!("{}: recovery report failed", b.name))?;
        let xy = Series2::from_terms(r, D, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)]);
        let a = rec.law.series().agreement(&xy).map_err(err(b.name))?;
        ensure(a.holds() && a.precision >= MIN_DIGITS, || {
            format!("{}: recovered law is not X + Y + XY ({a:?})", b.name)
        })?;

        for alpha in [-1, 2, 3, p, 1 + p, 1 + p * p] {
            let s = lt_endo(&OKValue::from_int(r, alpha), &b.f, &b.f).map_err(err(b.name))?;
            let e = rec.law.endo_check(&s).map_err(err(b.name))?;
            ensure(e.holds() && e.precision >= MIN_DIGITS, || {
                format!("{}: [{alpha}] is not an endomorphism ({e:?})", b.name)
            })?;
        }
        lines.push(format!("p={p} log floor {}", l.series().precision_floor()));
    }
    Ok(lines.join(", "))
}

fn criterion_2(bases: &[Base]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut n = 0;
    for b in bases.iter().filter(|b| !b.multiplicative) {
        let r = b.ring();
        let law = lt_group_law(&b.f).map_err(err(b.name))?;
        let ax = law.check_axioms().map_err(err(b.name))?;
        ensure(ax.holds(), || format!("{}: axioms fail ({ax:?})", b.name))?;
        let fe = law.endo_check(&b.f).map_err(err(b.name))?;
        ensure(fe.holds() && fe.precision >= MIN_DIGITS, || {
            format!("{}: f(G) != G(f, f) ({fe:?})", b.name)
        })?;
        for _ in 0..RANDOM_PAIRS {
            let (a, c) = (random_value(r, &mut rng), random_value(r, &mut rng));
            let endo = |x: &OKValue| lt_endo(x, &b.f, &b.f).map_err(err(b.name));
            let (ea, ec) = (endo(&a)?, endo(&c)?);
            let prod = endo(&a.checked_mul(&c).unwrap())?;
            let sum = endo(&a.checked_add(&c).unwrap())?;
            let comp = ea.compose(&ec).map_err(err(b.name))?.agreement(&prod).unwrap();
            ensure(comp.holds() && comp.precision >= MIN_DIGITS, || {
                format!("{}: [a][b] != [ab] for a = {a}, b = {c} ({comp:?})", b.name)
            })?;
            let add = law.series().subst(&ea, &ec).map_err(err(b.name))?.agreement(&sum).unwrap();
            ensure(add.holds() && add.precision >= MIN_DIGITS, || {
                format!("{}: G([a],[b]) != [a+b] for a = {a}, b = {c} ({add:?})", b.name)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} random pairs"))
}

fn criterion_3(bases: &[Base]) -> Outcome {
    let mut runs = 0;
    for b in bases {
        let fam = family(b);
        let q = b.ring().q();
        for n in (1..=3u32).filter(|&n| q.pow(n) <= D as u64) {
            let s = lambda_stats(&fam, n).map_err(err(b.name))?;
            let size = q.pow(n - 1) * (q - 1);
            ensure(
                s.holds
                    && s.count as u64 == size
                    && s.valuation == Some(Rational::new(1, size as i64))
                    && s.total_roots as u64 == q.pow(n) - 1,
                || format!("{}: n = {n} gives {s:?}", b.name),
            )?;
            runs += 1;
        }
    }
    Ok(format!("{runs} (family, n) pairs"))
}

fn criterion_4(bases: &[Base]) -> Outcome {
    let mut runs = 0;
    for b in bases {
        let r = b.ring();
        let fam = family(b);
        let q = r.q();
        let one = OKValue::one(r);
        for k in (1..=3u32).filter(|&k| q.pow(k) <= D as u64) {
            let pk = OKValue::pi(r).pow(k as u64);
            for alpha in [&one + &pk, one.checked_sub(&pk).unwrap()] {
                let na = n_alpha(&alpha).map_err(err(b.name))?;
                let pr = fixedpoint_profile(&fam, &alpha).map_err(err(b.name))?;
                let vertices: Vec<Vertex> = (0..=na)
                    .map(|j| Vertex {
                        index: q.pow(j) as usize,
                        valuation: Rational::int((na - j) as i64),
                    })
                    .collect();
                ensure(
                    pr.wideg_of_difference == Wideg::Finite(q.pow(na) as usize)
                        && pr.polygon.vertices == vertices
                        && pr.polygon.segments.len() == na as usize
                        && pr.polygon.segments.iter().all(|s| s.height() == Rational::int(1))
                        && pr.matches_prediction,
                    || format!("{}: alpha = {alpha}: {pr:?}", b.name),
                )?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (family, alpha) pairs"))
}

fn criterion_5(bases: &[Base], conj: &[Conjugated]) -> Outcome {
    let laws: Vec<_> = bases.iter().map(|b| lt_group_law(&b.f).unwrap()).collect();
    for c in conj {
        let b = &bases[c.base];
        let samples = default_samples(b.ring());
        let rec = recover_group(&c.fam, &samples).map_err(err(b.name))?;
        ensure(rec.report.passed && rec.law.series().is_integral(), || {
            format!("{}: recovery failed for U = {}", b.name, c.u.to_literal())
        })?;
        let t = laws[c.base].transport_check(&c.u, &rec.law).map_err(err(b.name))?;
        ensure(t.holds() && t.precision >= MIN_DIGITS, || {
            format!("{}: G' != U^-1(G(U, U)) ({t:?})", b.name)
        })?;
    }
    Ok(format!("{} conjugated families", conj.len()))
}

fn criterion_6(bases: &[Base], conj: &[Conjugated]) -> Outcome {
    for c in conj {
        let b = &bases[c.base];
        let r = b.ring();
        let m = mu_search(&c.fam, MAX_DIGITS).map_err(err(b.name))?;
        let cert = &m.certificate;
        ensure(
            m.mu.val() == Valuation::Finite(1)
                && cert.congruence_degree >= D
                && cert.wideg == Wideg::Finite(r.q() as usize)
                && cert.wideg_ok
                && cert.lt_check.holds,
            || format!("{}: bad certificate {cert:?}", b.name),
        )?;
        let v = mu_verify(&c.fam, &m, &default_samples(r)).map_err(err(b.name))?;
        ensure(v.passed, || format!("{}: endomorphism checks fail ({v:?})", b.name))?;
    }
    Ok(format!("{} conjugated families", conj.len()))
}

fn criterion_7(bases: &[Base], conj: &[Conjugated]) -> Outcome {
    let own: Vec<Family> = bases.iter().map(family).collect();
    let mut fams: Vec<(&Base, &Family)> = bases.iter().zip(&own).collect();
    fams.extend(conj.iter().map(|c| (&bases[c.base], &c.fam)));
    for &(b, fam) in &fams {
        let full = check_full(fam, &default_samples(b.ring())).map_err(err(b.name))?;
        ensure(full.residue.holds && full.residue.p_pow_d == b.ring().q(), || {
            format!("{}: residue decomposition {:?}", b.name, full.residue)
        })?;
    }
    Ok(format!("{} families", fams.len()))
}

fn write_family(name: &str, fam: &Family) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(format!("{name}.json"));
    let mut v = serde_json::to_value(FamilyDescriptor::of(fam)).unwrap();
    v["ring"] = serde_json::to_value(fam.ring().descriptor()).unwrap();
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

fn cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_lubin"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .expect("run lubin")
        .status
        .code()
        .unwrap_or(-1)
}

fn tabulate_with(fam: &Family, keys: &[OKValue], bump: impl Fn(usize, Series1) -> Series1) -> Family {
    let entries = keys
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), bump(i, (*fam.eval(a).unwrap()).clone())))
        .collect();
    family_tabulated(fam.ring(), entries).unwrap()
}

fn criterion_8(bases: &[Base]) -> Outcome {
    // (a) one coefficient of one tabulated series moved by π
    let b = &bases[1];
    let r = b.ring();
    let keys = default_samples(r);
    let perturbed = tabulate_with(&family(b), &keys, |i, mut s| {
        if i == 1 {
            let c = s.coeff(4).checked_add(&KValue::from_ok(&OKValue::pi(r))).unwrap();
            s.set_coeff(4, &c);
        }
        s
    });
    let c = check_commuting(&perturbed, &keys).map_err(err("8a"))?;
    let w = c.witness.ok_or("8a: perturbed table passes the commuting check")?;
    let path_a = write_family("perturbed", &perturbed);
    let code = cli(&["family-check", "--family", path_a.to_str().unwrap()]);
    ensure(code == 1, || format!("8a: family-check exit {code}, expected 1"))?;

    // (b) L = T + T^2/p^2
    for p in [2u64, 3, 5] {
        let r = zp(p);
        let mut l = Series1::identity(&r, D);
        let c2 = KValue::from_ok(&OKValue::from_int(&r, (p * p) as i64)).inv().unwrap();
        l.set_coeff(2, &c2);
        let rec = group_from_log(&LogSeries::new(l).unwrap()).map_err(err("8b"))?;
        ensure(
            matches!(rec.integrality, Integrality::NonIntegral { index: (1, 1), .. }),
            || format!("8b: p = {p}: {:?}", rec.integrality),
        )?;
    }

    // (c) T^(q+1) added to every tabulated series, keys include π times Teichmüller units
    let b = &bases[4];
    let r = b.ring();
    let q = r.q() as usize;
    let mut keys = default_samples(r);
    for c in r.residue_elements().into_iter().filter(|c| !c.is_zero()) {
        let k = OKValue::pi(r).checked_mul(&OKValue::teichmuller(r, &c)).unwrap();
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mut t = vec![0; q + 2];
    t[q + 1] = 1;
    let bump = Series1::from_ints(r, D, &t);
    let corrupted = tabulate_with(&family(b), &keys, |_, s| s.add(&bump).unwrap());
    let e = mu_search(&corrupted, MAX_DIGITS).err().ok_or("8c: mu_search succeeded")?;
    ensure(matches!(e, Error::SearchExhausted(_)) && e.to_string().contains("best"), || {
        format!("8c: unexpected error {e}")
    })?;
    let path_c = write_family("corrupted", &corrupted);
    let path_c = path_c.to_str().unwrap();
    let code = cli(&["mu-search", "--family", path_c]);
    ensure(code == 1, || format!("8c: mu-search exit {code}, expected 1"))?;
    let code = cli(&["recover-group", "--family", path_c]);
    ensure(code == 1, || format!("8c: recover-group exit {code}, expected 1"))?;

    // exit 2: precision exhausted, then a precondition on the truncation
    let path_ok = write_family("mult_z2", &family(&bases[0]));
    let path_ok = path_ok.to_str().unwrap();
    let code = cli(&["log", "--family", path_ok, "--precision", "1"]);
    ensure(code == 2, || format!("log at precision 1: exit {code}, expected 2"))?;
    let code = cli(&["lambda-stats", "--family", path_ok, "--n", "7"]);
    ensure(code == 2, || format!("lambda-stats n = 7: exit {code}, expected 2"))?;
    let code = cli(&["log", "--family", path_ok]);
    ensure(code == 0, || format!("log: exit {code}, expected 0"))?;

    Ok(format!("witness ({}, {}) at degree {}; {e}", w.alpha, w.beta, w.index))
}

fn criterion_9(bases: &[Base]) -> Outcome {
    let mut worst = i32::MAX;
    for b in bases {
        let fam = family(b);
        let l = solve_log(&fam).map_err(err(b.name))?;
        let it = log_by_iteration(&fam).map_err(err(b.name))?;
        for k in 0..=D {
            let (x, y) = (l.series().coeff(k), it.series.coeff(k));
            ensure(agrees_to_known_precision(&x, &y), || {
                format!("{}: coefficient {k}: {x} vs {y}", b.name)
            })?;
        }
        let a = l.series().agreement(&it.series).map_err(err(b.name))?;
        ensure(a.holds() && a.precision >= MIN_DIGITS, || format!("{}: {a:?}", b.name))?;
        worst = worst.min(a.precision);
    }
    Ok(format!("{} families, common precision at least {worst}", bases.len()))
}

fn main() {
    let bases = bases();
    let start = Instant::now();
    let conj = conjugated(&bases);
    let criteria: Vec<Criterion> = vec![
        ("1 multiplicative group", Box::new(|| criterion_1(&bases))),
        ("2 Lubin-Tate group laws", Box::new(|| criterion_2(&bases))),
        ("3 torsion counts", Box::new(|| criterion_3(&bases))),
        ("4 fixed-point profiles", Box::new(|| criterion_4(&bases))),
        ("5 recovery under conjugation", Box::new(|| criterion_5(&bases, &conj))),
        ("6 mu certificate", Box::new(|| criterion_6(&bases, &conj))),
        ("7 residue decomposition", Box::new(|| criterion_7(&bases, &conj))),
        ("8 negative controls", Box::new(|| criterion_8(&bases))),
        ("9 log by recurrence vs iteration", Box::new(|| criterion_9(&bases))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}; {secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
