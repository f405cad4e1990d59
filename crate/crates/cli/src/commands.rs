//! Subcommand execution and report assembly.

use std::fmt::Debug;
use std::io::Write;

use lubin_core::dynamics::{
    check_commuting, check_full, default_samples, fixedpoint_profile, format_value, lambda_stats,
    log_by_iteration, mu_search, mu_verify, recover_group, solve_log, verify_log, Family,
    FamilyDescriptor,
};
use lubin_core::lubin_tate::{is_lt_series, lt_endo, lt_group_law};
use lubin_core::padic::{OKValue, Ring, RingDescriptor};
use lubin_core::series::Agreement;
use lubin_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use super::input::{self, Inputs};
use super::{Command, Common, Format};

#[derive(Serialize)]
struct Invocation {
    argv: Vec<String>,
    ring: RingDescriptor,
    degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<FamilyDescriptor>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    samples: Vec<String>,
}

struct Outcome {
    passed: bool,
    result: Value,
    text: Vec<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn agreement_line<I: Debug>(name: &str, a: &Agreement<I>) -> String {
    match &a.first_difference {
        None => format!("{name}: ok (precision {})", a.precision),
        Some(i) => format!("{name}: FAILS, first difference at {i:?}"),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILS"
    }
}

fn samples_for(common: &Common, ring: &Ring, fam: Option<&Family>) -> Result<Vec<OKValue>> {
    if let Some(list) = &common.samples {
        return input::values(ring, list);
    }
    if let Some(keys) = fam.and_then(|f| f.table_keys()) {
        return Ok(keys);
    }
    Ok(default_samples(ring))
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::LtConstruct { common, .. }
        | Command::Endo { common, .. }
        | Command::Log { common, .. }
        | Command::FamilyCheck { common, .. }
        | Command::LambdaStats { common, .. }
        | Command::Profile { common, .. }
        | Command::RecoverGroup { common, .. }
        | Command::MuSearch { common, .. } => common,
    }
}

fn name_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::LtConstruct { .. } => "lt-construct",
        Command::Endo { .. } => "endo",
        Command::Log { .. } => "log",
        Command::FamilyCheck { .. } => "family-check",
        Command::LambdaStats { .. } => "lambda-stats",
        Command::Profile { .. } => "profile",
        Command::RecoverGroup { .. } => "recover-group",
        Command::MuSearch { .. } => "mu-search",
    }
}

fn family_arg(cmd: &Command) -> Option<&str> {
    match cmd {
        Command::Log { family, .. }
        | Command::FamilyCheck { family, .. }
        | Command::LambdaStats { family, .. }
        | Command::Profile { family, .. }
        | Command::RecoverGroup { family, .. }
        | Command::MuSearch { family, .. } => Some(family),
        _ => None,
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_math_failure() {
        1
    } else {
        2
    }
}

/// Run a subcommand, print its report and return the exit status.
pub fn run(cmd: Command, argv: Vec<String>) -> u8 {
    let common = common_of(&cmd).clone();
    let name = name_of(&cmd);
    let inputs = match input::load(
        common.ring.as_deref(),
        family_arg(&cmd),
        common.precision,
        common.degree,
    ) {
        Ok(i) => i,
        Err(e) => {
            emit(name, None, Err(&e), common.format);
            return exit_code(&e);
        }
    };
    let fam = inputs.family.as_ref().map(|(_, f)| f);
    let samples = match samples_for(&common, &inputs.ring, fam) {
        Ok(s) => s,
        Err(e) => {
            emit(name, None, Err(&e), common.format);
            return exit_code(&e);
        }
    };
    let invocation = Invocation {
        argv,
        ring: inputs.ring_desc.clone(),
        degree: common.degree,
        family: inputs.family.as_ref().map(|(d, _)| d.clone()),
        samples: if fam.is_some() {
            samples.iter().map(format_value).collect()
        } else {
            Vec::new()
        },
    };
    let out = execute(&cmd, &common, &inputs, &samples);
    let code = match &out {
        Ok(o) if o.passed => 0,
        Ok(_) => 1,
        Err(e) => exit_code(e),
    };
    emit(name, Some((&invocation, &inputs.ring)), out.as_ref(), common.format);
    code
}

// A closed pipe (e.g. `| head`) is not an error worth a panic.
fn print_out(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn emit(
    name: &str,
    ctx: Option<(&Invocation, &Ring)>,
    out: std::result::Result<&Outcome, &Error>,
    format: Format,
) {
    match format {
        Format::Json => {
            let mut report = json!({ "command": name });
            if let Some((inv, _)) = ctx {
                report["invocation"] = to_value(inv);
            }
            match out {
                Ok(o) => {
                    report["passed"] = json!(o.passed);
                    report["result"] = o.result.clone();
                }
                Err(e) => {
                    report["passed"] = json!(false);
                    report["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
                }
            }
            let mut text = serde_json::to_string_pretty(&report).expect("json");
            text.push('\n');
            print_out(&text);
        }
        Format::Text => {
            let mut text = format!("{name}\n");
            if let Some((inv, ring)) = ctx {
                text += &format!("ring {}, degree {}\n", ring.label(), inv.degree);
            }
            match out {
                Ok(o) => {
                    for line in &o.text {
                        text += &format!("  {line}\n");
                    }
                    text += if o.passed { "PASS\n" } else { "FAIL\n" };
                    print_out(&text);
                }
                Err(e) => {
                    text += "FAIL\n";
                    print_out(&text);
                    eprintln!("error ({}): {e}", e.kind());
                }
            }
        }
    }
}

fn execute(cmd: &Command, common: &Common, inputs: &Inputs, samples: &[OKValue]) -> Result<Outcome> {
    let ring = &inputs.ring;
    let fam = || -> Result<&Family> {
        inputs
            .family
            .as_ref()
            .map(|(_, f)| f)
            .ok_or_else(|| Error::Parse("a family is required".into()))
    };
    match cmd {
        Command::LtConstruct { f, print_series, .. } => {
            lt_construct(ring, &input::series(ring, f, common.degree)?, *print_series)
        }
        Command::Endo {
            f,
            g,
            alpha,
            print_series,
            ..
        } => {
            let f = input::series(ring, f, common.degree)?;
            let g = g
                .as_deref()
                .map(|g| input::series(ring, g, common.degree))
                .transpose()?;
            endo(&f, g.as_ref(), &input::values(ring, alpha)?, *print_series)
        }
        Command::Log { print_series, .. } => log(fam()?, samples, *print_series),
        Command::FamilyCheck { .. } => family_check(fam()?, samples),
        Command::LambdaStats { n, .. } => {
            let fam = fam()?;
            let ns = match n {
                Some(list) => list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad n {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => (1..=3)
                    .filter(|&n| {
                        ring.q()
                            .checked_pow(n)
                            .is_some_and(|x| x <= fam.degree() as u64)
                    })
                    .collect(),
            };
            stats(fam, &ns)
        }
        Command::Profile { alpha, .. } => {
            let fam = fam()?;
            let alphas = match alpha {
                Some(list) => input::values(ring, list)?,
                None => (1..=3u32)
                    .filter(|&n| {
                        ring.q()
                            .checked_pow(n)
                            .is_some_and(|x| x <= fam.degree() as u64)
                    })
                    .map(|n| &OKValue::one(ring) + &OKValue::pi(ring).pow(n as u64))
                    .collect(),
            };
            profile(fam, &alphas)
        }
        Command::RecoverGroup { print_series, .. } => recover(fam()?, samples, *print_series),
        Command::MuSearch { max_digits, .. } => mu(fam()?, *max_digits, samples),
    }
}

fn lt_construct(
    _ring: &Ring,
    f: &lubin_core::series::Series1,
    print_series: bool,
) -> Result<Outcome> {
    let lt = is_lt_series(f)?;
    if !lt.holds {
        let v = lt.violation.as_ref().expect("violation recorded");
        return Ok(Outcome {
            passed: false,
            text: vec![format!(
                "not a Lubin-Tate series: coefficient {} {}",
                v.index, v.reason
            )],
            result: json!({ "lt_check": to_value(&lt) }),
        });
    }
    let law = lt_group_law(f)?;
    let axioms = law.check_axioms()?;
    let f_endo = law.endo_check(f)?;
    let mut text = vec![
        "Lubin-Tate series: ok".to_string(),
        agreement_line("G(X, 0) = X, G(0, Y) = Y", &axioms.identity),
        agreement_line("commutativity", &axioms.commutativity),
        agreement_line("associativity", &axioms.associativity),
        agreement_line("f(G) = G(f, f)", &f_endo),
    ];
    if print_series {
        text.push(format!("G = {}", law.series().to_literal()));
    }
    Ok(Outcome {
        passed: axioms.holds() && f_endo.holds(),
        result: json!({
            "lt_check": to_value(&lt),
            "axioms": to_value(&axioms),
            "f_endomorphism": to_value(&f_endo),
            "law": law.series().to_literal(),
        }),
        text,
    })
}

fn endo(
    f: &lubin_core::series::Series1,
    g: Option<&lubin_core::series::Series1>,
    alphas: &[OKValue],
    print_series: bool,
) -> Result<Outcome> {
    let g = g.unwrap_or(f);
    let law_f = lt_group_law(f)?;
    let law_g = if g == f { law_f.clone() } else { lt_group_law(g)? };
    let mut entries = Vec::new();
    let mut text = Vec::new();
    let mut passed = true;
    for a in alphas {
        let s = lt_endo(a, f, g)?;
        // f∘s = s∘g makes s a homomorphism from G_g to G_f
        let check = law_f.transport_check(&s, &law_g)?;
        passed &= check.holds();
        text.push(agreement_line(&format!("[{a}]: homomorphism"), &check));
        if print_series {
            text.push(format!("[{a}] = {}", s.to_literal()));
        }
        entries.push(json!({
            "alpha": a.to_string(),
            "series": s.to_literal(),
            "homomorphism_check": to_value(&check),
        }));
    }
    Ok(Outcome {
        passed,
        result: json!({ "endomorphisms": entries }),
        text,
    })
}

fn log(fam: &Family, samples: &[OKValue], print_series: bool) -> Result<Outcome> {
    let l = solve_log(fam)?;
    let fe = verify_log(fam, &l, samples)?;
    let it = log_by_iteration(fam)?;
    let cross = l.series().agreement(&it.series)?;
    let mut text: Vec<String> = fe
        .iter()
        .map(|c| {
            format!(
                "L(F_alpha) = alpha L for alpha = {}: {}",
                c.alpha,
                mark(c.holds)
            )
        })
        .collect();
    text.push(format!(
        "coefficient precision floor: {}",
        l.series().precision_floor()
    ));
    text.push(agreement_line(
        "agreement with lim pi^-n F_pi^n",
        &cross,
    ));
    if print_series {
        text.push(format!("L = {}", l.series().to_literal()));
    }
    Ok(Outcome {
        passed: fe.iter().all(|c| c.holds) && cross.holds(),
        result: json!({
            "log": l.series().to_literal(),
            "precision_floor": l.series().precision_floor(),
            "functional_equation": to_value(&fe),
            "iteration": {
                "agreement": to_value(&cross),
                "summary": to_value(&it.summary()),
            },
        }),
        text,
    })
}

fn family_check(fam: &Family, samples: &[OKValue]) -> Result<Outcome> {
    let c = check_commuting(fam, samples)?;
    let f = check_full(fam, samples)?;
    let mut text = vec![match &c.witness {
        None => format!("commuting: ok ({} pairs)", c.pairs_checked),
        Some(w) => format!(
            "commuting: FAILS for alpha = {}, beta = {} at degree {}",
            w.alpha, w.beta, w.index
        ),
    }];
    let bad: Vec<&str> = f
        .derivatives
        .iter()
        .filter(|d| !d.holds)
        .map(|d| d.alpha.as_str())
        .collect();
    text.push(if bad.is_empty() {
        format!("F_alpha'(0) = alpha: ok ({} samples)", f.derivatives.len())
    } else {
        format!("F_alpha'(0) = alpha: FAILS for {}", bad.join(", "))
    });
    text.push(format!(
        "wideg(F_pi) = {} (q = {}): {}",
        f.wideg_f_pi,
        f.q,
        mark(f.wideg_ok)
    ));
    text.push(format!(
        "F_pi'/pi a unit series: {}{}",
        mark(f.unit_derivative),
        f.unit_derivative_detail
            .as_ref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default()
    ));
    text.push(format!(
        "F_pi mod pi = G(T^(p^d)) with d = {}, p^d = {} (q = {}): {}",
        f.residue.d,
        f.residue.p_pow_d,
        f.residue.q,
        mark(f.residue.holds)
    ));
    Ok(Outcome {
        passed: c.passed && f.passed,
        result: json!({ "commuting": to_value(&c), "full": to_value(&f) }),
        text,
    })
}

fn stats(fam: &Family, ns: &[u32]) -> Result<Outcome> {
    let all = ns
        .iter()
        .map(|&n| lambda_stats(fam, n))
        .collect::<Result<Vec<_>>>()?;
    let text = all
        .iter()
        .map(|s| {
            format!(
                "n = {}: {} roots (expected {}), valuation {} (expected {}), {} roots of F_pi^n/T (expected {}): {}",
                s.n,
                s.count,
                s.expected_count,
                s.valuation
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "mixed".into()),
                s.expected_valuation,
                s.total_roots,
                s.expected_total,
                mark(s.holds)
            )
        })
        .collect();
    Ok(Outcome {
        passed: all.iter().all(|s| s.holds),
        result: json!({ "stats": to_value(&all) }),
        text,
    })
}

fn profile(fam: &Family, alphas: &[OKValue]) -> Result<Outcome> {
    let all = alphas
        .iter()
        .map(|a| fixedpoint_profile(fam, a))
        .collect::<Result<Vec<_>>>()?;
    let text = all
        .iter()
        .map(|p| {
            format!(
                "alpha = {}: n(alpha) = {}, wideg(F_alpha - T) = {} (expected {}), polygon {}: {}",
                p.alpha,
                p.n_alpha,
                p.wideg_of_difference,
                p.expected_wideg,
                p.polygon,
                mark(p.matches_prediction)
            )
        })
        .collect();
    Ok(Outcome {
        passed: all.iter().all(|p| p.matches_prediction),
        result: json!({ "profiles": to_value(&all) }),
        text,
    })
}

fn recover(fam: &Family, samples: &[OKValue], print_series: bool) -> Result<Outcome> {
    let rec = recover_group(fam, samples)?;
    let rep = &rec.report;
    let count = |v: &[bool]| format!("{}/{}", v.iter().filter(|&&b| b).count(), v.len());
    let fe: Vec<bool> = rep.functional_equation.iter().map(|c| c.holds).collect();
    let en: Vec<bool> = rep.endo_checks.iter().map(|c| c.holds).collect();
    let ex: Vec<bool> = rep.exp_checks.iter().map(|c| c.holds).collect();
    let mut text = vec![
        "G = exp(L(X) + L(Y)) integral: ok".to_string(),
        format!("L(F_alpha) = alpha L: {}", count(&fe)),
        agreement_line("G(X, 0) = X, G(0, Y) = Y", &rep.axioms.identity),
        agreement_line("commutativity", &rep.axioms.commutativity),
        agreement_line("associativity", &rep.axioms.associativity),
        format!("F_alpha endomorphisms of G: {}", count(&en)),
        format!("exp(alpha L) = F_alpha: {}", count(&ex)),
    ];
    if print_series {
        text.push(format!("G = {}", rec.law.series().to_literal()));
    }
    Ok(Outcome {
        passed: rep.passed,
        result: json!({ "law": rec.law.series().to_literal(), "report": to_value(rep) }),
        text,
    })
}

fn mu(fam: &Family, max_digits: usize, samples: &[OKValue]) -> Result<Outcome> {
    let found = mu_search(fam, max_digits)?;
    let cert = &found.certificate;
    let ver = mu_verify(fam, &found, samples)?;
    let text = vec![
        format!("mu = {} ({} digit(s) of mu/pi fixed)", found.mu, cert.digits_determined),
        format!("F_mu = T^q mod pi up to degree {}: ok", cert.congruence_degree),
        format!("wideg(F_mu) = {}: {}", cert.wideg, mark(cert.wideg_ok)),
        format!("F_mu Lubin-Tate: {}", mark(cert.lt_check.holds)),
        format!(
            "F_alpha endomorphisms of the group of F_mu: {}/{}",
            ver.endo_checks.iter().filter(|c| c.holds).count(),
            ver.endo_checks.len()
        ),
    ];
    Ok(Outcome {
        passed: cert.wideg_ok && cert.lt_check.holds && ver.passed,
        result: json!({ "certificate": to_value(cert), "verification": to_value(&ver) }),
        text,
    })
}
