//! Loading rings, series and families from files or inline text.

use std::path::Path;

use lubin_core::dynamics::{parse_value, Family, FamilyDescriptor};
use lubin_core::padic::{OKValue, Ring, RingDescriptor};
use lubin_core::series::Series1;
use lubin_core::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_PRECISION: u32 = 24;

/// Ring descriptor as accepted on the command line. Omitted polynomials give
/// Z_p; an omitted N falls back to the default precision.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct RingArg {
    p: u64,
    #[serde(default)]
    unram_poly: Option<Vec<i64>>,
    #[serde(default)]
    eis_poly: Option<Vec<i64>>,
    #[serde(rename = "N", default)]
    n: Option<u32>,
}

/// A family file: the descriptor, optionally with its ring.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct FamilyFile {
    #[serde(default)]
    ring: Option<RingArg>,
    #[serde(flatten)]
    family: FamilyDescriptor,
}

/// File contents if `arg` names an existing file, else `arg` itself.
pub fn text_of(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn json<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T> {
    let text = text_of(arg)?;
    if !text.trim_start().starts_with('{') {
        return Err(Error::Parse(format!("{what}: {arg:?} is neither a file nor inline JSON")));
    }
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn ring_from(arg: RingArg, precision: Option<u32>) -> RingDescriptor {
    RingDescriptor {
        p: arg.p,
        unram_poly: arg.unram_poly.unwrap_or_else(|| vec![0, 1]),
        eis_poly: arg.eis_poly.unwrap_or_else(|| vec![-(arg.p as i64), 1]),
        n: precision.or(arg.n).unwrap_or(DEFAULT_PRECISION),
    }
}

pub struct Inputs {
    pub ring_desc: RingDescriptor,
    pub ring: Ring,
    pub family: Option<(FamilyDescriptor, Family)>,
}

/// Resolve the ring (from --ring or the family file) and the family.
pub fn load(
    ring: Option<&str>,
    family: Option<&str>,
    precision: Option<u32>,
    degree: usize,
) -> Result<Inputs> {
    let fam_file: Option<FamilyFile> = family.map(|f| json(f, "family")).transpose()?;
    let ring_arg = match (ring, fam_file.as_ref().and_then(|f| f.ring.clone())) {
        (Some(r), _) => json::<RingArg>(r, "ring")?,
        (None, Some(r)) => r,
        (None, None) => {
            return Err(Error::Parse(
                "no ring given: pass --ring or a family file with a ring".into(),
            ))
        }
    };
    let ring_desc = ring_from(ring_arg, precision);
    let ring = ring_desc.build()?;
    let family = match fam_file {
        Some(f) => {
            let fam = f.family.build(&ring, Some(degree))?;
            Some((f.family, fam))
        }
        None => None,
    };
    Ok(Inputs {
        ring_desc,
        ring,
        family,
    })
}

/// A series literal (inline or in a file), truncated at `degree`.
pub fn series(ring: &Ring, arg: &str, degree: usize) -> Result<Series1> {
    let s = Series1::parse(ring, text_of(arg)?.trim())?;
    Ok(if s.degree() > degree { s.truncate(degree) } else { s })
}

/// Comma-separated values.
pub fn values(ring: &Ring, list: &str) -> Result<Vec<OKValue>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(ring, s))
        .collect()
}
