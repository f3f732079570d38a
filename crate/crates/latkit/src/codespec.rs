//! Code specification strings and `(d_c, tau_c)` resolution.
//!
//! Accepted forms:
//!
//! * `ebch:<n>:<k>`
//! * `polar:m=<m>:k=<k>:dc=<d>` (designed for the smallest `tau_c`)
//! * `polar:m=<m>:info=<i1,i2,...>`
//! * `file:<path>` (generator matrix file)

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use latkit_core::code::ENUMERATION_LIMIT;
use latkit_core::polar::{design_polar, multiplicity_partial_order, polar_generator};
use latkit_core::{BinaryCode, CodeParams, Family, PolarSpec, Registry};

use crate::error::{AppError, AppResult};
use crate::formats::read_generator;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    Ebch { n: usize, k: usize },
    PolarDesign { m: u32, k: usize, dc: u32 },
    PolarInfo { m: u32, info: Vec<usize> },
    File(PathBuf),
}

fn num<T: FromStr>(text: &str, what: &str) -> AppResult<T> {
    text.trim().parse().map_err(|_| AppError::usage(format!("invalid {what} `{text}`")))
}

impl FromStr for CodeSpec {
    type Err = AppError;

    fn from_str(s: &str) -> AppResult<Self> {
        let (kind, rest) =
            s.split_once(':').ok_or_else(|| AppError::usage(format!("code spec `{s}` has no `kind:` prefix")))?;
        match kind.to_ascii_lowercase().as_str() {
            "ebch" => {
                let (n, k) = rest.split_once(':').ok_or_else(|| AppError::usage("expected `ebch:<n>:<k>`"))?;
                Ok(CodeSpec::Ebch { n: num(n, "n")?, k: num(k, "k")? })
            }
            "polar" => {
                let (mut m, mut k, mut dc, mut info) = (None, None, None, None);
                for field in rest.split(':') {
                    let (key, value) = field
                        .split_once('=')
                        .ok_or_else(|| AppError::usage(format!("polar field `{field}` is not key=value")))?;
                    match key.trim() {
                        "m" => m = Some(num(value, "m")?),
                        "k" => k = Some(num(value, "k")?),
                        "dc" => dc = Some(num(value, "dc")?),
                        "info" => {
                            info = Some(value.split(',').map(|v| num(v, "index")).collect::<AppResult<Vec<usize>>>()?)
                        }
                        other => return Err(AppError::usage(format!("unknown polar field `{other}`"))),
                    }
                }
                let m = m.ok_or_else(|| AppError::usage("polar spec needs m=<m>"))?;
                match (k, dc, info) {
                    (Some(k), Some(dc), None) => Ok(CodeSpec::PolarDesign { m, k, dc }),
                    (None, None, Some(info)) => Ok(CodeSpec::PolarInfo { m, info }),
                    _ => Err(AppError::usage("polar spec needs either k=..:dc=.. or info=..")),
                }
            }
            "file" if !rest.is_empty() => Ok(CodeSpec::File(PathBuf::from(rest))),
            _ => Err(AppError::usage(format!("unknown code spec `{s}` (expected ebch:, polar: or file:)"))),
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Ebch { n, k } => write!(f, "ebch:{n}:{k}"),
            CodeSpec::PolarDesign { m, k, dc } => write!(f, "polar:m={m}:k={k}:dc={dc}"),
            CodeSpec::PolarInfo { m, info } => {
                let list: Vec<String> = info.iter().map(|i| i.to_string()).collect();
                write!(f, "polar:m={m}:info={}", list.join(","))
            }
            CodeSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Where a code's `(d_c, tau_c)` came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileSource {
    CommandLine,
    PartialOrder,
    Registry(String),
    Enumeration,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ProfileOverride {
    pub d_c: Option<u32>,
    pub tau_c: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct ResolvedCode {
    pub code: BinaryCode,
    pub profile: Option<(CodeParams, ProfileSource)>,
}

impl ResolvedCode {
    /// Parameters, or a user error explaining how to supply `tau_c`.
    pub fn params(&self) -> AppResult<&CodeParams> {
        self.profile.as_ref().map(|(p, _)| p).ok_or_else(|| {
            AppError::usage(format!(
                "tau_c of {} is unknown: add a `{},{},{},<d_c>,<tau_c>,<source>` row to a registry CSV \
                 (--registry or LATKIT_REGISTRY) or pass --tau-c",
                self.code.name(),
                self.code.family(),
                self.code.n(),
                self.code.k()
            ))
        })
    }
}

fn build(spec: &CodeSpec) -> AppResult<(BinaryCode, Option<PolarSpec>)> {
    Ok(match spec {
        CodeSpec::Ebch { n, k } => (BinaryCode::ebch_with_dimension(*n, *k)?, None),
        CodeSpec::PolarDesign { m, k, dc } => {
            let p = design_polar(*m, *dc, *k)?;
            (polar_generator(&p)?, Some(p))
        }
        CodeSpec::PolarInfo { m, info } => {
            let p = PolarSpec::new(*m, info.clone())?;
            (polar_generator(&p)?, Some(p))
        }
        CodeSpec::File(path) => {
            let gen = read_generator(path)?;
            let name = Family::Custom.code_name(gen.cols(), gen.rows());
            (BinaryCode::new(name, Family::Custom, gen)?, None)
        }
    })
}

/// Builds the code and finds its `(d_c, tau_c)`: command-line values first,
/// then the partial-order formula, the registry, and finally enumeration for
/// `k <= 24`.
pub fn resolve(spec: &CodeSpec, registry: &Registry, overrides: ProfileOverride) -> AppResult<ResolvedCode> {
    let (code, polar) = build(spec)?;
    let (family, n, k) = (code.family(), code.n(), code.k());
    let make = |d_c: u32, tau_c: u64, src: ProfileSource| -> AppResult<Option<(CodeParams, ProfileSource)>> {
        let mut p = CodeParams::new(family, n, k, d_c, tau_c)?;
        p.name = code.name().to_string();
        Ok(Some((p, src)))
    };
    let entry = registry.lookup(family, n, k).ok();
    let profile = if let Some(tau) = overrides.tau_c {
        let d_c = overrides
            .d_c
            .or(code.d_c())
            .or(entry.map(|e| e.d_c))
            .or_else(|| code.brute_force_weight_profile().ok().map(|(d, _)| d))
            .ok_or_else(|| {
                AppError::usage(format!("--tau-c given but d_c of {} is unknown: pass --d-c", code.name()))
            })?;
        make(d_c, tau, ProfileSource::CommandLine)?
    } else if let Some(p) = polar.as_ref().filter(|p| p.satisfies_partial_order()) {
        make(p.d_c(), multiplicity_partial_order(p)?, ProfileSource::PartialOrder)?
    } else if let Some(e) = entry {
        make(e.d_c, e.tau_c, ProfileSource::Registry(e.source.clone()))?
    } else if k <= ENUMERATION_LIMIT {
        let (d, t) = code.brute_force_weight_profile()?;
        make(d, t, ProfileSource::Enumeration)?
    } else {
        None
    };
    Ok(ResolvedCode { code, profile })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("ebch:128:106".parse::<CodeSpec>().unwrap(), CodeSpec::Ebch { n: 128, k: 106 });
        assert_eq!("polar:m=7:k=99:dc=8".parse::<CodeSpec>().unwrap(), CodeSpec::PolarDesign { m: 7, k: 99, dc: 8 });
        assert_eq!(
            "polar:m=3:info=3,5,6,7".parse::<CodeSpec>().unwrap(),
            CodeSpec::PolarInfo { m: 3, info: vec![3, 5, 6, 7] }
        );
        assert_eq!("file:a/b.g".parse::<CodeSpec>().unwrap(), CodeSpec::File("a/b.g".into()));
        for bad in ["ebch:128", "bch:1:2", "polar:m=7", "polar:m=7:k=3:dc=4:info=1", "polar:q=1", "file:", "x"] {
            assert!(bad.parse::<CodeSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["ebch:128:106", "polar:m=7:k=99:dc=8", "polar:m=3:info=3,5,6,7", "file:x.g"] {
            assert_eq!(s.parse::<CodeSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn resolution_order() {
        let reg = Registry::bundled();
        let none = ProfileOverride::default();
        let r = resolve(&"ebch:128:106".parse().unwrap(), &reg, none).unwrap();
        let (p, src) = r.profile.unwrap();
        assert_eq!((p.d_c, p.tau_c), (8, 774_192));
        assert!(matches!(src, ProfileSource::Registry(_)));

        let r = resolve(&"polar:m=7:k=99:dc=8".parse().unwrap(), &reg, none).unwrap();
        let (p, src) = r.profile.unwrap();
        assert_eq!((p.tau_c, src), (188_976, ProfileSource::PartialOrder));

        let r =
            resolve(&"polar:m=3:info=3,5,6,7".parse().unwrap(), &reg, ProfileOverride { d_c: None, tau_c: Some(9) })
                .unwrap();
        assert_eq!(r.profile.unwrap().0.tau_c, 9);

        let r = resolve(&"polar:m=3:info=3,7".parse().unwrap(), &reg, none).unwrap();
        assert_eq!(r.profile.unwrap().1, ProfileSource::Enumeration);

        let r = resolve(&"ebch:128:99".parse().unwrap(), &reg, none).unwrap();
        assert!(r.profile.is_none());
        let msg = r.params().unwrap_err().to_string();
        assert!(msg.contains("registry") && msg.contains("ebch,128,99"), "{msg}");
    }
}
