//! Text formats read and written by the command-line tool.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use latkit_core::{BitMatrix, BitVector, DesignOutcome, Family, RegistryEntry, TruncatedTheta, WerEstimate};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

pub fn read_text(path: &Path) -> AppResult<String> {
    fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

/// dB values: three decimals.
pub fn fmt_db(db: f64) -> String {
    format!("{db:.3}")
}

/// Probabilities: four significant digits.
pub fn fmt_prob(p: f64) -> String {
    format!("{p:.3e}")
}

fn rounded(text: String) -> f64 {
    text.parse().expect("formatted float parses")
}

/// Parses a generator matrix: first line `n k`, then `k` rows of `n` bits.
/// Blank lines and `#` comments are ignored, and whitespace inside a row is
/// allowed.
pub fn parse_generator(text: &str, origin: &str) -> AppResult<BitMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| AppError::parse(origin, 1, "empty generator file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| AppError::parse(origin, hline, format!("bad dimension `{t}`"))))
        .collect::<AppResult<_>>()?;
    let [n, k] = dims[..] else {
        return Err(AppError::parse(origin, hline, "header must be `n k`"));
    };
    if n == 0 || k == 0 || k > n {
        return Err(AppError::parse(origin, hline, format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut rows = Vec::with_capacity(k);
    for (lineno, line) in lines {
        let bits: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if rows.len() == k {
            return Err(AppError::parse(origin, lineno, format!("more than {k} rows")));
        }
        if bits.len() != n {
            return Err(AppError::parse(origin, lineno, format!("row has {} bits, expected {n}", bits.len())));
        }
        let row = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(AppError::parse(origin, lineno, format!("unexpected character `{other}`"))),
            })
            .collect::<AppResult<Vec<bool>>>()?;
        rows.push(BitVector::from_bits(row));
    }
    if rows.len() != k {
        return Err(AppError::parse(origin, hline, format!("expected {k} rows, found {}", rows.len())));
    }
    Ok(BitMatrix::from_rows(&rows)?)
}

pub fn read_generator(path: &Path) -> AppResult<BitMatrix> {
    parse_generator(&read_text(path)?, &path.display().to_string())
}

pub fn format_generator(gen: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", gen.cols(), gen.rows());
    for r in 0..gen.rows() {
        writeln!(out, "{}", gen.row(r)).unwrap();
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct RegistryRow {
    family: String,
    n: usize,
    k: usize,
    d_c: u32,
    tau_c: u64,
    #[serde(default)]
    source: String,
}

/// Reads a registry table with header `family,n,k,d_c,tau_c,source`.
pub fn parse_registry_csv(text: &str, origin: &str) -> AppResult<Vec<RegistryEntry>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| AppError::parse(origin, 1, e.to_string()))?.clone();
    for want in ["family", "n", "k", "d_c", "tau_c"] {
        if !headers.iter().any(|h| h == want) {
            return Err(AppError::parse(origin, 1, format!("missing column `{want}`")));
        }
    }
    let mut out = Vec::new();
    for rec in reader.deserialize::<RegistryRow>() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            AppError::parse(origin, line, e.to_string())
        })?;
        let family: Family = rec.family.parse()?;
        let source = if rec.source.is_empty() { origin.to_string() } else { rec.source };
        out.push(RegistryEntry::new(family, rec.n, rec.k, rec.d_c, rec.tau_c, source)?);
    }
    Ok(out)
}

pub fn format_registry_csv(entries: &[RegistryEntry]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in entries {
        w.serialize(RegistryRow {
            family: e.family.as_str().to_string(),
            n: e.n,
            k: e.k,
            d_c: e.d_c,
            tau_c: e.tau_c,
            source: e.source.clone(),
        })
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThetaJson {
    pub n: usize,
    /// `(d^2, count)` with counts as decimal strings.
    pub terms: Vec<(u32, String)>,
}

impl ThetaJson {
    pub fn new(n: usize, theta: &TruncatedTheta) -> Self {
        ThetaJson { n, terms: theta.terms().iter().map(|(d, c)| (*d, c.to_string())).collect() }
    }

    pub fn to_theta(&self, dmax2: u32) -> AppResult<TruncatedTheta> {
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| c.parse().map(|c| (*d, c)).map_err(|_| AppError::usage(format!("bad theta count `{c}`"))))
            .collect::<AppResult<Vec<_>>>()?;
        Ok(TruncatedTheta::new(terms, dmax2)?)
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CodeJson {
    pub name: String,
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub d_c: u32,
    pub tau_c: u64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DesignJson {
    pub code: CodeJson,
    pub rule: String,
    pub target_pe: f64,
    pub required_vnr_db: f64,
    pub estimated_pe_at_vnr: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub operating_vnr_db: Option<f64>,
}

impl From<&DesignOutcome> for DesignJson {
    fn from(o: &DesignOutcome) -> Self {
        DesignJson {
            code: CodeJson {
                name: o.code.name.clone(),
                family: o.code.family.as_str().to_string(),
                n: o.code.n,
                k: o.code.k,
                d_c: o.code.d_c,
                tau_c: o.code.tau_c,
            },
            rule: o.rule.as_str().to_string(),
            target_pe: o.target_pe,
            required_vnr_db: rounded(fmt_db(o.required_vnr_db)),
            estimated_pe_at_vnr: rounded(fmt_prob(o.estimated_pe_at_vnr)),
            operating_vnr_db: o.operating_vnr_db.map(|v| rounded(fmt_db(v))),
        }
    }
}

pub const SIM_HEADER: &str = "vnr_db,trials,errors,wer,ci_low,ci_high,seed";

pub fn format_sim_row(e: &WerEstimate) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_db(e.vnr_db),
        e.trials,
        e.errors,
        fmt_prob(e.wer),
        fmt_prob(e.ci95.0),
        fmt_prob(e.ci95.1),
        e.seed
    )
}

#[derive(Debug, Deserialize, Serialize, Clone, PartialEq)]
pub struct SimRow {
    pub vnr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub wer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// Reads rows written by `simulate`, possibly concatenated with repeated headers.
pub fn parse_sim_csv(text: &str, origin: &str) -> AppResult<Vec<SimRow>> {
    let cleaned: String = text
        .lines()
        .enumerate()
        .filter(|(i, l)| *i == 0 || l.trim() != SIM_HEADER)
        .map(|(_, l)| format!("{l}\n"))
        .collect();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(cleaned.as_bytes());
    reader
        .deserialize()
        .map(|r| {
            r.map_err(|e: csv::Error| {
                AppError::parse(origin, e.position().map_or(0, |p| p.line() as usize), e.to_string())
            })
        })
        .collect()
}

pub const BOUND_HEADER: &str = "vnr_db,pe_estimate";
