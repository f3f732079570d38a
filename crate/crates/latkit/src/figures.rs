//! Long-format CSV behind the error-rate figures.

use std::path::PathBuf;

use latkit_core::bound::pe_estimate;
use latkit_core::polar::{design_polar_with, multiplicity_partial_order, Objective};
use latkit_core::{CodeParams, Family, Registry, TruncatedTheta, VnrDb};

use crate::error::{AppError, AppResult};
use crate::formats::{fmt_db, fmt_prob, parse_sim_csv, read_text};

pub const FIG_HEADER: &str = "figure,series,kind,vnr_db,rate,pe,ci_low,ci_high,trials,errors";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// EBCH lattices: bound versus VNR for every EBCH registry entry.
    Fig2,
    /// Partial-order polar lattices: bound versus rate at fixed VNRs.
    Fig3,
    /// Polar lattices with the smallest and largest partial-order tau_c.
    PolarTau,
}

impl Figure {
    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::PolarTau => "polar-tau",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigRow {
    pub series: String,
    pub kind: &'static str,
    pub vnr_db: f64,
    pub rate: Option<f64>,
    pub pe: f64,
    pub ci: Option<(f64, f64)>,
    pub counts: Option<(u64, u64)>,
}

impl FigRow {
    pub fn to_csv(&self, figure: Figure) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let series = if self.series.contains([',', '"']) {
            format!("\"{}\"", self.series.replace('"', "\"\""))
        } else {
            self.series.clone()
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            figure.as_str(),
            series,
            self.kind,
            fmt_db(self.vnr_db),
            opt(self.rate.map(|r| format!("{r:.6}"))),
            fmt_prob(self.pe),
            opt(self.ci.map(|c| fmt_prob(c.0))),
            opt(self.ci.map(|c| fmt_prob(c.1))),
            opt(self.counts.map(|c| c.0.to_string())),
            opt(self.counts.map(|c| c.1.to_string())),
        )
    }
}

fn bound_rows(code: &CodeParams, series: &str, grid: &[f64], with_rate: bool) -> AppResult<Vec<FigRow>> {
    let theta = TruncatedTheta::for_code(code)?;
    grid.iter()
        .map(|&v| {
            Ok(FigRow {
                series: series.to_string(),
                kind: "bound",
                vnr_db: v,
                rate: with_rate.then(|| code.rate()),
                pe: pe_estimate(&theta, VnrDb(v), code.rate())?,
                ..FigRow::default()
            })
        })
        .collect()
}

fn polar_params(spec: &latkit_core::PolarSpec) -> AppResult<Option<CodeParams>> {
    Ok(match multiplicity_partial_order(spec) {
        Ok(tau) => Some(CodeParams::new(Family::Polar, spec.n(), spec.k(), spec.d_c(), tau)?),
        Err(_) => None,
    })
}

pub struct FigureRequest {
    pub figure: Figure,
    pub grid: Vec<f64>,
    pub fixed_vnrs: Vec<f64>,
    pub polar_m: u32,
    pub distances: Vec<u32>,
    pub tau_cases: Vec<(u32, usize)>,
    pub sims: Vec<(String, PathBuf)>,
}

pub fn build(req: &FigureRequest, registry: &Registry) -> AppResult<Vec<FigRow>> {
    let mut rows = Vec::new();
    match req.figure {
        Figure::Fig2 => {
            for e in registry.family(Family::Ebch) {
                let p = e.params();
                let label = format!("({},{},{}) tau_c={}", p.n, p.k, p.d_c, p.tau_c);
                rows.extend(bound_rows(&p, &label, &req.grid, false)?);
            }
        }
        Figure::Fig3 => {
            let n = 1usize << req.polar_m;
            for &dc in &req.distances {
                if !dc.is_power_of_two() || dc as usize > n {
                    return Err(AppError::usage(format!("d_c={dc} is not a polar row weight at m={}", req.polar_m)));
                }
                for k in 1..=n {
                    let Ok(spec) = design_polar_with(req.polar_m, dc, k, Objective::MinTau) else {
                        continue;
                    };
                    let Some(p) = polar_params(&spec)? else { continue };
                    for &v in &req.fixed_vnrs {
                        let label = format!("d_c={dc} vnr={}", fmt_db(v));
                        rows.extend(bound_rows(&p, &label, &[v], true)?);
                    }
                }
            }
        }
        Figure::PolarTau => {
            for &(dc, k) in &req.tau_cases {
                let mut seen = Vec::new();
                for objective in [Objective::MinTau, Objective::MaxTau] {
                    let spec = design_polar_with(req.polar_m, dc, k, objective)?;
                    let Some(p) = polar_params(&spec)? else { continue };
                    if seen.contains(&p.tau_c) {
                        continue;
                    }
                    seen.push(p.tau_c);
                    let label = format!("({},{},{}) tau_c={}", p.n, p.k, p.d_c, p.tau_c);
                    rows.extend(bound_rows(&p, &label, &req.grid, false)?);
                }
            }
        }
    }
    for (label, path) in &req.sims {
        let origin = path.display().to_string();
        for r in parse_sim_csv(&read_text(path)?, &origin)? {
            rows.push(FigRow {
                series: label.clone(),
                kind: "sim",
                vnr_db: r.vnr_db,
                rate: None,
                pe: r.wer,
                ci: Some((r.ci_low, r.ci_high)),
                counts: Some((r.trials, r.errors)),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(figure: Figure) -> FigureRequest {
        FigureRequest {
            figure,
            grid: vec![2.0, 3.0],
            fixed_vnrs: vec![3.0],
            polar_m: 5,
            distances: vec![4, 8],
            tau_cases: vec![(4, 22)],
            sims: Vec::new(),
        }
    }

    #[test]
    fn fig2_has_one_series_per_ebch_entry() {
        let rows = build(&req(Figure::Fig2), &Registry::bundled()).unwrap();
        assert_eq!(rows.len(), 3 * 2);
        assert!(rows.iter().all(|r| r.kind == "bound" && r.rate.is_none()));
        assert!(rows[0].to_csv(Figure::Fig2).starts_with("fig2,\"(128,120,4) tau_c=85344\",bound,2.000,,"));
    }

    #[test]
    fn fig3_sweeps_rates() {
        let rows = build(&req(Figure::Fig3), &Registry::bundled()).unwrap();
        // At m = 5, d_c = 4 covers k in 17..=26 and d_c = 8 covers k in 7..=16.
        assert_eq!(rows.len(), 10 + 10);
        assert!(rows.iter().all(|r| r.rate.is_some()));
    }

    #[test]
    fn polar_tau_skips_duplicate_multiplicities() {
        let rows = build(&req(Figure::PolarTau), &Registry::bundled()).unwrap();
        let series: std::collections::BTreeSet<_> = rows.iter().map(|r| r.series.clone()).collect();
        assert!(!series.is_empty() && series.len() <= 2);
    }
}
