//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use latkit_core::bound::{pe_estimate, required_vnr_in, select_best, DEFAULT_BRACKET_DB};
use latkit_core::polar::polar_search;
use latkit_core::sim::{Transmit, DEFAULT_MIN_ERRORS};
use latkit_core::theta::theta_2zn;
use latkit_core::{Family, Registry, SimConfig, TruncatedTheta, VnrDb};

use crate::codespec::{resolve, CodeSpec, ProfileOverride};
use crate::config;
use crate::design::{candidates, run_rule, FamilyChoice, RuleChoice};
use crate::error::{AppError, AppResult};
use crate::figures::{self, Figure, FigureRequest, FIG_HEADER};
use crate::formats::{
    fmt_db, fmt_prob, format_sim_row, parse_registry_csv, read_text, DesignJson, ThetaJson, BOUND_HEADER, SIM_HEADER,
};
use crate::parallel::simulate_parallel;

#[derive(Debug, Parser)]
#[command(name = "latkit", version, about = "Construction A lattice design and evaluation")]
pub struct Cli {
    /// Registry CSV (family,n,k,d_c,tau_c,source) merged over the bundled entries.
    #[arg(long, global = true, env = "LATKIT_REGISTRY", value_name = "PATH")]
    pub registry: Option<PathBuf>,
    /// key=value file of option defaults; command-line flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy, Default)]
pub struct ProfileArgs {
    /// Number of minimum-weight codewords.
    #[arg(long)]
    pub tau_c: Option<u64>,
    /// Minimum distance, when it cannot be derived from the code.
    #[arg(long)]
    pub d_c: Option<u32>,
}

impl From<ProfileArgs> for ProfileOverride {
    fn from(a: ProfileArgs) -> Self {
        ProfileOverride { d_c: a.d_c, tau_c: a.tau_c }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact truncated theta series as JSON.
    Theta {
        /// Code spec: ebch:n:k, polar:m=..:k=..:dc=.., polar:m=..:info=.., file:path.
        #[arg(required_unless_present = "cubic")]
        spec: Option<String>,
        /// Keep terms with d^2 <= DMAX2.
        #[arg(long)]
        dmax2: Option<u32>,
        /// Print the series of 2Z^N instead of a construction A lattice.
        #[arg(long, value_name = "N", conflicts_with = "spec")]
        cubic: Option<usize>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Union-bound estimate over a VNR sweep, or the VNR needed for --pe.
    Bound {
        spec: String,
        /// A single value or a range start:stop:step (dB).
        #[arg(long, allow_hyphen_values = true, required_unless_present = "pe", conflicts_with = "pe")]
        vnr_db: Option<String>,
        /// Target word error rate.
        #[arg(long)]
        pe: Option<f64>,
        /// Inversion bracket lo:hi in dB.
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// VNR needed to reach --pe (same as `bound --pe`).
    RequiredVnr {
        spec: String,
        #[arg(long)]
        pe: f64,
        #[arg(long, allow_hyphen_values = true)]
        bracket: Option<String>,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Select a component code under a design rule.
    Design {
        #[arg(long, value_enum, default_value = "all")]
        family: FamilyChoice,
        #[arg(long, default_value_t = 1e-5)]
        target_pe: f64,
        #[arg(long, value_enum, default_value = "tub")]
        rule: RuleChoice,
        /// Operating point for the eep rule.
        #[arg(long, allow_hyphen_values = true)]
        vnr_db: Option<f64>,
        /// Polar candidates have length 2^M.
        #[arg(long, default_value_t = 7)]
        m: u32,
    },
    /// Monte Carlo word error rate with OSD decoding.
    Simulate {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        vnr_db: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MIN_ERRORS)]
        min_errors: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_trials: u64,
        #[arg(long, default_value_t = 2)]
        osd_order: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Send z drawn uniformly from {0,1}^n instead of z = 0.
        #[arg(long)]
        random_z: bool,
        /// Omit the CSV header line.
        #[arg(long)]
        no_header: bool,
    },
    /// Best EBCH code and required VNR at P_e = 1e-4 .. 1e-8.
    Table1 {
        /// CSV instead of an aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Long-format CSV behind the error-rate figures.
    ExportFig {
        #[arg(value_enum)]
        figure: Figure,
        /// VNR grid start:stop:step for fig2 and polar-tau.
        #[arg(long, allow_hyphen_values = true, default_value = "0:8:0.25")]
        vnr_db: String,
        /// Comma-separated VNRs for fig3.
        #[arg(long, default_value = "2.5,3,3.5")]
        at: String,
        /// Comma-separated d_c values for fig3.
        #[arg(long, default_value = "4,8,16")]
        dc: String,
        /// Comma-separated d_c:k pairs for polar-tau.
        #[arg(long, default_value = "4:105,8:90")]
        cases: String,
        #[arg(long, default_value_t = 7)]
        m: u32,
        /// Simulation CSV to merge, as LABEL=PATH (repeatable).
        #[arg(long, value_name = "LABEL=PATH")]
        sim: Vec<String>,
    },
    /// Enumerate polar information sets, partial order or not.
    PolarSearch {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        dc: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        max_sets: usize,
    },
}

fn parse_f64(text: &str, what: &str) -> AppResult<f64> {
    let v: f64 = text.trim().parse().map_err(|_| AppError::usage(format!("invalid {what} `{text}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(AppError::usage(format!("{what} must be finite")))
    }
}

/// `v` or `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_grid(text: &str) -> AppResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [v] => Ok(vec![parse_f64(v, "VNR")?]),
        [a, b, s] => {
            let (a, b, s) = (parse_f64(a, "range start")?, parse_f64(b, "range stop")?, parse_f64(s, "range step")?);
            if s <= 0.0 || b < a {
                return Err(AppError::usage("range needs start <= stop and step > 0"));
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(AppError::usage("range has too many points"));
            }
            Ok((0..count).map(|i| a + i as f64 * s).collect())
        }
        _ => Err(AppError::usage(format!("expected a value or start:stop:step, got `{text}`"))),
    }
}

fn parse_bracket(text: Option<&str>) -> AppResult<(f64, f64)> {
    let Some(text) = text else { return Ok(DEFAULT_BRACKET_DB) };
    let (lo, hi) = text.split_once(':').ok_or_else(|| AppError::usage("bracket must be lo:hi"))?;
    let (lo, hi) = (parse_f64(lo, "bracket low")?, parse_f64(hi, "bracket high")?);
    if lo >= hi {
        return Err(AppError::usage("bracket needs lo < hi"));
    }
    Ok((lo, hi))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> AppResult<Vec<T>> {
    text.split(',').map(|t| t.trim().parse().map_err(|_| AppError::usage(format!("invalid {what} `{t}`")))).collect()
}

fn load_registry(path: Option<&PathBuf>, err: &mut dyn Write) -> AppResult<Registry> {
    let mut reg = Registry::bundled();
    if let Some(path) = path {
        let entries = parse_registry_csv(&read_text(path)?, &path.display().to_string())?;
        for o in reg.merge(entries) {
            let _ = writeln!(
                err,
                "warning: {} ({},{}) from {} replaces d_c={} tau_c={} with d_c={} tau_c={}",
                o.replacement.family,
                o.replacement.n,
                o.replacement.k,
                path.display(),
                o.previous.d_c,
                o.previous.tau_c,
                o.replacement.d_c,
                o.replacement.tau_c
            );
        }
    }
    Ok(reg)
}

fn io(e: std::io::Error) -> AppError {
    AppError::io("<stdout>", e)
}

fn check_pe(pe: f64) -> AppResult<f64> {
    if pe > 0.0 && pe < 1.0 {
        Ok(pe)
    } else {
        Err(AppError::usage(format!("target P_e must be in (0, 1), got {pe}")))
    }
}

fn write_required(
    out: &mut dyn Write,
    theta: &TruncatedTheta,
    rate: f64,
    pe: f64,
    bracket: Option<&str>,
) -> AppResult<()> {
    let v = required_vnr_in(theta, rate, check_pe(pe)?, parse_bracket(bracket)?)?;
    writeln!(out, "target_pe,required_vnr_db").map_err(io)?;
    writeln!(out, "{},{}", fmt_prob(pe), fmt_db(v.0)).map_err(io)
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> AppResult<()> {
    let registry = load_registry(cli.registry.as_ref(), err)?;
    match cli.command {
        Command::Theta { spec, dmax2, cubic, profile } => {
            let (n, theta) = match (cubic, spec) {
                (Some(n), _) => {
                    if n == 0 {
                        return Err(AppError::usage("--cubic needs N >= 1"));
                    }
                    (n, theta_2zn(n, dmax2.unwrap_or(8)))
                }
                (None, Some(spec)) => {
                    let resolved = resolve(&spec.parse::<CodeSpec>()?, &registry, profile.into())?;
                    let theta = TruncatedTheta::for_code(resolved.params()?)?;
                    let theta = match dmax2 {
                        Some(d) if d > theta.dmax2() => {
                            return Err(AppError::usage(format!(
                                "exact terms are known only up to d^2 = d_c = {}",
                                theta.dmax2()
                            )))
                        }
                        Some(d) => theta.truncate(d),
                        None => theta,
                    };
                    (resolved.code.n(), theta)
                }
                (None, None) => return Err(AppError::usage("theta needs a code spec or --cubic")),
            };
            let json =
                serde_json::to_string(&ThetaJson::new(n, &theta)).map_err(|e| AppError::Internal(e.to_string()))?;
            writeln!(out, "{json}").map_err(io)
        }
        Command::Bound { spec, vnr_db, pe, bracket, profile } => {
            let resolved = resolve(&spec.parse::<CodeSpec>()?, &registry, profile.into())?;
            let params = resolved.params()?;
            let theta = TruncatedTheta::for_code(params)?;
            match (vnr_db, pe) {
                (_, Some(pe)) => write_required(out, &theta, params.rate(), pe, bracket.as_deref()),
                (Some(grid), None) => {
                    writeln!(out, "{BOUND_HEADER}").map_err(io)?;
                    for v in parse_grid(&grid)? {
                        let p = pe_estimate(&theta, VnrDb(v), params.rate())?;
                        writeln!(out, "{},{}", fmt_db(v), fmt_prob(p)).map_err(io)?;
                    }
                    Ok(())
                }
                (None, None) => Err(AppError::usage("bound needs --vnr-db or --pe")),
            }
        }
        Command::RequiredVnr { spec, pe, bracket, profile } => {
            let resolved = resolve(&spec.parse::<CodeSpec>()?, &registry, profile.into())?;
            let params = resolved.params()?;
            write_required(out, &TruncatedTheta::for_code(params)?, params.rate(), pe, bracket.as_deref())
        }
        Command::Design { family, target_pe, rule, vnr_db, m } => {
            let cands = candidates(family, &registry, m)?;
            let outcome = run_rule(rule, &cands, check_pe(target_pe)?, vnr_db)?;
            let json = serde_json::to_string_pretty(&DesignJson::from(&outcome))
                .map_err(|e| AppError::Internal(e.to_string()))?;
            writeln!(out, "{json}").map_err(io)
        }
        Command::Simulate { spec, vnr_db, seed, min_errors, max_trials, osd_order, workers, random_z, no_header } => {
            let resolved = resolve(&spec.parse::<CodeSpec>()?, &registry, ProfileOverride::default())?;
            let cfg = SimConfig {
                vnr_db,
                seed,
                min_errors,
                max_trials,
                osd_order,
                workers,
                transmit: if random_z { Transmit::RandomBinary } else { Transmit::Zero },
            };
            let est = simulate_parallel(&resolved.code, &cfg)?;
            if !no_header {
                writeln!(out, "{SIM_HEADER}").map_err(io)?;
            }
            writeln!(out, "{}", format_sim_row(&est)).map_err(io)
        }
        Command::Table1 { csv } => {
            let cands: Vec<_> = registry.family(Family::Ebch).map(|e| e.params()).collect();
            if csv {
                writeln!(out, "target_pe,required_vnr_db,n,k,d_c,tau_c").map_err(io)?;
            } else {
                writeln!(out, "{:<10} {:>17}  {:<16} {:>8}", "P_e", "required VNR (dB)", "code", "tau_c")
                    .map_err(io)?;
            }
            for e in 4..=8 {
                let pe = 10f64.powi(-e);
                let o = select_best(&cands, pe)?;
                let c = &o.code;
                if csv {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        fmt_prob(pe),
                        fmt_db(o.required_vnr_db),
                        c.n,
                        c.k,
                        c.d_c,
                        c.tau_c
                    )
                } else {
                    let code = format!("({}, {}, {})", c.n, c.k, c.d_c);
                    writeln!(out, "{:<10} {:>17}  {:<16} {:>8}", fmt_prob(pe), fmt_db(o.required_vnr_db), code, c.tau_c)
                }
                .map_err(io)?;
            }
            Ok(())
        }
        Command::ExportFig { figure, vnr_db, at, dc, cases, m, sim } => {
            let tau_cases = cases
                .split(',')
                .map(|c| {
                    let (d, k) =
                        c.split_once(':').ok_or_else(|| AppError::usage(format!("case `{c}` is not d_c:k")))?;
                    Ok((parse_list::<u32>(d, "d_c")?[0], parse_list::<usize>(k, "k")?[0]))
                })
                .collect::<AppResult<Vec<_>>>()?;
            let sims = sim
                .iter()
                .map(|s| {
                    let (label, path) =
                        s.split_once('=').ok_or_else(|| AppError::usage(format!("--sim `{s}` is not LABEL=PATH")))?;
                    Ok((label.to_string(), PathBuf::from(path)))
                })
                .collect::<AppResult<Vec<_>>>()?;
            let req = FigureRequest {
                figure,
                grid: parse_grid(&vnr_db)?,
                fixed_vnrs: parse_list(&at, "VNR")?,
                polar_m: m,
                distances: parse_list(&dc, "d_c")?,
                tau_cases,
                sims,
            };
            let rows = figures::build(&req, &registry)?;
            writeln!(out, "{FIG_HEADER}").map_err(io)?;
            for r in rows {
                writeln!(out, "{}", r.to_csv(figure)).map_err(io)?;
            }
            Ok(())
        }
        Command::PolarSearch { m, dc, k, max_sets } => {
            writeln!(out, "info_set,partial_order,d_c,tau_c").map_err(io)?;
            for hit in polar_search(m, dc, k, max_sets)? {
                let info: Vec<String> = hit.spec.info_set().iter().map(|i| i.to_string()).collect();
                let (d, t) =
                    hit.profile.map_or((String::new(), String::new()), |(d, t)| (d.to_string(), t.to_string()));
                writeln!(out, "\"{}\",{},{},{}", info.join(","), hit.spec.satisfies_partial_order(), d, t)
                    .map_err(io)?;
            }
            Ok(())
        }
    }
}

fn command() -> clap::Command {
    let mut cmd = Cli::command();
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for name in names {
        cmd = cmd.mut_subcommand(name, |s| s.args_override_self(true));
    }
    cmd.args_override_self(true)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cmd = command();
    if let Some(path) = config::find_config_path(&args) {
        match config::inject(&cmd, args, std::path::Path::new(&path)) {
            Ok((injected, warnings)) => {
                for w in warnings {
                    let _ = writeln!(err, "warning: {w}");
                }
                args = injected;
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return e.exit_code();
            }
        }
    }
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let text = e.render().ansi().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return e.exit_code();
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        // The reader went away, as in `latkit ... | head`.
        Err(AppError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
