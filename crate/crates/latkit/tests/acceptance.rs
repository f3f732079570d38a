//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report lines are never captured.
//! Set `LATKIT_ACCEPT_LONG=1` to include the multi-hour EBCH simulation.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use latkit::parallel::simulate_parallel;
use latkit_core::bound::{pe_estimate, required_vnr};
use latkit_core::osd::candidate_count;
use latkit_core::polar::{dominates, multiplicity_partial_order, polar_generator, reed_muller_info_set};
use latkit_core::sim::simulate_wer;
use latkit_core::theta::{theta_2zn, theta_construction_a};
use latkit_core::{
    BinaryCode, BitVector, CodeParams, Family, OsdConfig, OsdDecoder, PolarSpec, SimConfig, SoftWord, TruncatedTheta,
    VnrDb,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Check = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Option<Check>>);

fn ebch(k: usize, d_c: u32, tau_c: u64) -> CodeParams {
    CodeParams::new(Family::Ebch, 128, k, d_c, tau_c).unwrap()
}

fn required_db(code: &CodeParams, pe: f64) -> f64 {
    let theta = TruncatedTheta::for_code(code).unwrap();
    required_vnr(&theta, code.rate(), pe).unwrap().0
}

fn within_time(started: Instant, limit: Duration) -> Check {
    let took = started.elapsed();
    if took < limit {
        Ok(format!("{:.2?}", took))
    } else {
        Err(format!("took {:.2?}, limit {:?}", took, limit))
    }
}

fn vnr_table(code: &CodeParams, cases: &[(f64, f64)]) -> Check {
    let mut parts = Vec::new();
    for &(pe, want) in cases {
        let got = required_db(code, pe);
        if (got - want).abs() > 0.05 {
            return Err(format!("Pe={pe:e}: {got:.3} dB, expected {want} +/- 0.05"));
        }
        parts.push(format!("{got:.3}"));
    }
    Ok(parts.join("/"))
}

fn required_vnr_table() -> Check {
    let t = Instant::now();
    let a = vnr_table(&ebch(106, 8, 774_192), &[(1e-4, 2.86), (1e-5, 3.38), (1e-6, 3.95)])?;
    let b = vnr_table(&ebch(113, 6, 341_376), &[(1e-7, 4.45), (1e-8, 4.81)])?;
    Ok(format!("(128,106,8) {a} dB, (128,113,6) {b} dB, {}", within_time(t, Duration::from_secs(1))?))
}

fn polar_anchor() -> Check {
    let t = Instant::now();
    let spec = PolarSpec::new(7, reed_muller_info_set(4, 7)).unwrap();
    let tau = multiplicity_partial_order(&spec).map_err(|e| e.to_string())?;
    if (spec.k(), spec.d_c(), tau) != (99, 8, 188_976) {
        return Err(format!("RM(4,7): k={} d_c={} tau_c={tau}", spec.k(), spec.d_c()));
    }
    let code = CodeParams::new(Family::Polar, 128, 99, 8, tau).unwrap();
    let vnrs = vnr_table(&code, &[(1e-4, 3.05), (1e-5, 3.67), (1e-6, 4.27), (1e-7, 4.82), (1e-8, 5.31)])?;
    Ok(format!("tau_c={tau}, {vnrs} dB, {}", within_time(t, Duration::from_secs(1))?))
}

fn theta_exactness() -> Check {
    let cubic = theta_2zn(4, 12);
    let want: Vec<(u32, BigUint)> = [(0, 1u32), (4, 8), (8, 24), (12, 32)].map(|(d, c)| (d, c.into())).to_vec();
    if cubic.terms() != want.as_slice() {
        return Err(format!("2Z^4 terms {:?}", cubic.terms()));
    }
    let t4 = |k, d, tau| theta_construction_a(128, k, d, tau).unwrap().count_at(4).cloned();
    let low = t4(120, 4, 85_344);
    if low != Some(1_365_760u32.into()) {
        return Err(format!("(128,120,4): tau_4={low:?}"));
    }
    for (k, d, tau) in [(113, 6, 341_376), (106, 8, 774_192), (99, 8, 188_976), (64, 16, 94_488)] {
        if t4(k, d, tau) != Some(256u32.into()) {
            return Err(format!("(128,{k},{d}): tau_4 != 256"));
        }
    }
    Ok("1+8q^4+24q^8+32q^12, tau_4=1365760, tau_4=256 for d_c>4".into())
}

/// Vectors `c + 2z` of squared norm 4 for the (8,4,4) code, by direct enumeration.
fn e8_shell_by_enumeration(code: &BinaryCode) -> u64 {
    let mut count = 0;
    for u in 0..16u64 {
        let c = code.encode(&BitVector::from_u64(u, 4)).unwrap();
        // Each coordinate has |x| <= 2 and x = c_j (mod 2).
        let choices: Vec<&[i64]> =
            (0..8).map(|j| if c.get(j) { &[-1i64, 1][..] } else { &[-2i64, 0, 2][..] }).collect();
        let total: usize = choices.iter().map(|c| c.len()).product();
        for mut idx in 0..total {
            let mut norm = 0;
            for ch in &choices {
                let x = ch[idx % ch.len()];
                idx /= ch.len();
                norm += x * x;
            }
            count += u64::from(norm == 4);
        }
    }
    count
}

fn e8_oracle() -> Check {
    let t = Instant::now();
    let code = BinaryCode::extended_hamming(3).unwrap();
    let (d, tau) = code.brute_force_weight_profile().map_err(|e| e.to_string())?;
    let theta = theta_construction_a(8, 4, d, tau).map_err(|e| e.to_string())?;
    let analytic = theta.count_at(4).cloned().unwrap_or_default();
    let enumerated = e8_shell_by_enumeration(&code);
    if analytic != BigUint::from(240u32) || enumerated != 240 {
        return Err(format!("theta gives {analytic}, enumeration gives {enumerated}"));
    }
    Ok(format!("tau_4=240 both ways, {}", within_time(t, Duration::from_secs(1))?))
}

/// Every upward-closed information set with `m <= 5` and `1 <= k <= 24`.
fn partial_order_sets() -> Vec<(u32, Vec<usize>)> {
    let mut out = Vec::new();
    for m in 1u32..=5 {
        let n = 1usize << m;
        let mut seen = HashSet::new();
        let mut frontier = vec![0u64];
        while let Some(set) = frontier.pop() {
            if set.count_ones() as usize >= 24.min(n) {
                continue;
            }
            for j in (0..n).filter(|&j| set >> j & 1 == 0) {
                // Adding j keeps the set upward closed iff every index above j is present.
                let closed = (0..n).all(|i| i == j || !dominates(i, j, m) || set >> i & 1 == 1);
                let next = set | 1 << j;
                if closed && seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        let mut sets: Vec<u64> = seen.into_iter().collect();
        sets.sort_unstable();
        out.extend(sets.into_iter().map(|s| (m, (0..n).filter(|&j| s >> j & 1 == 1).collect())));
    }
    out
}

fn proposition_vs_enumeration() -> Check {
    let t = Instant::now();
    let sets = partial_order_sets();
    if sets.len() < 50 {
        return Err(format!("only {} specs", sets.len()));
    }
    for (m, info) in &sets {
        let spec = PolarSpec::new(*m, info.clone()).unwrap();
        let analytic = (spec.d_c(), multiplicity_partial_order(&spec).map_err(|e| e.to_string())?);
        let brute = polar_generator(&spec).unwrap().brute_force_weight_profile().map_err(|e| e.to_string())?;
        if analytic != brute {
            return Err(format!("m={m} info={info:?}: analytic {analytic:?}, enumeration {brute:?}"));
        }
    }
    Ok(format!("{} specs agree, {}", sets.len(), within_time(t, Duration::from_secs(300))?))
}

fn osd_correctness() -> Check {
    let code = BinaryCode::extended_hamming(3).unwrap();
    let words: Vec<BitVector> = (0..16).map(|u| code.encode(&BitVector::from_u64(u, 4)).unwrap()).collect();
    let mut decoder = OsdDecoder::new(&code, OsdConfig::new(2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xE8);
    for sigma in [0.1, 0.3, 0.5] {
        let noise = Normal::new(0.0, sigma).unwrap();
        let mut disagreements = 0;
        for _ in 0..100_000 {
            let sent = &words[rng.random_range(0..16)];
            let y: Vec<f64> = (0..8)
                .map(|j| f64::from(u8::from(sent.get(j))) + noise.sample(&mut rng))
                .map(latkit_core::sim::mod_star_scalar)
                .collect();
            let y = SoftWord::new(y).unwrap();
            let osd = decoder.decode(&y).unwrap();
            let ml = words.iter().min_by(|a, b| y.distance(a).total_cmp(&y.distance(b))).unwrap();
            disagreements += usize::from(y.distance(&osd) != y.distance(ml));
        }
        if disagreements > 0 {
            return Err(format!("sigma={sigma}: {disagreements} disagreements with ML at order 2"));
        }
    }
    let count = candidate_count(106, 2);
    if count != 5671 {
        return Err(format!("candidate_count(106, 2) = {count}"));
    }
    Ok("order 2 equals ML on 3 x 1e5 words, candidate_count(106,2)=5671".into())
}

fn e8_params() -> (BinaryCode, CodeParams) {
    let code = BinaryCode::extended_hamming(3).unwrap();
    (code, CodeParams::new(Family::ExtHamming, 8, 4, 4, 14).unwrap())
}

fn bound_vs_simulation_e8() -> Check {
    let t = Instant::now();
    let (code, params) = e8_params();
    let vnr = required_db(&params, 1e-3);
    let cfg = SimConfig { min_errors: 300, ..SimConfig::new(vnr, 2024, 20_000_000, 4) };
    let est = simulate_wer(&code, &cfg).map_err(|e| e.to_string())?;
    let summary = format!("VNR {vnr:.3} dB, WER {:.3e} ({} / {})", est.wer, est.errors, est.trials);
    if est.errors < 300 {
        return Err(format!("{summary}: fewer than 300 errors"));
    }
    if !(0.5e-3..=2e-3).contains(&est.wer) {
        return Err(format!("{summary}: outside [5e-4, 2e-3]"));
    }
    Ok(format!("{summary}, {}", within_time(t, Duration::from_secs(120))?))
}

fn bound_vs_simulation_ebch() -> Option<Check> {
    std::env::var_os("LATKIT_ACCEPT_LONG")?;
    let code = BinaryCode::ebch_with_dimension(128, 106).unwrap();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cfg = SimConfig { min_errors: 100, workers, ..SimConfig::new(2.86, 1, u64::MAX, 2) };
    Some(simulate_parallel(&code, &cfg).map_err(|e| e.to_string()).and_then(|est| {
        let summary = format!("WER {:.3e} ({} / {})", est.wer, est.errors, est.trials);
        if est.errors >= 100 && (0.5e-4..=2e-4).contains(&est.wer) {
            Ok(summary)
        } else {
            Err(summary)
        }
    }))
}

fn design_rule_comparison() -> Check {
    let (a, b, c) = (ebch(106, 8, 774_192), ebch(120, 4, 85_344), ebch(113, 6, 341_376));
    let margin = required_db(&b, 1e-5) - required_db(&a, 1e-5);
    if margin < 0.5 {
        return Err(format!("(128,106,8) beats (128,120,4) by only {margin:.3} dB"));
    }
    let winner = |pe| if required_db(&a, pe) < required_db(&c, pe) { 106 } else { 113 };
    let (w6, w7) = (winner(1e-6), winner(1e-7));
    if (w6, w7) != (106, 113) {
        return Err(format!("winners k={w6} at 1e-6, k={w7} at 1e-7"));
    }
    // The bound itself agrees on the ordering at both points.
    let pe = |code: &CodeParams, vnr: f64| {
        pe_estimate(&TruncatedTheta::for_code(code).unwrap(), VnrDb(vnr), code.rate()).unwrap()
    };
    let v = required_db(&a, 1e-6);
    if pe(&a, v) >= pe(&c, v) {
        return Err("bound ordering at 1e-6 disagrees with required VNR".into());
    }
    Ok(format!("margin {margin:.3} dB, winner flips 106 -> 113 between 1e-6 and 1e-7"))
}

fn determinism() -> Check {
    let (code, _) = e8_params();
    let base = SimConfig { min_errors: 200, ..SimConfig::new(1.5, 77, 2_000_000, 4) };
    let runs: Vec<_> = [1, 4, 8]
        .iter()
        .map(|&workers| simulate_parallel(&code, &SimConfig { workers, ..base }).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if runs.windows(2).any(|w| w[0] != w[1]) {
        return Err(format!("{runs:?}"));
    }
    let r = &runs[0];
    Ok(format!("1/4/8 workers: {} errors in {} trials, WER {:.6e}", r.errors, r.trials, r.wer))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("1 required-VNR table regression", Box::new(|| Some(required_vnr_table()))),
        ("2 polar anchor", Box::new(|| Some(polar_anchor()))),
        ("3 theta exactness", Box::new(|| Some(theta_exactness()))),
        ("4 E8 oracle", Box::new(|| Some(e8_oracle()))),
        ("5 multiplicity formula vs enumeration", Box::new(|| Some(proposition_vs_enumeration()))),
        ("6 OSD correctness", Box::new(|| Some(osd_correctness()))),
        ("7 bound vs simulation, E8", Box::new(|| Some(bound_vs_simulation_e8()))),
        ("8 bound vs simulation, (128,106,8)", Box::new(bound_vs_simulation_ebch)),
        ("9 design rule comparison", Box::new(|| Some(design_rule_comparison()))),
        ("10 determinism", Box::new(|| Some(determinism()))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Some(Ok(detail)) => println!("PASS criterion {name}: {detail}"),
            Some(Err(detail)) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
            None => {
                println!("SKIP criterion {name}: long run, set LATKIT_ACCEPT_LONG=1 or use scripts/fig2_long_run.sh")
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
