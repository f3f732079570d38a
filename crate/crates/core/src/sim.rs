//! Monte Carlo word error rate of a construction A lattice on the AWGN channel.
//!
//! Each trial draws a uniform message, sends the lattice point `x = x_c + 2z`,
//! adds Gaussian noise, folds the observation with mod*, decodes the code part
//! with OSD and recovers the integer part by rounding. A trial is an error when
//! the recovered lattice point differs from the transmitted one.
//!
//! Trial `t` draws all of its randomness from a ChaCha8 stream keyed by
//! `(seed, t)`, so the outcome of a trial never depends on which worker ran it.
//! Results are tallied in trial order and stop at exactly `min_errors` errors
//! or `max_trials` trials.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::binmat::BitVector;
use crate::bound::{sigma2_from_vnr, VnrDb};
use crate::code::BinaryCode;
use crate::error::{invalid, Error, Result};
use crate::osd::{OsdConfig, OsdDecoder, SoftWord};

pub const DEFAULT_MIN_ERRORS: u64 = 100;

/// `x_c + 2z` for `x_c = uG`.
pub fn encode_point(code: &BinaryCode, u: &BitVector, z: &[i64]) -> Result<Vec<f64>> {
    if z.len() != code.n() {
        return Err(Error::DimensionMismatch { expected: code.n(), found: z.len() });
    }
    let c = code.encode(u)?;
    Ok(c.iter().zip(z).map(|(b, &zi)| b as u8 as f64 + 2.0 * zi as f64).collect())
}

/// Folds a real into `[0, 1]`: `|((y + 1) mod 2) - 1|`.
pub fn mod_star_scalar(y: f64) -> f64 {
    if !y.is_finite() {
        // No information either way.
        return 0.5;
    }
    let mut r = libm::fmod(y + 1.0, 2.0);
    if r < 0.0 {
        r += 2.0;
    }
    if r >= 2.0 {
        r -= 2.0;
    }
    (r - 1.0).abs().min(1.0)
}

pub fn mod_star(y: &[f64]) -> SoftWord {
    SoftWord::from_vec_unchecked(y.iter().map(|&v| mod_star_scalar(v)).collect())
}

/// Output of the two-stage lattice decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct PointEstimate {
    pub codeword: BitVector,
    pub z: Vec<i64>,
}

impl PointEstimate {
    pub fn point(&self) -> Vec<f64> {
        self.codeword.iter().zip(&self.z).map(|(b, &z)| b as u8 as f64 + 2.0 * z as f64).collect()
    }
}

/// Decodes `y` to a lattice point: OSD on `mod*(y)`, then
/// `z = round((y - x_c) / 2)` with ties to even.
pub fn decode_point(decoder: &mut OsdDecoder, y: &[f64]) -> Result<PointEstimate> {
    let codeword = decoder.decode(&mod_star(y))?;
    let z = y.iter().zip(codeword.iter()).map(|(&v, b)| libm::rint((v - b as u8 as f64) / 2.0) as i64).collect();
    Ok(PointEstimate { codeword, z })
}

/// Which coset representative is transmitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Transmit {
    /// `z = 0`.
    #[default]
    Zero,
    /// `z` uniform on `{0, 1}^n`.
    RandomBinary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub vnr_db: f64,
    pub seed: u64,
    pub min_errors: u64,
    pub max_trials: u64,
    pub osd_order: usize,
    pub workers: usize,
    pub transmit: Transmit,
}

impl SimConfig {
    pub fn new(vnr_db: f64, seed: u64, max_trials: u64, osd_order: usize) -> Self {
        SimConfig {
            vnr_db,
            seed,
            min_errors: DEFAULT_MIN_ERRORS,
            max_trials,
            osd_order,
            workers: 1,
            transmit: Transmit::Zero,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_errors == 0 || self.max_trials == 0 {
            return Err(invalid("min_errors and max_trials must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers must be at least 1"));
        }
        if !self.vnr_db.is_finite() {
            return Err(invalid("VNR must be finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WerEstimate {
    pub trials: u64,
    pub errors: u64,
    pub wer: f64,
    pub ci95: (f64, f64),
    pub seed: u64,
    pub vnr_db: f64,
}

impl WerEstimate {
    /// Normal-approximation 95% interval clamped to `[0, 1]`. With no errors the
    /// interval is the one-sided bound `[0, 1 - 0.05^(1/N)]`.
    pub fn from_counts(trials: u64, errors: u64, seed: u64, vnr_db: f64) -> Self {
        assert!(trials >= 1 && errors <= trials);
        let n = trials as f64;
        let wer = errors as f64 / n;
        let ci95 = if errors == 0 {
            (0.0, 1.0 - libm::pow(0.05, 1.0 / n))
        } else {
            let half = 1.96 * libm::sqrt(wer * (1.0 - wer) / n);
            ((wer - half).max(0.0), (wer + half).min(1.0))
        };
        WerEstimate { trials, errors, wer, ci95, seed, vnr_db }
    }
}

/// Runs individual trials for one code and configuration.
#[derive(Clone, Debug)]
pub struct TrialRunner {
    code: BinaryCode,
    decoder: OsdDecoder,
    sigma: f64,
    base_rng: ChaCha8Rng,
    transmit: Transmit,
    z: Vec<i64>,
    y: Vec<f64>,
}

impl TrialRunner {
    pub fn new(code: &BinaryCode, cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let decoder = OsdDecoder::new(code, OsdConfig::new(cfg.osd_order))?;
        let sigma = libm::sqrt(sigma2_from_vnr(VnrDb(cfg.vnr_db), code.rate()));
        Ok(TrialRunner {
            code: code.clone(),
            decoder,
            sigma,
            base_rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            transmit: cfg.transmit,
            z: Vec::new(),
            y: Vec::new(),
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Runs trial `index`; returns true on a lattice-point error.
    pub fn run(&mut self, index: u64) -> Result<bool> {
        let (n, k) = (self.code.n(), self.code.k());
        let mut rng = self.base_rng.clone();
        rng.set_stream(index);
        let u = BitVector::from_bits((0..k).map(|_| rng.random::<bool>()));
        self.z.clear();
        match self.transmit {
            Transmit::Zero => self.z.resize(n, 0),
            Transmit::RandomBinary => self.z.extend((0..n).map(|_| rng.random::<bool>() as i64)),
        }
        let x = encode_point(&self.code, &u, &self.z)?;
        self.y.clear();
        for &xi in &x {
            let w: f64 = rng.sample(StandardNormal);
            self.y.push(xi + self.sigma * w);
        }
        let est = decode_point(&mut self.decoder, &self.y)?;
        let codeword = self.code.encode(&u)?;
        Ok(est.codeword != codeword || est.z != self.z)
    }

    /// Runs trials `start..start + len` and returns the indices that failed.
    pub fn run_block(&mut self, start: u64, len: u64) -> Result<Vec<u64>> {
        let mut failed = Vec::new();
        for t in start..start + len {
            if self.run(t)? {
                failed.push(t);
            }
        }
        Ok(failed)
    }
}

/// Trials per scheduling block. Affects only how far past the stopping point
/// work may run, never the result.
pub const BLOCK_TRIALS: u64 = 256;

/// Exact tally from the failing trial indices of a completed prefix
/// `0..completed` (indices sorted ascending).
pub fn tally(failed: &[u64], completed: u64, cfg: &SimConfig) -> (u64, u64) {
    let min = cfg.min_errors as usize;
    if failed.len() >= min && failed[min - 1] < cfg.max_trials {
        (failed[min - 1] + 1, cfg.min_errors)
    } else {
        let trials = completed.min(cfg.max_trials);
        (trials, failed.iter().filter(|&&t| t < trials).count() as u64)
    }
}

/// Single-threaded simulation. Produces the same estimate as any parallel
/// schedule that tallies with [`tally`].
pub fn simulate_wer(code: &BinaryCode, cfg: &SimConfig) -> Result<WerEstimate> {
    let mut runner = TrialRunner::new(code, cfg)?;
    let mut failed = Vec::new();
    let mut completed = 0;
    while completed < cfg.max_trials && (failed.len() as u64) < cfg.min_errors {
        let len = BLOCK_TRIALS.min(cfg.max_trials - completed);
        failed.extend(runner.run_block(completed, len)?);
        completed += len;
    }
    let (trials, errors) = tally(&failed, completed, cfg);
    Ok(WerEstimate::from_counts(trials, errors, cfg.seed, cfg.vnr_db))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn mod_star_examples() {
        assert_eq!(mod_star_scalar(0.0), 0.0);
        assert_eq!(mod_star_scalar(1.0), 1.0);
        assert_eq!(mod_star_scalar(2.0), 0.0);
        assert_eq!(mod_star_scalar(-1.0), 1.0);
        assert!((mod_star_scalar(2.3) - 0.3).abs() < 1e-12);
        assert!((mod_star_scalar(-0.4) - 0.4).abs() < 1e-12);
        assert!((mod_star_scalar(-7.75) - 0.25).abs() < 1e-12);
        assert_eq!(mod_star_scalar(f64::NAN), 0.5);
        for v in [-1e-18, 1e-18, 1.0 - 1e-17, -3.0, 1e300, -1e300] {
            let m = mod_star_scalar(v);
            assert!((0.0..=1.0).contains(&m), "{v} -> {m}");
        }
    }

    #[test]
    fn encode_point_examples() {
        let code = BinaryCode::extended_hamming(3).unwrap();
        let zero = BitVector::zeros(4);
        assert_eq!(encode_point(&code, &zero, &[0; 8]).unwrap(), vec![0.0; 8]);
        let mut z = [0i64; 8];
        z[0] = 1;
        let p = encode_point(&code, &zero, &z).unwrap();
        assert_eq!(p.iter().map(|v| v * v).sum::<f64>(), 4.0);
        let p = encode_point(&code, &BitVector::unit(4, 0), &[0; 8]).unwrap();
        assert_eq!(p.iter().map(|v| v * v).sum::<f64>(), 4.0);
        assert!(encode_point(&code, &zero, &[0; 7]).is_err());
    }

    #[test]
    fn decode_point_rounds_integer_part() {
        let code = BinaryCode::extended_hamming(3).unwrap();
        let mut dec = OsdDecoder::new(&code, OsdConfig::new(4)).unwrap();
        let mut y = vec![0.0; 8];
        y[0] = 2.3;
        let est = decode_point(&mut dec, &y).unwrap();
        assert!(est.codeword.is_zero());
        assert_eq!(est.z[0], 1);
        let x = encode_point(&code, &BitVector::unit(4, 2), &[1, -2, 0, 3, 0, 0, -1, 0]).unwrap();
        let est = decode_point(&mut dec, &x).unwrap();
        assert_eq!(est.point(), x);
    }

    #[test]
    fn rounding_ties_go_to_even() {
        let code = BinaryCode::repetition(2);
        let mut dec = OsdDecoder::new(&code, OsdConfig::new(1)).unwrap();
        // Both codewords are equally close to mod*(y) = (1, 0); either way
        // one coordinate of (y - c) / 2 is a half-integer.
        for y in [[3.0, 2.0], [5.0, 2.0], [-1.0, 2.0]] {
            let est = decode_point(&mut dec, &y).unwrap();
            let expected: Vec<i64> = if est.codeword.is_zero() {
                y.iter().map(|v| libm::rint(v / 2.0) as i64).collect()
            } else {
                y.iter().map(|v| libm::rint((v - 1.0) / 2.0) as i64).collect()
            };
            assert_eq!(est.z, expected);
        }
        assert_eq!(libm::rint(2.5), 2.0);
        assert_eq!(libm::rint(1.5), 2.0);
        assert_eq!(libm::rint(-0.5), 0.0);
    }

    #[test]
    fn wer_interval() {
        let e = WerEstimate::from_counts(1000, 10, 1, 2.0);
        assert_eq!(e.wer, 0.01);
        assert!(e.ci95.0 < 0.01 && 0.01 < e.ci95.1);
        let z = WerEstimate::from_counts(1000, 0, 1, 2.0);
        assert_eq!(z.ci95.0, 0.0);
        assert!((z.ci95.1 - 0.002_991_5).abs() < 1e-6);
        let all = WerEstimate::from_counts(4, 4, 1, 2.0);
        assert_eq!(all.ci95, (1.0, 1.0));
    }

    #[test]
    fn tally_stops_exactly() {
        let cfg = SimConfig { min_errors: 2, ..SimConfig::new(0.0, 0, 100, 0) };
        assert_eq!(tally(&[3, 7, 9], 256, &cfg), (8, 2));
        assert_eq!(tally(&[3], 100, &cfg), (100, 1));
        let capped = SimConfig { max_trials: 5, ..cfg };
        assert_eq!(tally(&[3, 7], 256, &capped), (5, 1));
    }

    #[test]
    fn high_vnr_is_error_free() {
        let code = BinaryCode::extended_hamming(3).unwrap();
        let cfg = SimConfig::new(30.0, 9, 2000, 4);
        let est = simulate_wer(&code, &cfg).unwrap();
        assert_eq!((est.trials, est.errors), (2000, 0));
    }

    #[test]
    fn low_vnr_stops_at_min_errors() {
        let code = BinaryCode::extended_hamming(3).unwrap();
        let cfg = SimConfig { min_errors: 50, ..SimConfig::new(-3.0, 4, 100_000, 4) };
        let est = simulate_wer(&code, &cfg).unwrap();
        assert_eq!(est.errors, 50);
        assert!(est.trials < 1000);
        assert_eq!(est, simulate_wer(&code, &cfg).unwrap());
    }

    #[test]
    fn trials_are_independent_of_order() {
        let code = BinaryCode::ebch(4, 3).unwrap();
        let cfg = SimConfig::new(1.0, 77, 10, 2);
        let mut a = TrialRunner::new(&code, &cfg).unwrap();
        let mut b = TrialRunner::new(&code, &cfg).unwrap();
        let forward: Vec<bool> = (0..64).map(|t| a.run(t).unwrap()).collect();
        let backward: Vec<bool> = (0..64).rev().map(|t| b.run(t).unwrap()).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
        assert!(forward.iter().any(|&e| e));
    }
}
