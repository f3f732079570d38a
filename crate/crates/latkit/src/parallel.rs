//! Multi-threaded word error rate simulation.
//!
//! Workers claim blocks of consecutive trial indices in increasing order and
//! stop claiming once the errors seen reach `min_errors`. Claimed blocks always
//! run to completion, so the finished blocks form a prefix of the trial
//! sequence and the exact tally over that prefix is the same for any number of
//! workers.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use latkit_core::sim::{tally, TrialRunner, BLOCK_TRIALS};
use latkit_core::{BinaryCode, SimConfig, WerEstimate};

use crate::error::{AppError, AppResult};

pub fn simulate_parallel(code: &BinaryCode, cfg: &SimConfig) -> AppResult<WerEstimate> {
    cfg.validate()?;
    let runners = (0..cfg.workers).map(|_| TrialRunner::new(code, cfg)).collect::<Result<Vec<_>, _>>()?;
    let next_block = AtomicU64::new(0);
    let errors_seen = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let failed = Mutex::new(Vec::new());
    let first_error = Mutex::new(None);

    std::thread::scope(|scope| {
        let (next_block, errors_seen, abort, failed, first_error) =
            (&next_block, &errors_seen, &abort, &failed, &first_error);
        for mut runner in runners {
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) || errors_seen.load(Ordering::Acquire) >= cfg.min_errors {
                    return;
                }
                let start = next_block.fetch_add(BLOCK_TRIALS, Ordering::AcqRel);
                if start >= cfg.max_trials {
                    return;
                }
                let len = BLOCK_TRIALS.min(cfg.max_trials - start);
                match runner.run_block(start, len) {
                    Ok(block) => {
                        let count = block.len() as u64;
                        failed.lock().unwrap().extend(block);
                        errors_seen.fetch_add(count, Ordering::AcqRel);
                    }
                    Err(e) => {
                        first_error.lock().unwrap().get_or_insert(e);
                        abort.store(true, Ordering::Relaxed);
                        return;
                    }
                }
            });
        }
    });

    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e.into());
    }
    let completed = next_block.into_inner().min(cfg.max_trials);
    let mut failed = failed.into_inner().unwrap();
    failed.sort_unstable();
    let (trials, errors) = tally(&failed, completed, cfg);
    if trials == 0 {
        return Err(AppError::Internal("simulation finished without running a trial".into()));
    }
    Ok(WerEstimate::from_counts(trials, errors, cfg.seed, cfg.vnr_db))
}
