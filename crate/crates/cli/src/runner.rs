//! Restart fan-out across worker threads.
//!
//! Results are collected by start index, so the reduction is identical to a
//! serial run no matter how the scheduler interleaves workers.

use eoplab_core::{EopCertificate, EopSearch, MinimizeOutcome, OptimizerOptions};
use eoplab_core::{DensityOperator, Result as CoreResult};

/// Worker cap: `EOPLAB_THREADS` when set, otherwise the machine's available
/// parallelism.
pub fn thread_cap() -> anyhow::Result<usize> {
    match std::env::var("EOPLAB_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| anyhow::anyhow!("EOPLAB_THREADS must be a positive integer, got {v:?}"))?;
            if n == 0 {
                anyhow::bail!("EOPLAB_THREADS must be a positive integer, got 0");
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
        Err(e) => Err(anyhow::anyhow!("EOPLAB_THREADS is not valid UTF-8: {e}")),
    }
}

/// Maps `f` over `0..n` using up to `threads` workers; output order is by
/// index regardless of completion order.
pub fn map_indexed<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = threads.max(1).min(n.max(1));
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = Vec::with_capacity(n);
    slots.resize_with(n, || None);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let mut mine = Vec::new();
                    let mut i = w;
                    while i < n {
                        mine.push((i, f(i)));
                        i += workers;
                    }
                    mine
                })
            })
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every index filled")).collect()
}

/// Multi-start estimate with restarts fanned out over `threads` workers;
/// bit-identical to `eop_estimate` with the same options.
pub fn estimate_parallel(
    rho: &DensityOperator,
    opts: &OptimizerOptions,
    threads: usize,
) -> CoreResult<EopCertificate> {
    let search = EopSearch::new(rho, opts)?;
    let outcomes: Vec<CoreResult<MinimizeOutcome>> =
        map_indexed(search.num_starts(), threads, |i| search.run_start(i));
    search.certify(outcomes.into_iter().collect::<CoreResult<Vec<_>>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use eoplab_core::{eop_estimate, werner, WernerParams};

    #[test]
    fn indexed_map_preserves_order() {
        let out = map_indexed(17, 4, |i| i * i);
        assert_eq!(out, (0..17).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn parallel_estimate_matches_serial_bitwise() {
        let rho = werner(WernerParams::new(0.3).unwrap());
        let opts = OptimizerOptions { restarts: 6, seed: 5, ..Default::default() };
        let serial = eop_estimate(&rho, &opts).unwrap();
        let parallel = estimate_parallel(&rho, &opts, 4).unwrap();
        assert_eq!(serial.per_restart_values(), parallel.per_restart_values());
        assert_eq!(serial.best_value(), parallel.best_value());
    }
}
