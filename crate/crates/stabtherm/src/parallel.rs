//! Threaded Gray-code enumeration: the walk over `2^dim` span elements is cut
//! into contiguous ranges, one per thread, and the partial histograms are
//! added in range order.

use std::num::NonZeroUsize;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabtherm_core::enumerate::{gray_range_histogram, DEFAULT_CAP};
use stabtherm_core::{BitVector, ConstraintKernel, Error, Result, WeightEnumerator};

/// Environment variable read by [`thread_count`].
pub const THREADS_ENV: &str = "STABTHERM_THREADS";

/// Worker count from `STABTHERM_THREADS`, else the available parallelism.
pub fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<NonZeroUsize>()
            .map(NonZeroUsize::get)
            .map_err(|_| Error::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(thread::available_parallelism().map_or(1, NonZeroUsize::get)),
    }
}

/// Weight histogram of the span of `basis` using `threads` workers.
///
/// The result does not depend on `threads`.
pub fn span_histogram(basis: &[BitVector], len: usize, threads: usize) -> Vec<u64> {
    let total = 1u64 << basis.len();
    let parts = (threads.max(1) as u64).min(total);
    if parts == 1 {
        return gray_range_histogram(basis, len, 0, total);
    }
    let bounds: Vec<u64> = (0..=parts).map(|i| total / parts * i + (total % parts).min(i)).collect();
    let partials: Vec<Vec<u64>> = thread::scope(|s| {
        let handles: Vec<_> = bounds
            .windows(2)
            .map(|w| {
                let (start, end) = (w[0], w[1]);
                s.spawn(move || gray_range_histogram(basis, len, start, end))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
    });
    let mut hist = vec![0u64; len + 1];
    for part in partials {
        for (h, p) in hist.iter_mut().zip(part) {
            *h += p;
        }
    }
    hist
}

/// Complete weight enumerator of a kernel, walked on `threads` workers.
pub fn weight_enumerator_parallel(k: &ConstraintKernel, cap: usize, threads: usize) -> Result<WeightEnumerator> {
    if k.dim() > cap {
        return Err(Error::CapExceeded {
            what: "kernel dimension",
            requested: k.dim() as u64,
            cap: cap as u64,
            suggestion: "use the meet-in-the-middle enumerator with a weight cutoff, or raise the cap",
        });
    }
    let len = k.n_generators();
    let hist = span_histogram(k.basis(), len, threads);
    Ok(WeightEnumerator::from_histogram(&hist, k.dim(), len, true, len))
}

/// [`weight_enumerator_parallel`] with the default cap and thread count.
pub fn weight_enumerator_auto(k: &ConstraintKernel) -> Result<WeightEnumerator> {
    weight_enumerator_parallel(k, DEFAULT_CAP, thread_count()?)
}

/// Reproducible random basis used by the enumeration benchmark: `dim`
/// vectors of length `len` drawn from a seeded generator.
pub fn benchmark_basis(dim: usize, len: usize, seed: u64) -> Vec<BitVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| {
            let bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
            BitVector::from_bools(&bits)
        })
        .collect()
}
