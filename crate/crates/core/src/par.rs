//! Scoped-thread helpers for embarrassingly parallel loops.
//!
//! The worker count is process-wide and defaults to 1; results are always
//! returned in input order, so output never depends on it.

use std::sync::atomic::{AtomicUsize, Ordering};

static JOBS: AtomicUsize = AtomicUsize::new(1);

pub fn set_jobs(k: usize) {
    JOBS.store(k.max(1), Ordering::Relaxed);
}

pub fn jobs() -> usize {
    JOBS.load(Ordering::Relaxed)
}

/// `(0..n).map(f)` evaluated on up to `jobs()` threads.
pub fn map_range<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let k = jobs().min(n.max(1));
    if k <= 1 || n < 64 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(k);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..k)
            .map(|t| {
                let f = &f;
                s.spawn(move || (t * chunk..((t + 1) * chunk).min(n)).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn map_vec<A: Sync, T: Send>(items: &[A], f: impl Fn(&A) -> T + Sync) -> Vec<T> {
    map_range(items.len(), |i| f(&items[i]))
}
