//! Static work partition over scoped threads.

use std::num::NonZeroUsize;
use std::thread;

/// Worker count used when neither a flag nor the environment sets one.
pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// Applies `f` to every item with `workers` threads and returns the results
/// in input order.
///
/// Worker `w` owns the contiguous block `[w·n/W, (w+1)·n/W)`; each result goes
/// into the slot of its input index, so the output does not depend on
/// scheduling.
pub fn map_indexed<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let n = items.len();
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let mut slots: Vec<Option<R>> = (0..n).map(|_| None).collect();
    thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (start, end) = (w * n / workers, (w + 1) * n / workers);
                scope.spawn(move || {
                    (start..end)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, r) in handle.join().expect("scan worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every slot is filled by its owner"))
        .collect()
}
