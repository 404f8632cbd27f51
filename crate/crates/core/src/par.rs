//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature, work runs on a rayon pool sized by the caller.
//! Without it, or when `threads <= 1`, the same closure runs in order on the
//! calling thread. Results are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, returning results in input order.
pub fn map<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 1 && items.len() > 1 {
        return with_pool(threads, || items.par_iter().map(&f).collect());
    }
    let _ = threads;
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, returning results in index order.
pub fn map_range<R, F>(n: usize, threads: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 1 && n > 1 {
        return with_pool(threads, || (0..n).into_par_iter().map(&f).collect());
    }
    let _ = threads;
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn with_pool<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();

    if rayon::current_num_threads() == threads {
        return op();
    }
    let pool = {
        let mut pools = POOLS.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
        match pools.get(&threads) {
            Some(p) => Some(Arc::clone(p)),
            None => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(p) => {
                    let p = Arc::new(p);
                    pools.insert(threads, Arc::clone(&p));
                    Some(p)
                }
                Err(e) => {
                    log::warn!("falling back to the global rayon pool: {e}");
                    None
                }
            },
        }
    };
    match pool {
        Some(p) => p.install(op),
        None => op(),
    }
}

/// True when this build can use more than one worker thread.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    #[test]
    fn order_is_preserved_for_any_thread_count() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = super::map(&items, 1, |x| x * x);
        for t in [2, 3, 8] {
            assert_eq!(super::map(&items, t, |x| x * x), seq);
            assert_eq!(super::map_range(items.len(), t, |i| items[i] * items[i]), seq);
        }
    }
}
