//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature, work runs on a dedicated rayon pool;
//! without it, every [`Execution`] runs on the calling thread. Results are
//! always returned in input order, so output never depends on scheduling.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `workers == 0` lets the pool pick one thread per core.
    Parallel {
        workers: usize,
    },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { workers: 0 }
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            Some(1) => Execution::Sequential,
            Some(w) => Execution::Parallel { workers: w },
            None => Execution::default(),
        }
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match *self {
            Execution::Sequential => items.into_iter().map(f).collect(),
            Execution::Parallel { workers } => parallel_map(workers, items, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(workers: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};

    // pools are cached per size; building one per call would dominate
    // small batches
    static POOLS: OnceLock<Mutex<HashMap<usize, &'static rayon::ThreadPool>>> = OnceLock::new();
    let pool = {
        let mut pools = POOLS.get_or_init(Default::default).lock().expect("pool cache");
        *pools.entry(workers).or_insert_with(|| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .thread_name(|i| format!("galois-worker-{i}"))
                .build()
                .expect("thread pool");
            Box::leak(Box::new(pool))
        })
    };
    pool.install(|| items.into_par_iter().map(f).collect())
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(_workers: usize, items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(items.clone(), |x| x * x);
        let par = Execution::Parallel { workers: 3 }.map(items, |x| x * x);
        assert_eq!(seq, par);
    }
}
