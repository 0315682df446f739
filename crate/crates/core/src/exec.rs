//! Deterministic parallel helpers. With the `parallel` feature disabled, or
//! with [`Parallelism::Sequential`], every helper runs on the calling thread
//! and returns exactly the same result.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Index and value of the first item (in slice order) for which `f` returns `Some`.
pub fn find_map_first<T, R, F>(items: &[T], par: Parallelism, f: F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        return items
            .par_iter()
            .enumerate()
            .filter_map(|(i, x)| f(x).map(|r| (i, r)))
            .find_first(|_| true);
    }
    let _ = par;
    items.iter().enumerate().find_map(|(i, x)| f(x).map(|r| (i, r)))
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], par: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = par;
    items.iter().map(f).collect()
}
