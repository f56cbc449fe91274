//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the work is spread over the rayon pool; without it,
//! or when [`Exec::Sequential`] is requested, everything runs on the calling thread.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Parallel,
    Sequential,
}

impl Default for Exec {
    fn default() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `0..n` and folds the results with `reduce`.
    pub fn map_reduce<R, F, G>(self, n: usize, identity: impl Fn() -> R + Sync + Send, f: F, reduce: G) -> R
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
        G: Fn(R, R) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).reduce(identity, reduce)
            }
            _ => (0..n).map(f).fold(identity(), reduce),
        }
    }

    /// Maps `f` over a slice, keeping the order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// Caps the global pool; a no-op without the `parallel` feature.
pub fn set_thread_limit(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let f = |i: usize| (i * i) as u64;
        let a = Exec::Parallel.map_reduce(1000, || 0, f, |x, y| x + y);
        let b = Exec::Sequential.map_reduce(1000, || 0, f, |x, y| x + y);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.map(&[1, 2, 3], |x| x * 2), vec![2, 4, 6]);
    }
}
