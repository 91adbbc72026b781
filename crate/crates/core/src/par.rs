//! Execution strategy for the data-parallel loops over group elements.
//!
//! Every hot loop in the crate (orbit maps, fixed-point filters, the
//! verification grid) goes through [`Exec`]. With the `parallel` feature
//! disabled, [`Exec::Parallel`] silently runs sequentially, so callers never
//! need their own `cfg` switches.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy actually fans out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..n).map(f).collect()`, order preserved.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Indices in `0..n` satisfying `pred`, in increasing order.
    pub fn filter_range<F>(self, n: usize, pred: F) -> Vec<usize>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return (0..n).into_par_iter().filter(|&i| pred(i)).collect();
        }
        (0..n).filter(|&i| pred(i)).collect()
    }

    /// Maps a slice, order preserved.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Number of indices in `0..n` satisfying `pred`.
    pub fn count_range<F>(self, n: usize, pred: F) -> usize
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return (0..n).into_par_iter().filter(|&i| pred(i)).count();
        }
        (0..n).filter(|&i| pred(i)).count()
    }
}
