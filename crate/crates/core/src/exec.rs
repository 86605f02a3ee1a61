//! Execution policy for the data-parallel loops (rectangle sweeps, patch
//! filling, batch checks).
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] runs on the
//! rayon global pool. Without it every policy degrades to the sequential path,
//! so results never depend on the feature set.

/// How independent work items are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Map `f` over `0..n`, preserving order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Smallest index in `0..n` for which `f` returns `Some`, with its value.
    ///
    /// The parallel path still returns the lowest index, so reports are
    /// identical across policies.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n)
                    .into_par_iter()
                    .filter_map(|k| f(k).map(|v| (k, v)))
                    .min_by_key(|(k, _)| *k)
            }
            _ => (0..n).find_map(|k| f(k).map(|v| (k, v))),
        }
    }

    /// Collect every `Some` produced over `0..n`, ordered by index.
    pub fn filter_map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().filter_map(f).collect()
            }
            _ => (0..n).filter_map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let f = |k: usize| if k % 7 == 3 { Some(k * 2) } else { None };
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.find_first(100, f), Some((3, 6)));
            assert_eq!(exec.filter_map(20, f), vec![6, 20, 34]);
            assert_eq!(exec.map(4, |k| k * k), vec![0, 1, 4, 9]);
        }
    }
}
