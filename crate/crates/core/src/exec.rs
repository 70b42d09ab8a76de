//! Data-parallel batch execution with a sequential fallback.
//!
//! Batch workloads (session sweeps, attack trials, search branches) go through
//! [`Execution`]. With the `parallel` feature the parallel mode runs on the
//! rayon pool; without it, both modes run sequentially. Results are returned
//! in index order either way, so every experiment is reproducible regardless
//! of mode.

/// How a batch of independent jobs is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this mode actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluates `job(i)` for every `i` in `0..count`, in index order.
    pub fn map<T, F>(self, count: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..count).into_par_iter().map(job).collect();
        }
        (0..count).map(job).collect()
    }

    /// Smallest index whose job returns `Some`, with its value.
    pub fn find_first<T, F>(self, count: usize, job: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..count).into_par_iter().find_map_first(|i| job(i).map(|v| (i, v)));
        }
        (0..count).find_map(|i| job(i).map(|v| (i, v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = Execution::Sequential.map(100, |i| i * i);
        let par = Execution::Parallel.map(100, |i| i * i);
        assert_eq!(seq, par);
        let f = |i: usize| (i % 7 == 3 && i > 20).then_some(i * 2);
        assert_eq!(Execution::Sequential.find_first(100, f), Some((24, 48)));
        assert_eq!(Execution::Parallel.find_first(100, f), Some((24, 48)));
    }
}
