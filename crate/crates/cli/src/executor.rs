use rayon::prelude::*;
use sqp_core::montecarlo::Executor;

/// Rayon-backed executor. Output order follows the job index, so results do
/// not depend on the number of threads.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map_indexed<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).into_par_iter().map(f).collect()
    }
}

/// Sizes the global rayon pool once; `None` keeps rayon's default.
pub fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        // A second call fails harmlessly when the pool is already built.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
