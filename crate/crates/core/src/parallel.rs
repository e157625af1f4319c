//! Bounded parallelism.
//!
//! Parallel stages only use order-preserving collection (`par_iter().map().collect()`)
//! followed by sequential reductions, so results do not depend on the thread count.

use crate::error::{Error, Result};

/// Run `f` on a dedicated pool of `threads` workers, or on the global pool for `None`.
pub fn with_threads<T, F>(threads: Option<usize>, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
