//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it every call degrades to the sequential loop. Results always
//! come back in input order, so output never depends on the thread count.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, range: Range<u64>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }
}

/// Run `f` with at most `threads` workers (`None` keeps the global default).
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v: Vec<u64> = (0..1000).collect();
        let a = Exec::Parallel.map(&v, |x| x * x);
        let b = Exec::Sequential.map(&v, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.map_range(0..50, |x| x + 1), (1..51).collect::<Vec<_>>());
        assert_eq!(with_threads(Some(2), || 7), 7);
    }
}
