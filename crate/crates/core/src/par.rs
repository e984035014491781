//! Job fan-out. With the `parallel` feature jobs run on the rayon pool,
//! otherwise (or when [`Execution::Sequential`] is requested) in order on
//! the calling thread. Results are always returned in input order.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether `Parallel` actually fans out in this build.
    pub const PARALLEL_AVAILABLE: bool = cfg!(feature = "parallel");
}

pub fn map_jobs<T, R, F>(items: &[T], execution: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u32> = (0..100).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_jobs(&items, exec, |x| x * 2), (0..100).map(|x| x * 2).collect::<Vec<_>>());
        }
    }
}
