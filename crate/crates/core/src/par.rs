//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature disabled every helper runs on the calling
//! thread; [`ExecMode::Parallel`] then behaves like [`ExecMode::Sequential`].
//! Results are always returned in input order.

/// Selects how the enumeration-heavy operations distribute their work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = mode;
    items.into_iter().map(f).collect()
}

/// Returns the result for the lowest index for which `f` yields `Some`.
pub fn find_first<T, R, F>(mode: ExecMode, items: Vec<T>, f: F) -> Option<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Option<R> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).find_first(|r| r.is_some()).flatten();
    }
    let _ = mode;
    items.into_iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u32> = (0..200).collect();
        let a = map_collect(ExecMode::Sequential, items.clone(), |x| x * x);
        let b = map_collect(ExecMode::Parallel, items.clone(), |x| x * x);
        assert_eq!(a, b);
        let first = |x: u32| (x % 37 == 36).then_some(x);
        assert_eq!(find_first(ExecMode::Parallel, items.clone(), first), Some(36));
        assert_eq!(find_first(ExecMode::Sequential, items, first), Some(36));
    }
}
