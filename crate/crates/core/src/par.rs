//! Data-parallel helpers. With the `parallel` feature (default) these run on the rayon
//! pool; without it every call degrades to a plain sequential loop.

/// Execution strategy for sweeps and batch products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Order-preserving map over fallible tasks; the first error in item order wins.
pub fn try_map<T, R, E, F>(exec: Exec, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(exec, items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let v: Vec<u64> = (0..1000).collect();
        let a = map(Exec::Sequential, &v, |x| x * x);
        let b = map(Exec::Parallel, &v, |x| x * x);
        assert_eq!(a, b);
    }

    #[test]
    fn first_error_in_order() {
        let v: Vec<i32> = (0..100).collect();
        let r: Result<Vec<i32>, i32> = try_map(Exec::Parallel, &v, |&x| if x % 30 == 29 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(29));
    }
}
