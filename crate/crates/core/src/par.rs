//! Execution policy for embarrassingly parallel loops.
//!
//! All parallel maps collect into index order, so any reduction performed on
//! the result afterwards is independent of scheduling.

/// How independent jobs (runs, trials) are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is on; otherwise falls
    /// back to sequential execution.
    #[default]
    Parallel,
}

impl Exec {
    /// `f(0), f(1), …, f(n-1)` collected in index order.
    pub fn map_indexed<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel => par_map(n, f),
        }
    }

    /// Like [`Exec::map_indexed`] for fallible jobs; the first error by index wins.
    pub fn try_map_indexed<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map_indexed(n, f).into_iter().collect()
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_preserve_index_order() {
        let seq = Exec::Sequential.map_indexed(100, |i| i * i);
        let par = Exec::Parallel.map_indexed(100, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[9], 81);
    }

    #[test]
    fn try_map_reports_first_error() {
        let r: Result<Vec<usize>, usize> =
            Exec::Parallel.try_map_indexed(10, |i| if i % 4 == 3 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(3));
    }
}
