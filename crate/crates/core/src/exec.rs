//! Execution policy for the sample-parallel inner loops.
//!
//! Every sampling loop in the crate goes through [`Exec`], so the same code
//! path runs single-threaded or on the rayon pool. With the `parallel`
//! feature disabled only [`Exec::Sequential`] exists.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

#[allow(clippy::derivable_impls)]
impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `0..len`, preserving order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }

    /// Maximum of `f` over `0..len`; `0.0` for an empty range. NaN propagates.
    pub fn max<F>(self, len: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let pick = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) };
        match self {
            Exec::Sequential => (0..len).map(f).fold(0.0, pick),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).reduce(|| 0.0, pick),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_default_agree() {
        let f = |i: usize| ((i as f64) * 0.37).sin();
        let a = Exec::Sequential.map(100, f);
        let b = Exec::default().map(100, f);
        assert_eq!(a, b);
        assert_eq!(Exec::Sequential.max(100, f), Exec::default().max(100, f));
        assert_eq!(Exec::Sequential.max(0, f), 0.0);
    }
}
