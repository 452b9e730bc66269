//! Ultra-parallel complex hyperbolic triangle groups of type [m,m,0;n1,n2,2].
//!
//! The crate builds the reflection generators, checks the lattice relations
//! of the five cases (2,3), (2,4), (4,4), (2,6), (3,6) numerically, and
//! classifies points of the (m, alpha) plane as certified discrete,
//! non-discrete, or unknown.

// `!(x < tol)` is used on purpose so that NaN lands on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discreteness;
pub mod error;
pub mod heisenberg;
pub mod hermitian;
pub mod lattice;
pub mod precise;
pub mod report;
pub mod triangle;
pub mod words;

pub use error::{Error, Result};

/// How data-parallel loops run. `Parallel` falls back to sequential
/// execution when the crate is built without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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
    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}
