//! Lower bounds on the concurrence of `m ⊗ n` bipartite states obtained by
//! projecting onto `s ⊗ t` coordinate subspaces, together with a sufficient
//! distillability test built on 2⊗3 sub-blocks of `ρ^{⊗N}`.
//!
//! Every bound is reported as a lower bound on `C²(ρ)` (`value_sq`); take the
//! square root for `C`.
//!
//! ```
//! use concbound_core::{bounds, states};
//!
//! let rho = states::builtin("rho0", &[("p", 0.5)]).unwrap();
//! let g = bounds::chen_global(&rho).unwrap();
//! assert!((g.value_sq - 2.0 / 3.0 * 0.25).abs() < 1e-12);
//! ```
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature evaluates
//! sub-blocks and optimizer restarts on the rayon pool.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod concurrence;
pub mod distill;
pub mod error;
pub mod linalg;
mod par;
pub mod random;
pub mod states;
pub mod subspace;

pub use bounds::{BoundKind, BoundReport};
pub use error::{Error, Result};
pub use linalg::{BipartiteIndex, ComplexMatrix};
pub use num_complex::Complex64;
pub use states::{BipartiteState, Builtin, PureState};
pub use subspace::SubspaceSelector;
