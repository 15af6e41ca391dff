//! Exact local invariants of A₂ surface singularities and the degree
//! criteria for big cotangent bundles on resolutions of singular surfaces
//! in P³.
//!
//! - [`monomials`]: f-types, Z₃-weights, the block collections in z- and
//!   u-coordinates, and the monomial pullback through the smoothing chart.
//! - [`linalg_exact`]: exact rational rank and row-span/coordinate-subspace
//!   intersection dimensions.
//! - [`local_invariants`]: per-block defects, the quotient dimension `Q(m)`,
//!   its leading coefficient `h⁰`, and the germ invariants `s₂` and `h¹`.
//! - [`criterion`]: hypersurface budgets, constructible A₂ counts and the
//!   per-degree bigness reports.
//! - [`sweep_cache`]: CSV cache for `Q(m)` sweeps.

pub mod criterion;
pub mod error;
pub mod linalg_exact;
pub mod local_invariants;
pub mod monomials;
pub mod sweep_cache;

pub use error::{Error, Result};
