//! Combinatorial entropy invariants of locally finite directed graphs.
//!
//! The crate computes exact path-class counts on finite windows of (possibly
//! infinite) directed graphs, estimates the growth rates behind the loop and
//! block entropies, evaluates the spectral entropy of finite graphs, and
//! verifies the matrix-unit calculus of the path-pair generators. The
//! headline deliverable is the sandwich report
//!
//! ```text
//!   loop entropy  <=  shift entropy on the equal-length subalgebra  <=  max(block entropy, co-block entropy)
//! ```
//!
//! whose two sides are computed from independent count series; when they meet
//! within tolerance the invariant is pinned exactly.
//!
//! Modules:
//! - [`graph`]: graph model, oracles, window materialization;
//! - [`families`]: built-in example graphs and family specification files;
//! - [`count`]: exact big-integer path-class counters;
//! - [`entropy`]: growth-rate estimation and the entropy identities;
//! - [`af`]: path-pair calculus, matrix-unit representation, rank bounds;
//! - [`report`]: serialization of series and reports.

pub mod af;
pub mod count;
pub mod entropy;
pub mod families;
pub mod graph;
pub mod report;
