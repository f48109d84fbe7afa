//! Partial evaluations of formal expressions.
//!
//! A monad `T` turns a set `A` into formal expressions `TA`; an algebra
//! `e: TA → A` evaluates them. A partial evaluation of `p` into `q` is a
//! nested expression `k ∈ TTA` that flattens to `p` and whose inner layer
//! evaluates to `q`: `{{3, 4}, {5}}` witnesses `3 + 4 + 5 → 7 + 5` over
//! (ℕ, +).
//!
//! The crate provides multiset, list, monoid-action, distribution and
//! terminal monads over a dynamic [`Value`] tree, enumeration and composition
//! of witnesses, the reachability graph of the relation, the truncated bar
//! construction, and exact linear programming for distributions on convex
//! sets. All arithmetic is exact.

pub mod bar;
pub mod distribution;
pub mod engine;
pub mod error;
pub mod faults;
pub mod instances;
pub mod monad;
pub mod multiset;
pub mod stochastics;
pub mod value;

pub use distribution::Distribution;
pub use engine::Witness;
pub use error::{Error, Result};
pub use monad::{Algebra, Carrier, Limits, Monad, Tag};
pub use multiset::Multiset;
pub use value::{rat, Atom, Nested, Point, Value};
