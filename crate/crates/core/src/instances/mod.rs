//! Concrete monads, their algebras, and μ-fiber enumerators.

pub mod action;
pub mod dist;
pub mod list;
pub mod monoid_algebras;
pub mod multiset;
pub mod terminal;

pub use action::{
    action_witnesses, ActionAlgebra, ActionExpr, ActionMonad, ActionTriple, FiniteMonoid,
};
pub use dist::{
    barycenter, dist_average, dist_pushforward, point_dist, point_dist2, point_dist2_value,
    point_dist_value, ConvexAlgebra, DistributionMonad,
};
pub use list::{list_mu_fiber, ListMonad};
pub use monoid_algebras::{MonoidAlgebra, NatSum};
pub use multiset::{multiset_mu_fiber, MultisetMonad};
pub use terminal::{TerminalAlgebra, TerminalMonad};
