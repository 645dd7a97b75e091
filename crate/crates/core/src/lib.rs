//! Exact finite-depth computations with universal groups `U(F)`, groups
//! `G(F, F')` with prescribed local action and finitely many singularities,
//! and coloured Neretin groups `N(F)` acting on the `d`-regular tree. Also
//! checkers for local Sylow and prime localization criteria of these groups.
//!
//! Everything is exact: finite permutation groups are fully enumerated and
//! tree automorphisms are truncated to explicit balls, so every verdict is
//! valid up to a stated radius.

pub mod almostauto;
pub mod cli;
pub mod corpus;
pub mod criteria;
pub mod error;
pub mod group;
pub mod local_action;
pub mod localization;
pub mod perm;
pub mod tree;
pub mod universal;

pub use almostauto::AlmostAutomorphism;
pub use error::{Error, Result};
pub use group::{CosetPartition, OrbitPartition, PermGroup};
pub use local_action::LocalActionMap;
pub use perm::Perm;
pub use tree::{CompleteSubtree, FiniteSubtree, Tree, VertexAddress};
pub use universal::TruncatedGroupSpec;
