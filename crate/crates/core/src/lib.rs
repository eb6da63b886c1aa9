//! Exact computations with finite groupoids: functors and natural
//! transformations, bibundles and their weak 2-category, Morita equivalence
//! and Hilsum–Skandalis classes, localization of categories by rewriting,
//! descent for principal bundles, and edge cocycles on graphs.

pub mod bibundle;
pub mod category;
pub mod constructions;
pub mod corpus;
pub mod descent;
pub mod doc;
pub mod fingpd;
pub mod graphtop;
pub mod group;
pub mod morita;

pub use fingpd::{FiniteGroupoid, GroupoidFunctor, NatTransform};
pub use group::FiniteGroup;
