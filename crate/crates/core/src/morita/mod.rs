//! Morita equivalence, Hilsum–Skandalis classes and the symbolic
//! localization of a finite category at a set of arrows.

mod factor;
mod invariant;
mod localize;
mod search;

pub use factor::{hs_factorization, hs_factorization_with, HsError, HsFactorization};
pub use invariant::{
    morita_equivalent, IsotropySignature, MoritaError, MoritaInvariant, MoritaVerdict,
    MoritaWitness, OrbitEntry, ISOTROPY_LIMIT,
};
pub use localize::{
    check_universal_property, localize_symbolic, Letter, LocalizationError, SymbolicCategory,
    UniversalReport, Word,
};
pub use search::{
    for_each_bibundle, hs_hom_classes, morita_by_search, skeleton_hom_count, SearchError, HS_BOUND,
};
