//! Bibundles between finite groupoids and their composition, isomorphism,
//! inversion and factorization through covers.

mod action;
mod bundle;
mod compose;
mod factor;
mod iso;
mod principal;

pub use action::{ActionError, LeftAction, Point, RightAction};
pub use bundle::{Bibundle, BibundleError};
pub use compose::{compose, invert, ComposeError, Inverse, InvertError};
pub use factor::{
    equivalence_iff_principal, factor_through_cover, factor_through_cover_with,
    lexicographic_section, section_iso, section_to_functor, FactorError, Factorization,
    PrincipalityReport, SectionError,
};
pub use iso::{
    equivariant_maps, find_bundle_isomorphism, find_isomorphism, find_isomorphism_with_cap,
    is_isomorphism, nat_transform_iso, BibundleIso, IsoError, ISO_SEARCH_CAP,
};
pub use principal::{
    is_principal, BundleError, PrincipalBundle, PrincipalityVerdict, PrincipalityWitness,
};
