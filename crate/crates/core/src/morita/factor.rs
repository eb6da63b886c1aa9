use thiserror::Error;

use crate::bibundle::{
    compose, factor_through_cover_with, find_isomorphism, invert, Bibundle, BibundleIso, FactorError,
    IsoError, InvertError,
};
use crate::constructions::SetCover;
use crate::fingpd::GroupoidFunctor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HsError {
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Invert(#[from] InvertError),
    #[error(transparent)]
    Search(#[from] IsoError),
    #[error("no isomorphism ⟨f′⟩∘⟨w′⟩⁻¹ ≅ P was found")]
    NoWitness,
}

/// `P ≅ ⟨f′⟩∘⟨w′⟩⁻¹` with `w′: G′ -> G` the projection of a cover pullback.
#[derive(Clone, Debug)]
pub struct HsFactorization {
    pub cover: SetCover,
    pub equivalence: GroupoidFunctor,
    pub functor: GroupoidFunctor,
    /// `⟨w′⟩⁻¹: G -> G′`.
    pub inverse: Bibundle,
    /// From `compose(⟨w′⟩⁻¹, ⟨f′⟩)` to `P`.
    pub iso: BibundleIso,
}

/// Factorization through the one-piece identity cover.
pub fn hs_factorization(p: &Bibundle) -> Result<HsFactorization, HsError> {
    hs_factorization_with(p, &SetCover::identity(p.left_groupoid().object_names().to_vec()))
}

pub fn hs_factorization_with(p: &Bibundle, cover: &SetCover) -> Result<HsFactorization, HsError> {
    let fac = factor_through_cover_with(p, cover)?;
    let inverse = invert(&Bibundle::from_functor(&fac.projection))?.inverse;
    let composite = compose(&inverse, &Bibundle::from_functor(&fac.functor)).expect("composable");
    let iso = find_isomorphism(&composite, p)?.ok_or(HsError::NoWitness)?;
    Ok(HsFactorization {
        cover: fac.cover,
        equivalence: fac.projection,
        functor: fac.functor,
        inverse,
        iso,
    })
}
