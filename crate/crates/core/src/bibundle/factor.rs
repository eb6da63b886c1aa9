use std::sync::Arc;

use thiserror::Error;

use super::action::Point;
use super::bundle::Bibundle;
use super::compose::compose;
use super::iso::{find_isomorphism, BibundleIso, IsoError};
use super::principal::PrincipalityVerdict;
use crate::constructions::{cover_pullback, SetCover};
use crate::fingpd::{is_equivalence, EquivalenceVerdict, FiniteGroupoid, GroupoidFunctor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectionError {
    #[error("not a section of the left anchor at object {0}")]
    NotASection(usize),
}

/// Both sides of "f is an equivalence iff ⟨f⟩ is left principal".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalityReport {
    pub equivalence: EquivalenceVerdict,
    pub principality: PrincipalityVerdict,
}

impl PrincipalityReport {
    pub fn agree(&self) -> bool {
        self.equivalence.is_equivalence() == self.principality.is_principal()
    }
}

pub fn equivalence_iff_principal(f: &GroupoidFunctor) -> PrincipalityReport {
    PrincipalityReport {
        equivalence: is_equivalence(f),
        principality: Bibundle::from_functor(f).left_principality(),
    }
}

/// The functor `f` of a section `σ` of `a_L`: `f(x) = a_R(σ(x))` and, for
/// `g: x -> y`, `f(g)` is the unique `h` with `σ(y)·h = g·σ(x)`.
pub fn section_to_functor(p: &Bibundle, section: &[Point]) -> Result<GroupoidFunctor, SectionError> {
    let g = p.left_groupoid();
    for x in g.objects() {
        match section.get(x) {
            Some(&s) if s < p.point_count() && p.left_anchor()[s] == x => {}
            _ => return Err(SectionError::NotASection(x)),
        }
    }
    if section.len() != g.object_count() {
        return Err(SectionError::NotASection(g.object_count()));
    }
    let arr_map = g
        .arrows()
        .map(|a| {
            let moved = p.act_left(a, section[g.src(a)]).expect("acting");
            p.divide(section[g.tgt(a)], moved).expect("principal")
        })
        .collect();
    let obj_map = section.iter().map(|&s| p.right_anchor()[s]).collect();
    Ok(GroupoidFunctor::with_object_map(
        g.clone(),
        p.right_groupoid().clone(),
        obj_map,
        arr_map,
    )
    .expect("a section gives a functor"))
}

/// The isomorphism `⟨f⟩ -> P`, `(x, h) ↦ σ(x)·h`, for `f = section_to_functor(P, σ)`.
pub fn section_iso(p: &Bibundle, section: &[Point]) -> Result<(GroupoidFunctor, BibundleIso), SectionError> {
    let f = section_to_functor(p, section)?;
    let map = super::bundle::functor_points(&f)
        .iter()
        .map(|&(x, h)| p.act_right(section[x], h).expect("acting"))
        .collect();
    Ok((f, BibundleIso { map }))
}

/// The lexicographically first point of each `a_L`-fiber.
pub fn lexicographic_section(p: &Bibundle) -> Vec<Point> {
    p.left_groupoid()
        .objects()
        .map(|x| {
            p.left_anchor()
                .iter()
                .position(|&y| y == x)
                .expect("principal bundles are onto")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cover is over {found} points, the left groupoid has {expected} objects")]
    CoverMismatch { expected: usize, found: usize },
    #[error("isomorphism search failed: {0}")]
    Search(IsoError),
    #[error("no isomorphism P∘⟨φ̃⟩ ≅ ⟨f⟩ was found")]
    NoWitness,
}

/// `P∘⟨φ̃⟩ ≅ ⟨f⟩` for a cover `φ: U -> G_0`, the projection `φ̃: φ*G -> G`
/// and `f: φ*G -> H`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub cover: SetCover,
    pub pulled: Arc<FiniteGroupoid>,
    pub projection: GroupoidFunctor,
    pub functor: GroupoidFunctor,
    /// From `compose(⟨φ̃⟩, P)` to `⟨f⟩`.
    pub iso: BibundleIso,
}

/// Factors through the one-piece identity cover: over finite sets `a_L`
/// always has a global section, so `φ*G = G` and `φ̃ = id`.
pub fn factor_through_cover(p: &Bibundle) -> Result<Factorization, FactorError> {
    let cover = SetCover::identity(p.left_groupoid().object_names().to_vec());
    factor_through_cover_with(p, &cover)
}

/// Factors through a given cover of `G_0`, choosing on each point of `U` the
/// lexicographically first point of the `a_L`-fiber below it.
pub fn factor_through_cover_with(p: &Bibundle, cover: &SetCover) -> Result<Factorization, FactorError> {
    let g = p.left_groupoid();
    if cover.base_size() != g.object_count() {
        return Err(FactorError::CoverMismatch {
            expected: g.object_count(),
            found: cover.base_size(),
        });
    }
    let (pulled, projection) = if cover.is_identity() {
        (g.clone(), GroupoidFunctor::identity(g.clone()))
    } else {
        let (pulled, projection) = cover_pullback(g, cover);
        let pulled = Arc::new(pulled);
        let projection = GroupoidFunctor::with_object_map(
            pulled.clone(),
            g.clone(),
            projection.obj_map().to_vec(),
            projection.arr_map().to_vec(),
        )
        .expect("projection functor");
        (pulled, projection)
    };
    let sigma = lexicographic_section(p);
    let local: Vec<Point> = pulled.objects().map(|u| sigma[projection.on_object(u)]).collect();
    let arr_map = pulled
        .arrows()
        .map(|a| {
            let moved = p
                .act_left(projection.on_arrow(a), local[pulled.src(a)])
                .expect("acting");
            p.divide(local[pulled.tgt(a)], moved).expect("principal")
        })
        .collect();
    let obj_map = local.iter().map(|&s| p.right_anchor()[s]).collect();
    let functor = GroupoidFunctor::with_object_map(
        pulled.clone(),
        p.right_groupoid().clone(),
        obj_map,
        arr_map,
    )
    .expect("local sections give a functor");
    let composite = compose(&Bibundle::from_functor(&projection), p).expect("composable");
    let iso = find_isomorphism(&composite, &Bibundle::from_functor(&functor))
        .map_err(FactorError::Search)?
        .ok_or(FactorError::NoWitness)?;
    Ok(Factorization {
        cover: cover.clone(),
        pulled,
        projection,
        functor,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bibundle::iso::is_isomorphism;
    use crate::fingpd::{find_natural_isomorphism, functors};
    use crate::group::FiniteGroup;

    #[test]
    fn equivalence_and_principality_agree() {
        let pair = FiniteGroupoid::pair(2).into_arc();
        let pt = FiniteGroupoid::point().into_arc();
        let disc = FiniteGroupoid::discrete(2).into_arc();
        let collapse = equivalence_iff_principal(&GroupoidFunctor::constant(pair.clone(), pt.clone(), 0));
        assert!(collapse.agree() && collapse.equivalence.is_equivalence());
        let incl = equivalence_iff_principal(&GroupoidFunctor::constant(pt, disc, 0));
        assert!(incl.agree() && !incl.principality.is_principal());
        assert!(equivalence_iff_principal(&GroupoidFunctor::identity(pair)).agree());
    }

    #[test]
    fn canonical_section_recovers_functor() {
        let g = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).into_arc();
        let h = FiniteGroupoid::from_group(&FiniteGroup::symmetric(3)).into_arc();
        for f in functors(&g, &h) {
            let p = Bibundle::from_functor(&f);
            let (back, iso) = section_iso(&p, &lexicographic_section(&p)).unwrap();
            assert!(find_natural_isomorphism(&f, &back).is_some());
            assert!(is_isomorphism(&Bibundle::from_functor(&back), &p, &iso.map));
        }
    }

    #[test]
    fn bad_section_is_rejected() {
        let g = FiniteGroupoid::discrete(2).into_arc();
        let u = Bibundle::unit(g);
        assert_eq!(section_to_functor(&u, &[1, 1]), Err(SectionError::NotASection(0)));
    }

    #[test]
    fn factor_through_identity_and_singletons() {
        let disc = FiniteGroupoid::discrete(2).into_arc();
        let bz2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let p = Bibundle::from_functor(&GroupoidFunctor::constant(disc.clone(), bz2, 0));
        let fac = factor_through_cover(&p).unwrap();
        assert_eq!(fac.cover.piece_count(), 1);
        let singletons = SetCover::singletons(disc.object_names().to_vec());
        let fac = factor_through_cover_with(&p, &singletons).unwrap();
        assert_eq!(fac.pulled.object_count(), 2);
    }
}
