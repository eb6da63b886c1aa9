use super::functor::GroupoidFunctor;
use super::groupoid::{Arrow, Obj};

/// Why a functor fails to be fully faithful, at the first lexicographic pair
/// of source objects where it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaithfulnessWitness {
    /// Two distinct arrows `x -> y` with the same image.
    NotInjective {
        source: Obj,
        target: Obj,
        arrows: (Arrow, Arrow),
    },
    /// An arrow `F(x) -> F(y)` not hit by any arrow `x -> y`.
    NotSurjective {
        source: Obj,
        target: Obj,
        missed: Arrow,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub fully_faithful: bool,
    pub essentially_surjective: bool,
    pub faithfulness_witness: Option<FaithfulnessWitness>,
    /// First target object `y` admitting no arrow `y -> F(x)`.
    pub unreached_object: Option<Obj>,
}

impl EquivalenceVerdict {
    pub fn is_equivalence(&self) -> bool {
        self.fully_faithful && self.essentially_surjective
    }
}

/// Checks that `γ ↦ (s γ, t γ, F γ)` is a bijection onto the fiber product
/// `(G_0 × G_0) ×_{H_0 × H_0} H_1`, and that `(x, h) ↦ s(h)` on
/// `G_0 ×_{F, H_0, t} H_1` is onto `H_0`.
pub fn is_equivalence(f: &GroupoidFunctor) -> EquivalenceVerdict {
    let (g, h) = (f.source(), f.target());
    let mut faithfulness_witness = None;
    'pairs: for x in g.objects() {
        for y in g.objects() {
            let hom = g.hom(x, y);
            for (i, &a) in hom.iter().enumerate() {
                if let Some(&b) = hom[i + 1..].iter().find(|&&b| f.on_arrow(b) == f.on_arrow(a)) {
                    faithfulness_witness = Some(FaithfulnessWitness::NotInjective {
                        source: x,
                        target: y,
                        arrows: (a, b),
                    });
                    break 'pairs;
                }
            }
            let image = h.hom(f.on_object(x), f.on_object(y));
            if let Some(&missed) = image
                .iter()
                .find(|&&k| !hom.iter().any(|&a| f.on_arrow(a) == k))
            {
                faithfulness_witness = Some(FaithfulnessWitness::NotSurjective {
                    source: x,
                    target: y,
                    missed,
                });
                break 'pairs;
            }
        }
    }
    let unreached_object = h.objects().find(|&y| {
        !g.objects()
            .any(|x| !h.hom(y, f.on_object(x)).is_empty())
    });
    EquivalenceVerdict {
        fully_faithful: faithfulness_witness.is_none(),
        essentially_surjective: unreached_object.is_none(),
        faithfulness_witness,
        unreached_object,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingpd::groupoid::FiniteGroupoid;
    use crate::group::FiniteGroup;

    #[test]
    fn identity_is_equivalence() {
        let g = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(3)).into_arc();
        assert!(is_equivalence(&GroupoidFunctor::identity(g)).is_equivalence());
    }

    #[test]
    fn collapse_pair_to_point() {
        let pair = FiniteGroupoid::pair(2).into_arc();
        let pt = FiniteGroupoid::point().into_arc();
        let v = is_equivalence(&GroupoidFunctor::constant(pair, pt, 0));
        assert!(v.fully_faithful && v.essentially_surjective);
    }

    #[test]
    fn inclusion_of_point_into_disc2() {
        let pt = FiniteGroupoid::point().into_arc();
        let disc = FiniteGroupoid::discrete(2).into_arc();
        let v = is_equivalence(&GroupoidFunctor::constant(pt, disc, 0));
        assert!(v.fully_faithful);
        assert!(!v.essentially_surjective);
        assert_eq!(v.unreached_object, Some(1));
    }

    #[test]
    fn trivial_endofunctor_of_bz2_is_not_faithful() {
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let v = is_equivalence(&GroupoidFunctor::constant(b.clone(), b, 0));
        assert_eq!(
            v.faithfulness_witness,
            Some(FaithfulnessWitness::NotInjective {
                source: 0,
                target: 0,
                arrows: (0, 1)
            })
        );
        assert!(v.essentially_surjective);
    }

    #[test]
    fn point_into_bz2_is_not_full() {
        let pt = FiniteGroupoid::point().into_arc();
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let v = is_equivalence(&GroupoidFunctor::constant(pt, b, 0));
        assert_eq!(
            v.faithfulness_witness,
            Some(FaithfulnessWitness::NotSurjective {
                source: 0,
                target: 0,
                missed: 1
            })
        );
    }
}
