use thiserror::Error;

use crate::bibundle::Bibundle;
use crate::fingpd::{orbit_space, Arrow, FiniteGroupoid, GroupoidFunctor, Obj};
use crate::group::{Element, FiniteGroup};

/// Isotropy groups larger than this are compared without building a witness.
pub const ISOTROPY_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoritaError {
    #[error("isotropy group of order {order} exceeds {limit}; witness skipped")]
    IsotropyTooLarge { order: usize, limit: usize },
}

/// Order profile and composition table of an isotropy group at a chosen
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropySignature {
    pub order_profile: Vec<usize>,
    pub table: Vec<Element>,
}

#[derive(Clone, Debug)]
pub struct OrbitEntry {
    /// Name of the representative object.
    pub label: String,
    pub representative: Obj,
    pub loops: Vec<Arrow>,
    pub group: FiniteGroup,
    pub signature: IsotropySignature,
}

/// One entry per orbit, in orbit order.
#[derive(Clone, Debug)]
pub struct MoritaInvariant {
    pub entries: Vec<OrbitEntry>,
}

impl MoritaInvariant {
    pub fn of(g: &FiniteGroupoid) -> Self {
        let orbits = orbit_space(g);
        let entries = orbits
            .isotropy
            .into_iter()
            .map(|iso| {
                let n = iso.group.order();
                let table = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .map(|(a, b)| iso.group.mul(a, b))
                    .collect();
                OrbitEntry {
                    label: g.object_name(iso.representative).to_string(),
                    representative: iso.representative,
                    signature: IsotropySignature {
                        order_profile: iso.group.order_profile(),
                        table,
                    },
                    loops: iso.loops,
                    group: iso.group,
                }
            })
            .collect();
        Self { entries }
    }

    pub fn orbit_count(&self) -> usize {
        self.entries.len()
    }

    /// Pairs every orbit of `self` with a distinct orbit of `other` carrying
    /// an isomorphic isotropy group, with the isomorphism. Isomorphism of
    /// groups is an equivalence relation, so greedy matching is complete.
    pub fn matching(&self, other: &MoritaInvariant) -> Option<Vec<(usize, Vec<Element>)>> {
        if self.orbit_count() != other.orbit_count() {
            return None;
        }
        let mut used = vec![false; other.orbit_count()];
        let mut out = Vec::new();
        for e in &self.entries {
            let found = other.entries.iter().enumerate().find_map(|(j, f)| {
                if used[j] || e.signature.order_profile != f.signature.order_profile {
                    return None;
                }
                e.group.isomorphism_to(&f.group).map(|iso| (j, iso))
            })?;
            used[found.0] = true;
            out.push(found);
        }
        Some(out)
    }
}

impl PartialEq for MoritaInvariant {
    fn eq(&self, other: &Self) -> bool {
        self.matching(other).is_some()
    }
}

/// A biprincipal bibundle `⟨F⟩` for an equivalence functor `F`.
#[derive(Clone, Debug)]
pub struct MoritaWitness {
    pub functor: GroupoidFunctor,
    pub bibundle: Bibundle,
}

#[derive(Clone, Debug)]
pub struct MoritaVerdict {
    pub equivalent: bool,
    /// For each orbit of the first groupoid, the matched orbit of the second.
    pub orbit_matching: Option<Vec<usize>>,
    pub witness: Option<MoritaWitness>,
    /// Set when the witness was skipped.
    pub skipped: Option<MoritaError>,
}

/// Decides Morita equivalence by matching orbits with isomorphic isotropy
/// groups. When the groups are small enough, builds the skeleton
/// equivalence `F: G -> H` and returns `⟨F⟩` as witness.
pub fn morita_equivalent(g: &std::sync::Arc<FiniteGroupoid>, h: &std::sync::Arc<FiniteGroupoid>) -> MoritaVerdict {
    let (ig, ih) = (MoritaInvariant::of(g), MoritaInvariant::of(h));
    let Some(matching) = ig.matching(&ih) else {
        return MoritaVerdict {
            equivalent: false,
            orbit_matching: None,
            witness: None,
            skipped: None,
        };
    };
    let orbit_matching = Some(matching.iter().map(|(j, _)| *j).collect());
    if let Some(order) = ig
        .entries
        .iter()
        .map(|e| e.group.order())
        .find(|&o| o > ISOTROPY_LIMIT)
    {
        return MoritaVerdict {
            equivalent: true,
            orbit_matching,
            witness: None,
            skipped: Some(MoritaError::IsotropyTooLarge {
                order,
                limit: ISOTROPY_LIMIT,
            }),
        };
    }
    let functor = skeleton_functor(g, h, &ig, &ih, &matching);
    let bibundle = Bibundle::from_functor(&functor);
    debug_assert!(bibundle.left_principality().is_principal());
    MoritaVerdict {
        equivalent: true,
        orbit_matching,
        witness: Some(MoritaWitness { functor, bibundle }),
        skipped: None,
    }
}

/// `F(z) = y_i` for `z` in orbit `i`, and `F(a) = φ_i(c_w⁻¹ a c_z)` for
/// `a: z -> w`, where `c_z` is the first arrow from the representative.
fn skeleton_functor(
    g: &std::sync::Arc<FiniteGroupoid>,
    h: &std::sync::Arc<FiniteGroupoid>,
    ig: &MoritaInvariant,
    ih: &MoritaInvariant,
    matching: &[(usize, Vec<Element>)],
) -> GroupoidFunctor {
    let orbits = orbit_space(g);
    let chart: Vec<Arrow> = g
        .objects()
        .map(|z| {
            let x = ig.entries[orbits.quotient[z]].representative;
            g.hom(x, z)[0]
        })
        .collect();
    let obj_map = g
        .objects()
        .map(|z| ih.entries[matching[orbits.quotient[z]].0].representative)
        .collect();
    let arr_map = g
        .arrows()
        .map(|a| {
            let i = orbits.quotient[g.src(a)];
            let (j, iso) = &matching[i];
            let lp = g.compose(g.inv(chart[g.tgt(a)]), g.compose(a, chart[g.src(a)]));
            let k = ig.entries[i].loops.iter().position(|&l| l == lp).expect("loop");
            ih.entries[*j].loops[iso[k]]
        })
        .collect();
    GroupoidFunctor::with_object_map(g.clone(), h.clone(), obj_map, arr_map)
        .expect("skeleton map is a functor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{action_groupoid, GroupAction};
    use crate::fingpd::is_equivalence;

    #[test]
    fn self_equivalence() {
        let g = FiniteGroupoid::transitive(3, &FiniteGroup::symmetric(3)).into_arc();
        let v = morita_equivalent(&g, &g);
        assert!(v.equivalent);
        let w = v.witness.unwrap();
        assert!(is_equivalence(&w.functor).is_equivalence());
    }

    #[test]
    fn swap_action_is_a_point() {
        let z2 = FiniteGroup::cyclic(2);
        let swap = GroupAction::new(z2, vec!["a".into(), "b".into()], |g, x| g ^ x).unwrap();
        let g = action_groupoid(&swap).into_arc();
        let pt = FiniteGroupoid::point().into_arc();
        let v = morita_equivalent(&g, &pt);
        assert!(v.equivalent);
        assert_eq!(v.witness.unwrap().bibundle.point_count(), 2);
    }

    #[test]
    fn bz2_is_not_a_point() {
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let pt = FiniteGroupoid::point().into_arc();
        assert!(!morita_equivalent(&b, &pt).equivalent);
    }

    #[test]
    fn large_isotropy_skips_witness() {
        let s4 = FiniteGroupoid::from_group(&FiniteGroup::symmetric(4)).into_arc();
        let v = morita_equivalent(&s4, &s4);
        assert!(v.equivalent && v.witness.is_none());
        assert_eq!(
            v.skipped,
            Some(MoritaError::IsotropyTooLarge { order: 24, limit: 16 })
        );
    }
}
