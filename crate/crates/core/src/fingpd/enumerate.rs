//! Exhaustive enumeration of functors and natural transformations between
//! small groupoids, and the brute-force weak-inverse search built on it.

use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use super::functor::GroupoidFunctor;
use super::groupoid::{Arrow, FiniteGroupoid, Obj};
use super::natural::NatTransform;

/// Default arrow cap for the weak-inverse search.
pub const WEAK_INVERSE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search cap exceeded: {size} arrows > cap {cap}")]
pub struct SearchCapExceeded {
    pub size: usize,
    pub cap: usize,
}

struct FunctorSearch<'a> {
    g: &'a FiniteGroupoid,
    h: &'a FiniteGroupoid,
    obj: Vec<Obj>,
    arr: Vec<Option<Arrow>>,
    factors: Vec<Vec<(Arrow, Arrow)>>,
}

impl FunctorSearch<'_> {
    fn consistent(&self, a: Arrow) -> bool {
        let (g, h) = (self.g, self.h);
        if self.arr[a].is_none() {
            return true;
        }
        let check = |p: Arrow, q: Arrow| -> bool {
            match (self.arr[p], self.arr[q], self.arr[g.compose(p, q)]) {
                (Some(fp), Some(fq), Some(fpq)) => h.comp(fp, fq) == Some(fpq),
                _ => true,
            }
        };
        for z in g.objects() {
            for &q in g.hom(z, g.src(a)) {
                if !check(a, q) {
                    return false;
                }
            }
            for &p in g.hom(g.tgt(a), z) {
                if !check(p, a) {
                    return false;
                }
            }
        }
        self.factors[a].iter().all(|&(p, q)| check(p, q))
    }

    fn run(&mut self, from: Arrow, visit: &mut dyn FnMut(&[Obj], &[Arrow]) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(a) = (from..self.g.arrow_count()).find(|&a| self.arr[a].is_none()) else {
            let arr: Vec<Arrow> = self.arr.iter().map(|a| a.unwrap()).collect();
            return visit(&self.obj, &arr);
        };
        let (g, h) = (self.g, self.h);
        let ia = g.inv(a);
        let candidates = h.hom(self.obj[g.src(a)], self.obj[g.tgt(a)]).to_vec();
        for c in candidates {
            let ic = h.inv(c);
            if ia == a && ic != c {
                continue;
            }
            if ia != a && self.arr[ia].is_some_and(|x| x != ic) {
                continue;
            }
            let set_inv = ia != a && self.arr[ia].is_none();
            self.arr[a] = Some(c);
            if set_inv {
                self.arr[ia] = Some(ic);
            }
            if self.consistent(a) && self.consistent(ia) {
                self.run(a + 1, visit)?;
            }
            self.arr[a] = None;
            if set_inv {
                self.arr[ia] = None;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every functor `g -> h` as `(obj_map, arr_map)`, object maps in
/// lexicographic order. Stops early when `visit` breaks.
pub fn for_each_functor(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    mut visit: impl FnMut(&[Obj], &[Arrow]) -> ControlFlow<()>,
) {
    let (n, k) = (g.object_count(), h.object_count());
    if n > 0 && k == 0 {
        return;
    }
    let mut factors = vec![Vec::new(); g.arrow_count()];
    for (p, q) in g.composable_pairs() {
        factors[g.compose(p, q)].push((p, q));
    }
    let mut obj = vec![0; n];
    loop {
        let mut arr = vec![None; g.arrow_count()];
        for x in g.objects() {
            arr[g.unit(x)] = Some(h.unit(obj[x]));
        }
        let mut search = FunctorSearch {
            g,
            h,
            obj: obj.clone(),
            arr,
            factors: std::mem::take(&mut factors),
        };
        if search.run(0, &mut visit).is_break() {
            return;
        }
        factors = search.factors;
        // next object map, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            obj[i] += 1;
            if obj[i] < k {
                break;
            }
            obj[i] = 0;
        }
    }
}

/// Every functor `g -> h`.
pub fn functors(g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>) -> Vec<GroupoidFunctor> {
    let mut out = Vec::new();
    for_each_functor(g, h, |obj, arr| {
        out.push(
            GroupoidFunctor::with_object_map(g.clone(), h.clone(), obj.to_vec(), arr.to_vec())
                .expect("enumerated maps are functors"),
        );
        ControlFlow::Continue(())
    });
    out
}

fn for_each_transformation(
    f: &GroupoidFunctor,
    k: &GroupoidFunctor,
    visit: &mut dyn FnMut(&[Arrow]) -> ControlFlow<()>,
) {
    let g = f.source();
    let h = f.target();
    let n = g.object_count();
    let mut comp = vec![0; n];
    fn go(
        x: Obj,
        comp: &mut Vec<Arrow>,
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        f: &GroupoidFunctor,
        k: &GroupoidFunctor,
        visit: &mut dyn FnMut(&[Arrow]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if x == g.object_count() {
            return visit(comp);
        }
        for &c in h.hom(f.on_object(x), k.on_object(x)) {
            comp[x] = c;
            let natural = (0..=x).all(|y| {
                g.hom(y, x).iter().chain(g.hom(x, y)).all(|&a| {
                    let (s, t) = (g.src(a), g.tgt(a));
                    h.compose(k.on_arrow(a), comp[s]) == h.compose(comp[t], f.on_arrow(a))
                })
            });
            if natural {
                go(x + 1, comp, g, h, f, k, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
    let _ = go(0, &mut comp, g, h, f, k, visit);
}

/// Every natural transformation `f ⇒ k`.
pub fn natural_transformations(f: &GroupoidFunctor, k: &GroupoidFunctor) -> Vec<NatTransform> {
    let mut out = Vec::new();
    for_each_transformation(f, k, &mut |c| {
        out.push(NatTransform::new(f.clone(), k.clone(), c.to_vec()).expect("natural"));
        ControlFlow::Continue(())
    });
    out
}

/// The first natural isomorphism `f ⇒ k` in lexicographic component order.
pub fn find_natural_isomorphism(f: &GroupoidFunctor, k: &GroupoidFunctor) -> Option<NatTransform> {
    if f.source() != k.source() || f.target() != k.target() {
        return None;
    }
    let mut found = None;
    for_each_transformation(f, k, &mut |c| {
        found = Some(c.to_vec());
        ControlFlow::Break(())
    });
    found.map(|c| NatTransform::new(f.clone(), k.clone(), c).expect("natural"))
}

/// A functor `inverse: H -> G` with natural isomorphisms
/// `unit: id_G ⇒ inverse∘f` and `counit: f∘inverse ⇒ id_H`.
#[derive(Clone, Debug)]
pub struct WeakInverse {
    pub inverse: GroupoidFunctor,
    pub unit: NatTransform,
    pub counit: NatTransform,
}

/// Brute-force search for a weak inverse of `f` over all functors back.
/// Refuses groupoids with more than `cap` arrows.
pub fn find_weak_inverse(
    f: &GroupoidFunctor,
    cap: usize,
) -> Result<Option<WeakInverse>, SearchCapExceeded> {
    let (g, h) = (f.source().clone(), f.target().clone());
    for size in [g.arrow_count(), h.arrow_count()] {
        if size > cap {
            return Err(SearchCapExceeded { size, cap });
        }
    }
    let id_g = GroupoidFunctor::identity(g.clone());
    let id_h = GroupoidFunctor::identity(h.clone());
    let mut found = None;
    for_each_functor(&h, &g, |obj, arr| {
        let k = GroupoidFunctor::with_object_map(h.clone(), g.clone(), obj.to_vec(), arr.to_vec())
            .expect("functor");
        let kf = f.then(&k).expect("composable");
        let fk = k.then(f).expect("composable");
        if let Some(unit) = find_natural_isomorphism(&id_g, &kf) {
            if let Some(counit) = find_natural_isomorphism(&fk, &id_h) {
                found = Some(WeakInverse {
                    inverse: k,
                    unit,
                    counit,
                });
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn endofunctors_of_bz2() {
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        assert_eq!(functors(&b, &b).len(), 2);
    }

    #[test]
    fn functor_count_matches_group_homs() {
        let s3 = FiniteGroup::symmetric(3);
        let z2 = FiniteGroup::cyclic(2);
        let bs3 = FiniteGroupoid::from_group(&s3).into_arc();
        let bz2 = FiniteGroupoid::from_group(&z2).into_arc();
        assert_eq!(functors(&bz2, &bs3).len(), z2.homomorphisms(&s3).len());
        assert_eq!(functors(&bs3, &bz2).len(), s3.homomorphisms(&z2).len());
        assert_eq!(functors(&bs3, &bs3).len(), s3.homomorphisms(&s3).len());
    }

    #[test]
    fn functors_out_of_pair_groupoid() {
        // a functor Pair(2) -> BK is determined by the image of (1,2)
        let pair = FiniteGroupoid::pair(2).into_arc();
        let bz3 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)).into_arc();
        assert_eq!(functors(&pair, &bz3).len(), 3);
        // functors Disc2 -> Pair2 are the 4 object maps
        let disc = FiniteGroupoid::discrete(2).into_arc();
        assert_eq!(functors(&disc, &pair).len(), 4);
    }

    #[test]
    fn transformations_between_constant_functors() {
        let pt = FiniteGroupoid::point().into_arc();
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let f = GroupoidFunctor::constant(pt, b, 0);
        assert_eq!(natural_transformations(&f, &f).len(), 2);
    }

    #[test]
    fn weak_inverse_of_collapse() {
        let pair = FiniteGroupoid::pair(2).into_arc();
        let pt = FiniteGroupoid::point().into_arc();
        let f = GroupoidFunctor::constant(pair, pt, 0);
        assert!(find_weak_inverse(&f, WEAK_INVERSE_CAP).unwrap().is_some());
    }

    #[test]
    fn no_weak_inverse_for_inclusion() {
        let pt = FiniteGroupoid::point().into_arc();
        let disc = FiniteGroupoid::discrete(2).into_arc();
        let f = GroupoidFunctor::constant(pt, disc, 0);
        assert!(find_weak_inverse(&f, WEAK_INVERSE_CAP).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let big = FiniteGroupoid::pair(4).into_arc();
        let f = GroupoidFunctor::identity(big);
        assert_eq!(
            find_weak_inverse(&f, WEAK_INVERSE_CAP).unwrap_err(),
            SearchCapExceeded { size: 16, cap: 12 }
        );
    }
}
