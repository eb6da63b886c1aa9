use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::bibundle::{find_isomorphism_with_cap, Bibundle, Point};
use crate::fingpd::{orbit_space, Arrow, FiniteGroupoid, Obj};

/// Default bound on `|G_0|·|H_1|` for bibundle enumeration.
pub const HS_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("carrier bound {bound} exceeds cap {cap}")]
    BoundExceeded { bound: usize, cap: usize },
}

/// Left-action tables on the carrier `φ*H_1 = {(x, k) : t(k) = φ(x)}` with
/// right multiplication. A left action commuting with the right action is
/// fixed by the images `a·(x, 1_{φ x})`, which are chosen by backtracking.
struct ActionSearch<'a> {
    g: &'a Arc<FiniteGroupoid>,
    h: &'a Arc<FiniteGroupoid>,
    phi: Vec<Obj>,
    points: Vec<(Obj, Arrow)>,
    /// image of `a·(s a, 1)` as an arrow `k` with the point `(t a, k)`
    image: Vec<Option<Arrow>>,
}

impl ActionSearch<'_> {
    fn point(&self, x: Obj, k: Arrow) -> Point {
        self.points.iter().position(|&p| p == (x, k)).expect("carrier point")
    }

    /// `a·(x, k) = (a·(x, 1))·k`
    fn act(&self, a: Arrow, k: Arrow) -> Option<Arrow> {
        Some(self.h.compose(self.image[a]?, k))
    }

    fn consistent(&self, a: Arrow) -> bool {
        let g = self.g;
        let check = |p: Arrow, q: Arrow| {
            // (p q)·b = p·(q·b)
            let pq = g.compose(p, q);
            match (self.image[pq], self.image[q].and_then(|k| self.act(p, k))) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            }
        };
        g.objects().all(|z| {
            g.hom(z, g.src(a)).iter().all(|&q| check(a, q))
                && g.hom(g.tgt(a), z).iter().all(|&p| check(p, a))
        }) && g.composable_pairs().filter(|&(p, q)| g.compose(p, q) == a).all(|(p, q)| check(p, q))
    }

    fn run(&mut self, a: Arrow, visit: &mut dyn FnMut(Bibundle) -> ControlFlow<()>) -> ControlFlow<()> {
        let (g, h) = (self.g, self.h);
        if a == g.arrow_count() {
            return match self.build() {
                Some(b) => visit(b),
                None => ControlFlow::Continue(()),
            };
        }
        if self.image[a].is_some() {
            return self.run(a + 1, visit);
        }
        let (x, y) = (self.phi[g.src(a)], self.phi[g.tgt(a)]);
        for k in h.hom(x, y).to_vec() {
            self.image[a] = Some(k);
            if self.consistent(a) {
                self.run(a + 1, visit)?;
            }
        }
        self.image[a] = None;
        ControlFlow::Continue(())
    }

    fn build(&self) -> Option<Bibundle> {
        let (g, h) = (self.g, self.h);
        let names = self
            .points
            .iter()
            .map(|&(x, k)| format!("({},{})", g.object_name(x), h.arrow_name(k)))
            .collect();
        Bibundle::from_tables(
            g.clone(),
            h.clone(),
            names,
            self.points.iter().map(|p| p.0).collect(),
            self.points.iter().map(|&(_, k)| h.src(k)).collect(),
            |a, p| {
                let (_, k) = self.points[p];
                Some(self.point(g.tgt(a), self.act(a, k)?))
            },
            |p, k| {
                let (x, a) = self.points[p];
                Some(self.point(x, h.comp(a, k)?))
            },
        )
        .ok()
    }
}

/// Visits every bibundle `g -> h` whose carrier is `φ*H_1` for some object
/// map `φ`, one per valid left-action table. Every bibundle between finite
/// groupoids is isomorphic to one of these.
pub fn for_each_bibundle(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    mut visit: impl FnMut(Bibundle) -> ControlFlow<()>,
) {
    let (n, k) = (g.object_count(), h.object_count());
    if n > 0 && k == 0 {
        return;
    }
    let mut phi = vec![0; n];
    loop {
        let points: Vec<(Obj, Arrow)> = (0..n)
            .flat_map(|x| {
                let y = phi[x];
                h.objects().flat_map(move |z| h.hom(z, y).iter().map(move |&a| (x, a)))
            })
            .collect();
        let mut image = vec![None; g.arrow_count()];
        for x in g.objects() {
            image[g.unit(x)] = Some(h.unit(phi[x]));
        }
        let mut search = ActionSearch {
            g,
            h,
            phi: phi.clone(),
            points,
            image,
        };
        if search.run(0, &mut visit).is_break() {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            phi[i] += 1;
            if phi[i] < k {
                break;
            }
            phi[i] = 0;
        }
    }
}

/// A biprincipal bibundle `g -> h` found by exhaustive enumeration.
pub fn morita_by_search(g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>) -> Option<Bibundle> {
    let mut found = None;
    for_each_bibundle(g, h, |b| {
        if b.left_principality().is_principal() {
            found = Some(b);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    found
}

/// Pairwise non-isomorphic representatives of all bibundles `g -> h`.
pub fn hs_hom_classes(
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
    cap: usize,
) -> Result<Vec<Bibundle>, SearchError> {
    let bound = g.object_count() * h.arrow_count();
    if bound > cap {
        return Err(SearchError::BoundExceeded { bound, cap });
    }
    let mut reps: Vec<(Vec<(Obj, Obj)>, Bibundle)> = Vec::new();
    for_each_bibundle(g, h, |b| {
        let mut key: Vec<(Obj, Obj)> = b
            .left_anchor()
            .iter()
            .zip(b.right_anchor())
            .map(|(&x, &y)| (x, y))
            .collect();
        key.sort_unstable();
        let known = reps.iter().any(|(k, r)| {
            *k == key
                && find_isomorphism_with_cap(r, &b, usize::MAX)
                    .expect("same endpoints")
                    .is_some()
        });
        if !known {
            reps.push((key, b));
        }
        ControlFlow::Continue(())
    });
    Ok(reps.into_iter().map(|(_, b)| b).collect())
}

/// `∏` over orbits of `g` of `Σ` over orbits of `h` of `|Hom(Γ, Γ')/conj|`.
pub fn skeleton_hom_count(g: &FiniteGroupoid, h: &FiniteGroupoid) -> usize {
    let (og, oh) = (orbit_space(g), orbit_space(h));
    og.isotropy
        .iter()
        .map(|a| {
            oh.isotropy
                .iter()
                .map(|b| a.group.homomorphism_classes(&b.group).len())
                .sum::<usize>()
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn bz2() -> Arc<FiniteGroupoid> {
        FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc()
    }

    #[test]
    fn hs_counts_from_the_examples() {
        let pt = FiniteGroupoid::point().into_arc();
        let disc = FiniteGroupoid::discrete(2).into_arc();
        for (g, h, n) in [(pt, bz2(), 1), (bz2(), bz2(), 2), (disc, bz2(), 1)] {
            assert_eq!(hs_hom_classes(&g, &h, HS_BOUND).unwrap().len(), n);
            assert_eq!(skeleton_hom_count(&g, &h), n);
        }
    }

    #[test]
    fn search_agrees_on_small_morita_questions() {
        let pt = FiniteGroupoid::point().into_arc();
        let pair = FiniteGroupoid::pair(3).into_arc();
        assert!(morita_by_search(&pair, &pt).is_some());
        assert!(morita_by_search(&pt, &pair).is_some());
        assert!(morita_by_search(&bz2(), &pt).is_none());
    }

    #[test]
    fn bound_is_enforced() {
        let big = FiniteGroupoid::pair(4).into_arc();
        assert_eq!(
            hs_hom_classes(&big, &big, 10),
            Err(SearchError::BoundExceeded { bound: 64, cap: 10 })
        );
    }

    #[test]
    fn s3_endomorphism_classes() {
        let s3 = FiniteGroupoid::from_group(&FiniteGroup::symmetric(3)).into_arc();
        // trivial, onto Z/2 and the automorphisms: 3 classes
        assert_eq!(skeleton_hom_count(&s3, &s3), 3);
        assert_eq!(hs_hom_classes(&s3, &s3, HS_BOUND).unwrap().len(), 3);
    }
}
