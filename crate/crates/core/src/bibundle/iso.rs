use std::ops::ControlFlow;

use thiserror::Error;

use super::action::Point;
use super::bundle::{functor_points, Bibundle};
use super::principal::{BundleError, PrincipalBundle};
use crate::fingpd::{same_groupoid, NatTransform};

/// Default bound on the carrier size for isomorphism search.
pub const ISO_SEARCH_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("bibundles have different endpoints")]
    EndpointMismatch,
    #[error("carrier of {size} points exceeds search cap {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// An equivariant bijection between two bibundles, `map[p]` is the image of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BibundleIso {
    pub map: Vec<Point>,
}

impl BibundleIso {
    pub fn apply(&self, p: Point) -> Point {
        self.map[p]
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0; self.map.len()];
        for (p, &q) in self.map.iter().enumerate() {
            map[q] = p;
        }
        Self { map }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &BibundleIso) -> Self {
        Self {
            map: self.map.iter().map(|&q| next.map[q]).collect(),
        }
    }
}

/// Points labelled by invariants, and the moves `p --key--> p'` that an
/// equivariant map has to respect.
struct MoveGraph {
    label: Vec<Vec<usize>>,
    moves: Vec<Vec<(usize, Point)>>,
}

impl MoveGraph {
    fn of_bibundle(b: &Bibundle) -> Self {
        let m = b.left_groupoid().arrow_count();
        let moves: Vec<Vec<(usize, Point)>> = (0..b.point_count())
            .map(|p| {
                let left = b.left_action();
                let right = b.right_action();
                left.acting_arrows(p)
                    .map(|a| (a, left.act(a, p).expect("acting")))
                    .chain(
                        right
                            .acting_arrows(p)
                            .map(|h| (m + h, right.act(p, h).expect("acting"))),
                    )
                    .collect()
            })
            .collect();
        let orbit = orbit_sizes(&moves);
        let label = (0..b.point_count())
            .map(|p| vec![b.left_anchor()[p], b.right_anchor()[p], orbit[p]])
            .collect();
        Self { label, moves }
    }

    fn of_bundle(b: &PrincipalBundle) -> Self {
        let r = b.action();
        let moves = (0..b.point_count())
            .map(|p| {
                r.acting_arrows(p)
                    .map(|h| (h, r.act(p, h).expect("acting")))
                    .collect()
            })
            .collect();
        let label = (0..b.point_count())
            .map(|p| vec![b.projection()[p], b.anchor()[p]])
            .collect();
        Self { label, moves }
    }
}

fn orbit_sizes(moves: &[Vec<(usize, Point)>]) -> Vec<usize> {
    let n = moves.len();
    let mut size = vec![0; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            for &(_, q) in &moves[orbit[i]] {
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        for &p in &orbit {
            size[p] = orbit.len();
        }
    }
    size
}

struct Search<'a> {
    src: &'a MoveGraph,
    dst: &'a MoveGraph,
    injective: bool,
    assign: Vec<Option<Point>>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Assigns `p ↦ q` and everything it forces; returns the trail of new
    /// assignments, or `None` (with nothing left assigned) on conflict.
    fn assign(&mut self, p: Point, q: Point) -> Option<Vec<Point>> {
        let mut trail = Vec::new();
        let mut queue = vec![(p, q)];
        let ok = 'outer: loop {
            let Some((p, q)) = queue.pop() else { break true };
            match self.assign[p] {
                Some(x) if x == q => continue,
                Some(_) => break false,
                None => {}
            }
            if self.src.label[p] != self.dst.label[q] || (self.injective && self.used[q]) {
                break false;
            }
            self.assign[p] = Some(q);
            self.used[q] = self.injective;
            trail.push(p);
            let (mp, mq) = (&self.src.moves[p], &self.dst.moves[q]);
            if mp.len() != mq.len() {
                break false;
            }
            for (&(k1, p2), &(k2, q2)) in mp.iter().zip(mq) {
                if k1 != k2 {
                    break 'outer false;
                }
                queue.push((p2, q2));
            }
        };
        if ok {
            Some(trail)
        } else {
            self.undo(&trail);
            None
        }
    }

    fn undo(&mut self, trail: &[Point]) {
        for &p in trail {
            let q = self.assign[p].take().expect("assigned");
            self.used[q] = false;
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Point]) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(p) = self.assign.iter().position(Option::is_none) else {
            let map: Vec<Point> = self.assign.iter().map(|q| q.expect("complete")).collect();
            return visit(&map);
        };
        for q in 0..self.dst.label.len() {
            if let Some(trail) = self.assign(p, q) {
                let flow = self.run(visit);
                self.undo(&trail);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn search(
    src: &MoveGraph,
    dst: &MoveGraph,
    injective: bool,
    visit: &mut dyn FnMut(&[Point]) -> ControlFlow<()>,
) {
    let mut s = Search {
        src,
        dst,
        injective,
        assign: vec![None; src.label.len()],
        used: vec![false; dst.label.len()],
    };
    let _ = s.run(visit);
}

/// First equivariant bijection `p -> q` found by backtracking over
/// anchor-compatible images with propagation along both actions.
pub fn find_isomorphism(p: &Bibundle, q: &Bibundle) -> Result<Option<BibundleIso>, IsoError> {
    find_isomorphism_with_cap(p, q, ISO_SEARCH_CAP)
}

pub fn find_isomorphism_with_cap(
    p: &Bibundle,
    q: &Bibundle,
    cap: usize,
) -> Result<Option<BibundleIso>, IsoError> {
    if !same_groupoid(p.left_groupoid(), q.left_groupoid())
        || !same_groupoid(p.right_groupoid(), q.right_groupoid())
    {
        return Err(IsoError::EndpointMismatch);
    }
    let size = p.point_count().max(q.point_count());
    if size > cap {
        return Err(IsoError::CapExceeded { size, cap });
    }
    if p.point_count() != q.point_count() {
        return Ok(None);
    }
    let (gp, gq) = (MoveGraph::of_bibundle(p), MoveGraph::of_bibundle(q));
    let mut found = None;
    search(&gp, &gq, true, &mut |m| {
        found = Some(BibundleIso { map: m.to_vec() });
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Whether `map` is an equivariant bijection `p -> q` commuting with anchors.
pub fn is_isomorphism(p: &Bibundle, q: &Bibundle, map: &[Point]) -> bool {
    let n = p.point_count();
    if map.len() != n || q.point_count() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &x in map {
        if x >= n || std::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    (0..n).all(|x| {
        let y = map[x];
        p.left_anchor()[x] == q.left_anchor()[y]
            && p.right_anchor()[x] == q.right_anchor()[y]
            && p.left_action()
                .acting_arrows(x)
                .all(|a| p.act_left(a, x).map(|z| map[z]) == q.act_left(a, y))
            && p.right_action()
                .acting_arrows(x)
                .all(|h| p.act_right(x, h).map(|z| map[z]) == q.act_right(y, h))
    })
}

fn check_bundles(a: &PrincipalBundle, b: &PrincipalBundle) -> Result<(), BundleError> {
    if !same_groupoid(a.groupoid(), b.groupoid()) || a.base_size() != b.base_size() {
        return Err(BundleError::NotEquivariant);
    }
    Ok(())
}

/// Every equivariant map `a -> b` over the identity of the common base.
pub fn equivariant_maps(a: &PrincipalBundle, b: &PrincipalBundle) -> Result<Vec<Vec<Point>>, BundleError> {
    check_bundles(a, b)?;
    let (ga, gb) = (MoveGraph::of_bundle(a), MoveGraph::of_bundle(b));
    let mut out = Vec::new();
    search(&ga, &gb, false, &mut |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// First equivariant bijection `a -> b` over the identity of the base.
pub fn find_bundle_isomorphism(
    a: &PrincipalBundle,
    b: &PrincipalBundle,
) -> Result<Option<Vec<Point>>, BundleError> {
    check_bundles(a, b)?;
    if a.point_count() != b.point_count() {
        return Ok(None);
    }
    let (ga, gb) = (MoveGraph::of_bundle(a), MoveGraph::of_bundle(b));
    let mut found = None;
    search(&ga, &gb, true, &mut |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    Ok(found)
}

/// The isomorphism `⟨f⟩ -> ⟨g⟩`, `(x, h) ↦ (x, α_x h)`, induced by `α: f ⇒ g`.
pub fn nat_transform_iso(alpha: &NatTransform) -> (Bibundle, Bibundle, BibundleIso) {
    let (f, g) = (alpha.from_functor(), alpha.to_functor());
    let (pf, pg) = (Bibundle::from_functor(f), Bibundle::from_functor(g));
    let h = f.target();
    let (from, to) = (functor_points(f), functor_points(g));
    let map = from
        .iter()
        .map(|&(x, k)| {
            let image = (x, h.compose(alpha.at(x), k));
            to.iter().position(|&q| q == image).expect("point of ⟨g⟩")
        })
        .collect();
    let iso = BibundleIso { map };
    debug_assert!(is_isomorphism(&pf, &pg, &iso.map));
    (pf, pg, iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingpd::{functors, natural_transformations, FiniteGroupoid, GroupoidFunctor};
    use crate::group::FiniteGroup;

    #[test]
    fn self_isomorphism_is_identity() {
        let g = FiniteGroupoid::transitive(2, &FiniteGroup::symmetric(3)).into_arc();
        let u = Bibundle::unit(g);
        let iso = find_isomorphism(&u, &u).unwrap().unwrap();
        assert_eq!(iso.map, (0..u.point_count()).collect::<Vec<_>>());
    }

    #[test]
    fn relabelled_bibundle_is_found() {
        let g = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(3)).into_arc();
        let u = Bibundle::unit(g);
        let order: Vec<usize> = (0..u.point_count()).rev().collect();
        let v = u.permuted(&order);
        let iso = find_isomorphism(&u, &v).unwrap().unwrap();
        assert!(is_isomorphism(&u, &v, &iso.map));
    }

    #[test]
    fn trivial_and_identity_endofunctors_differ() {
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let id = Bibundle::from_functor(&GroupoidFunctor::identity(b.clone()));
        let triv = Bibundle::from_functor(&GroupoidFunctor::constant(b.clone(), b, 0));
        assert_eq!(find_isomorphism(&id, &triv).unwrap(), None);
    }

    #[test]
    fn endpoint_mismatch_and_cap() {
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let pt = FiniteGroupoid::point().into_arc();
        assert_eq!(
            find_isomorphism(&Bibundle::unit(b.clone()), &Bibundle::unit(pt)),
            Err(IsoError::EndpointMismatch)
        );
        let u = Bibundle::unit(b);
        assert_eq!(
            find_isomorphism_with_cap(&u, &u, 1),
            Err(IsoError::CapExceeded { size: 2, cap: 1 })
        );
    }

    #[test]
    fn natural_transformations_give_isomorphisms() {
        let g = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).into_arc();
        let h = FiniteGroupoid::from_group(&FiniteGroup::symmetric(3)).into_arc();
        let fs = functors(&g, &h);
        for f in fs.iter().step_by(3) {
            for k in fs.iter().step_by(5) {
                for alpha in natural_transformations(f, k) {
                    let (pf, pg, iso) = nat_transform_iso(&alpha);
                    assert!(is_isomorphism(&pf, &pg, &iso.map));
                }
            }
        }
    }

    #[test]
    fn equivariant_maps_of_unit_bundle_are_bijections() {
        let h = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).into_arc();
        let u = PrincipalBundle::unit(h);
        let maps = equivariant_maps(&u, &u).unwrap();
        assert!(!maps.is_empty());
        for m in maps {
            let mut s = m.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), m.len());
        }
    }
}
