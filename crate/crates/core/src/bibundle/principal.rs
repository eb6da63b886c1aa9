use std::sync::Arc;

use thiserror::Error;

use super::action::{Point, RightAction};
use crate::fingpd::{Arrow, FiniteGroupoid, Obj};

/// How a right action fails to be principal along a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalityWitness {
    /// `π` has a point of the base with empty fiber.
    EmptyFiber { base: usize },
    /// `π(p·h) != π(p)`.
    NotInvariant { point: Point, arrow: Arrow },
    /// `p·h1 = p·h2` with `h1 != h2`.
    NotFree {
        base: usize,
        point: Point,
        arrows: (Arrow, Arrow),
    },
    /// No arrow carries `p` to `q` although both lie over `base`.
    NotTransitive { base: usize, points: (Point, Point) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalityVerdict {
    pub witness: Option<PrincipalityWitness>,
}

impl PrincipalityVerdict {
    pub fn is_principal(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that `π` is invariant and onto, and that
/// `(p, h) ↦ (p, p·h)` is a bijection `P ×_{H_0} H_1 -> P ×_B P`.
pub fn is_principal(r: &RightAction, proj: &[usize], base_size: usize) -> PrincipalityVerdict {
    let witness = principality_witness(r, proj, base_size);
    PrincipalityVerdict { witness }
}

fn principality_witness(
    r: &RightAction,
    proj: &[usize],
    base_size: usize,
) -> Option<PrincipalityWitness> {
    let mut fibers = vec![Vec::new(); base_size];
    for (p, &b) in proj.iter().enumerate() {
        fibers[b].push(p);
    }
    if let Some(base) = fibers.iter().position(|f| f.is_empty()) {
        return Some(PrincipalityWitness::EmptyFiber { base });
    }
    for p in 0..r.point_count() {
        for h in r.acting_arrows(p) {
            let q = r.act(p, h).expect("acting arrow");
            if proj[q] != proj[p] {
                return Some(PrincipalityWitness::NotInvariant { point: p, arrow: h });
            }
        }
    }
    for (base, fiber) in fibers.iter().enumerate() {
        for &p in fiber {
            let mut hit: Vec<Option<Arrow>> = vec![None; r.point_count()];
            for h in r.acting_arrows(p) {
                let q = r.act(p, h).expect("acting arrow");
                if let Some(h1) = hit[q] {
                    return Some(PrincipalityWitness::NotFree {
                        base,
                        point: p,
                        arrows: (h1, h),
                    });
                }
                hit[q] = Some(h);
            }
            if let Some(&q) = fiber.iter().find(|&&q| hit[q].is_none()) {
                return Some(PrincipalityWitness::NotTransitive {
                    base,
                    points: (p, q),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("projection has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("projection sends point {0} outside the base")]
    OutOfRange(Point),
    #[error("not principal: {0:?}")]
    NotPrincipal(PrincipalityWitness),
    #[error("points {0} and {1} lie in different fibers")]
    DifferentFibers(Point, Point),
    #[error("map is not equivariant over the base")]
    NotEquivariant,
}

/// A principal right `H`-bundle `π: P -> B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalBundle {
    action: RightAction,
    points: Vec<String>,
    base: Vec<String>,
    proj: Vec<usize>,
}

impl PrincipalBundle {
    pub fn new(
        action: RightAction,
        points: Vec<String>,
        base: Vec<String>,
        proj: Vec<usize>,
    ) -> Result<Self, BundleError> {
        let n = action.point_count();
        for len in [points.len(), proj.len()] {
            if len != n {
                return Err(BundleError::WrongLength {
                    expected: n,
                    found: len,
                });
            }
        }
        if let Some(p) = proj.iter().position(|&b| b >= base.len()) {
            return Err(BundleError::OutOfRange(p));
        }
        if let Some(w) = principality_witness(&action, &proj, base.len()) {
            return Err(BundleError::NotPrincipal(w));
        }
        Ok(Self {
            action,
            points,
            base,
            proj,
        })
    }

    /// `t: H_1 -> H_0` with `H` acting by right multiplication.
    pub fn unit(h: Arc<FiniteGroupoid>) -> Self {
        let anchor = h.arrows().map(|a| h.src(a)).collect();
        let hh = h.clone();
        let action = RightAction::new(h.clone(), anchor, move |p, k| hh.comp(p, k))
            .expect("right multiplication is an action");
        let points = h.arrow_names().to_vec();
        let base = h.object_names().to_vec();
        let proj = h.arrows().map(|a| h.tgt(a)).collect();
        Self::new(action, points, base, proj).expect("unit bundle is principal")
    }

    /// `φ^*(unit bundle)` for `φ: B -> H_0`: points `(b, h)` with
    /// `φ(b) = t(h)`, ordered by `b`, then `h`.
    pub fn pulled_unit(h: Arc<FiniteGroupoid>, base: Vec<String>, phi: &[Obj]) -> Self {
        let mut pts = Vec::new();
        for (b, &y) in phi.iter().enumerate() {
            for x in h.objects() {
                for &k in h.hom(x, y) {
                    pts.push((b, k));
                }
            }
        }
        let index = |b: usize, k: Arrow| pts.iter().position(|&q| q == (b, k));
        let anchor = pts.iter().map(|&(_, k)| h.src(k)).collect();
        let action = RightAction::new(h.clone(), anchor, |p, k| {
            let (b, a) = pts[p];
            index(b, h.comp(a, k)?)
        })
        .expect("pulled back action");
        let names = pts
            .iter()
            .map(|&(b, k)| format!("({},{})", base[b], h.arrow_name(k)))
            .collect();
        let proj = pts.iter().map(|&(b, _)| b).collect();
        Self::new(action, names, base, proj).expect("pullback of a principal bundle")
    }

    pub fn action(&self) -> &RightAction {
        &self.action
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        self.action.groupoid()
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point_names(&self) -> &[String] {
        &self.points
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn base_size(&self) -> usize {
        self.base.len()
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    pub fn anchor(&self) -> &[Obj] {
        self.action.anchor()
    }

    /// The unique `h` with `p2 = p1·h`.
    pub fn division_map(&self, p1: Point, p2: Point) -> Result<Arrow, BundleError> {
        if self.proj[p1] != self.proj[p2] {
            return Err(BundleError::DifferentFibers(p1, p2));
        }
        Ok(self.action.divide(p1, p2).expect("principal"))
    }

    /// The lexicographically first point of every fiber.
    pub fn global_section(&self) -> Vec<Point> {
        (0..self.base.len())
            .map(|b| self.proj.iter().position(|&c| c == b).expect("onto"))
            .collect()
    }

    pub fn is_section(&self, section: &[Point]) -> bool {
        section.len() == self.base.len()
            && section
                .iter()
                .enumerate()
                .all(|(b, &p)| p < self.points.len() && self.proj[p] == b)
    }

    /// Whether `map` commutes with the projections (over the identity of the
    /// base) and with the action.
    pub fn is_equivariant_map(&self, other: &PrincipalBundle, map: &[Point]) -> bool {
        map.len() == self.point_count()
            && map.iter().enumerate().all(|(p, &q)| {
                q < other.point_count()
                    && other.proj[q] == self.proj[p]
                    && other.anchor()[q] == self.anchor()[p]
                    && self
                        .action
                        .acting_arrows(p)
                        .all(|h| other.action.act(q, h) == self.action.act(p, h).map(|r| map[r]))
            })
    }

    /// The pullback of the unit bundle along `a∘σ`, and the isomorphism
    /// `(b, h) ↦ σ(b)·h` onto `self`.
    pub fn trivialize(&self, section: &[Point]) -> Result<(PrincipalBundle, Vec<Point>), BundleError> {
        if !self.is_section(section) {
            return Err(BundleError::NotEquivariant);
        }
        let phi: Vec<Obj> = section.iter().map(|&p| self.anchor()[p]).collect();
        let pulled = Self::pulled_unit(self.groupoid().clone(), self.base.clone(), &phi);
        let h = self.groupoid();
        let mut map = Vec::with_capacity(pulled.point_count());
        // same enumeration order as pulled_unit
        for (b, &y) in phi.iter().enumerate() {
            for x in h.objects() {
                for &k in h.hom(x, y) {
                    map.push(self.action.act(section[b], k).expect("defined"));
                }
            }
        }
        debug_assert!(pulled.is_equivariant_map(self, &map));
        Ok((pulled, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn two_copies_of_unit(h: &Arc<FiniteGroupoid>) -> (RightAction, Vec<usize>) {
        let m = h.arrow_count();
        let anchor = (0..2 * m).map(|p| h.src(p % m)).collect();
        let hh = h.clone();
        let r = RightAction::new(h.clone(), anchor, move |p, k| {
            Some((p / m) * m + hh.comp(p % m, k)?)
        })
        .unwrap();
        let proj = (0..2 * m).map(|p| h.tgt(p % m)).collect();
        (r, proj)
    }

    #[test]
    fn unit_bundle_is_principal() {
        let h = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).into_arc();
        let u = PrincipalBundle::unit(h.clone());
        assert!(is_principal(u.action(), u.projection(), u.base_size()).is_principal());
        for p in h.arrows() {
            assert_eq!(u.division_map(p, p).unwrap(), h.unit(h.src(p)));
            for q in h.arrows() {
                if h.tgt(p) == h.tgt(q) {
                    // q = p·(p⁻¹q)
                    assert_eq!(u.division_map(p, q).unwrap(), h.compose(h.inv(p), q));
                } else {
                    assert_eq!(u.division_map(p, q), Err(BundleError::DifferentFibers(p, q)));
                }
            }
        }
    }

    #[test]
    fn trivial_group_bijection_is_principal() {
        let pt = FiniteGroupoid::point().into_arc();
        let r = RightAction::new(pt, vec![0; 3], |p, _| Some(p)).unwrap();
        assert!(is_principal(&r, &[2, 0, 1], 3).is_principal());
    }

    #[test]
    fn folded_copies_are_not_transitive() {
        let h = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        let (r, proj) = two_copies_of_unit(&h);
        let v = is_principal(&r, &proj, 1);
        assert!(matches!(v.witness, Some(PrincipalityWitness::NotTransitive { base: 0, .. })));
    }

    #[test]
    fn pullback_of_unit_trivializes() {
        let h = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(3)).into_arc();
        let u = PrincipalBundle::unit(h);
        let s = u.global_section();
        let (pulled, map) = u.trivialize(&s).unwrap();
        assert!(pulled.is_equivariant_map(&u, &map));
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), u.point_count());
    }
}
