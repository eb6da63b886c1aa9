use std::sync::Arc;

use thiserror::Error;

use crate::fingpd::{Arrow, FiniteGroupoid, Obj};

/// Index of a point of the carrier of an action.
pub type Point = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("anchor has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("anchor of point {0} is not an object")]
    AnchorOutOfRange(Point),
    #[error("action of arrow {arrow} on point {point} is undefined or out of range")]
    Undefined { point: Point, arrow: Arrow },
    #[error("action of arrow {arrow} on point {point} lands over the wrong object")]
    AnchorMismatch { point: Point, arrow: Arrow },
    #[error("unit does not fix point {0}")]
    UnitMoves(Point),
    #[error("action is not associative at point {point} with arrows ({first}, {second})")]
    NotAssociative {
        point: Point,
        first: Arrow,
        second: Arrow,
    },
}

/// A right action of a groupoid `H` on a finite set `P` along an anchor
/// `a: P -> H_0`. `p·h` is defined when `a(p) = t(h)` and lies over `s(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightAction {
    groupoid: Arc<FiniteGroupoid>,
    anchor: Vec<Obj>,
    table: Vec<Option<Point>>,
}

impl RightAction {
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        anchor: Vec<Obj>,
        act: impl Fn(Point, Arrow) -> Option<Point>,
    ) -> Result<Self, ActionError> {
        let (n, m) = (anchor.len(), groupoid.arrow_count());
        if let Some(p) = anchor.iter().position(|&x| x >= groupoid.object_count()) {
            return Err(ActionError::AnchorOutOfRange(p));
        }
        let mut table = vec![None; n * m];
        for p in 0..n {
            for h in groupoid.arrows() {
                if groupoid.tgt(h) != anchor[p] {
                    continue;
                }
                match act(p, h) {
                    Some(q) if q < n => table[p * m + h] = Some(q),
                    _ => return Err(ActionError::Undefined { point: p, arrow: h }),
                }
            }
        }
        let r = Self {
            groupoid,
            anchor,
            table,
        };
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<(), ActionError> {
        let h = &*self.groupoid;
        for p in 0..self.anchor.len() {
            if self.act(p, h.unit(self.anchor[p])) != Some(p) {
                return Err(ActionError::UnitMoves(p));
            }
            for h1 in h.arrows() {
                let Some(q) = self.act(p, h1) else { continue };
                if self.anchor[q] != h.src(h1) {
                    return Err(ActionError::AnchorMismatch { point: p, arrow: h1 });
                }
                for h2 in h.arrows() {
                    if h.tgt(h2) != h.src(h1) {
                        continue;
                    }
                    // (p·h1)·h2 = p·(h1 h2)
                    if self.act(q, h2) != self.act(p, h.compose(h1, h2)) {
                        return Err(ActionError::NotAssociative {
                            point: p,
                            first: h1,
                            second: h2,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn point_count(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[Obj] {
        &self.anchor
    }

    /// `p·h`, or `None` when `a(p) != t(h)`.
    pub fn act(&self, p: Point, h: Arrow) -> Option<Point> {
        self.table[p * self.groupoid.arrow_count() + h]
    }

    /// The unique `h` with `p·h = q`, if any; `None` also when not unique.
    pub fn divide(&self, p: Point, q: Point) -> Option<Arrow> {
        let h = &*self.groupoid;
        let mut found = None;
        for z in h.objects() {
            for &k in h.hom(z, self.anchor[p]) {
                if self.act(p, k) == Some(q) {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(k);
                }
            }
        }
        found
    }

    /// Arrows acting on `p`, i.e. those with target `a(p)`.
    pub fn acting_arrows(&self, p: Point) -> impl Iterator<Item = Arrow> + '_ {
        let x = self.anchor[p];
        self.groupoid
            .objects()
            .flat_map(move |z| self.groupoid.hom(z, x).iter().copied())
    }
}

/// A left action of a groupoid `G` on a finite set `P` along an anchor
/// `a: P -> G_0`. `g·p` is defined when `s(g) = a(p)` and lies over `t(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftAction {
    groupoid: Arc<FiniteGroupoid>,
    anchor: Vec<Obj>,
    table: Vec<Option<Point>>,
}

impl LeftAction {
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        anchor: Vec<Obj>,
        act: impl Fn(Arrow, Point) -> Option<Point>,
    ) -> Result<Self, ActionError> {
        let (n, m) = (anchor.len(), groupoid.arrow_count());
        if let Some(p) = anchor.iter().position(|&x| x >= groupoid.object_count()) {
            return Err(ActionError::AnchorOutOfRange(p));
        }
        let mut table = vec![None; n * m];
        for p in 0..n {
            for g in groupoid.arrows() {
                if groupoid.src(g) != anchor[p] {
                    continue;
                }
                match act(g, p) {
                    Some(q) if q < n => table[p * m + g] = Some(q),
                    _ => return Err(ActionError::Undefined { point: p, arrow: g }),
                }
            }
        }
        let l = Self {
            groupoid,
            anchor,
            table,
        };
        l.check()?;
        Ok(l)
    }

    fn check(&self) -> Result<(), ActionError> {
        let g = &*self.groupoid;
        for p in 0..self.anchor.len() {
            if self.act(g.unit(self.anchor[p]), p) != Some(p) {
                return Err(ActionError::UnitMoves(p));
            }
            for g1 in g.arrows() {
                let Some(q) = self.act(g1, p) else { continue };
                if self.anchor[q] != g.tgt(g1) {
                    return Err(ActionError::AnchorMismatch { point: p, arrow: g1 });
                }
                for g2 in g.arrows() {
                    if g.src(g2) != g.tgt(g1) {
                        continue;
                    }
                    // g2·(g1·p) = (g2 g1)·p
                    if self.act(g2, q) != self.act(g.compose(g2, g1), p) {
                        return Err(ActionError::NotAssociative {
                            point: p,
                            first: g1,
                            second: g2,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn point_count(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[Obj] {
        &self.anchor
    }

    /// `g·p`, or `None` when `s(g) != a(p)`.
    pub fn act(&self, g: Arrow, p: Point) -> Option<Point> {
        self.table[p * self.groupoid.arrow_count() + g]
    }

    /// Arrows acting on `p`, i.e. those with source `a(p)`.
    pub fn acting_arrows(&self, p: Point) -> impl Iterator<Item = Arrow> + '_ {
        let x = self.anchor[p];
        self.groupoid
            .objects()
            .flat_map(move |z| self.groupoid.hom(x, z).iter().copied())
    }

    /// The right action `p·g := g⁻¹·p` with the same anchor.
    pub fn as_right(&self) -> RightAction {
        let g = self.groupoid.clone();
        RightAction::new(g.clone(), self.anchor.clone(), |p, k| self.act(g.inv(k), p))
            .expect("inverting a left action gives a right action")
    }
}

impl RightAction {
    /// The left action `h·p := p·h⁻¹` with the same anchor.
    pub fn as_left(&self) -> LeftAction {
        let h = self.groupoid.clone();
        LeftAction::new(h.clone(), self.anchor.clone(), |k, p| self.act(p, h.inv(k)))
            .expect("inverting a right action gives a left action")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn right_multiplication_on_arrows() {
        let h = FiniteGroupoid::transitive(2, &FiniteGroup::cyclic(2)).into_arc();
        let anchor = h.arrows().map(|a| h.src(a)).collect();
        let hh = h.clone();
        let r = RightAction::new(h.clone(), anchor, move |p, k| hh.comp(p, k)).unwrap();
        for p in h.arrows() {
            assert_eq!(r.divide(p, p), Some(h.unit(h.src(p))));
        }
        let l = r.as_left();
        assert_eq!(l.as_right(), r);
    }

    #[test]
    fn broken_action_is_rejected() {
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc();
        // sigma fixes one point and moves the other onto it
        let err = RightAction::new(z2.clone(), vec![0, 0], |p, k| Some(if k == 0 { p } else { 0 }))
            .unwrap_err();
        assert!(matches!(err, ActionError::NotAssociative { .. }));
        let err = RightAction::new(z2, vec![0, 0], |p, _| Some(1 - p)).unwrap_err();
        assert_eq!(err, ActionError::UnitMoves(0));
    }
}
