use std::sync::Arc;

use thiserror::Error;

use super::action::{ActionError, LeftAction, Point, RightAction};
use super::principal::{is_principal, PrincipalityVerdict, PrincipalityWitness};
use crate::fingpd::{Arrow, FiniteGroupoid, GroupoidFunctor, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BibundleError {
    #[error("{expected} points expected, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("left action: {0}")]
    Left(ActionError),
    #[error("right action: {0}")]
    Right(ActionError),
    #[error("left anchor is not a principal bundle: {0:?}")]
    NotPrincipal(PrincipalityWitness),
    #[error("right anchor is not invariant under arrow {arrow} at point {point}")]
    RightAnchorNotInvariant { point: Point, arrow: Arrow },
    #[error("actions do not commute at point {point} for ({left}, {right})")]
    NotCommuting {
        point: Point,
        left: Arrow,
        right: Arrow,
    },
    #[error("duplicate point name {0:?}")]
    DuplicateName(String),
}

/// A bibundle `G -> H`: a finite set `P` with a left `G`-action along
/// `a_L` and a commuting right `H`-action along `a_R`, such that `a_L` is a
/// principal `H`-bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bibundle {
    points: Vec<String>,
    left: LeftAction,
    right: RightAction,
}

impl Bibundle {
    pub fn new(
        points: Vec<String>,
        left: LeftAction,
        right: RightAction,
    ) -> Result<Self, BibundleError> {
        let n = points.len();
        for found in [left.point_count(), right.point_count()] {
            if found != n {
                return Err(BibundleError::WrongLength { expected: n, found });
            }
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(BibundleError::DuplicateName(p.clone()));
            }
        }
        let g = left.groupoid().clone();
        if let Some(w) = is_principal(&right, left.anchor(), g.object_count()).witness {
            return Err(BibundleError::NotPrincipal(w));
        }
        for p in 0..n {
            for a in left.acting_arrows(p) {
                let q = left.act(a, p).expect("acting");
                if right.anchor()[q] != right.anchor()[p] {
                    return Err(BibundleError::RightAnchorNotInvariant { point: p, arrow: a });
                }
                for h in right.acting_arrows(p) {
                    let lhs = right.act(q, h);
                    let rhs = right.act(p, h).and_then(|r| left.act(a, r));
                    if lhs != rhs {
                        return Err(BibundleError::NotCommuting {
                            point: p,
                            left: a,
                            right: h,
                        });
                    }
                }
            }
        }
        Ok(Self {
            points,
            left,
            right,
        })
    }

    /// Builds both actions from closures and validates.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        left_groupoid: Arc<FiniteGroupoid>,
        right_groupoid: Arc<FiniteGroupoid>,
        points: Vec<String>,
        left_anchor: Vec<Obj>,
        right_anchor: Vec<Obj>,
        left_act: impl Fn(Arrow, Point) -> Option<Point>,
        right_act: impl Fn(Point, Arrow) -> Option<Point>,
    ) -> Result<Self, BibundleError> {
        let left = LeftAction::new(left_groupoid, left_anchor, left_act).map_err(BibundleError::Left)?;
        let right =
            RightAction::new(right_groupoid, right_anchor, right_act).map_err(BibundleError::Right)?;
        Self::new(points, left, right)
    }

    /// `⟨f⟩ = G_0 ×_{f, H_0, t} H_1`. Points `(x, h)` are ordered by `x`,
    /// with `(x, 1_{f(x)})` first in each fiber and the rest by arrow index.
    pub fn from_functor(f: &GroupoidFunctor) -> Self {
        let (g, h) = (f.source().clone(), f.target().clone());
        let pts = functor_points(f);
        let index = |x: Obj, k: Arrow| pts.iter().position(|&q| q == (x, k));
        let names = pts
            .iter()
            .map(|&(x, k)| format!("({},{})", g.object_name(x), h.arrow_name(k)))
            .collect();
        Self::from_tables(
            g.clone(),
            h.clone(),
            names,
            pts.iter().map(|&(x, _)| x).collect(),
            pts.iter().map(|&(_, k)| h.src(k)).collect(),
            |a, p| {
                let (_, k) = pts[p];
                index(g.tgt(a), h.comp(f.on_arrow(a), k)?)
            },
            |p, k| {
                let (x, a) = pts[p];
                index(x, h.comp(a, k)?)
            },
        )
        .expect("the bibundle of a functor is valid")
    }

    /// `⟨id_G⟩`, the unit bibundle.
    pub fn unit(g: Arc<FiniteGroupoid>) -> Self {
        Self::from_functor(&GroupoidFunctor::identity(g))
    }

    pub fn left_groupoid(&self) -> &Arc<FiniteGroupoid> {
        self.left.groupoid()
    }

    pub fn right_groupoid(&self) -> &Arc<FiniteGroupoid> {
        self.right.groupoid()
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point_names(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, p: Point) -> &str {
        &self.points[p]
    }

    pub fn point_index(&self, name: &str) -> Option<Point> {
        self.points.iter().position(|p| p == name)
    }

    pub fn left_anchor(&self) -> &[Obj] {
        self.left.anchor()
    }

    pub fn right_anchor(&self) -> &[Obj] {
        self.right.anchor()
    }

    pub fn left_action(&self) -> &LeftAction {
        &self.left
    }

    pub fn right_action(&self) -> &RightAction {
        &self.right
    }

    /// `g·p`.
    pub fn act_left(&self, g: Arrow, p: Point) -> Option<Point> {
        self.left.act(g, p)
    }

    /// `p·h`.
    pub fn act_right(&self, p: Point, h: Arrow) -> Option<Point> {
        self.right.act(p, h)
    }

    /// The unique `h` with `p2 = p1·h`, when `a_L(p1) = a_L(p2)`.
    pub fn divide(&self, p1: Point, p2: Point) -> Option<Arrow> {
        if self.left_anchor()[p1] != self.left_anchor()[p2] {
            return None;
        }
        self.right.divide(p1, p2)
    }

    /// Principality of the left action along `a_R`.
    pub fn left_principality(&self) -> PrincipalityVerdict {
        is_principal(
            &self.left.as_right(),
            self.right_anchor(),
            self.right_groupoid().object_count(),
        )
    }

    /// Relabels points: point `i` of the result is point `order[i]` of self.
    pub fn permuted(&self, order: &[Point]) -> Self {
        let mut pos = vec![0; order.len()];
        for (i, &p) in order.iter().enumerate() {
            pos[p] = i;
        }
        Self::from_tables(
            self.left_groupoid().clone(),
            self.right_groupoid().clone(),
            order.iter().map(|&p| self.points[p].clone()).collect(),
            order.iter().map(|&p| self.left_anchor()[p]).collect(),
            order.iter().map(|&p| self.right_anchor()[p]).collect(),
            |a, i| self.act_left(a, order[i]).map(|q| pos[q]),
            |i, h| self.act_right(order[i], h).map(|q| pos[q]),
        )
        .expect("relabelling preserves validity")
    }

    /// For a bibundle between groupoids with only identity arrows: the map
    /// `f_P` whose graph it is.
    pub fn graph_map(&self) -> Option<Vec<Obj>> {
        let (g, h) = (self.left_groupoid(), self.right_groupoid());
        if g.arrow_count() != g.object_count() || h.arrow_count() != h.object_count() {
            return None;
        }
        g.objects()
            .map(|x| {
                let mut over = (0..self.point_count()).filter(|&p| self.left_anchor()[p] == x);
                let p = over.next()?;
                over.next().is_none().then(|| self.right_anchor()[p])
            })
            .collect()
    }
}

/// The carrier of `⟨f⟩` in its canonical order.
pub(crate) fn functor_points(f: &GroupoidFunctor) -> Vec<(Obj, Arrow)> {
    let h = f.target();
    let mut pts = Vec::new();
    for x in f.source().objects() {
        let y = f.on_object(x);
        pts.push((x, h.unit(y)));
        for z in h.objects() {
            pts.extend(h.hom(z, y).iter().filter(|&&k| k != h.unit(y)).map(|&k| (x, k)));
        }
    }
    pts
}
