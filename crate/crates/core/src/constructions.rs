//! Groupoids built from other data: action groupoids, Čech groupoids of
//! covers, pullbacks along maps into the object set, and restrictions.

use std::sync::Arc;

use thiserror::Error;

pub use crate::group::FiniteGroup;
use crate::fingpd::{Arrow, FiniteGroupoid, GroupoidFunctor, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("cover is not surjective: base point {0} is not covered")]
    NotSurjective(String),
    #[error("unknown point index {0}")]
    UnknownPoint(usize),
    #[error("unknown object index {0}")]
    UnknownObject(usize),
    #[error("piece {piece} lists base point {point} twice")]
    DuplicateInPiece { piece: usize, point: usize },
}

/// A left action of a finite group on a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    points: Vec<String>,
    /// `act[g * |X| + x] = g·x`
    act: Vec<usize>,
}

impl GroupAction {
    pub fn new(
        group: FiniteGroup,
        points: Vec<String>,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, ConstructionError> {
        let n = points.len();
        let table: Vec<usize> = (0..group.order() * n).map(|i| act(i / n, i % n)).collect();
        if let Some(i) = table.iter().position(|&y| y >= n) {
            return Err(ConstructionError::InvalidAction(format!(
                "{}·{} is out of range",
                group.name(i / n),
                points[i % n]
            )));
        }
        let a = Self {
            group,
            points,
            act: table,
        };
        for x in 0..n {
            if a.apply(a.group.identity(), x) != x {
                return Err(ConstructionError::InvalidAction(format!(
                    "identity moves {}",
                    a.points[x]
                )));
            }
        }
        for g in a.group.elements() {
            for h in a.group.elements() {
                for x in 0..n {
                    if a.apply(g, a.apply(h, x)) != a.apply(a.group.mul(g, h), x) {
                        return Err(ConstructionError::InvalidAction(format!(
                            "{}·({}·{}) != ({}{})·{}",
                            a.group.name(g),
                            a.group.name(h),
                            a.points[x],
                            a.group.name(g),
                            a.group.name(h),
                            a.points[x]
                        )));
                    }
                }
            }
        }
        Ok(a)
    }

    /// The trivial action on `points`.
    pub fn trivial(group: FiniteGroup, points: Vec<String>) -> Self {
        Self::new(group, points, |_, x| x).expect("trivial action")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g * self.points.len() + x]
    }
}

/// The action groupoid `Γ × X ⇉ X`: arrow `(g, x)` has index
/// `g * |X| + x` and runs from `x` to `g·x`.
pub fn action_groupoid(a: &GroupAction) -> FiniteGroupoid {
    let n = a.points.len();
    let k = a.group.order();
    let code = |g: usize, x: usize| g * n + x;
    let e = a.group.identity();
    FiniteGroupoid::build(
        a.points.clone(),
        (0..k * n)
            .map(|i| format!("({},{})", a.group.name(i / n), a.points[i % n]))
            .collect(),
        (0..k * n).map(|i| i % n).collect(),
        (0..k * n).map(|i| a.apply(i / n, i % n)).collect(),
        (0..n).map(|x| code(e, x)).collect(),
        (0..k * n)
            .map(|i| {
                let (g, x) = (i / n, i % n);
                code(a.group.inv(g), a.apply(g, x))
            })
            .collect(),
        // (h, g·x)(g, x) = (hg, x)
        |second, first| code(a.group.mul(second / n, first / n), first % n),
    )
    .expect("action groupoid satisfies the axioms")
}

/// A cover of a finite base set by pieces. The total space is the disjoint
/// union of the pieces; its points are `(piece, base point)` in piece order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCover {
    base: Vec<String>,
    pieces: Vec<Vec<usize>>,
    total: Vec<(usize, usize)>,
}

impl SetCover {
    pub fn new(base: Vec<String>, pieces: Vec<Vec<usize>>) -> Result<Self, ConstructionError> {
        let mut covered = vec![false; base.len()];
        for (i, piece) in pieces.iter().enumerate() {
            let mut seen = vec![false; base.len()];
            for &m in piece {
                if m >= base.len() {
                    return Err(ConstructionError::UnknownPoint(m));
                }
                if std::mem::replace(&mut seen[m], true) {
                    return Err(ConstructionError::DuplicateInPiece { piece: i, point: m });
                }
                covered[m] = true;
            }
        }
        if let Some(m) = covered.iter().position(|c| !c) {
            return Err(ConstructionError::NotSurjective(base[m].clone()));
        }
        let total = pieces
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |&m| (i, m)))
            .collect();
        Ok(Self {
            base,
            pieces,
            total,
        })
    }

    /// The one-piece cover `M -> M`.
    pub fn identity(base: Vec<String>) -> Self {
        let n = base.len();
        Self::new(base, vec![(0..n).collect()]).expect("identity cover")
    }

    /// One singleton piece per base point.
    pub fn singletons(base: Vec<String>) -> Self {
        let n = base.len();
        Self::new(base, (0..n).map(|m| vec![m]).collect()).expect("singleton cover")
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn base_size(&self) -> usize {
        self.base.len()
    }

    pub fn pieces(&self) -> &[Vec<usize>] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Points of the total space as `(piece, base point)`.
    pub fn total(&self) -> &[(usize, usize)] {
        &self.total
    }

    /// The projection `U -> M` as a vector over total-space points.
    pub fn projection(&self) -> Vec<usize> {
        self.total.iter().map(|&(_, m)| m).collect()
    }

    pub fn point_name(&self, u: usize) -> String {
        let (i, m) = self.total[u];
        format!("{}@{}", self.base[m], i)
    }

    /// Position of base point `m` within piece `i`.
    pub fn local_index(&self, piece: usize, m: usize) -> Option<usize> {
        self.pieces[piece].iter().position(|&x| x == m)
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].iter().copied().eq(0..self.base.len())
    }
}

/// `{(i, j) : a[i] == b[j]}` in lexicographic order.
pub fn set_fiber_product(a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if x == y {
                out.push((i, j));
            }
        }
    }
    out
}

/// The groupoid with objects `names` and identity arrows only.
pub fn discrete_groupoid(names: &[String]) -> FiniteGroupoid {
    let n = names.len();
    FiniteGroupoid::build(
        names.to_vec(),
        names.iter().map(|x| format!("1_{x}")).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).collect(),
        |g, _| g,
    )
    .expect("discrete groupoid")
}

/// The Čech groupoid `U ×_M U ⇉ U`: an arrow is a pair `(u, v)` over the
/// same base point, running from `u` to `v`.
pub fn cech_groupoid(c: &SetCover) -> FiniteGroupoid {
    let proj = c.projection();
    let pairs = set_fiber_product(&proj, &proj);
    let index = |u: usize, v: usize| pairs.binary_search(&(u, v)).expect("pair over one point");
    FiniteGroupoid::build(
        (0..proj.len()).map(|u| c.point_name(u)).collect(),
        pairs
            .iter()
            .map(|&(u, v)| format!("({},{})", c.point_name(u), c.point_name(v)))
            .collect(),
        pairs.iter().map(|&(u, _)| u).collect(),
        pairs.iter().map(|&(_, v)| v).collect(),
        (0..proj.len()).map(|u| index(u, u)).collect(),
        pairs.iter().map(|&(u, v)| index(v, u)).collect(),
        // (y, z)(x, y) = (x, z)
        |second, first| index(pairs[first].0, pairs[second].1),
    )
    .expect("Čech groupoid satisfies the axioms")
}

/// The pullback `f*G` along `f: N -> G_0`, whose arrows are triples
/// `(x, y, g)` with `g: f(x) -> f(y)`, together with the projection functor
/// `f*G -> G`.
pub fn pullback_groupoid(
    g: &Arc<FiniteGroupoid>,
    names: &[String],
    f: &[Obj],
) -> Result<(FiniteGroupoid, GroupoidFunctor), ConstructionError> {
    if names.len() != f.len() {
        return Err(ConstructionError::UnknownPoint(names.len().min(f.len())));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= g.object_count()) {
        return Err(ConstructionError::UnknownObject(bad));
    }
    let n = f.len();
    let mut triples: Vec<(usize, usize, Arrow)> = Vec::new();
    let mut offset = vec![0usize; n * n + 1];
    for x in 0..n {
        for y in 0..n {
            offset[x * n + y] = triples.len();
            for &a in g.hom(f[x], f[y]) {
                triples.push((x, y, a));
            }
        }
    }
    offset[n * n] = triples.len();
    let index = |x: usize, y: usize, a: Arrow| {
        let start = offset[x * n + y];
        let pos = g.hom(f[x], f[y]).iter().position(|&b| b == a).expect("arrow in hom");
        start + pos
    };
    let pulled = FiniteGroupoid::build(
        names.to_vec(),
        triples
            .iter()
            .map(|&(x, y, a)| format!("({},{},{})", names[x], names[y], g.arrow_name(a)))
            .collect(),
        triples.iter().map(|t| t.0).collect(),
        triples.iter().map(|t| t.1).collect(),
        (0..n).map(|x| index(x, x, g.unit(f[x]))).collect(),
        triples
            .iter()
            .map(|&(x, y, a)| index(y, x, g.inv(a)))
            .collect(),
        // (y, z, h)(x, y, g) = (x, z, hg)
        |second, first| {
            let (x, _, a) = triples[first];
            let (_, z, b) = triples[second];
            index(x, z, g.compose(b, a))
        },
    )
    .expect("pullback groupoid satisfies the axioms");
    let pulled = Arc::new(pulled);
    let functor = GroupoidFunctor::with_object_map(
        pulled.clone(),
        g.clone(),
        f.to_vec(),
        triples.iter().map(|t| t.2).collect(),
    )
    .expect("projection is a functor");
    Ok((Arc::unwrap_or_clone(pulled), functor))
}

/// Pullback along the projection of a cover of `G_0`.
pub fn cover_pullback(
    g: &Arc<FiniteGroupoid>,
    cover: &SetCover,
) -> (FiniteGroupoid, GroupoidFunctor) {
    let names: Vec<String> = (0..cover.total().len()).map(|u| cover.point_name(u)).collect();
    pullback_groupoid(g, &names, &cover.projection()).expect("cover maps into objects")
}

/// Whether `(x, g) ↦ t(g)` on `N ×_{f, G_0, s} G_1` is onto `G_0`; when it
/// is, the projection `f*G -> G` is an equivalence.
pub fn pullback_reaches_every_object(g: &FiniteGroupoid, f: &[Obj]) -> bool {
    g.objects().all(|y| f.iter().any(|&fx| !g.hom(fx, y).is_empty()))
}

/// The full subgroupoid on `subset`, i.e. arrows in `s⁻¹(U) ∩ t⁻¹(U)`.
/// Objects keep the order given in `subset`.
pub fn restrict(g: &FiniteGroupoid, subset: &[Obj]) -> Result<FiniteGroupoid, ConstructionError> {
    if let Some(&bad) = subset.iter().find(|&&x| x >= g.object_count()) {
        return Err(ConstructionError::UnknownObject(bad));
    }
    let mut new_obj = vec![usize::MAX; g.object_count()];
    for (i, &x) in subset.iter().enumerate() {
        new_obj[x] = i;
    }
    let kept: Vec<Arrow> = g
        .arrows()
        .filter(|&a| new_obj[g.src(a)] != usize::MAX && new_obj[g.tgt(a)] != usize::MAX)
        .collect();
    let mut new_arr = vec![usize::MAX; g.arrow_count()];
    for (i, &a) in kept.iter().enumerate() {
        new_arr[a] = i;
    }
    Ok(FiniteGroupoid::build(
        subset.iter().map(|&x| g.object_name(x).to_string()).collect(),
        kept.iter().map(|&a| g.arrow_name(a).to_string()).collect(),
        kept.iter().map(|&a| new_obj[g.src(a)]).collect(),
        kept.iter().map(|&a| new_obj[g.tgt(a)]).collect(),
        subset.iter().map(|&x| new_arr[g.unit(x)]).collect(),
        kept.iter().map(|&a| new_arr[g.inv(a)]).collect(),
        |second, first| new_arr[g.compose(kept[second], kept[first])],
    )
    .expect("restriction is a groupoid"))
}
