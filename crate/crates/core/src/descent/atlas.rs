use std::sync::Arc;

use super::datum::DescentError;
use crate::bibundle::{is_principal, Point, PrincipalBundle, RightAction};
use crate::fingpd::{Arrow, FiniteGroupoid, GroupoidFunctor, Obj};

/// `M ×_{BG} G_0` for the map `M -> BG` given by a bundle `P`: the total
/// space of `P` with its projections to `M` and to `G_0`.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub points: Vec<String>,
    pub to_base: Vec<usize>,
    pub to_objects: Vec<Obj>,
    pub action: RightAction,
}

impl FiberProduct {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Packages an action with a projection onto `base_size` points after
/// checking that the projection is onto and the action is free and
/// transitive on fibers.
pub fn fiber_product_from_parts(
    action: RightAction,
    points: Vec<String>,
    to_base: Vec<usize>,
    base_size: usize,
) -> Result<FiberProduct, DescentError> {
    if let Some(w) = is_principal(&action, &to_base, base_size).witness {
        return Err(DescentError::NotPrincipal(w));
    }
    Ok(FiberProduct {
        points,
        to_objects: action.anchor().to_vec(),
        to_base,
        action,
    })
}

pub fn fiber_product_with_atlas(p: &PrincipalBundle) -> Result<FiberProduct, DescentError> {
    fiber_product_from_parts(
        p.action().clone(),
        p.point_names().to_vec(),
        p.projection().to_vec(),
        p.base_size(),
    )
}

/// An arrow `(x, y, α)` of the reconstructed groupoid: `α` maps the fiber of
/// `t: G_1 -> G_0` over `x` to the fiber over `y`, listed along `fiber(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasArrow {
    pub source: Obj,
    pub target: Obj,
    pub alpha: Vec<Arrow>,
}

#[derive(Clone, Debug)]
pub struct AtlasReconstruction {
    pub groupoid: Arc<FiniteGroupoid>,
    pub triples: Vec<AtlasArrow>,
    /// `(x, y, α) ↦ α(1_x)`, an isomorphism onto the input groupoid.
    pub iso: GroupoidFunctor,
}

/// Arrows of `g` with target `x`, in arrow order.
fn fiber(g: &FiniteGroupoid, x: Obj) -> Vec<Arrow> {
    g.arrows().filter(|&a| g.tgt(a) == x).collect()
}

/// Whether `alpha` (listed along `fiber(x)`) is an equivariant bijection
/// onto `fiber(y)`.
fn is_torsor_iso(g: &FiniteGroupoid, x: Obj, y: Obj, alpha: &[Arrow]) -> bool {
    let (fx, fy) = (fiber(g, x), fiber(g, y));
    let at = |k: Arrow| fx.iter().position(|&a| a == k).map(|i| alpha[i]);
    let mut image = alpha.to_vec();
    image.sort_unstable();
    fy.len() == fx.len()
        && image == fy
        && fx.iter().zip(alpha).all(|(&k, &a)| {
            g.src(a) == g.src(k)
                && g.arrows()
                    .filter(|&h| g.tgt(h) == g.src(k))
                    .all(|h| at(g.compose(k, h)) == Some(g.compose(a, h)))
        })
}

/// Rebuilds `g` from its canonical atlas `G_0 -> BG`. Arrows are the
/// triples `(x, y, α)`; candidates for `α` are `k ↦ c∘k` for each `c` in
/// `fiber(y)` leaving `x`, and each is checked to be an equivariant
/// bijection.
pub fn groupoid_from_atlas(g: &Arc<FiniteGroupoid>) -> AtlasReconstruction {
    let mut triples = Vec::new();
    for x in g.objects() {
        let fx = fiber(g, x);
        for y in g.objects() {
            let mut found: Vec<AtlasArrow> = fiber(g, y)
                .into_iter()
                .filter(|&c| g.src(c) == x)
                .map(|c| fx.iter().map(|&k| g.compose(c, k)).collect::<Vec<_>>())
                .filter(|alpha| is_torsor_iso(g, x, y, alpha))
                .map(|alpha| AtlasArrow {
                    source: x,
                    target: y,
                    alpha,
                })
                .collect();
            found.sort_by(|a, b| a.alpha.cmp(&b.alpha));
            triples.extend(found);
        }
    }
    let one_at = |t: &AtlasArrow| -> Arrow {
        let i = fiber(g, t.source)
            .iter()
            .position(|&a| a == g.unit(t.source))
            .expect("unit in fiber");
        t.alpha[i]
    };
    let index = |x: Obj, y: Obj, alpha: &[Arrow]| -> Point {
        triples
            .iter()
            .position(|t| t.source == x && t.target == y && t.alpha == alpha)
            .expect("triples closed under structure maps")
    };
    let apply = |t: &AtlasArrow, k: Arrow| {
        let i = fiber(g, t.source).iter().position(|&a| a == k).expect("in fiber");
        t.alpha[i]
    };
    let names = triples
        .iter()
        .map(|t| {
            format!(
                "({},{},{})",
                g.object_name(t.source),
                g.object_name(t.target),
                g.arrow_name(one_at(t))
            )
        })
        .collect();
    let unit = g
        .objects()
        .map(|x| index(x, x, &fiber(g, x)))
        .collect();
    let inv = triples
        .iter()
        .map(|t| {
            let back: Vec<Arrow> = fiber(g, t.target)
                .into_iter()
                .map(|k| {
                    let i = t.alpha.iter().position(|&a| a == k).expect("bijective");
                    fiber(g, t.source)[i]
                })
                .collect();
            index(t.target, t.source, &back)
        })
        .collect();
    let rebuilt = FiniteGroupoid::build(
        g.object_names().to_vec(),
        names,
        triples.iter().map(|t| t.source).collect(),
        triples.iter().map(|t| t.target).collect(),
        unit,
        inv,
        |second, first| {
            let (b, a) = (&triples[second], &triples[first]);
            let ba: Vec<Arrow> = a.alpha.iter().map(|&k| apply(b, k)).collect();
            index(a.source, b.target, &ba)
        },
    )
    .expect("reconstructed groupoid satisfies the axioms")
    .into_arc();
    let iso = GroupoidFunctor::with_object_map(
        rebuilt.clone(),
        g.clone(),
        g.objects().collect(),
        triples.iter().map(one_at).collect(),
    )
    .expect("evaluation at the unit is a functor");
    debug_assert!(iso.is_isomorphism());
    AtlasReconstruction {
        groupoid: rebuilt,
        triples,
        iso,
    }
}
