use thiserror::Error;

use super::functor::{same_groupoid, GroupoidFunctor};
use super::groupoid::{Arrow, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("functors or transformations do not share the required boundary")]
    BoundaryMismatch,
    #[error("component at {0} does not run from f(x) to g(x)")]
    ComponentEndpoints(String),
    #[error("naturality square fails at arrow {0}")]
    NotNatural(String),
    #[error("component list has wrong length")]
    WrongLength,
}

/// A natural transformation `from ⇒ to` between parallel functors. Every
/// component is invertible since the target is a groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    from: GroupoidFunctor,
    to: GroupoidFunctor,
    component: Vec<Arrow>,
}

impl NatTransform {
    pub fn new(
        from: GroupoidFunctor,
        to: GroupoidFunctor,
        component: Vec<Arrow>,
    ) -> Result<Self, NatError> {
        if !same_groupoid(from.source(), to.source()) || !same_groupoid(from.target(), to.target())
        {
            return Err(NatError::BoundaryMismatch);
        }
        let g = from.source().clone();
        let h = from.target().clone();
        if component.len() != g.object_count() || component.iter().any(|&a| a >= h.arrow_count())
        {
            return Err(NatError::WrongLength);
        }
        for x in g.objects() {
            let c = component[x];
            if h.src(c) != from.on_object(x) || h.tgt(c) != to.on_object(x) {
                return Err(NatError::ComponentEndpoints(g.object_name(x).to_string()));
            }
        }
        for a in g.arrows() {
            let (x, y) = (g.src(a), g.tgt(a));
            let lhs = h.compose(to.on_arrow(a), component[x]);
            let rhs = h.compose(component[y], from.on_arrow(a));
            if lhs != rhs {
                return Err(NatError::NotNatural(g.arrow_name(a).to_string()));
            }
        }
        Ok(Self {
            from,
            to,
            component,
        })
    }

    pub fn identity(f: &GroupoidFunctor) -> Self {
        let h = f.target();
        let component = f.obj_map().iter().map(|&y| h.unit(y)).collect();
        Self {
            from: f.clone(),
            to: f.clone(),
            component,
        }
    }

    pub fn from_functor(&self) -> &GroupoidFunctor {
        &self.from
    }

    pub fn to_functor(&self) -> &GroupoidFunctor {
        &self.to
    }

    pub fn components(&self) -> &[Arrow] {
        &self.component
    }

    pub fn at(&self, x: Obj) -> Arrow {
        self.component[x]
    }

    /// The componentwise inverse `to ⇒ from`.
    pub fn inverse(&self) -> Self {
        let h = self.from.target();
        Self {
            from: self.to.clone(),
            to: self.from.clone(),
            component: self.component.iter().map(|&a| h.inv(a)).collect(),
        }
    }
}

/// `β ∘ α` for `α: f ⇒ g` and `β: g ⇒ h`, with components `β_x ∘ α_x`.
pub fn vertical_compose(beta: &NatTransform, alpha: &NatTransform) -> Result<NatTransform, NatError> {
    if alpha.to != beta.from {
        return Err(NatError::BoundaryMismatch);
    }
    let h = alpha.from.target();
    let component = alpha
        .component
        .iter()
        .zip(&beta.component)
        .map(|(&a, &b)| h.compose(b, a))
        .collect();
    NatTransform::new(alpha.from.clone(), beta.to.clone(), component)
}

/// `β * α` for `α: f ⇒ g` between functors `G -> H` and `β: h ⇒ k` between
/// functors `H -> K`; a transformation `h∘f ⇒ k∘g` with components
/// `β_{g(x)} ∘ h(α_x)`.
pub fn horizontal_compose(
    beta: &NatTransform,
    alpha: &NatTransform,
) -> Result<NatTransform, NatError> {
    if !same_groupoid(alpha.from.target(), beta.from.source()) {
        return Err(NatError::BoundaryMismatch);
    }
    let k = beta.from.target();
    let from = alpha.from.then(&beta.from).map_err(|_| NatError::BoundaryMismatch)?;
    let to = alpha.to.then(&beta.to).map_err(|_| NatError::BoundaryMismatch)?;
    let component = alpha
        .from
        .source()
        .objects()
        .map(|x| {
            let gx = alpha.to.on_object(x);
            k.compose(beta.at(gx), beta.from.on_arrow(alpha.at(x)))
        })
        .collect();
    NatTransform::new(from, to, component)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingpd::groupoid::FiniteGroupoid;
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    fn bz2() -> Arc<FiniteGroupoid> {
        FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc()
    }

    #[test]
    fn vertical_identity_law() {
        let pt = FiniteGroupoid::point().into_arc();
        let f = GroupoidFunctor::constant(pt, bz2(), 0);
        let id = NatTransform::identity(&f);
        assert_eq!(vertical_compose(&id, &id).unwrap(), id);
    }

    #[test]
    fn sigma_squared_is_identity() {
        let pt = FiniteGroupoid::point().into_arc();
        let f = GroupoidFunctor::constant(pt, bz2(), 0);
        let alpha = NatTransform::new(f.clone(), f.clone(), vec![1]).unwrap();
        let sq = vertical_compose(&alpha, &alpha).unwrap();
        assert_eq!(sq, NatTransform::identity(&f));
    }

    #[test]
    fn boundary_mismatch_is_reported() {
        let pt = FiniteGroupoid::point().into_arc();
        let b = bz2();
        let f = GroupoidFunctor::constant(pt.clone(), b.clone(), 0);
        let g = GroupoidFunctor::constant(b.clone(), b.clone(), 0);
        let alpha = NatTransform::identity(&f);
        let beta = NatTransform::identity(&g);
        assert_eq!(
            vertical_compose(&beta, &alpha).unwrap_err(),
            NatError::BoundaryMismatch
        );
        // horizontal is fine: pt -> BZ2 -> BZ2
        assert!(horizontal_compose(&beta, &alpha).is_ok());
        assert_eq!(
            horizontal_compose(&alpha, &beta).unwrap_err(),
            NatError::BoundaryMismatch
        );
    }

    #[test]
    fn non_natural_family_is_rejected() {
        // id and the trivial functor BZ2 -> BZ2 are not isomorphic
        let b = bz2();
        let id = GroupoidFunctor::identity(b.clone());
        let triv = GroupoidFunctor::constant(b.clone(), b, 0);
        for c in 0..2 {
            let err = NatTransform::new(id.clone(), triv.clone(), vec![c]).unwrap_err();
            assert!(matches!(err, NatError::NotNatural(_)));
        }
    }
}
