use std::sync::Arc;

use thiserror::Error;

use super::groupoid::{Arrow, FiniteGroupoid, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("map has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("image index out of range")]
    OutOfRange,
    #[error("arrow {0} is not sent to an arrow between the images of its endpoints")]
    EndpointMismatch(String),
    #[error("composition not preserved on ({g}, {f})")]
    NotMultiplicative { g: String, f: String },
    #[error("unit at {0} not preserved")]
    UnitNotPreserved(String),
    #[error("inverse of {0} not preserved")]
    InverseNotPreserved(String),
    #[error("object map at {0} disagrees with s∘arr_map∘u")]
    ObjectMapMismatch(String),
    #[error("functors are not composable")]
    NotComposable,
}

/// Returns true when the two handles denote the same groupoid.
pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A functor between finite groupoids.
#[derive(Clone, Debug)]
pub struct GroupoidFunctor {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    obj_map: Vec<Obj>,
    arr_map: Vec<Arrow>,
}

impl PartialEq for GroupoidFunctor {
    fn eq(&self, other: &Self) -> bool {
        same_groupoid(&self.source, &other.source)
            && same_groupoid(&self.target, &other.target)
            && self.arr_map == other.arr_map
    }
}

impl Eq for GroupoidFunctor {}

impl GroupoidFunctor {
    /// A functor given by its arrow map; the object map is recovered as
    /// `s ∘ arr_map ∘ u`.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        arr_map: Vec<Arrow>,
    ) -> Result<Self, FunctorError> {
        if arr_map.len() != source.arrow_count() {
            return Err(FunctorError::WrongLength {
                expected: source.arrow_count(),
                found: arr_map.len(),
            });
        }
        if arr_map.iter().any(|&a| a >= target.arrow_count()) {
            return Err(FunctorError::OutOfRange);
        }
        let obj_map = source
            .objects()
            .map(|x| target.src(arr_map[source.unit(x)]))
            .collect();
        let f = Self {
            source,
            target,
            obj_map,
            arr_map,
        };
        f.check()?;
        Ok(f)
    }

    /// A functor given by both maps; the object map must agree with the
    /// arrow map.
    pub fn with_object_map(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        obj_map: Vec<Obj>,
        arr_map: Vec<Arrow>,
    ) -> Result<Self, FunctorError> {
        if obj_map.len() != source.object_count() {
            return Err(FunctorError::WrongLength {
                expected: source.object_count(),
                found: obj_map.len(),
            });
        }
        if obj_map.iter().any(|&y| y >= target.object_count()) {
            return Err(FunctorError::OutOfRange);
        }
        let f = Self::new(source, target, arr_map)?;
        for x in f.source.objects() {
            if f.obj_map[x] != obj_map[x] {
                return Err(FunctorError::ObjectMapMismatch(
                    f.source.object_name(x).to_string(),
                ));
            }
        }
        Ok(f)
    }

    fn check(&self) -> Result<(), FunctorError> {
        let (g, h) = (&*self.source, &*self.target);
        for a in g.arrows() {
            let fa = self.arr_map[a];
            if h.src(fa) != self.obj_map[g.src(a)] || h.tgt(fa) != self.obj_map[g.tgt(a)] {
                return Err(FunctorError::EndpointMismatch(g.arrow_name(a).to_string()));
            }
        }
        for x in g.objects() {
            if self.arr_map[g.unit(x)] != h.unit(self.obj_map[x]) {
                return Err(FunctorError::UnitNotPreserved(g.object_name(x).to_string()));
            }
        }
        for (p, q) in g.composable_pairs() {
            if self.arr_map[g.compose(p, q)] != h.compose(self.arr_map[p], self.arr_map[q]) {
                return Err(FunctorError::NotMultiplicative {
                    g: g.arrow_name(p).to_string(),
                    f: g.arrow_name(q).to_string(),
                });
            }
        }
        for a in g.arrows() {
            if self.arr_map[g.inv(a)] != h.inv(self.arr_map[a]) {
                return Err(FunctorError::InverseNotPreserved(g.arrow_name(a).to_string()));
            }
        }
        Ok(())
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let arr_map = g.arrows().collect();
        let obj_map = g.objects().collect();
        Self {
            source: g.clone(),
            target: g,
            obj_map,
            arr_map,
        }
    }

    /// The functor sending everything to the unit at `y`.
    pub fn constant(source: Arc<FiniteGroupoid>, target: Arc<FiniteGroupoid>, y: Obj) -> Self {
        let u = target.unit(y);
        Self {
            obj_map: vec![y; source.object_count()],
            arr_map: vec![u; source.arrow_count()],
            source,
            target,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn arr_map(&self) -> &[Arrow] {
        &self.arr_map
    }

    pub fn on_object(&self, x: Obj) -> Obj {
        self.obj_map[x]
    }

    pub fn on_arrow(&self, a: Arrow) -> Arrow {
        self.arr_map[a]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<GroupoidFunctor, FunctorError> {
        if !same_groupoid(&self.target, &next.source) {
            return Err(FunctorError::NotComposable);
        }
        Ok(GroupoidFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            obj_map: self.obj_map.iter().map(|&y| next.obj_map[y]).collect(),
            arr_map: self.arr_map.iter().map(|&b| next.arr_map[b]).collect(),
        })
    }

    /// Bijective on objects and on arrows.
    pub fn is_isomorphism(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            let mut hit = vec![false; n];
            map.len() == n && map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
        }
        bijective(&self.obj_map, self.target.object_count())
            && bijective(&self.arr_map, self.target.arrow_count())
    }
}

/// `g ∘ f`.
pub fn compose_functors(
    g: &GroupoidFunctor,
    f: &GroupoidFunctor,
) -> Result<GroupoidFunctor, FunctorError> {
    f.then(g)
}
