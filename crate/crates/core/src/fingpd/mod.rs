//! Finite groupoids, functors and natural transformations.

mod enumerate;
mod equivalence;
mod functor;
mod groupoid;
mod natural;
mod orbit;

pub use enumerate::{
    find_natural_isomorphism, find_weak_inverse, for_each_functor, functors,
    natural_transformations, SearchCapExceeded, WeakInverse, WEAK_INVERSE_CAP,
};
pub use equivalence::{is_equivalence, EquivalenceVerdict, FaithfulnessWitness};
pub use functor::{compose_functors, FunctorError, GroupoidFunctor};
pub(crate) use functor::same_groupoid;
pub use groupoid::{
    validate_groupoid, Arrow, FiniteGroupoid, Obj, RawArrow, RawGroupoid, ValidationError,
    Violation,
};
pub use natural::{horizontal_compose, vertical_compose, NatError, NatTransform};
pub use orbit::{isotropy_group, orbit_space, Isotropy, OrbitPartition};
