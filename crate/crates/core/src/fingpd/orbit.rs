use super::groupoid::{Arrow, FiniteGroupoid, Obj};
use crate::group::FiniteGroup;

/// Isotropy group at the representative of an orbit.
#[derive(Clone, Debug)]
pub struct Isotropy {
    pub representative: Obj,
    /// Loops at the representative; group element `i` is `loops[i]`.
    pub loops: Vec<Arrow>,
    pub group: FiniteGroup,
}

/// The orbit space `G_0/G_1` together with isotropy data per class.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    /// Classes in order of their first object; each class is sorted.
    pub classes: Vec<Vec<Obj>>,
    /// Class index of every object.
    pub quotient: Vec<usize>,
    pub isotropy: Vec<Isotropy>,
}

impl OrbitPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn same_orbit(&self, x: Obj, y: Obj) -> bool {
        self.quotient[x] == self.quotient[y]
    }
}

/// Isotropy group of `g` at `x`, with elements indexed like `g.loops(x)`.
pub fn isotropy_group(g: &FiniteGroupoid, x: Obj) -> Isotropy {
    let loops = g.loops(x).to_vec();
    let pos = |a: Arrow| loops.iter().position(|&b| b == a).expect("loop");
    let names = loops.iter().map(|&a| g.arrow_name(a).to_string()).collect();
    let group = FiniteGroup::from_fn(names, |i, j| pos(g.compose(loops[i], loops[j])))
        .expect("loops at an object form a group");
    Isotropy {
        representative: x,
        loops,
        group,
    }
}

pub fn orbit_space(g: &FiniteGroupoid) -> OrbitPartition {
    let n = g.object_count();
    let mut quotient = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in g.objects() {
        if quotient[x] != usize::MAX {
            continue;
        }
        let k = classes.len();
        // in a groupoid every object reachable from x is joined to x by one arrow
        let class: Vec<Obj> = g.objects().filter(|&y| !g.hom(x, y).is_empty()).collect();
        for &y in &class {
            quotient[y] = k;
        }
        classes.push(class);
    }
    let isotropy = classes.iter().map(|c| isotropy_group(g, c[0])).collect();
    OrbitPartition {
        classes,
        quotient,
        isotropy,
    }
}
