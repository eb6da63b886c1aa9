use std::fmt;
use std::sync::Arc;

use super::cocycle::{classify_bundles, gauge_equivalent, restrict_cocycle, EdgeCocycle, GaugeTransform};
use super::graph::{Dart, Graph, GraphError};
use crate::group::{Element, FiniteGroup};

/// The two-arc cover of `C_n`: `A1` runs `v0 .. vk` along `e0 .. e(k-1)`,
/// `A2` runs `vk .. v(n-1), v0` along the remaining edges, `k = n/2`. The
/// arcs meet in the two vertices `v0` and `vk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCover {
    pub vertices: [Vec<usize>; 2],
    pub edges: [Vec<usize>; 2],
}

impl ArcCover {
    pub fn of_cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::ArcCoverUndefined(n));
        }
        let k = n / 2;
        Ok(Self {
            vertices: [(0..=k).collect(), (k..n).chain([0]).collect()],
            edges: [(0..k).collect(), (k..n).collect()],
        })
    }

    /// Vertices lying in both arcs.
    pub fn overlap(&self) -> Vec<usize> {
        self.vertices[0]
            .iter()
            .copied()
            .filter(|v| self.vertices[1].contains(v))
            .collect()
    }
}

/// One vertex of the overlap with the values of both arc transforms there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapValue {
    pub vertex: usize,
    pub first: Element,
    pub second: Element,
    /// `second⁻¹ · first`
    pub mismatch: Element,
}

#[derive(Clone, Debug)]
pub struct CircleReport {
    pub graph: Arc<Graph>,
    pub group: Arc<FiniteGroup>,
    pub cover: ArcCover,
    pub trivial: EdgeCocycle,
    pub twisted: EdgeCocycle,
    pub global_classes: usize,
    pub arc_classes: [usize; 2],
    /// Transforms taking the trivial cocycle to the twisted one on each arc,
    /// indexed by the arc's own vertex order.
    pub arc_witnesses: [GaugeTransform; 2],
    /// `None` certifies that no global transform exists.
    pub global_witness: Option<GaugeTransform>,
    /// Holonomy around `e0 · e1 · … · e(n-1)` of the trivial and twisted cocycles.
    pub holonomy: (Element, Element),
    pub overlap: Vec<OverlapValue>,
    /// Constant corrections `(a1, a2)` making the arc transforms agree on the
    /// overlap; empty means the local transforms never glue.
    pub gluing_corrections: Vec<(Element, Element)>,
}

impl CircleReport {
    pub fn obstruction(&self) -> bool {
        self.gluing_corrections.is_empty()
    }
}

pub fn circle_demo(n: usize) -> Result<CircleReport, GraphError> {
    circle_demo_with(n, Arc::new(FiniteGroup::cyclic(2)))
}

/// The circle counterexample over `C_n` with coefficients in `k`. The twisted
/// cocycle puts the first nonidentity element on `e0`.
pub fn circle_demo_with(n: usize, k: Arc<FiniteGroup>) -> Result<CircleReport, GraphError> {
    let cover = ArcCover::of_cycle(n)?;
    let graph = Arc::new(Graph::cycle(n));
    let sigma = k.elements().find(|&a| a != k.identity()).unwrap_or(k.identity());
    let trivial = EdgeCocycle::trivial(graph.clone(), k.clone());
    let mut labels = vec![k.identity(); n];
    labels[0] = sigma;
    let twisted = EdgeCocycle::new(graph.clone(), k.clone(), labels)?;

    let global_classes = classify_bundles(&graph, &k).count();
    let mut arc_classes = [0; 2];
    let mut arc_witnesses = Vec::new();
    for i in 0..2 {
        let a = restrict_cocycle(&trivial, &cover.vertices[i], &cover.edges[i])?;
        let b = restrict_cocycle(&twisted, &cover.vertices[i], &cover.edges[i])?;
        arc_classes[i] = classify_bundles(a.graph(), &k).count();
        arc_witnesses.push(gauge_equivalent(&a, &b)?.expect("arcs are trees"));
    }
    let arc_witnesses: [GaugeTransform; 2] = arc_witnesses.try_into().expect("two arcs");
    let global_witness = gauge_equivalent(&trivial, &twisted)?;

    let around: Vec<Dart> = (0..n).map(|edge| Dart { edge, forward: true }).collect();
    let holonomy = (trivial.holonomy(&around), twisted.holonomy(&around));

    let value = |i: usize, v: usize| {
        let pos = cover.vertices[i].iter().position(|&w| w == v).expect("arc vertex");
        arc_witnesses[i].values[pos]
    };
    let overlap: Vec<OverlapValue> = cover
        .overlap()
        .into_iter()
        .map(|vertex| {
            let (first, second) = (value(0, vertex), value(1, vertex));
            OverlapValue {
                vertex,
                first,
                second,
                mismatch: k.mul(k.inv(second), first),
            }
        })
        .collect();
    // arc transforms from trivial to twisted are t_i·a_i for constants a_i
    let gluing_corrections = k
        .elements()
        .flat_map(|a1| k.elements().map(move |a2| (a1, a2)))
        .filter(|&(a1, a2)| {
            overlap
                .iter()
                .all(|o| k.mul(o.first, a1) == k.mul(o.second, a2))
        })
        .collect();

    Ok(CircleReport {
        graph,
        group: k,
        cover,
        trivial,
        twisted,
        global_classes,
        arc_classes,
        arc_witnesses,
        global_witness,
        holonomy,
        overlap,
        gluing_corrections,
    })
}

impl fmt::Display for CircleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, k) = (&*self.graph, &*self.group);
        writeln!(
            f,
            "global classes: {}; arc classes: {}, {}; gluing obstruction: {}",
            self.global_classes,
            self.arc_classes[0],
            self.arc_classes[1],
            if self.obstruction() { "present" } else { "absent" }
        )?;
        writeln!(f, "circle: C_{} over {}", g.vertex_count(), k.describe())?;
        for i in 0..2 {
            let names: Vec<&str> = self.cover.vertices[i].iter().map(|&v| g.vertex_name(v)).collect();
            writeln!(f, "arc A{}: {}", i + 1, names.join(" "))?;
        }
        writeln!(f, "trivial cocycle: {}", self.trivial.format_labels())?;
        writeln!(f, "twisted cocycle: {}", self.twisted.format_labels())?;
        writeln!(
            f,
            "holonomy: trivial {}, twisted {}",
            k.name(self.holonomy.0),
            k.name(self.holonomy.1)
        )?;
        for i in 0..2 {
            let values: Vec<String> = self.cover.vertices[i]
                .iter()
                .zip(&self.arc_witnesses[i].values)
                .map(|(&v, &a)| format!("{}={}", g.vertex_name(v), k.name(a)))
                .collect();
            writeln!(f, "arc A{} witness: {}", i + 1, values.join(" "))?;
        }
        match &self.global_witness {
            Some(t) => writeln!(f, "global witness: {}", t.format(g, k))?,
            None => writeln!(f, "global witness: none (holonomies not conjugate)")?,
        }
        for o in &self.overlap {
            writeln!(
                f,
                "overlap {}: A1 {}, A2 {}, mismatch {}",
                g.vertex_name(o.vertex),
                k.name(o.first),
                k.name(o.second),
                k.name(o.mismatch)
            )?;
        }
        writeln!(f, "constant corrections that glue: {}", self.gluing_corrections.len())
    }
}
