use std::collections::BTreeSet;
use std::sync::Arc;

use super::graph::{Dart, Graph, GraphError, SpanningForest};
use crate::group::{Element, FiniteGroup};

/// Group labels on edges; the reversed edge carries the inverse label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCocycle {
    graph: Arc<Graph>,
    group: Arc<FiniteGroup>,
    labels: Vec<Element>,
}

impl EdgeCocycle {
    /// `labels[e]` is the label of the forward orientation of edge `e`.
    pub fn new(graph: Arc<Graph>, group: Arc<FiniteGroup>, labels: Vec<Element>) -> Result<Self, GraphError> {
        if labels.len() != graph.edge_count() || labels.iter().any(|&k| k >= group.order()) {
            return Err(GraphError::BadLabels);
        }
        Ok(Self {
            graph,
            group,
            labels,
        })
    }

    pub fn trivial(graph: Arc<Graph>, group: Arc<FiniteGroup>) -> Self {
        let labels = vec![group.identity(); graph.edge_count()];
        Self {
            graph,
            group,
            labels,
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn label(&self, d: Dart) -> Element {
        let k = self.labels[d.edge];
        if d.forward {
            k
        } else {
            self.group.inv(k)
        }
    }

    /// Product of labels along a walk, the first dart rightmost.
    pub fn holonomy(&self, darts: &[Dart]) -> Element {
        darts
            .iter()
            .fold(self.group.identity(), |acc, &d| self.group.mul(self.label(d), acc))
    }

    fn same_base(&self, other: &EdgeCocycle) -> bool {
        (Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph)
            && (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
    }

    pub fn format_labels(&self) -> String {
        (0..self.labels.len())
            .map(|e| format!("{}={}", self.graph.edge_name(e), self.group.name(self.labels[e])))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A vertex labelling `c`, acting by `label(e) ↦ c(head)·label(e)·c(tail)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransform {
    pub values: Vec<Element>,
}

impl GaugeTransform {
    pub fn identity(g: &Graph, k: &FiniteGroup) -> Self {
        Self {
            values: vec![k.identity(); g.vertex_count()],
        }
    }

    pub fn apply(&self, c: &EdgeCocycle) -> EdgeCocycle {
        let (g, k) = (&c.graph, &c.group);
        let labels = (0..g.edge_count())
            .map(|e| {
                let (t, h) = g.ends(e);
                k.mul(k.mul(self.values[h], c.labels[e]), k.inv(self.values[t]))
            })
            .collect();
        EdgeCocycle {
            graph: g.clone(),
            group: k.clone(),
            labels,
        }
    }

    /// Pointwise product `(self·other)(v) = self(v)·other(v)`: apply `other`
    /// first, then `self`.
    pub fn after(&self, other: &GaugeTransform, k: &FiniteGroup) -> Self {
        Self {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| k.mul(a, b)).collect(),
        }
    }

    pub fn inverse(&self, k: &FiniteGroup) -> Self {
        Self {
            values: self.values.iter().map(|&a| k.inv(a)).collect(),
        }
    }

    pub fn format(&self, g: &Graph, k: &FiniteGroup) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(v, &a)| format!("{}={}", g.vertex_name(v), k.name(a)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A transform `c` with `c·c1 = c2`. For each component, every value at the
/// root is tried (identity first) and propagated along the spanning tree;
/// the first that also matches off the tree wins.
pub fn gauge_equivalent(c1: &EdgeCocycle, c2: &EdgeCocycle) -> Result<Option<GaugeTransform>, GraphError> {
    if !c1.same_base(c2) {
        return Err(GraphError::Mismatch);
    }
    let (g, k) = (&*c1.graph, &*c1.group);
    let forest = g.spanning_forest();
    let mut values = vec![k.identity(); g.vertex_count()];
    let root_choices: Vec<Element> = std::iter::once(k.identity())
        .chain(k.elements().filter(|&a| a != k.identity()))
        .collect();
    for (comp, &root) in forest.roots.iter().enumerate() {
        let members: Vec<usize> = forest
            .order
            .iter()
            .copied()
            .filter(|&v| forest.component[v] == comp)
            .collect();
        let found = root_choices.iter().any(|&r| {
            values[root] = r;
            for &v in &members[1..] {
                let d = forest.parent[v].expect("non-root");
                let u = g.tail(d);
                // c(v) = c2(d)·c(u)·c1(d)⁻¹
                values[v] = k.mul(k.mul(c2.label(d), values[u]), k.inv(c1.label(d)));
            }
            (0..g.edge_count()).all(|e| {
                let (t, h) = g.ends(e);
                forest.component[t] != comp
                    || k.mul(k.mul(values[h], c1.labels[e]), k.inv(values[t])) == c2.labels[e]
            })
        });
        if !found {
            return Ok(None);
        }
    }
    Ok(Some(GaugeTransform { values }))
}

/// Gauge-fixes `c` so that every spanning-forest edge is labelled by the
/// identity, with the root of each component fixed to the identity.
pub fn gauge_fix(c: &EdgeCocycle, forest: &SpanningForest) -> (EdgeCocycle, GaugeTransform) {
    let (g, k) = (&*c.graph, &*c.group);
    let mut values = vec![k.identity(); g.vertex_count()];
    for &v in &forest.order {
        if let Some(d) = forest.parent[v] {
            // 1 = c(v)·label(d)·c(u)⁻¹
            values[v] = k.mul(values[g.tail(d)], k.inv(c.label(d)));
        }
    }
    let t = GaugeTransform { values };
    (t.apply(c), t)
}

/// Gauge classes of `K`-cocycles on a graph.
#[derive(Clone, Debug)]
pub struct Classification {
    /// Non-tree edges, in index order, whose labels parametrize classes.
    pub free_edges: Vec<usize>,
    /// Canonical label tuples on `free_edges`, sorted.
    pub classes: Vec<Vec<Element>>,
    pub representatives: Vec<EdgeCocycle>,
}

impl Classification {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

fn canonical_tuple(
    tuple: &[Element],
    free_edges: &[usize],
    forest: &SpanningForest,
    g: &Graph,
    k: &FiniteGroup,
) -> Vec<Element> {
    // conjugate each component's labels by its own element, independently
    let mut out = tuple.to_vec();
    for comp in 0..forest.roots.len() {
        let idx: Vec<usize> = (0..free_edges.len())
            .filter(|&i| forest.component[g.ends(free_edges[i]).0] == comp)
            .collect();
        let best = k
            .elements()
            .map(|a| idx.iter().map(|&i| k.conjugate(a, tuple[i])).collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        for (j, &i) in idx.iter().enumerate() {
            out[i] = best[j];
        }
    }
    out
}

/// The canonical class label of `c`: gauge-fix along the spanning forest,
/// read off the non-tree labels, take the least simultaneous conjugate per
/// component.
pub fn class_of(c: &EdgeCocycle) -> Vec<Element> {
    let g = &*c.graph;
    let forest = g.spanning_forest();
    let (fixed, _) = gauge_fix(c, &forest);
    let free = forest.non_tree_edges();
    let tuple: Vec<Element> = free.iter().map(|&e| fixed.labels[e]).collect();
    canonical_tuple(&tuple, &free, &forest, g, &c.group)
}

/// All gauge classes: tuples in `K^(E−V+components)` modulo simultaneous
/// conjugation per component, each with a representative that is the
/// identity on the spanning forest.
pub fn classify_bundles(graph: &Arc<Graph>, k: &Arc<FiniteGroup>) -> Classification {
    let forest = graph.spanning_forest();
    let free = forest.non_tree_edges();
    let mut classes = BTreeSet::new();
    let mut tuple = vec![0; free.len()];
    loop {
        classes.insert(canonical_tuple(&tuple, &free, &forest, graph, k));
        let mut i = tuple.len();
        loop {
            if i == 0 {
                let classes: Vec<Vec<Element>> = classes.into_iter().collect();
                let representatives = classes
                    .iter()
                    .map(|t| {
                        let mut labels = vec![k.identity(); graph.edge_count()];
                        for (j, &e) in free.iter().enumerate() {
                            labels[e] = t[j];
                        }
                        EdgeCocycle::new(graph.clone(), k.clone(), labels).expect("labels")
                    })
                    .collect();
                return Classification {
                    free_edges: free,
                    classes,
                    representatives,
                };
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < k.order() {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// Class count by brute force: every labelling, grouped by
/// `gauge_equivalent`. Exponential in the edge count.
pub fn count_classes_by_search(graph: &Arc<Graph>, k: &Arc<FiniteGroup>) -> usize {
    let mut reps: Vec<EdgeCocycle> = Vec::new();
    let mut labels = vec![0; graph.edge_count()];
    loop {
        let c = EdgeCocycle::new(graph.clone(), k.clone(), labels.clone()).expect("labels");
        if !reps
            .iter()
            .any(|r| gauge_equivalent(r, &c).expect("same base").is_some())
        {
            reps.push(c);
        }
        let mut i = labels.len();
        loop {
            if i == 0 {
                return reps.len();
            }
            i -= 1;
            labels[i] += 1;
            if labels[i] < k.order() {
                break;
            }
            labels[i] = 0;
        }
    }
}

/// `c` restricted to the subgraph on `vertices` and `edges` (renumbered in
/// the given order).
pub fn restrict_cocycle(c: &EdgeCocycle, vertices: &[usize], edges: &[usize]) -> Result<EdgeCocycle, GraphError> {
    let sub = c.graph.subgraph(vertices, edges)?;
    Ok(EdgeCocycle {
        graph: Arc::new(sub),
        group: c.group.clone(),
        labels: edges.iter().map(|&e| c.labels[e]).collect(),
    })
}
