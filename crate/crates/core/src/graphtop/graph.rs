use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} has an endpoint outside the vertex set")]
    DanglingEdge { edge: usize },
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("darts {0} and {1} do not meet")]
    NotAPath(usize, usize),
    #[error("cocycles live on different graphs or groups")]
    Mismatch,
    #[error("labels have wrong length or are out of range")]
    BadLabels,
    #[error("edge {edge} of the subgraph has an endpoint outside it")]
    NotSubgraph { edge: usize },
    #[error("a two-arc cover of C_{0} needs at least 3 vertices")]
    ArcCoverUndefined(usize),
}

/// A finite graph; loops and multi-edges are allowed. Each edge has a
/// forward orientation `tail -> head`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edge_names: Vec<String>,
    ends: Vec<(usize, usize)>,
}

/// An oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn reversed(self) -> Self {
        Dart {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

impl Graph {
    pub fn new(
        vertices: Vec<String>,
        edge_names: Vec<String>,
        ends: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if edge_names.len() != ends.len() {
            return Err(GraphError::BadLabels);
        }
        for names in [&vertices, &edge_names] {
            for (i, v) in names.iter().enumerate() {
                if names[..i].contains(v) {
                    return Err(GraphError::DuplicateName(v.clone()));
                }
            }
        }
        if let Some(edge) = ends
            .iter()
            .position(|&(a, b)| a >= vertices.len() || b >= vertices.len())
        {
            return Err(GraphError::DanglingEdge { edge });
        }
        Ok(Self {
            vertices,
            edge_names,
            ends,
        })
    }

    /// `C_n`: vertices `v0..v(n-1)`, edge `ei` from `vi` to `v(i+1 mod n)`.
    pub fn cycle(n: usize) -> Self {
        Self::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            (0..n).map(|i| format!("e{i}")).collect(),
            (0..n).map(|i| (i, (i + 1) % n)).collect(),
        )
        .expect("cycle graph")
    }

    /// The path `v0 - v1 - … - v(n-1)`.
    pub fn path(n: usize) -> Self {
        Self::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            (1..n).map(|i| format!("e{}", i - 1)).collect(),
            (1..n).map(|i| (i - 1, i)).collect(),
        )
        .expect("path graph")
    }

    /// Cycles of the given lengths glued at `v0`.
    pub fn wedge(lengths: &[usize]) -> Self {
        let mut vertices = vec!["v0".to_string()];
        let mut ends = Vec::new();
        for &len in lengths {
            let mut prev = 0;
            for _ in 1..len {
                vertices.push(format!("v{}", vertices.len()));
                let cur = vertices.len() - 1;
                ends.push((prev, cur));
                prev = cur;
            }
            ends.push((prev, 0));
        }
        let names = (0..ends.len()).map(|i| format!("e{i}")).collect();
        Self::new(vertices, names, ends).expect("wedge graph")
    }

    /// Replaces every edge by a path of two edges through a new vertex.
    pub fn subdivide(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut names = Vec::new();
        let mut ends = Vec::new();
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            let mid = vertices.len();
            vertices.push(format!("{}'", self.edge_names[e]));
            names.push(format!("{}a", self.edge_names[e]));
            ends.push((a, mid));
            names.push(format!("{}b", self.edge_names[e]));
            ends.push((mid, b));
        }
        Self::new(vertices, names, ends).expect("subdivision")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|v| v == name)
    }

    /// `(tail, head)` of the forward orientation.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn tail(&self, d: Dart) -> usize {
        let (a, b) = self.ends[d.edge];
        if d.forward {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d.reversed())
    }

    /// Darts leaving `v`, forward ones before backward ones per edge.
    pub fn darts_from(&self, v: usize) -> Vec<Dart> {
        let mut out = Vec::new();
        for e in 0..self.ends.len() {
            for forward in [true, false] {
                let d = Dart { edge: e, forward };
                if self.tail(d) == v {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Spanning forest by breadth-first search from the least vertex of each
    /// component. Returns the component of each vertex, the component
    /// roots, and for each non-root vertex the dart reaching it.
    pub fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertices.len();
        let mut component = vec![usize::MAX; n];
        let mut parent: Vec<Option<Dart>> = vec![None; n];
        let mut roots = Vec::new();
        let mut order = Vec::new();
        let mut tree_edge = vec![false; self.ends.len()];
        for r in 0..n {
            if component[r] != usize::MAX {
                continue;
            }
            let k = roots.len();
            roots.push(r);
            component[r] = k;
            let mut queue = std::collections::VecDeque::from([r]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for d in self.darts_from(v) {
                    let w = self.head(d);
                    if component[w] == usize::MAX {
                        component[w] = k;
                        parent[w] = Some(d);
                        tree_edge[d.edge] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        SpanningForest {
            component,
            roots,
            parent,
            order,
            tree_edge,
        }
    }

    /// The subgraph on the given vertices and edges, with vertices and edges
    /// renumbered in the given order.
    pub fn subgraph(&self, vertices: &[usize], edges: &[usize]) -> Result<Graph, GraphError> {
        let pos = |v: usize| vertices.iter().position(|&w| w == v);
        let mut ends = Vec::new();
        for &e in edges {
            if e >= self.ends.len() {
                return Err(GraphError::NotSubgraph { edge: e });
            }
            let (a, b) = self.ends[e];
            match (pos(a), pos(b)) {
                (Some(a), Some(b)) => ends.push((a, b)),
                _ => return Err(GraphError::NotSubgraph { edge: e }),
            }
        }
        if vertices.iter().any(|&v| v >= self.vertices.len()) {
            return Err(GraphError::NotSubgraph { edge: usize::MAX });
        }
        Graph::new(
            vertices.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges.iter().map(|&e| self.edge_names[e].clone()).collect(),
            ends,
        )
    }

    /// Whether the graph is a forest (no cycles).
    pub fn is_forest(&self) -> bool {
        let f = self.spanning_forest();
        f.tree_edge.iter().all(|&t| t)
    }
}

#[derive(Clone, Debug)]
pub struct SpanningForest {
    pub component: Vec<usize>,
    pub roots: Vec<usize>,
    pub parent: Vec<Option<Dart>>,
    /// Vertices in breadth-first order, roots first within each component.
    pub order: Vec<usize>,
    pub tree_edge: Vec<bool>,
}

impl SpanningForest {
    pub fn cycle_rank(&self) -> usize {
        self.tree_edge.iter().filter(|&&t| !t).count()
    }

    pub fn non_tree_edges(&self) -> Vec<usize> {
        (0..self.tree_edge.len()).filter(|&e| !self.tree_edge[e]).collect()
    }
}

/// A walk `d_1 · d_2 · …` starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath {
    pub start: usize,
    pub darts: Vec<Dart>,
}

/// Cancels adjacent `d · d̄` pairs until none remain.
pub fn reduce_path(g: &Graph, path: &EdgePath) -> Result<EdgePath, GraphError> {
    let mut at = path.start;
    for (i, &d) in path.darts.iter().enumerate() {
        if d.edge >= g.edge_count() || g.tail(d) != at {
            return Err(GraphError::NotAPath(i.saturating_sub(1), i));
        }
        at = g.head(d);
    }
    let mut stack: Vec<Dart> = Vec::new();
    for &d in &path.darts {
        if stack.last() == Some(&d.reversed()) {
            stack.pop();
        } else {
            stack.push(d);
        }
    }
    Ok(EdgePath {
        start: path.start,
        darts: stack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fwd(edge: usize) -> Dart {
        Dart { edge, forward: true }
    }

    #[test]
    fn backtrack_cancels() {
        let g = Graph::path(4);
        let p = EdgePath {
            start: 0,
            darts: vec![fwd(0), fwd(0).reversed()],
        };
        assert_eq!(reduce_path(&g, &p).unwrap().darts, vec![]);
        let p = EdgePath {
            start: 0,
            darts: vec![fwd(0), fwd(1), fwd(1).reversed(), fwd(1), fwd(2)],
        };
        assert_eq!(reduce_path(&g, &p).unwrap().darts, vec![fwd(0), fwd(1), fwd(2)]);
    }

    #[test]
    fn single_cancellation_in_the_middle() {
        // e1 · e2 · ē2 · e3 on a star with centre v1
        let g = Graph::new(
            (0..4).map(|i| format!("v{i}")).collect(),
            vec!["e1".into(), "e2".into(), "e3".into()],
            vec![(0, 1), (1, 2), (1, 3)],
        )
        .unwrap();
        let p = EdgePath {
            start: 0,
            darts: vec![fwd(0), fwd(1), fwd(1).reversed(), fwd(2)],
        };
        assert_eq!(reduce_path(&g, &p).unwrap().darts, vec![fwd(0), fwd(2)]);
    }

    #[test]
    fn broken_path_is_rejected() {
        let g = Graph::path(4);
        let p = EdgePath {
            start: 0,
            darts: vec![fwd(0), fwd(2)],
        };
        assert_eq!(reduce_path(&g, &p), Err(GraphError::NotAPath(0, 1)));
    }

    #[test]
    fn forest_and_rank() {
        assert!(Graph::path(5).is_forest());
        assert_eq!(Graph::cycle(5).spanning_forest().cycle_rank(), 1);
        assert_eq!(Graph::wedge(&[3, 4]).spanning_forest().cycle_rank(), 2);
        assert_eq!(Graph::cycle(3).subdivide().spanning_forest().cycle_rank(), 1);
    }
}
