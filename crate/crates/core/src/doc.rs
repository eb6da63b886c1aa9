//! JSON documents with a `kind` tag. Writing uses two-space indentation and
//! a trailing newline, and reading then writing gives back the same bytes.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bibundle::{Bibundle, Point, PrincipalBundle, RightAction};
use crate::category::{FiniteCategory, RawCategory};
use crate::constructions::SetCover;
use crate::descent::{DescentDatum, Transition};
use crate::fingpd::{FiniteGroupoid, GroupoidFunctor, RawGroupoid};
use crate::graphtop::{EdgeCocycle, Graph};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
}

fn invalid(e: impl std::fmt::Display) -> DocError {
    DocError::Invalid(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Groupoid(RawGroupoid),
    Functor(RawFunctor),
    Bibundle(RawBibundle),
    Cover(RawCover),
    Bundle(RawBundle),
    Descent(RawDescent),
    Graph(RawGraph),
    Cocycle(RawCocycle),
    Category(RawCategory),
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Functor(_) => "functor",
            Document::Bibundle(_) => "bibundle",
            Document::Cover(_) => "cover",
            Document::Bundle(_) => "bundle",
            Document::Descent(_) => "descent",
            Document::Graph(_) => "graph",
            Document::Cocycle(_) => "cocycle",
            Document::Category(_) => "category",
        }
    }

    fn wrong(&self, expected: &'static str) -> DocError {
        DocError::WrongKind {
            expected,
            found: self.kind(),
        }
    }

    pub fn groupoid(&self) -> Result<FiniteGroupoid, DocError> {
        match self {
            Document::Groupoid(r) => FiniteGroupoid::from_raw(r).map_err(invalid),
            d => Err(d.wrong("groupoid")),
        }
    }

    pub fn bibundle(&self) -> Result<Bibundle, DocError> {
        match self {
            Document::Bibundle(r) => r.build(),
            Document::Functor(r) => Ok(Bibundle::from_functor(&r.build()?)),
            d => Err(d.wrong("bibundle")),
        }
    }
}

fn lookup<'a>(names: &'a [String]) -> impl Fn(&str) -> Result<usize, DocError> + 'a {
    let map: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    move |n| map.get(n).copied().ok_or_else(|| DocError::Invalid(format!("unknown name {n:?}")))
}

fn groupoid_arc(raw: &RawGroupoid) -> Result<Arc<FiniteGroupoid>, DocError> {
    Ok(FiniteGroupoid::from_raw(raw).map_err(invalid)?.into_arc())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFunctor {
    pub source: RawGroupoid,
    pub target: RawGroupoid,
    /// `[arrow, image]`
    pub arrows: Vec<(String, String)>,
}

impl RawFunctor {
    pub fn from_functor(f: &GroupoidFunctor) -> Self {
        let (g, h) = (f.source(), f.target());
        Self {
            source: g.to_raw(),
            target: h.to_raw(),
            arrows: g
                .arrows()
                .map(|a| (g.arrow_name(a).to_string(), h.arrow_name(f.on_arrow(a)).to_string()))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<GroupoidFunctor, DocError> {
        let (g, h) = (groupoid_arc(&self.source)?, groupoid_arc(&self.target)?);
        let mut arr_map = vec![None; g.arrow_count()];
        let (ga, ha) = (lookup(g.arrow_names()), lookup(h.arrow_names()));
        for (a, b) in &self.arrows {
            arr_map[ga(a)?] = Some(ha(b)?);
        }
        let arr_map = arr_map
            .into_iter()
            .enumerate()
            .map(|(a, b)| b.ok_or_else(|| DocError::Invalid(format!("no image for {}", g.arrow_name(a)))))
            .collect::<Result<_, _>>()?;
        GroupoidFunctor::new(g.clone(), h.clone(), arr_map).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBibundlePoint {
    pub name: String,
    pub left_anchor: String,
    pub right_anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBibundle {
    pub left: RawGroupoid,
    pub right: RawGroupoid,
    pub points: Vec<RawBibundlePoint>,
    /// `[g, p, g·p]`
    pub left_action: Vec<(String, String, String)>,
    /// `[p, h, p·h]`
    pub right_action: Vec<(String, String, String)>,
}

impl RawBibundle {
    pub fn from_bibundle(b: &Bibundle) -> Self {
        let (g, h) = (b.left_groupoid(), b.right_groupoid());
        let name = |p: Point| b.point_name(p).to_string();
        let n = b.point_count();
        Self {
            left: g.to_raw(),
            right: h.to_raw(),
            points: (0..n)
                .map(|p| RawBibundlePoint {
                    name: name(p),
                    left_anchor: g.object_name(b.left_anchor()[p]).to_string(),
                    right_anchor: h.object_name(b.right_anchor()[p]).to_string(),
                })
                .collect(),
            left_action: (0..n)
                .flat_map(|p| {
                    b.left_action()
                        .acting_arrows(p)
                        .map(|a| {
                            let q = b.act_left(a, p).expect("acting arrow");
                            (g.arrow_name(a).to_string(), name(p), name(q))
                        })
                        .collect::<Vec<_>>()
                })
                .collect(),
            right_action: (0..n)
                .flat_map(|p| {
                    b.right_action()
                        .acting_arrows(p)
                        .map(|k| {
                            let q = b.act_right(p, k).expect("acting arrow");
                            (name(p), h.arrow_name(k).to_string(), name(q))
                        })
                        .collect::<Vec<_>>()
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Bibundle, DocError> {
        let (g, h) = (groupoid_arc(&self.left)?, groupoid_arc(&self.right)?);
        let names: Vec<String> = self.points.iter().map(|p| p.name.clone()).collect();
        let (pi, go, ho) = (lookup(&names), lookup(g.object_names()), lookup(h.object_names()));
        let (ga, ha) = (lookup(g.arrow_names()), lookup(h.arrow_names()));
        let left_anchor = self.points.iter().map(|p| go(&p.left_anchor)).collect::<Result<_, _>>()?;
        let right_anchor = self.points.iter().map(|p| ho(&p.right_anchor)).collect::<Result<_, _>>()?;
        let mut left = HashMap::new();
        for (a, p, q) in &self.left_action {
            left.insert((ga(a)?, pi(p)?), pi(q)?);
        }
        let mut right = HashMap::new();
        for (p, k, q) in &self.right_action {
            right.insert((pi(p)?, ha(k)?), pi(q)?);
        }
        Bibundle::from_tables(
            g.clone(),
            h.clone(),
            names.clone(),
            left_anchor,
            right_anchor,
            |a, p| left.get(&(a, p)).copied(),
            |p, k| right.get(&(p, k)).copied(),
        )
        .map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCover {
    pub base: Vec<String>,
    pub pieces: Vec<Vec<String>>,
}

impl RawCover {
    pub fn from_cover(c: &SetCover) -> Self {
        Self {
            base: c.base().to_vec(),
            pieces: c
                .pieces()
                .iter()
                .map(|u| u.iter().map(|&m| c.base()[m].clone()).collect())
                .collect(),
        }
    }

    pub fn build(&self) -> Result<SetCover, DocError> {
        let bi = lookup(&self.base);
        let pieces = self
            .pieces
            .iter()
            .map(|u| u.iter().map(|m| bi(m)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        SetCover::new(self.base.clone(), pieces).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBundlePoint {
    pub name: String,
    pub over: String,
    pub anchor: String,
}

/// A principal bundle without its groupoid: points and the right action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLocalBundle {
    pub points: Vec<RawBundlePoint>,
    /// `[p, h, p·h]`
    pub action: Vec<(String, String, String)>,
}

impl RawLocalBundle {
    fn from_bundle(b: &PrincipalBundle) -> Self {
        let h = b.groupoid();
        let name = |p: Point| b.point_names()[p].clone();
        Self {
            points: (0..b.point_count())
                .map(|p| RawBundlePoint {
                    name: name(p),
                    over: b.base_names()[b.projection()[p]].clone(),
                    anchor: h.object_name(b.anchor()[p]).to_string(),
                })
                .collect(),
            action: (0..b.point_count())
                .flat_map(|p| {
                    b.action()
                        .acting_arrows(p)
                        .map(|k| (name(p), h.arrow_name(k).to_string(), name(b.action().act(p, k).expect("acting"))))
                        .collect::<Vec<_>>()
                })
                .collect(),
        }
    }

    fn build(&self, h: &Arc<FiniteGroupoid>, base: Vec<String>) -> Result<PrincipalBundle, DocError> {
        let names: Vec<String> = self.points.iter().map(|p| p.name.clone()).collect();
        let (pi, bi, ho, ha) = (lookup(&names), lookup(&base), lookup(h.object_names()), lookup(h.arrow_names()));
        let anchor = self.points.iter().map(|p| ho(&p.anchor)).collect::<Result<_, _>>()?;
        let proj = self.points.iter().map(|p| bi(&p.over)).collect::<Result<_, _>>()?;
        let mut table = HashMap::new();
        for (p, k, q) in &self.action {
            table.insert((pi(p)?, ha(k)?), pi(q)?);
        }
        let action = RightAction::new(h.clone(), anchor, |p, k| table.get(&(p, k)).copied()).map_err(invalid)?;
        PrincipalBundle::new(action, names.clone(), base.clone(), proj).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBundle {
    pub groupoid: RawGroupoid,
    pub base: Vec<String>,
    pub points: Vec<RawBundlePoint>,
    /// `[p, h, p·h]`
    pub action: Vec<(String, String, String)>,
}

impl RawBundle {
    pub fn from_bundle(b: &PrincipalBundle) -> Self {
        let local = RawLocalBundle::from_bundle(b);
        Self {
            groupoid: b.groupoid().to_raw(),
            base: b.base_names().to_vec(),
            points: local.points,
            action: local.action,
        }
    }

    pub fn build(&self) -> Result<PrincipalBundle, DocError> {
        let local = RawLocalBundle {
            points: self.points.clone(),
            action: self.action.clone(),
        };
        local.build(&groupoid_arc(&self.groupoid)?, self.base.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTransition {
    pub i: usize,
    pub j: usize,
    /// `[p in piece j, φ_ij(p) in piece i]`
    pub map: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDescent {
    pub groupoid: RawGroupoid,
    pub cover: RawCover,
    pub pieces: Vec<RawLocalBundle>,
    pub transitions: Vec<RawTransition>,
}

impl RawDescent {
    pub fn from_datum(d: &DescentDatum) -> Self {
        let b = d.bundles();
        Self {
            groupoid: d.groupoid().map(|g| g.to_raw()).unwrap_or_default(),
            cover: RawCover::from_cover(d.cover()),
            pieces: b.iter().map(RawLocalBundle::from_bundle).collect(),
            transitions: d
                .transitions()
                .iter()
                .map(|t| RawTransition {
                    i: t.i,
                    j: t.j,
                    map: t
                        .map
                        .iter()
                        .map(|&(p, q)| (b[t.j].point_names()[p].clone(), b[t.i].point_names()[q].clone()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<DescentDatum, DocError> {
        let h = groupoid_arc(&self.groupoid)?;
        let cover = self.cover.build()?;
        if self.pieces.len() != cover.piece_count() {
            return Err(DocError::Invalid(format!(
                "{} pieces in the cover, {} local bundles",
                cover.piece_count(),
                self.pieces.len()
            )));
        }
        let bundles: Vec<PrincipalBundle> = self
            .pieces
            .iter()
            .zip(&self.cover.pieces)
            .map(|(raw, names)| raw.build(&h, names.clone()))
            .collect::<Result<_, _>>()?;
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                if t.i >= bundles.len() || t.j >= bundles.len() {
                    return Err(DocError::Invalid(format!("transition ({}, {}) out of range", t.i, t.j)));
                }
                let (pj, pi) = (lookup(bundles[t.j].point_names()), lookup(bundles[t.i].point_names()));
                let map = t
                    .map
                    .iter()
                    .map(|(p, q)| Ok((pj(p)?, pi(q)?)))
                    .collect::<Result<Vec<_>, DocError>>()?;
                Ok(Transition { i: t.i, j: t.j, map })
            })
            .collect::<Result<_, _>>()?;
        DescentDatum::new(cover, bundles, transitions).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    pub name: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
}

impl RawGraph {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            vertices: g.vertex_names().to_vec(),
            edges: (0..g.edge_count())
                .map(|e| {
                    let (t, h) = g.ends(e);
                    RawEdge {
                        name: g.edge_name(e).to_string(),
                        tail: g.vertex_name(t).to_string(),
                        head: g.vertex_name(h).to_string(),
                    }
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Graph, DocError> {
        let vi = lookup(&self.vertices);
        let ends = self
            .edges
            .iter()
            .map(|e| Ok((vi(&e.tail)?, vi(&e.head)?)))
            .collect::<Result<_, DocError>>()?;
        Graph::new(
            self.vertices.clone(),
            self.edges.iter().map(|e| e.name.clone()).collect(),
            ends,
        )
        .map_err(invalid)
    }
}

/// A finite group by element names and Cayley table, `table[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl RawGroup {
    pub fn from_group(k: &FiniteGroup) -> Self {
        Self {
            elements: k.names().to_vec(),
            table: k
                .elements()
                .map(|a| k.elements().map(|b| k.name(k.mul(a, b)).to_string()).collect())
                .collect(),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, DocError> {
        let ei = lookup(&self.elements);
        let table = self
            .table
            .iter()
            .flatten()
            .map(|x| ei(x))
            .collect::<Result<_, _>>()?;
        if self.table.len() != self.elements.len() || self.table.iter().any(|r| r.len() != self.elements.len()) {
            return Err(DocError::Invalid("Cayley table is not square".into()));
        }
        FiniteGroup::from_table(self.elements.clone(), table).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCocycle {
    pub graph: RawGraph,
    pub group: RawGroup,
    /// `[edge, label of its forward orientation]`
    pub labels: Vec<(String, String)>,
}

impl RawCocycle {
    pub fn from_cocycle(c: &EdgeCocycle) -> Self {
        let (g, k) = (c.graph(), c.group());
        Self {
            graph: RawGraph::from_graph(g),
            group: RawGroup::from_group(k),
            labels: (0..g.edge_count())
                .map(|e| (g.edge_name(e).to_string(), k.name(c.labels()[e]).to_string()))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<EdgeCocycle, DocError> {
        let g = Arc::new(self.graph.build()?);
        let k = Arc::new(self.group.build()?);
        let (ei, ki) = (lookup(g.edge_names()), lookup(k.names()));
        let mut labels = vec![None; g.edge_count()];
        for (e, a) in &self.labels {
            labels[ei(e)?] = Some(ki(a)?);
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(e, a)| a.ok_or_else(|| DocError::Invalid(format!("edge {} has no label", g.edge_name(e)))))
            .collect::<Result<_, _>>()?;
        EdgeCocycle::new(g.clone(), k.clone(), labels).map_err(invalid)
    }
}

impl From<&FiniteCategory> for Document {
    fn from(c: &FiniteCategory) -> Self {
        Document::Category(c.to_raw())
    }
}

impl From<&FiniteGroupoid> for Document {
    fn from(g: &FiniteGroupoid) -> Self {
        Document::Groupoid(g.to_raw())
    }
}

impl From<&Bibundle> for Document {
    fn from(b: &Bibundle) -> Self {
        Document::Bibundle(RawBibundle::from_bibundle(b))
    }
}

impl From<&GroupoidFunctor> for Document {
    fn from(f: &GroupoidFunctor) -> Self {
        Document::Functor(RawFunctor::from_functor(f))
    }
}

impl From<&PrincipalBundle> for Document {
    fn from(b: &PrincipalBundle) -> Self {
        Document::Bundle(RawBundle::from_bundle(b))
    }
}

impl From<&DescentDatum> for Document {
    fn from(d: &DescentDatum) -> Self {
        Document::Descent(RawDescent::from_datum(d))
    }
}

impl From<&Graph> for Document {
    fn from(g: &Graph) -> Self {
        Document::Graph(RawGraph::from_graph(g))
    }
}

impl From<&EdgeCocycle> for Document {
    fn from(c: &EdgeCocycle) -> Self {
        Document::Cocycle(RawCocycle::from_cocycle(c))
    }
}

impl From<&SetCover> for Document {
    fn from(c: &SetCover) -> Self {
        Document::Cover(RawCover::from_cover(c))
    }
}
