use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FiniteGroup;

/// Index of an object of a finite groupoid.
pub type Obj = usize;
/// Index of an arrow of a finite groupoid.
pub type Arrow = usize;

/// One axiom violation found while validating a groupoid. Witnesses are
/// reported by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingTable(&'static str),
    DuplicateObject(String),
    DuplicateArrow(String),
    UnknownObject(String),
    UnknownArrow(String),
    /// A composition entry `(g, f)` with `src(g) != tgt(f)`.
    NonComposablePairInTable { g: String, f: String },
    /// A composable pair without a composite.
    MissingComposite { g: String, f: String },
    ConflictingComposite { g: String, f: String },
    /// The composite of `(g, f)` does not run from `src(f)` to `tgt(g)`.
    CompositeEndpoints { g: String, f: String, composite: String },
    /// `(h g) f != h (g f)`.
    AssociativityViolation { h: String, g: String, f: String },
    /// Missing or wrong unit, or a unit law failing against `arrow`.
    UnitViolation { arrow: String },
    /// `inv(f)` is missing, has the wrong endpoints, or is not a two-sided inverse.
    InverseViolation { arrow: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingTable(t) => write!(f, "MissingTable: {t}"),
            Violation::DuplicateObject(x) => write!(f, "DuplicateObject: {x}"),
            Violation::DuplicateArrow(a) => write!(f, "DuplicateArrow: {a}"),
            Violation::UnknownObject(x) => write!(f, "UnknownObject: {x}"),
            Violation::UnknownArrow(a) => write!(f, "UnknownArrow: {a}"),
            Violation::NonComposablePairInTable { g, f: ff } => {
                write!(f, "NonComposablePairInTable: ({g}, {ff})")
            }
            Violation::MissingComposite { g, f: ff } => write!(f, "MissingComposite: ({g}, {ff})"),
            Violation::ConflictingComposite { g, f: ff } => {
                write!(f, "ConflictingComposite: ({g}, {ff})")
            }
            Violation::CompositeEndpoints { g, f: ff, composite } => {
                write!(f, "CompositeEndpoints: ({g}, {ff}) -> {composite}")
            }
            Violation::AssociativityViolation { h, g, f: ff } => {
                write!(f, "AssociativityViolation: ({h}, {g}, {ff})")
            }
            Violation::UnitViolation { arrow } => write!(f, "UnitViolation: {arrow}"),
            Violation::InverseViolation { arrow } => write!(f, "InverseViolation: {arrow}"),
        }
    }
}

/// Every violation found while validating a groupoid description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} groupoid axiom violation(s); first: {}", .violations.len(), .violations[0])]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    fn single(v: Violation) -> Self {
        Self {
            violations: vec![v],
        }
    }
}

/// An arrow entry of a raw groupoid description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawArrow {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// Unvalidated, name-based description of a groupoid: object list, arrows
/// with source and target, and the unit, composition and inverse tables.
/// Composition triples read `[g, f, g∘f]`, i.e. "f then g".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroupoid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<RawArrow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comp: Option<Vec<(String, String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<Vec<(String, String)>>,
}

/// A validated finite groupoid.
///
/// Objects and arrows are indexed in input order. `comp(g, f)` is "`f` then
/// `g`" and is defined exactly when `src(g) == tgt(f)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    unit: Vec<Arrow>,
    inv: Vec<Arrow>,
    comp: Vec<Option<Arrow>>,
    homs: Vec<Vec<Arrow>>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupoid")
            .field("objects", &self.objects)
            .field("arrows", &self.arrows)
            .finish()
    }
}

/// Validates a raw description against the groupoid axioms.
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<FiniteGroupoid, ValidationError> {
    FiniteGroupoid::from_raw(raw)
}

fn index_names(
    names: &[String],
    dup: impl Fn(String) -> Violation,
    out: &mut Vec<Violation>,
) -> HashMap<String, usize> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            out.push(dup(n.clone()));
        }
    }
    map
}

impl FiniteGroupoid {
    pub fn from_raw(raw: &RawGroupoid) -> Result<Self, ValidationError> {
        let mut missing = Vec::new();
        if raw.objects.is_none() {
            missing.push(Violation::MissingTable("objects"));
        }
        if raw.arrows.is_none() {
            missing.push(Violation::MissingTable("arrows"));
        }
        if raw.unit.is_none() {
            missing.push(Violation::MissingTable("unit"));
        }
        if raw.comp.is_none() {
            missing.push(Violation::MissingTable("comp"));
        }
        if raw.inv.is_none() {
            missing.push(Violation::MissingTable("inv"));
        }
        if !missing.is_empty() {
            return Err(ValidationError {
                violations: missing,
            });
        }
        let objects = raw.objects.clone().unwrap_or_default();
        let raw_arrows = raw.arrows.as_deref().unwrap_or_default();
        let arrows: Vec<String> = raw_arrows.iter().map(|a| a.name.clone()).collect();

        let mut errs = Vec::new();
        let obj_ix = index_names(&objects, Violation::DuplicateObject, &mut errs);
        let arr_ix = index_names(&arrows, Violation::DuplicateArrow, &mut errs);
        let obj = |name: &str, errs: &mut Vec<Violation>| {
            let r = obj_ix.get(name).copied();
            if r.is_none() {
                errs.push(Violation::UnknownObject(name.to_string()));
            }
            r
        };
        let arr = |name: &str, errs: &mut Vec<Violation>| {
            let r = arr_ix.get(name).copied();
            if r.is_none() {
                errs.push(Violation::UnknownArrow(name.to_string()));
            }
            r
        };

        let mut src = Vec::with_capacity(arrows.len());
        let mut tgt = Vec::with_capacity(arrows.len());
        for a in raw_arrows {
            src.push(obj(&a.src, &mut errs).unwrap_or(0));
            tgt.push(obj(&a.tgt, &mut errs).unwrap_or(0));
        }

        let mut unit = vec![None; objects.len()];
        for (x, a) in raw.unit.as_deref().unwrap_or_default() {
            if let (Some(x), Some(a)) = (obj(x, &mut errs), arr(a, &mut errs)) {
                unit[x] = Some(a);
            }
        }
        let mut inv = vec![None; arrows.len()];
        for (a, b) in raw.inv.as_deref().unwrap_or_default() {
            if let (Some(a), Some(b)) = (arr(a, &mut errs), arr(b, &mut errs)) {
                inv[a] = Some(b);
            }
        }
        let m = arrows.len();
        let mut comp = vec![None; m * m];
        for (g, f, gf) in raw.comp.as_deref().unwrap_or_default() {
            let (g, f, gf) = (arr(g, &mut errs), arr(f, &mut errs), arr(gf, &mut errs));
            let (Some(g), Some(f), Some(gf)) = (g, f, gf) else {
                continue;
            };
            if src[g] != tgt[f] {
                errs.push(Violation::NonComposablePairInTable {
                    g: arrows[g].clone(),
                    f: arrows[f].clone(),
                });
                continue;
            }
            match comp[g * m + f] {
                Some(prev) if prev != gf => errs.push(Violation::ConflictingComposite {
                    g: arrows[g].clone(),
                    f: arrows[f].clone(),
                }),
                _ => comp[g * m + f] = Some(gf),
            }
        }
        if !errs.is_empty() {
            return Err(ValidationError { violations: errs });
        }
        Self::check_and_build(objects, arrows, src, tgt, unit, inv, comp)
    }

    /// Builds a groupoid from index tables and a composition rule evaluated on
    /// every composable pair, then validates all axioms.
    pub fn build(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<Obj>,
        tgt: Vec<Obj>,
        unit: Vec<Arrow>,
        inv: Vec<Arrow>,
        compose: impl Fn(Arrow, Arrow) -> Arrow,
    ) -> Result<Self, ValidationError> {
        let m = arrows.len();
        let n = objects.len();
        if src.len() != m || tgt.len() != m || inv.len() != m || unit.len() != n {
            return Err(ValidationError::single(Violation::MissingTable(
                "table length mismatch",
            )));
        }
        if src.iter().chain(&tgt).any(|&x| x >= n) || unit.iter().chain(&inv).any(|&a| a >= m) {
            return Err(ValidationError::single(Violation::MissingTable(
                "index out of range",
            )));
        }
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if src[g] == tgt[f] {
                    let gf = compose(g, f);
                    if gf >= m {
                        return Err(ValidationError::single(Violation::MissingTable(
                            "composite out of range",
                        )));
                    }
                    comp[g * m + f] = Some(gf);
                }
            }
        }
        Self::check_and_build(
            objects,
            arrows,
            src,
            tgt,
            unit.into_iter().map(Some).collect(),
            inv.into_iter().map(Some).collect(),
            comp,
        )
    }

    fn check_and_build(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<Obj>,
        tgt: Vec<Obj>,
        unit: Vec<Option<Arrow>>,
        inv: Vec<Option<Arrow>>,
        comp: Vec<Option<Arrow>>,
    ) -> Result<Self, ValidationError> {
        let m = arrows.len();
        let name = |a: Arrow| arrows[a].clone();
        let mut errs = Vec::new();

        for g in 0..m {
            for f in 0..m {
                if src[g] != tgt[f] {
                    continue;
                }
                match comp[g * m + f] {
                    None => errs.push(Violation::MissingComposite {
                        g: name(g),
                        f: name(f),
                    }),
                    Some(gf) if src[gf] != src[f] || tgt[gf] != tgt[g] => {
                        errs.push(Violation::CompositeEndpoints {
                            g: name(g),
                            f: name(f),
                            composite: name(gf),
                        })
                    }
                    _ => {}
                }
            }
        }

        // units
        for (x, u) in unit.iter().enumerate() {
            match *u {
                None => errs.push(Violation::UnitViolation {
                    arrow: format!("<no unit at {}>", objects[x]),
                }),
                Some(u) if src[u] != x || tgt[u] != x => {
                    errs.push(Violation::UnitViolation { arrow: name(u) })
                }
                _ => {}
            }
        }
        let unit_ok = errs.iter().all(|v| !matches!(v, Violation::UnitViolation { .. }));
        if unit_ok {
            for f in 0..m {
                let left = comp[unit[tgt[f]].unwrap() * m + f];
                let right = comp[f * m + unit[src[f]].unwrap()];
                if left != Some(f) || right != Some(f) {
                    errs.push(Violation::UnitViolation { arrow: name(f) });
                }
            }
        }

        // associativity over composable triples h∘g∘f
        for f in 0..m {
            for g in 0..m {
                if src[g] != tgt[f] {
                    continue;
                }
                let Some(gf) = comp[g * m + f] else { continue };
                for h in 0..m {
                    if src[h] != tgt[g] {
                        continue;
                    }
                    let Some(hg) = comp[h * m + g] else { continue };
                    let lhs = if src[hg] == tgt[f] { comp[hg * m + f] } else { None };
                    let rhs = if src[h] == tgt[gf] { comp[h * m + gf] } else { None };
                    if lhs.is_some() && rhs.is_some() && lhs != rhs {
                        errs.push(Violation::AssociativityViolation {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }

        // inverses
        for f in 0..m {
            let ok = match inv[f] {
                None => false,
                Some(i) => {
                    src[i] == tgt[f]
                        && tgt[i] == src[f]
                        && unit_ok
                        && comp[i * m + f] == unit[src[f]]
                        && comp[f * m + i] == unit[tgt[f]]
                }
            };
            if !ok {
                errs.push(Violation::InverseViolation { arrow: name(f) });
            }
        }

        let mut seen = HashMap::new();
        for n in &objects {
            if seen.insert(n.as_str(), ()).is_some() {
                errs.push(Violation::DuplicateObject(n.clone()));
            }
        }
        seen.clear();
        for n in &arrows {
            if seen.insert(n.as_str(), ()).is_some() {
                errs.push(Violation::DuplicateArrow(n.clone()));
            }
        }

        if !errs.is_empty() {
            return Err(ValidationError { violations: errs });
        }

        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for a in 0..m {
            homs[src[a] * n + tgt[a]].push(a);
        }
        Ok(Self {
            objects,
            arrows,
            src,
            tgt,
            unit: unit.into_iter().map(Option::unwrap).collect(),
            inv: inv.into_iter().map(Option::unwrap).collect(),
            comp,
            homs,
        })
    }

    pub fn to_raw(&self) -> RawGroupoid {
        RawGroupoid {
            objects: Some(self.objects.clone()),
            arrows: Some(
                self.arrows()
                    .map(|a| RawArrow {
                        name: self.arrows[a].clone(),
                        src: self.objects[self.src[a]].clone(),
                        tgt: self.objects[self.tgt[a]].clone(),
                    })
                    .collect(),
            ),
            unit: Some(
                self.objects()
                    .map(|x| (self.objects[x].clone(), self.arrows[self.unit[x]].clone()))
                    .collect(),
            ),
            comp: Some(
                self.composable_pairs()
                    .map(|(g, f)| {
                        (
                            self.arrows[g].clone(),
                            self.arrows[f].clone(),
                            self.arrows[self.compose(g, f)].clone(),
                        )
                    })
                    .collect(),
            ),
            inv: Some(
                self.arrows()
                    .map(|a| (self.arrows[a].clone(), self.arrows[self.inv[a]].clone()))
                    .collect(),
            ),
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.objects.len()
    }

    pub fn arrows(&self) -> std::ops::Range<Arrow> {
        0..self.arrows.len()
    }

    pub fn object_name(&self, x: Obj) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, a: Arrow) -> &str {
        &self.arrows[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_index(&self, name: &str) -> Option<Obj> {
        self.objects.iter().position(|n| n == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<Arrow> {
        self.arrows.iter().position(|n| n == name)
    }

    pub fn src(&self, a: Arrow) -> Obj {
        self.src[a]
    }

    pub fn tgt(&self, a: Arrow) -> Obj {
        self.tgt[a]
    }

    pub fn unit(&self, x: Obj) -> Arrow {
        self.unit[x]
    }

    pub fn inv(&self, a: Arrow) -> Arrow {
        self.inv[a]
    }

    pub fn is_unit(&self, a: Arrow) -> bool {
        self.unit[self.src[a]] == a
    }

    /// `g ∘ f` when `src(g) == tgt(f)`.
    pub fn comp(&self, g: Arrow, f: Arrow) -> Option<Arrow> {
        self.comp[g * self.arrows.len() + f]
    }

    /// `g ∘ f`; panics if the pair is not composable.
    pub fn compose(&self, g: Arrow, f: Arrow) -> Arrow {
        self.comp(g, f).unwrap_or_else(|| {
            panic!(
                "arrows {} and {} are not composable",
                self.arrows[g], self.arrows[f]
            )
        })
    }

    /// Arrows `x -> y`, in index order.
    pub fn hom(&self, x: Obj, y: Obj) -> &[Arrow] {
        &self.homs[x * self.objects.len() + y]
    }

    /// Arrows with source and target `x`.
    pub fn loops(&self, x: Obj) -> &[Arrow] {
        self.hom(x, x)
    }

    /// Pairs `(g, f)` with `src(g) == tgt(f)`, in lexicographic order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arrow, Arrow)> + '_ {
        self.arrows()
            .flat_map(move |g| self.arrows().map(move |f| (g, f)))
            .filter(move |&(g, f)| self.src[g] == self.tgt[f])
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }

    /// The groupoid with one object and one arrow.
    pub fn point() -> Self {
        Self::build(
            vec!["*".into()],
            vec!["1".into()],
            vec![0],
            vec![0],
            vec![0],
            vec![0],
            |_, _| 0,
        )
        .expect("point groupoid")
    }

    /// Objects `1..=n` with identity arrows only.
    pub fn discrete(n: usize) -> Self {
        Self::build(
            (1..=n).map(|i| i.to_string()).collect(),
            (1..=n).map(|i| format!("1_{i}")).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            |g, _| g,
        )
        .expect("discrete groupoid")
    }

    /// Exactly one arrow `(i,j): i -> j` for every ordered pair of objects `1..=n`.
    pub fn pair(n: usize) -> Self {
        Self::transitive(n, &FiniteGroup::trivial())
    }

    /// A group as a one-object groupoid.
    pub fn from_group(group: &FiniteGroup) -> Self {
        let k = group.order();
        Self::build(
            vec!["*".into()],
            group.names().to_vec(),
            vec![0; k],
            vec![0; k],
            vec![group.identity()],
            group.elements().map(|a| group.inv(a)).collect(),
            |g, f| group.mul(g, f),
        )
        .expect("group as groupoid")
    }

    /// The transitive groupoid `Pair(n) × BK`: arrows `(i, j, k)` from `i` to
    /// `j` with composite `(j, l, k2)(i, j, k1) = (i, l, k2 k1)`.
    pub fn transitive(n: usize, group: &FiniteGroup) -> Self {
        let k = group.order();
        let code = |i: usize, j: usize, g: usize| (i * n + j) * k + g;
        let decode = |a: usize| ((a / k) / n, (a / k) % n, a % k);
        let trivial = k == 1;
        let arrows = (0..n * n * k)
            .map(|a| {
                let (i, j, g) = decode(a);
                if trivial {
                    format!("({},{})", i + 1, j + 1)
                } else {
                    format!("({},{},{})", i + 1, j + 1, group.name(g))
                }
            })
            .collect();
        Self::build(
            (1..=n).map(|i| i.to_string()).collect(),
            arrows,
            (0..n * n * k).map(|a| decode(a).0).collect(),
            (0..n * n * k).map(|a| decode(a).1).collect(),
            (0..n).map(|i| code(i, i, group.identity())).collect(),
            (0..n * n * k)
                .map(|a| {
                    let (i, j, g) = decode(a);
                    code(j, i, group.inv(g))
                })
                .collect(),
            |g2, g1| {
                let (i, _, k1) = decode(g1);
                let (_, l, k2) = decode(g2);
                code(i, l, group.mul(k2, k1))
            },
        )
        .expect("transitive groupoid")
    }

    /// Disjoint union; names of the second summand are suffixed with `'`
    /// when they would clash.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Self {
        let (n1, m1) = (self.object_count(), self.arrow_count());
        let rename = |names: &[String], taken: &[String]| -> Vec<String> {
            names
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    while taken.contains(&s) {
                        s.push('\'');
                    }
                    s
                })
                .collect()
        };
        let mut objects = self.objects.clone();
        objects.extend(rename(&other.objects, &self.objects));
        let mut arrows = self.arrows.clone();
        arrows.extend(rename(&other.arrows, &self.arrows));
        let pick = |a: Arrow| a < m1;
        Self::build(
            objects,
            arrows,
            self.src
                .iter()
                .copied()
                .chain(other.src.iter().map(|x| x + n1))
                .collect(),
            self.tgt
                .iter()
                .copied()
                .chain(other.tgt.iter().map(|x| x + n1))
                .collect(),
            self.unit
                .iter()
                .copied()
                .chain(other.unit.iter().map(|a| a + m1))
                .collect(),
            self.inv
                .iter()
                .copied()
                .chain(other.inv.iter().map(|a| a + m1))
                .collect(),
            |g, f| {
                if pick(g) {
                    self.compose(g, f)
                } else {
                    other.compose(g - m1, f - m1) + m1
                }
            },
        )
        .expect("disjoint union of groupoids")
    }

    /// Reorders objects and arrows: new object `i` is old `object_order[i]`,
    /// new arrow `j` is old `arrow_order[j]`. Both must be permutations.
    pub fn permuted(&self, object_order: &[Obj], arrow_order: &[Arrow]) -> Self {
        let mut obj_new = vec![0; self.object_count()];
        for (i, &x) in object_order.iter().enumerate() {
            obj_new[x] = i;
        }
        let mut arr_new = vec![0; self.arrow_count()];
        for (j, &a) in arrow_order.iter().enumerate() {
            arr_new[a] = j;
        }
        Self::build(
            object_order.iter().map(|&x| self.objects[x].clone()).collect(),
            arrow_order.iter().map(|&a| self.arrows[a].clone()).collect(),
            arrow_order.iter().map(|&a| obj_new[self.src[a]]).collect(),
            arrow_order.iter().map(|&a| obj_new[self.tgt[a]]).collect(),
            object_order.iter().map(|&x| arr_new[self.unit[x]]).collect(),
            arrow_order.iter().map(|&a| arr_new[self.inv[a]]).collect(),
            |g, f| arr_new[self.compose(arrow_order[g], arrow_order[f])],
        )
        .expect("permutation of a groupoid")
    }

    /// The structural check that `(s, t): G_1 -> G_0 × G_0` is proper. Over
    /// finite discrete sets every map is proper, so this always holds.
    pub fn is_proper(&self) -> bool {
        true
    }

    /// Source and target are local diffeomorphisms. Over finite discrete sets
    /// every map is étale, so this always holds.
    pub fn is_etale(&self) -> bool {
        true
    }
}
