//! Finite categories given by explicit tables, and functors between them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingpd::{Arrow, FiniteGroupoid, Obj, RawArrow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate name {0:?}")]
    Duplicate(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("table length mismatch")]
    Shape,
    #[error("object {0:?} has no unit")]
    MissingUnit(String),
    #[error("{g} and {f} are not composable but the table lists them")]
    NonComposable { g: String, f: String },
    #[error("composite of {g} after {f} is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite of {g} after {f} has wrong endpoints")]
    CompositeEndpoints { g: String, f: String },
    #[error("composite of {g} after {f} listed twice with different values")]
    ConflictingComposite { g: String, f: String },
    #[error("unit law fails at {0}")]
    UnitViolation(String),
    #[error("associativity fails at ({h}, {g}, {f})")]
    AssociativityViolation { h: String, g: String, f: String },
}

/// Name-based description of a finite category. Composition triples read
/// `[g, f, g∘f]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub arrows: Vec<RawArrow>,
    pub unit: Vec<(String, String)>,
    pub comp: Vec<(String, String, String)>,
}

/// A validated finite category; `comp(g, f)` is "`f` then `g`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    unit: Vec<Arrow>,
    comp: Vec<Option<Arrow>>,
}

fn index(names: &[String]) -> Result<HashMap<&str, usize>, CategoryError> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i).is_some() {
            return Err(CategoryError::Duplicate(n.clone()));
        }
    }
    Ok(map)
}

impl FiniteCategory {
    pub fn from_raw(raw: &RawCategory) -> Result<Self, CategoryError> {
        let objects = raw.objects.clone();
        let arrows: Vec<String> = raw.arrows.iter().map(|a| a.name.clone()).collect();
        let oi = index(&objects)?;
        let ai = index(&arrows)?;
        let obj = |n: &str| oi.get(n).copied().ok_or_else(|| CategoryError::UnknownObject(n.into()));
        let arr = |n: &str| ai.get(n).copied().ok_or_else(|| CategoryError::UnknownArrow(n.into()));
        let src = raw.arrows.iter().map(|a| obj(&a.src)).collect::<Result<Vec<_>, _>>()?;
        let tgt = raw.arrows.iter().map(|a| obj(&a.tgt)).collect::<Result<Vec<_>, _>>()?;
        let mut unit = vec![None; objects.len()];
        for (x, a) in &raw.unit {
            unit[obj(x)?] = Some(arr(a)?);
        }
        let unit = unit
            .into_iter()
            .enumerate()
            .map(|(x, u)| u.ok_or_else(|| CategoryError::MissingUnit(objects[x].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let m = arrows.len();
        let mut comp: Vec<Option<Arrow>> = vec![None; m * m];
        for (g, f, gf) in &raw.comp {
            let (g, f, gf) = (arr(g)?, arr(f)?, arr(gf)?);
            if src[g] != tgt[f] {
                return Err(CategoryError::NonComposable {
                    g: arrows[g].clone(),
                    f: arrows[f].clone(),
                });
            }
            if comp[g * m + f].is_some_and(|c| c != gf) {
                return Err(CategoryError::ConflictingComposite {
                    g: arrows[g].clone(),
                    f: arrows[f].clone(),
                });
            }
            comp[g * m + f] = Some(gf);
        }
        let c = Self {
            objects,
            arrows,
            src,
            tgt,
            unit,
            comp,
        };
        c.check()?;
        Ok(c)
    }

    /// Builds from index tables and a composition rule on composable pairs.
    pub fn build(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<Obj>,
        tgt: Vec<Obj>,
        unit: Vec<Arrow>,
        compose: impl Fn(Arrow, Arrow) -> Arrow,
    ) -> Result<Self, CategoryError> {
        let m = arrows.len();
        if src.len() != m || tgt.len() != m || unit.len() != objects.len() {
            return Err(CategoryError::Shape);
        }
        if src.iter().chain(&tgt).any(|&x| x >= objects.len()) || unit.iter().any(|&u| u >= m) {
            return Err(CategoryError::Shape);
        }
        index(&objects)?;
        index(&arrows)?;
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if src[g] == tgt[f] {
                    let gf = compose(g, f);
                    if gf >= m {
                        return Err(CategoryError::Shape);
                    }
                    comp[g * m + f] = Some(gf);
                }
            }
        }
        let c = Self {
            objects,
            arrows,
            src,
            tgt,
            unit,
            comp,
        };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), CategoryError> {
        let m = self.arrows.len();
        let name = |a: Arrow| self.arrows[a].clone();
        for (x, &u) in self.unit.iter().enumerate() {
            if self.src[u] != x || self.tgt[u] != x {
                return Err(CategoryError::UnitViolation(name(u)));
            }
        }
        for g in 0..m {
            for f in 0..m {
                if self.src[g] != self.tgt[f] {
                    continue;
                }
                let Some(gf) = self.comp[g * m + f] else {
                    return Err(CategoryError::MissingComposite { g: name(g), f: name(f) });
                };
                if self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] {
                    return Err(CategoryError::CompositeEndpoints { g: name(g), f: name(f) });
                }
            }
        }
        for a in 0..m {
            if self.compose(self.unit[self.tgt[a]], a) != a || self.compose(a, self.unit[self.src[a]]) != a {
                return Err(CategoryError::UnitViolation(name(a)));
            }
        }
        for h in 0..m {
            for g in 0..m {
                if self.src[h] != self.tgt[g] {
                    continue;
                }
                for f in 0..m {
                    if self.src[g] != self.tgt[f] {
                        continue;
                    }
                    let hg = self.compose(h, g);
                    if self.compose(hg, f) != self.compose(h, self.compose(g, f)) {
                        return Err(CategoryError::AssociativityViolation {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_raw(&self) -> RawCategory {
        let m = self.arrows.len();
        let mut comp = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = self.comp[g * m + f] {
                    comp.push((self.arrows[g].clone(), self.arrows[f].clone(), self.arrows[gf].clone()));
                }
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            arrows: (0..m)
                .map(|a| RawArrow {
                    name: self.arrows[a].clone(),
                    src: self.objects[self.src[a]].clone(),
                    tgt: self.objects[self.tgt[a]].clone(),
                })
                .collect(),
            unit: self
                .unit
                .iter()
                .enumerate()
                .map(|(x, &u)| (self.objects[x].clone(), self.arrows[u].clone()))
                .collect(),
            comp,
        }
    }

    /// The underlying category of a groupoid.
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        Self::build(
            g.object_names().to_vec(),
            g.arrow_names().to_vec(),
            g.arrows().map(|a| g.src(a)).collect(),
            g.arrows().map(|a| g.tgt(a)).collect(),
            g.objects().map(|x| g.unit(x)).collect(),
            |a, b| g.compose(a, b),
        )
        .expect("a groupoid is a category")
    }

    /// The category of a finite preorder: one arrow `x -> y` whenever
    /// `le(x, y)`, which must be reflexive and transitive.
    pub fn preorder(names: Vec<String>, le: impl Fn(Obj, Obj) -> bool) -> Result<Self, CategoryError> {
        let n = names.len();
        let pairs: Vec<(Obj, Obj)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| le(x, y))
            .collect();
        let find = |x: Obj, y: Obj| pairs.iter().position(|&p| p == (x, y));
        let unit = (0..n)
            .map(|x| find(x, x).ok_or_else(|| CategoryError::MissingUnit(names[x].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        for &(x, y) in &pairs {
            for &(y2, z) in &pairs {
                if y == y2 && find(x, z).is_none() {
                    return Err(CategoryError::MissingComposite {
                        g: format!("{}<={}", names[y], names[z]),
                        f: format!("{}<={}", names[x], names[y]),
                    });
                }
            }
        }
        let arrows = pairs
            .iter()
            .map(|&(x, y)| if x == y { format!("1_{}", names[x]) } else { format!("{}<={}", names[x], names[y]) })
            .collect();
        Self::build(
            names,
            arrows,
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            unit,
            |g, f| find(pairs[f].0, pairs[g].1).expect("transitive"),
        )
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

    pub fn arrow_index(&self, name: &str) -> Option<Arrow> {
        self.arrows.iter().position(|a| a == name)
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

    pub fn is_unit(&self, a: Arrow) -> bool {
        self.unit[self.src[a]] == a
    }

    pub fn comp(&self, g: Arrow, f: Arrow) -> Option<Arrow> {
        self.comp[g * self.arrows.len() + f]
    }

    /// `g∘f`; panics unless `src(g) == tgt(f)`.
    pub fn compose(&self, g: Arrow, f: Arrow) -> Arrow {
        self.comp(g, f).expect("composable arrows")
    }

    /// Arrows `x -> y` in index order.
    pub fn hom(&self, x: Obj, y: Obj) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.src[a] == x && self.tgt[a] == y).collect()
    }

    /// The two-sided inverse of `a`, if it has one.
    pub fn inverse(&self, a: Arrow) -> Option<Arrow> {
        let (x, y) = (self.src[a], self.tgt[a]);
        self.hom(y, x)
            .into_iter()
            .find(|&b| self.compose(b, a) == self.unit[x] && self.compose(a, b) == self.unit[y])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryFunctorError {
    #[error("map has wrong length")]
    WrongLength,
    #[error("image of arrow {0} has wrong endpoints")]
    Endpoints(Arrow),
    #[error("unit of object {0} is not preserved")]
    Unit(Obj),
    #[error("composite of {g} after {f} is not preserved")]
    NotMultiplicative { g: Arrow, f: Arrow },
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryFunctor {
    pub obj_map: Vec<Obj>,
    pub arr_map: Vec<Arrow>,
}

impl CategoryFunctor {
    pub fn new(
        c: &FiniteCategory,
        e: &FiniteCategory,
        obj_map: Vec<Obj>,
        arr_map: Vec<Arrow>,
    ) -> Result<Self, CategoryFunctorError> {
        if obj_map.len() != c.object_count()
            || arr_map.len() != c.arrow_count()
            || obj_map.iter().any(|&y| y >= e.object_count())
            || arr_map.iter().any(|&b| b >= e.arrow_count())
        {
            return Err(CategoryFunctorError::WrongLength);
        }
        for a in c.arrows() {
            let b = arr_map[a];
            if e.src(b) != obj_map[c.src(a)] || e.tgt(b) != obj_map[c.tgt(a)] {
                return Err(CategoryFunctorError::Endpoints(a));
            }
        }
        for x in c.objects() {
            if arr_map[c.unit(x)] != e.unit(obj_map[x]) {
                return Err(CategoryFunctorError::Unit(x));
            }
        }
        for g in c.arrows() {
            for f in c.arrows() {
                if let Some(gf) = c.comp(g, f) {
                    if e.compose(arr_map[g], arr_map[f]) != arr_map[gf] {
                        return Err(CategoryFunctorError::NotMultiplicative { g, f });
                    }
                }
            }
        }
        Ok(Self { obj_map, arr_map })
    }
}
