use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::category::{CategoryFunctor, FiniteCategory};
use crate::fingpd::{Arrow, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("{0:?} is not in W")]
    NotInW(String),
    #[error("letters do not form a path")]
    NotAPath,
    #[error("image of {0} under the functor has no inverse")]
    NotInverted(String),
    #[error("functor is not defined on this category")]
    FunctorShape,
    #[error("normal forms up to length {0} are not closed under composition")]
    NotClosed(usize),
}

/// A generator of the free category: an arrow of `C` or a formal inverse
/// of an arrow of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Arrow(Arrow),
    Inverse(Arrow),
}

/// A path `(γ_n, …, γ_1)`: `γ_1` comes first, so `letters[0]` is `γ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub source: Obj,
    pub target: Obj,
    pub letters: Vec<Letter>,
}

/// `C[W⁻¹]` presented by generators and the rewrite rules
/// (1) `(w, w⁻¹)`, `(w⁻¹, w)` → empty;
/// (2) `w⁻¹` → its inverse in `C`, when it has one;
/// (3) `(w⁻¹, w c)` → `c` and `(c w, w⁻¹)` → `c`;
/// (4) `(a, b)` → `(a b)` for arrows of `C`;
/// (5) interior identities are dropped;
/// and the empty path at `x` is `(1_x)`.
#[derive(Clone, Debug)]
pub struct SymbolicCategory {
    category: FiniteCategory,
    w: Vec<Arrow>,
    in_w: Vec<bool>,
}

pub fn localize_symbolic(c: FiniteCategory, w: &[String]) -> Result<SymbolicCategory, LocalizationError> {
    let mut ws = Vec::new();
    for name in w {
        ws.push(
            c.arrow_index(name)
                .ok_or_else(|| LocalizationError::UnknownArrow(name.clone()))?,
        );
    }
    Ok(SymbolicCategory::new(c, ws))
}

impl SymbolicCategory {
    pub fn new(category: FiniteCategory, mut w: Vec<Arrow>) -> Self {
        w.sort_unstable();
        w.dedup();
        let mut in_w = vec![false; category.arrow_count()];
        for &a in &w {
            in_w[a] = true;
        }
        Self { category, w, in_w }
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn w(&self) -> &[Arrow] {
        &self.w
    }

    pub fn letter_source(&self, l: Letter) -> Obj {
        match l {
            Letter::Arrow(a) => self.category.src(a),
            Letter::Inverse(w) => self.category.tgt(w),
        }
    }

    pub fn letter_target(&self, l: Letter) -> Obj {
        match l {
            Letter::Arrow(a) => self.category.tgt(a),
            Letter::Inverse(w) => self.category.src(w),
        }
    }

    /// All generators, arrows of `C` first.
    pub fn letters(&self) -> Vec<Letter> {
        self.category
            .arrows()
            .map(Letter::Arrow)
            .chain(self.w.iter().map(|&w| Letter::Inverse(w)))
            .collect()
    }

    pub fn word(&self, letters: Vec<Letter>) -> Result<Word, LocalizationError> {
        let (Some(&first), Some(&last)) = (letters.first(), letters.last()) else {
            return Err(LocalizationError::NotAPath);
        };
        for l in &letters {
            if let Letter::Inverse(w) = *l {
                if !self.in_w.get(w).copied().unwrap_or(false) {
                    return Err(LocalizationError::NotInW(
                        self.category.arrow_names().get(w).cloned().unwrap_or_else(|| w.to_string()),
                    ));
                }
            }
        }
        if letters
            .windows(2)
            .any(|p| self.letter_source(p[0]) != self.letter_target(p[1]))
        {
            return Err(LocalizationError::NotAPath);
        }
        Ok(Word {
            source: self.letter_source(last),
            target: self.letter_target(first),
            letters,
        })
    }

    /// `π_W(a) = (a)`.
    pub fn pi(&self, a: Arrow) -> Word {
        self.word(vec![Letter::Arrow(a)]).expect("single arrow")
    }

    /// `(w⁻¹)`.
    pub fn formal_inverse(&self, w: Arrow) -> Result<Word, LocalizationError> {
        self.word(vec![Letter::Inverse(w)])
    }

    pub fn identity(&self, x: Obj) -> Word {
        self.pi(self.category.unit(x))
    }

    /// `second ∘ first`.
    pub fn compose(&self, second: &Word, first: &Word) -> Result<Word, LocalizationError> {
        if second.source != first.target {
            return Err(LocalizationError::NotAPath);
        }
        let mut letters = second.letters.clone();
        letters.extend_from_slice(&first.letters);
        Ok(Word {
            source: first.source,
            target: second.target,
            letters,
        })
    }

    /// Parses `name, name^-1, …` in path order.
    pub fn parse_word(&self, text: &str) -> Result<Word, LocalizationError> {
        let letters = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                let a = self
                    .category
                    .arrow_index(name)
                    .ok_or_else(|| LocalizationError::UnknownArrow(name.to_string()))?;
                if inverse && !self.in_w[a] {
                    return Err(LocalizationError::NotInW(name.to_string()));
                }
                Ok(if inverse { Letter::Inverse(a) } else { Letter::Arrow(a) })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.word(letters)
    }

    pub fn format_word(&self, w: &Word) -> String {
        let mut s = String::from("(");
        for (i, l) in w.letters.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            match *l {
                Letter::Arrow(a) => s.push_str(self.category.arrow_name(a)),
                Letter::Inverse(a) => {
                    let _ = write!(s, "{}^-1", self.category.arrow_name(a));
                }
            }
        }
        s.push(')');
        s
    }

    fn rule_at(&self, letters: &[Letter], rule: u8, i: usize) -> Option<Vec<Letter>> {
        let c = &self.category;
        let splice = |len: usize, with: &[Letter]| {
            let mut out = letters[..i].to_vec();
            out.extend_from_slice(with);
            out.extend_from_slice(&letters[i + len..]);
            out
        };
        let pair = letters.get(i + 1).map(|&b| (letters[i], b));
        match rule {
            1 => match pair? {
                (Letter::Arrow(a), Letter::Inverse(b)) | (Letter::Inverse(a), Letter::Arrow(b)) if a == b => {
                    Some(splice(2, &[]))
                }
                _ => None,
            },
            2 => match letters[i] {
                Letter::Inverse(w) => c.inverse(w).map(|b| splice(1, &[Letter::Arrow(b)])),
                _ => None,
            },
            3 => match pair? {
                (Letter::Inverse(w), Letter::Arrow(d)) => c
                    .hom(c.src(d), c.src(w))
                    .into_iter()
                    .find(|&x| c.compose(w, x) == d)
                    .map(|x| splice(2, &[Letter::Arrow(x)])),
                (Letter::Arrow(d), Letter::Inverse(w)) => c
                    .hom(c.tgt(w), c.tgt(d))
                    .into_iter()
                    .find(|&x| c.compose(x, w) == d)
                    .map(|x| splice(2, &[Letter::Arrow(x)])),
                _ => None,
            },
            4 => match pair? {
                (Letter::Arrow(a), Letter::Arrow(b)) => Some(splice(2, &[Letter::Arrow(c.compose(a, b))])),
                _ => None,
            },
            5 => match letters[i] {
                Letter::Arrow(a) if letters.len() > 1 && c.is_unit(a) => Some(splice(1, &[])),
                _ => None,
            },
            _ => None,
        }
    }

    fn fill(&self, w: &Word, letters: Vec<Letter>) -> Word {
        if letters.is_empty() {
            self.identity(w.source)
        } else {
            Word {
                source: w.source,
                target: w.target,
                letters,
            }
        }
    }

    /// The first applicable rewrite by rule priority, then position.
    pub fn step(&self, w: &Word) -> Option<Word> {
        for rule in 1..=5 {
            for i in 0..w.letters.len() {
                if let Some(l) = self.rule_at(&w.letters, rule, i) {
                    return Some(self.fill(w, l));
                }
            }
        }
        None
    }

    /// Every one-step rewrite of `w`, at every position and by every rule.
    pub fn all_steps(&self, w: &Word) -> Vec<Word> {
        let mut out = Vec::new();
        for rule in 1..=5 {
            for i in 0..w.letters.len() {
                if let Some(l) = self.rule_at(&w.letters, rule, i) {
                    out.push(self.fill(w, l));
                }
            }
        }
        out
    }

    /// Rewrites to a fixed point. Each step shortens the word or, for rule
    /// (2), keeps its length and removes a formal inverse.
    pub fn normalize(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        while let Some(next) = self.step(&cur) {
            cur = next;
        }
        cur
    }

    /// Normalize-and-compare; sound, complete where the rewrite system is
    /// confluent (see [`Self::confluence_check`]).
    pub fn equal(&self, a: &Word, b: &Word) -> bool {
        a.source == b.source && a.target == b.target && self.normalize(a) == self.normalize(b)
    }

    /// Whether `(w⁻¹)` is a two-sided inverse of `π_W(w)`.
    pub fn verify_inverse(&self, w: Arrow) -> bool {
        let Ok(inv) = self.formal_inverse(w) else {
            return false;
        };
        let p = self.pi(w);
        let (x, y) = (p.source, p.target);
        let left = self.compose(&inv, &p).expect("path");
        let right = self.compose(&p, &inv).expect("path");
        self.equal(&left, &self.identity(x)) && self.equal(&right, &self.identity(y))
    }

    /// Every path of length `1..=max_len`.
    pub fn words(&self, max_len: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut out: Vec<Word> = letters
            .iter()
            .map(|&l| self.word(vec![l]).expect("letter"))
            .collect();
        let mut frontier = out.clone();
        for _ in 1..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    if self.letter_target(l) == w.source {
                        let mut ls = w.letters.clone();
                        ls.push(l);
                        next.push(Word {
                            source: self.letter_source(l),
                            target: w.target,
                            letters: ls,
                        });
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// For every path of length `≤ max_len`, checks that every one-step
    /// rewrite has the same normal form. Returns the number of paths checked,
    /// or a path with two rewrites that normalize differently.
    pub fn confluence_check(&self, max_len: usize) -> Result<usize, (Word, Word, Word)> {
        let words = self.words(max_len);
        for w in &words {
            let nf = self.normalize(w);
            for r in self.all_steps(w) {
                let other = self.normalize(&r);
                if other != nf {
                    return Err((w.clone(), nf, other));
                }
            }
        }
        Ok(words.len())
    }

    /// Distinct normal forms of paths of length `≤ max_len`, sorted.
    pub fn normal_forms(&self, max_len: usize) -> Vec<Word> {
        let set: BTreeSet<Word> = self.words(max_len).iter().map(|w| self.normalize(w)).collect();
        set.into_iter().collect()
    }

    /// Normal forms `x -> y` among paths of length `≤ max_len`.
    pub fn hom_normal_forms(&self, x: Obj, y: Obj, max_len: usize) -> Vec<Word> {
        self.normal_forms(max_len)
            .into_iter()
            .filter(|w| w.source == x && w.target == y)
            .collect()
    }

    /// The normal forms of paths up to `max_len` as a finite category, if
    /// they are closed under composition.
    pub fn to_finite_category(&self, max_len: usize) -> Result<(FiniteCategory, Vec<Word>), LocalizationError> {
        let forms = self.normal_forms(max_len);
        let find = |w: &Word| forms.binary_search(w).ok();
        let mut table = vec![None; forms.len() * forms.len()];
        for (i, a) in forms.iter().enumerate() {
            for (j, b) in forms.iter().enumerate() {
                if a.source == b.target {
                    let ab = self.normalize(&self.compose(a, b).expect("path"));
                    table[i * forms.len() + j] =
                        Some(find(&ab).ok_or(LocalizationError::NotClosed(max_len))?);
                }
            }
        }
        let c = &self.category;
        let unit = c
            .objects()
            .map(|x| find(&self.identity(x)).ok_or(LocalizationError::NotClosed(max_len)))
            .collect::<Result<Vec<_>, _>>()?;
        let cat = FiniteCategory::build(
            c.object_names().to_vec(),
            forms.iter().map(|w| self.format_word(w)).collect(),
            forms.iter().map(|w| w.source).collect(),
            forms.iter().map(|w| w.target).collect(),
            unit,
            |a, b| table[a * forms.len() + b].expect("composable"),
        )
        .map_err(|_| LocalizationError::NotClosed(max_len))?;
        Ok((cat, forms))
    }

    /// `π_W: C -> C[W⁻¹]` onto the finite category of normal forms.
    pub fn projection_functor(&self, max_len: usize) -> Result<(FiniteCategory, CategoryFunctor), LocalizationError> {
        let (cat, forms) = self.to_finite_category(max_len)?;
        let c = &self.category;
        let arr_map = c
            .arrows()
            .map(|a| forms.binary_search(&self.normalize(&self.pi(a))).expect("closed"))
            .collect();
        let f = CategoryFunctor::new(c, &cat, c.objects().collect(), arr_map)
            .expect("projection is a functor");
        Ok((cat, f))
    }
}

/// What `check_universal_property` verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalReport {
    /// `ψ` on each generator.
    pub generator_images: Vec<(Letter, Arrow)>,
    /// Arrows `a` of `C` with `ψ(π_W a) = φ(a)` checked.
    pub checked_arrows: usize,
    /// Pairs (path, rewrite of it) on which `ψ` agreed.
    pub checked_pairs: usize,
}

/// Builds `ψ: C[W⁻¹] -> E` from `φ: C -> E` by `ψ(a) = φ(a)` and
/// `ψ(w⁻¹) = φ(w)⁻¹`, then checks `ψ∘π_W = φ` and that `ψ` is constant
/// on rewrites of every path of length `≤ sample_len`.
pub fn check_universal_property(
    loc: &SymbolicCategory,
    e: &FiniteCategory,
    phi: &CategoryFunctor,
    sample_len: usize,
) -> Result<UniversalReport, LocalizationError> {
    let c = loc.category();
    if phi.arr_map.len() != c.arrow_count() || phi.obj_map.len() != c.object_count() {
        return Err(LocalizationError::FunctorShape);
    }
    let mut generator_images = Vec::new();
    for l in loc.letters() {
        let image = match l {
            Letter::Arrow(a) => phi.arr_map[a],
            Letter::Inverse(w) => e
                .inverse(phi.arr_map[w])
                .ok_or_else(|| LocalizationError::NotInverted(c.arrow_name(w).to_string()))?,
        };
        generator_images.push((l, image));
    }
    let psi_letter = |l: Letter| {
        generator_images
            .iter()
            .find(|(m, _)| *m == l)
            .map(|&(_, a)| a)
            .expect("generator")
    };
    let psi = |w: &Word| {
        w.letters
            .iter()
            .map(|&l| psi_letter(l))
            .reduce(|acc, a| e.compose(acc, a))
            .expect("nonempty word")
    };
    for a in c.arrows() {
        if psi(&loc.pi(a)) != phi.arr_map[a] {
            return Err(LocalizationError::FunctorShape);
        }
    }
    let mut checked_pairs = 0;
    for w in loc.words(sample_len) {
        let v = psi(&w);
        for r in loc.all_steps(&w).iter().chain(std::iter::once(&loc.normalize(&w))) {
            if psi(r) != v {
                return Err(LocalizationError::FunctorShape);
            }
            checked_pairs += 1;
        }
    }
    Ok(UniversalReport {
        generator_images,
        checked_arrows: c.arrow_count(),
        checked_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingpd::FiniteGroupoid;

    fn arrow_category() -> FiniteCategory {
        FiniteCategory::preorder(vec!["x".into(), "y".into()], |x, y| x <= y).unwrap()
    }

    #[test]
    fn inverting_the_arrow_gives_a_contractible_groupoid() {
        let loc = localize_symbolic(arrow_category(), &["x<=y".into()]).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(loc.hom_normal_forms(x, y, 6).len(), 1);
            }
        }
        assert!(loc.verify_inverse(1));
        let w = loc.parse_word("x<=y^-1, x<=y").unwrap();
        assert_eq!(loc.normalize(&w), loc.identity(0));
        assert!(loc.confluence_check(8).is_ok());
    }

    #[test]
    fn identities_only_changes_nothing() {
        let c = arrow_category();
        let units: Vec<String> = c.objects().map(|x| c.arrow_name(c.unit(x)).to_string()).collect();
        let loc = localize_symbolic(c.clone(), &units).unwrap();
        for x in c.objects() {
            for y in c.objects() {
                assert_eq!(loc.hom_normal_forms(x, y, 4).len(), c.hom(x, y).len());
            }
        }
    }

    #[test]
    fn universal_property_for_pair_groupoid() {
        let c = arrow_category();
        let loc = localize_symbolic(c.clone(), &["x<=y".into()]).unwrap();
        let e = FiniteCategory::from_groupoid(&FiniteGroupoid::pair(2));
        let w = c.arrow_index("x<=y").unwrap();
        let target = e.hom(0, 1)[0];
        let arr_map = c
            .arrows()
            .map(|a| if a == w { target } else { e.unit(c.src(a)) })
            .collect();
        let phi = CategoryFunctor::new(&c, &e, vec![0, 1], arr_map).unwrap();
        let report = check_universal_property(&loc, &e, &phi, 6).unwrap();
        assert!(report.checked_pairs > 0);
    }

    #[test]
    fn universal_property_for_projection_is_identity_on_generators() {
        let loc = localize_symbolic(arrow_category(), &["x<=y".into()]).unwrap();
        let (e, pi) = loc.projection_functor(6).unwrap();
        let report = check_universal_property(&loc, &e, &pi, 6).unwrap();
        for (l, image) in report.generator_images {
            let w = loc.word(vec![l]).unwrap();
            assert_eq!(e.arrow_name(image), loc.format_word(&loc.normalize(&w)));
        }
    }

    #[test]
    fn non_invertible_image_is_reported() {
        let c = arrow_category();
        let loc = localize_symbolic(c.clone(), &["x<=y".into()]).unwrap();
        let phi = CategoryFunctor::new(&c, &c, vec![0, 1], c.arrows().collect()).unwrap();
        assert_eq!(
            check_universal_property(&loc, &c, &phi, 4),
            Err(LocalizationError::NotInverted("x<=y".into()))
        );
    }

    #[test]
    fn unknown_arrow() {
        assert_eq!(
            localize_symbolic(arrow_category(), &["nope".into()]).unwrap_err(),
            LocalizationError::UnknownArrow("nope".into())
        );
    }
}
