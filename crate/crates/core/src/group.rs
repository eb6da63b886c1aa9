//! Finite groups given by explicit multiplication tables.
//!
//! Groups appear throughout the crate: as one-object groupoids, as isotropy
//! groups of orbits, as structure groups of edge cocycles and as the acting
//! group of an action groupoid.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a group element.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("multiplication table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("product {a}*{b} is out of range")]
    NotClosed { a: usize, b: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
}

/// A finite group stored as a dense Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Element>,
    identity: Element,
    inverse: Vec<Element>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("names", &self.names)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table, `table[a * n + b] = a * b`.
    pub fn from_table(names: Vec<String>, table: Vec<Element>) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(GroupError::DuplicateName(name.clone()));
            }
        }
        if table.len() != n * n {
            return Err(GroupError::TableSize {
                expected: n * n,
                found: table.len(),
            });
        }
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] >= n {
                    return Err(GroupError::NotClosed { a, b });
                }
            }
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverse.push(b);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self {
            names,
            table,
            identity,
            inverse,
        })
    }

    /// Builds a group from a multiplication closure on `0..n`.
    pub fn from_fn(
        names: Vec<String>,
        mul: impl Fn(Element, Element) -> Element,
    ) -> Result<Self, GroupError> {
        let n = names.len();
        let table = (0..n * n).map(|i| mul(i / n, i % n)).collect();
        Self::from_table(names, table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with elements named `1, a, a^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{k}"),
            })
            .collect();
        Self::from_fn(names, |a, b| (a + b) % n).expect("cyclic group table is valid")
    }

    /// Direct product; element `(g, h)` has index `g * |other| + h`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let m = other.order();
        let names = (0..self.order() * m)
            .map(|i| format!("({},{})", self.name(i / m), other.name(i % m)))
            .collect();
        Self::from_fn(names, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
        .expect("product of groups is a group")
    }

    /// Symmetric group on `n` letters, elements in lexicographic order of
    /// their one-line notation. Composition `p * q` applies `q` first.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permutations(&mut current, 0, &mut perms);
        perms.sort();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
        let names = perms
            .iter()
            .map(|p| {
                let body: Vec<String> = p.iter().map(|x| (x + 1).to_string()).collect();
                format!("[{}]", body.join(""))
            })
            .collect();
        Self::from_fn(names, |a, b| {
            let composed: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index(&composed)
        })
        .expect("symmetric group table is valid")
    }

    /// Dihedral group of order `2n`: `r^k` is index `k`, `s r^k` is `n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        let names = (0..2 * n)
            .map(|i| {
                if i < n {
                    format!("r{i}")
                } else {
                    format!("sr{}", i - n)
                }
            })
            .collect();
        Self::from_fn(names, |x, y| {
            let (fx, kx) = (x / n, x % n);
            let (fy, ky) = (y / n, y % n);
            // s^fx r^kx s^fy r^ky = s^(fx+fy) r^(±kx + ky)
            let k = if fy == 0 { (kx + ky) % n } else { (n - kx + ky) % n };
            ((fx + fy) % 2) * n + k
        })
        .expect("dihedral group table is valid")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: Element) -> Element {
        self.inverse[a]
    }

    pub fn name(&self, a: Element) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: Element, x: Element) -> Element {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: Element) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        orders.sort_unstable();
        orders
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Vec<Element> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    /// A generating set chosen greedily in element order.
    pub fn generators(&self) -> Vec<Element> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in self.elements() {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    /// All homomorphisms `self -> target`, each as an image vector indexed by
    /// element. Enumerated by assigning images to [`Self::generators`] and
    /// extending along right multiplication by generators.
    pub fn homomorphisms(&self, target: &FiniteGroup) -> Vec<Vec<Element>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(h) = self.extend_homomorphism(target, &gens, &choice) {
                out.push(h);
            }
            // odometer over target^gens
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < target.order() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn extend_homomorphism(
        &self,
        target: &FiniteGroup,
        gens: &[Element],
        images: &[Element],
    ) -> Option<Vec<Element>> {
        let mut map: Vec<Option<Element>> = vec![None; self.order()];
        map[self.identity] = Some(target.identity());
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let fx = map[x].expect("queued elements are mapped");
            for (&g, &fg) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(fx, fg);
                match map[y] {
                    Some(existing) if existing != fy => return None,
                    Some(_) => {}
                    None => {
                        map[y] = Some(fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        map.into_iter().collect()
    }

    /// Representatives of `Hom(self, target)` modulo conjugation in the
    /// target; each representative is the lexicographic minimum of its class.
    pub fn homomorphism_classes(&self, target: &FiniteGroup) -> Vec<Vec<Element>> {
        let mut reps = BTreeSet::new();
        for h in self.homomorphisms(target) {
            let canonical = target
                .elements()
                .map(|k| h.iter().map(|&x| target.conjugate(k, x)).collect::<Vec<_>>())
                .min()
                .expect("target is nonempty");
            reps.insert(canonical);
        }
        reps.into_iter().collect()
    }

    /// An isomorphism `self -> other`, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<Element>> {
        if self.order() != other.order() || self.order_profile() != other.order_profile() {
            return None;
        }
        self.homomorphisms(other).into_iter().find(|h| {
            let mut hit = vec![false; other.order()];
            h.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
        })
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Short human-readable isomorphism type for small groups.
    pub fn describe(&self) -> String {
        let n = self.order();
        if n == 1 {
            return "trivial".to_string();
        }
        if self.elements().any(|a| self.element_order(a) == n) {
            return format!("Z/{n}");
        }
        if self.is_abelian() && self.order_profile().iter().all(|&k| k <= 2) {
            let rank = n.trailing_zeros() as usize;
            return vec!["Z/2"; rank].join(" x ");
        }
        if n == 6 {
            return "S3".to_string();
        }
        if n == 8 && self.order_profile().iter().filter(|&&k| k == 2).count() == 5 {
            return "D4".to_string();
        }
        let kind = if self.is_abelian() { "abelian" } else { "nonabelian" };
        format!("{kind} group of order {n}")
    }
}

fn permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_validate() {
        assert_eq!(FiniteGroup::cyclic(5).order(), 5);
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        let klein = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        assert_eq!(klein.describe(), "Z/2 x Z/2");
        assert_eq!(FiniteGroup::symmetric(3).describe(), "S3");
        assert_eq!(FiniteGroup::dihedral(4).describe(), "D4");
        assert!(!FiniteGroup::symmetric(3).is_abelian());
    }

    #[test]
    fn broken_tables_are_rejected() {
        let names = vec!["1".to_string(), "s".to_string()];
        // s*s = s: no inverse for s
        let err = FiniteGroup::from_table(names.clone(), vec![0, 1, 1, 1]).unwrap_err();
        assert_eq!(err, GroupError::NoInverse(1));
        let err = FiniteGroup::from_table(names, vec![0, 1, 1]).unwrap_err();
        assert!(matches!(err, GroupError::TableSize { .. }));
    }

    #[test]
    fn hom_counts_match_brute_force() {
        let groups = [
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(4),
            FiniteGroup::symmetric(3),
            FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)),
        ];
        for a in &groups {
            for b in &groups {
                // brute force over all maps
                let n = a.order();
                let m = b.order();
                let mut count = 0;
                let total = m.pow(n as u32);
                for code in 0..total {
                    let f: Vec<usize> = (0..n).map(|i| (code / m.pow(i as u32)) % m).collect();
                    let ok = a
                        .elements()
                        .all(|x| a.elements().all(|y| f[a.mul(x, y)] == b.mul(f[x], f[y])));
                    if ok {
                        count += 1;
                    }
                }
                assert_eq!(a.homomorphisms(b).len(), count);
            }
        }
    }

    #[test]
    fn hom_classes_of_z2() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(FiniteGroup::trivial().homomorphism_classes(&z2).len(), 1);
        assert_eq!(z2.homomorphism_classes(&z2).len(), 2);
        // Hom(Z/2, S3)/conj: trivial plus the class of transpositions
        assert_eq!(z2.homomorphism_classes(&FiniteGroup::symmetric(3)).len(), 2);
    }

    #[test]
    fn isomorphism_detection() {
        let z4 = FiniteGroup::cyclic(4);
        let klein = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2));
        assert!(!z4.is_isomorphic(&klein));
        assert!(FiniteGroup::symmetric(3).is_isomorphic(&FiniteGroup::dihedral(3)));
        let z6 = FiniteGroup::cyclic(6);
        let z2z3 = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(3));
        assert!(z6.is_isomorphic(&z2z3));
    }
}
