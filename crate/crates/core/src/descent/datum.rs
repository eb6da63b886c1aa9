use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bibundle::{BundleError, Point, PrincipalBundle, PrincipalityWitness, RightAction};
use crate::constructions::SetCover;
use crate::fingpd::FiniteGroupoid;

/// First failure of `φ_ik = φ_ij ∘ φ_jk`, at point `point` of `ξ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub point: Point,
    pub base: usize,
}

impl fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cocycle fails on ({}, {}, {}) at point {} over base point {}",
            self.i, self.j, self.k, self.point, self.base
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("expected {expected} local bundles, found {found}")]
    PieceCount { expected: usize, found: usize },
    #[error("local bundle {piece} does not live over its piece or over the common groupoid")]
    BadPiece { piece: usize },
    #[error("transition ({i}, {j}) is missing or out of order")]
    MissingTransition { i: usize, j: usize },
    #[error("transition ({i}, {j}) is not a fiberwise map on the overlap at point {point}")]
    BadTransition { i: usize, j: usize, point: Point },
    #[error("{0}")]
    CocycleFailure(CocycleViolation),
    #[error("transition ({i}, {j}) is not equivariant at point {point}")]
    NotEquivariant { i: usize, j: usize, point: Point },
    #[error("not principal: {0:?}")]
    NotPrincipal(PrincipalityWitness),
    #[error("map on piece {piece} is not an equivariant bijection")]
    NotAnArrow { piece: usize },
    #[error("square for ({i}, {j}) does not commute at point {point}")]
    SquareFails { i: usize, j: usize, point: Point },
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// `φ_ij` for `i < j`: pairs `(p, φ_ij(p))` with `p` a point of `ξ_j` over
/// the overlap and the image a point of `ξ_i`, sorted by `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub i: usize,
    pub j: usize,
    pub map: Vec<(Point, Point)>,
}

/// Local bundles `ξ_i` over the pieces of a cover, glued by transitions.
/// Only `φ_ij` with `i < j` are stored; `φ_ii` is the identity and `φ_ji`
/// is read off as the inverse relation of `φ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDatum {
    cover: SetCover,
    bundles: Vec<PrincipalBundle>,
    transitions: Vec<Transition>,
}

impl DescentDatum {
    /// Checks shapes only: each `ξ_i` lives over piece `i`, every `φ_ij` is
    /// defined exactly on the overlap and preserves base points. Transitions
    /// are listed for every `i < j` in lexicographic order.
    pub fn new(
        cover: SetCover,
        bundles: Vec<PrincipalBundle>,
        transitions: Vec<Transition>,
    ) -> Result<Self, DescentError> {
        let n = cover.piece_count();
        if bundles.len() != n {
            return Err(DescentError::PieceCount {
                expected: n,
                found: bundles.len(),
            });
        }
        for (i, b) in bundles.iter().enumerate() {
            let names: Vec<&str> = cover.pieces()[i].iter().map(|&m| cover.base()[m].as_str()).collect();
            if b.base_size() != names.len()
                || b.base_names().iter().map(String::as_str).ne(names)
                || b.groupoid() != bundles[0].groupoid()
            {
                return Err(DescentError::BadPiece { piece: i });
            }
        }
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        let mut listed = transitions.iter();
        for (i, j) in pairs {
            let t = match listed.next() {
                Some(t) if (t.i, t.j) == (i, j) => t,
                _ => return Err(DescentError::MissingTransition { i, j }),
            };
            let over = |k: usize, p: Point| cover.pieces()[k][bundles[k].projection()[p]];
            let domain: Vec<Point> = (0..bundles[j].point_count())
                .filter(|&p| cover.local_index(i, over(j, p)).is_some())
                .collect();
            if t.map.len() != domain.len() {
                let point = domain
                    .iter()
                    .copied()
                    .find(|p| !t.map.iter().any(|(q, _)| q == p))
                    .unwrap_or(0);
                return Err(DescentError::BadTransition { i, j, point });
            }
            for (&(p, q), &expected) in t.map.iter().zip(&domain) {
                if p != expected || q >= bundles[i].point_count() || over(i, q) != over(j, p) {
                    return Err(DescentError::BadTransition { i, j, point: p });
                }
            }
        }
        if let Some(t) = listed.next() {
            return Err(DescentError::MissingTransition { i: t.i, j: t.j });
        }
        Ok(Self {
            cover,
            bundles,
            transitions,
        })
    }

    pub fn cover(&self) -> &SetCover {
        &self.cover
    }

    pub fn bundles(&self) -> &[PrincipalBundle] {
        &self.bundles
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn groupoid(&self) -> Option<&Arc<FiniteGroupoid>> {
        self.bundles.first().map(|b| b.groupoid())
    }

    /// Base point of `M` under point `p` of `ξ_i`.
    pub fn base_point(&self, i: usize, p: Point) -> usize {
        self.cover.pieces()[i][self.bundles[i].projection()[p]]
    }

    fn stored(&self, i: usize, j: usize) -> &Transition {
        let n = self.cover.piece_count();
        // position of (i, j) among pairs i < j in lexicographic order
        let idx = i * n - i * (i + 1) / 2 + (j - i - 1);
        &self.transitions[idx]
    }

    /// `φ_ij` as a partial map on points of `ξ_j`.
    pub fn phi(&self, i: usize, j: usize) -> Vec<Option<Point>> {
        let n_j = self.bundles[j].point_count();
        if i == j {
            return (0..n_j).map(Some).collect();
        }
        if i < j {
            let mut out = vec![None; n_j];
            for &(p, q) in &self.stored(i, j).map {
                out[p] = Some(q);
            }
            return out;
        }
        let mut out = vec![None; n_j];
        let mut hits = vec![0usize; n_j];
        for &(p, q) in &self.stored(j, i).map {
            hits[q] += 1;
            out[q] = Some(p);
        }
        for (q, &h) in hits.iter().enumerate() {
            if h != 1 {
                out[q] = None;
            }
        }
        out
    }

    /// Replaces one stored transition map; shapes are rechecked.
    pub fn with_transition(&self, t: Transition) -> Result<Self, DescentError> {
        let mut ts = self.transitions.clone();
        let slot = ts
            .iter()
            .position(|s| (s.i, s.j) == (t.i, t.j))
            .ok_or(DescentError::MissingTransition { i: t.i, j: t.j })?;
        ts[slot] = t;
        Self::new(self.cover.clone(), self.bundles.clone(), ts)
    }
}

/// Checks `φ_ik = φ_ij ∘ φ_jk` at every point of `ξ_k` over the triple
/// overlap, for all `(i, j, k)` in lexicographic order, repeated indices
/// included.
pub fn check_cocycle(d: &DescentDatum) -> Result<(), CocycleViolation> {
    let n = d.cover.piece_count();
    let phis: Vec<Vec<Vec<Option<Point>>>> = (0..n).map(|i| (0..n).map(|j| d.phi(i, j)).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in 0..d.bundles[k].point_count() {
                    let m = d.base_point(k, p);
                    if d.cover.local_index(i, m).is_none() || d.cover.local_index(j, m).is_none() {
                        continue;
                    }
                    let direct = phis[i][k][p];
                    let via = phis[j][k][p].and_then(|q| phis[i][j][q]);
                    if direct.is_none() || direct != via {
                        return Err(CocycleViolation {
                            i,
                            j,
                            k,
                            point: p,
                            base: m,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks that every stored `φ_ij` commutes with the action and anchors.
pub fn check_transitions(d: &DescentDatum) -> Result<(), DescentError> {
    for t in &d.transitions {
        let (src, dst) = (&d.bundles[t.j], &d.bundles[t.i]);
        let phi = d.phi(t.i, t.j);
        for &(p, q) in &t.map {
            let ok = src.anchor()[p] == dst.anchor()[q]
                && src
                    .action()
                    .acting_arrows(p)
                    .all(|h| src.action().act(p, h).and_then(|r| phi[r]) == dst.action().act(q, h));
            if !ok {
                return Err(DescentError::NotEquivariant { i: t.i, j: t.j, point: p });
            }
        }
    }
    Ok(())
}

/// `P` restricted to the base points `subset`, in that order, with the
/// embedding of its points into `P`.
pub fn restrict_bundle(p: &PrincipalBundle, subset: &[usize]) -> (PrincipalBundle, Vec<Point>) {
    let embed: Vec<Point> = (0..p.point_count())
        .filter(|&q| subset.contains(&p.projection()[q]))
        .collect();
    let index = |q: Point| embed.iter().position(|&e| e == q);
    let action = RightAction::new(
        p.groupoid().clone(),
        embed.iter().map(|&q| p.anchor()[q]).collect(),
        |q, h| index(p.action().act(embed[q], h)?),
    )
    .expect("restriction of an action");
    let proj = embed
        .iter()
        .map(|&q| subset.iter().position(|&m| m == p.projection()[q]).expect("in subset"))
        .collect();
    let bundle = PrincipalBundle::new(
        action,
        embed.iter().map(|&q| p.point_names()[q].clone()).collect(),
        subset.iter().map(|&m| p.base_names()[m].clone()).collect(),
        proj,
    )
    .expect("restriction of a principal bundle");
    (bundle, embed)
}

/// `ξ_i = P|U_i` with `φ_ij` matching the two copies of each point of `P`.
pub fn restrict_to_cover(p: &PrincipalBundle, cover: &SetCover) -> DescentDatum {
    let pieces: Vec<(PrincipalBundle, Vec<Point>)> =
        cover.pieces().iter().map(|u| restrict_bundle(p, u)).collect();
    let n = pieces.len();
    let mut transitions = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let map = pieces[j]
                .1
                .iter()
                .enumerate()
                .filter_map(|(q, &e)| pieces[i].1.iter().position(|&f| f == e).map(|r| (q, r)))
                .collect();
            transitions.push(Transition { i, j, map });
        }
    }
    let d = DescentDatum::new(
        cover.clone(),
        pieces.into_iter().map(|(b, _)| b).collect(),
        transitions,
    )
    .expect("restriction has the right shape");
    debug_assert!(check_cocycle(&d).is_ok());
    d
}

/// Per-piece equivariant maps `α_i: ξ_i -> η_i` between data on one cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentArrow {
    pub maps: Vec<Vec<Point>>,
}

impl DescentArrow {
    pub fn identity(d: &DescentDatum) -> Self {
        Self {
            maps: d.bundles.iter().map(|b| (0..b.point_count()).collect()).collect(),
        }
    }

    /// Checks that each `α_i` is equivariant over the piece and that
    /// `α_i ∘ φ_ij = ψ_ij ∘ α_j` on the overlap.
    pub fn verify(&self, from: &DescentDatum, to: &DescentDatum) -> Result<(), DescentError> {
        let n = from.cover.piece_count();
        if self.maps.len() != n || to.cover.piece_count() != n {
            return Err(DescentError::PieceCount {
                expected: n,
                found: self.maps.len(),
            });
        }
        for (i, map) in self.maps.iter().enumerate() {
            if !from.bundles[i].is_equivariant_map(&to.bundles[i], map) {
                return Err(DescentError::NotAnArrow { piece: i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (phi, psi) = (from.phi(i, j), to.phi(i, j));
                for p in 0..from.bundles[j].point_count() {
                    let Some(q) = phi[p] else { continue };
                    if Some(self.maps[i][q]) != psi[self.maps[j][p]] {
                        return Err(DescentError::SquareFails { i, j, point: p });
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every component is a bijection.
    pub fn is_isomorphism(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut s = m.clone();
            s.sort_unstable();
            s.iter().copied().eq(0..m.len())
        })
    }

    pub fn then(&self, next: &DescentArrow) -> DescentArrow {
        DescentArrow {
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(a, b)| a.iter().map(|&p| b[p]).collect())
                .collect(),
        }
    }
}

/// A glued bundle with the chart of each local bundle into it.
#[derive(Clone, Debug)]
pub struct Glued {
    pub bundle: PrincipalBundle,
    /// `charts[i][p]` is the glued point for point `p` of `ξ_i`.
    pub charts: Vec<Vec<Point>>,
}

/// Glues the local bundles along the transitions. Each base point `m` takes
/// its fiber from the first piece containing it.
pub fn glue(d: &DescentDatum) -> Result<Glued, DescentError> {
    check_cocycle(d).map_err(DescentError::CocycleFailure)?;
    check_transitions(d)?;
    let cover = &d.cover;
    let home: Vec<usize> = (0..cover.base_size())
        .map(|m| {
            (0..cover.piece_count())
                .find(|&i| cover.local_index(i, m).is_some())
                .expect("cover is onto")
        })
        .collect();
    let mut points: Vec<(usize, Point)> = Vec::new();
    for (m, &i) in home.iter().enumerate() {
        for p in 0..d.bundles[i].point_count() {
            if d.base_point(i, p) == m {
                points.push((i, p));
            }
        }
    }
    let index = |i: usize, p: Point| points.iter().position(|&q| q == (i, p)).expect("glued point");
    let h = d.groupoid().expect("nonempty cover").clone();
    let action = RightAction::new(
        h,
        points.iter().map(|&(i, p)| d.bundles[i].anchor()[p]).collect(),
        |q, k| {
            let (i, p) = points[q];
            Some(index(i, d.bundles[i].action().act(p, k)?))
        },
    )
    .expect("checked transitions give an action");
    let bundle = PrincipalBundle::new(
        action,
        points.iter().map(|&(i, p)| d.bundles[i].point_names()[p].clone()).collect(),
        cover.base().to_vec(),
        points.iter().map(|&(i, p)| d.base_point(i, p)).collect(),
    )?;
    let charts = (0..cover.piece_count())
        .map(|j| {
            (0..d.bundles[j].point_count())
                .map(|p| {
                    let i = home[d.base_point(j, p)];
                    let q = d.phi(i, j)[p].expect("cocycle checked");
                    index(i, q)
                })
                .collect()
        })
        .collect();
    Ok(Glued { bundle, charts })
}

/// `restrict_to_cover(glue(d))` with the arrow `d -> restrict_to_cover(glue(d))`
/// built from the charts, verified.
pub fn glue_round_trip(d: &DescentDatum) -> Result<(DescentDatum, DescentArrow), DescentError> {
    let glued = glue(d)?;
    let back = restrict_to_cover(&glued.bundle, &d.cover);
    let maps = d
        .cover
        .pieces()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let (_, embed) = restrict_bundle(&glued.bundle, u);
            glued.charts[i]
                .iter()
                .map(|&g| embed.iter().position(|&e| e == g).expect("chart lands over piece"))
                .collect()
        })
        .collect();
    let arrow = DescentArrow { maps };
    arrow.verify(d, &back)?;
    Ok((back, arrow))
}

/// The isomorphism `glue(restrict_to_cover(P)) -> P`, verified.
pub fn restrict_round_trip(p: &PrincipalBundle, cover: &SetCover) -> Result<Vec<Point>, DescentError> {
    let d = restrict_to_cover(p, cover);
    let glued = glue(&d)?;
    let embeds: Vec<Vec<Point>> = cover.pieces().iter().map(|u| restrict_bundle(p, u).1).collect();
    let mut map = vec![usize::MAX; glued.bundle.point_count()];
    for (i, chart) in glued.charts.iter().enumerate() {
        for (q, &g) in chart.iter().enumerate() {
            map[g] = embeds[i][q];
        }
    }
    let mut sorted = map.clone();
    sorted.sort_unstable();
    if !glued.bundle.is_equivariant_map(p, &map) || !sorted.iter().copied().eq(0..p.point_count()) {
        return Err(DescentError::NotAnArrow { piece: 0 });
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("m{i}")).collect()
    }

    fn bz2() -> Arc<FiniteGroupoid> {
        FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)).into_arc()
    }

    /// Trivial `BZ2` bundles on `{m0, m1} ∪ {m1, m2}` glued by `σ` over `m1`.
    fn twisted_datum() -> DescentDatum {
        let cover = SetCover::new(names(3), vec![vec![0, 1], vec![1, 2]]).unwrap();
        let bundles: Vec<PrincipalBundle> = cover
            .pieces()
            .iter()
            .map(|u| PrincipalBundle::pulled_unit(bz2(), u.iter().map(|&m| format!("m{m}")).collect(), &vec![0; u.len()]))
            .collect();
        // ξ_1 points over m1 are 0, 1; ξ_0 points over m1 are 2, 3
        let t = Transition {
            i: 0,
            j: 1,
            map: vec![(0, 3), (1, 2)],
        };
        DescentDatum::new(cover, bundles, vec![t]).unwrap()
    }

    #[test]
    fn identity_cover_is_the_bundle() {
        let p = PrincipalBundle::unit(FiniteGroupoid::pair(2).into_arc());
        let cover = SetCover::identity(p.base_names().to_vec());
        let d = restrict_to_cover(&p, &cover);
        assert_eq!(d.bundles()[0], p);
        assert!(d.transitions().is_empty());
        assert_eq!(check_cocycle(&d), Ok(()));
    }

    #[test]
    fn singleton_pieces_of_the_unit_bundle() {
        let h = FiniteGroupoid::transitive(3, &FiniteGroup::cyclic(2)).into_arc();
        let p = PrincipalBundle::unit(h.clone());
        let d = restrict_to_cover(&p, &SetCover::singletons(p.base_names().to_vec()));
        assert_eq!(d.bundles().len(), h.object_count());
        assert!(d.transitions().iter().all(|t| t.map.is_empty()));
        let (_, arrow) = glue_round_trip(&d).unwrap();
        assert!(arrow.is_isomorphism());
    }

    #[test]
    fn twisted_transition_glues_to_a_trivializable_bundle() {
        let d = twisted_datum();
        assert_eq!(check_cocycle(&d), Ok(()));
        let g = glue(&d).unwrap();
        let s = g.bundle.global_section();
        assert!(g.bundle.is_section(&s));
        assert!(g.bundle.trivialize(&s).is_ok());
        let (_, arrow) = glue_round_trip(&d).unwrap();
        assert!(arrow.is_isomorphism());
    }

    #[test]
    fn non_injective_transition_breaks_the_cocycle() {
        let d = twisted_datum();
        let bad = d
            .with_transition(Transition {
                i: 0,
                j: 1,
                map: vec![(0, 3), (1, 3)],
            })
            .unwrap();
        let v = check_cocycle(&bad).unwrap_err();
        assert_eq!((v.i, v.j, v.k), (0, 1, 0));
        assert!(matches!(glue(&bad), Err(DescentError::CocycleFailure(_))));
    }

    #[test]
    fn round_trips_on_a_three_piece_cover() {
        let h = FiniteGroupoid::pair(2).into_arc();
        let p = PrincipalBundle::pulled_unit(h, names(4), &[0, 1, 1, 0]);
        let cover = SetCover::new(names(4), vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 0]]).unwrap();
        let map = restrict_round_trip(&p, &cover).unwrap();
        assert!(map.iter().enumerate().all(|(i, &j)| i == j));
        let d = restrict_to_cover(&p, &cover);
        assert!(glue_round_trip(&d).unwrap().1.is_isomorphism());
    }

    #[test]
    fn shape_errors() {
        let d = twisted_datum();
        assert!(matches!(
            d.with_transition(Transition { i: 0, j: 1, map: vec![(0, 3)] }),
            Err(DescentError::BadTransition { .. })
        ));
        assert!(matches!(
            d.with_transition(Transition { i: 0, j: 1, map: vec![(0, 0), (1, 2)] }),
            Err(DescentError::BadTransition { point: 0, .. })
        ));
    }
}
