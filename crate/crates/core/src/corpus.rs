//! Named example groupoids and seeded random generators for tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::{action_groupoid, GroupAction, SetCover};
use crate::fingpd::{functors, FiniteGroupoid, GroupoidFunctor};
use crate::group::FiniteGroup;

pub use rand::SeedableRng;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z/2` acting on two points by swapping them.
pub fn z2_swap() -> FiniteGroupoid {
    let swap = GroupAction::new(FiniteGroup::cyclic(2), vec!["a".into(), "b".into()], |g, x| g ^ x)
        .expect("swap action");
    action_groupoid(&swap)
}

pub fn bz(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::from_group(&FiniteGroup::cyclic(n))
}

/// Looks up a groupoid by its corpus name.
pub fn by_name(name: &str) -> Option<FiniteGroupoid> {
    named().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}

/// Twelve small groupoids, several of them Morita equivalent to each other.
pub fn named() -> Vec<(&'static str, FiniteGroupoid)> {
    let z2 = FiniteGroup::cyclic(2);
    vec![
        ("pt", FiniteGroupoid::point()),
        ("BZ2", bz(2)),
        ("BZ3", bz(3)),
        ("Disc2", FiniteGroupoid::discrete(2)),
        ("Pair2", FiniteGroupoid::pair(2)),
        ("Pair3", FiniteGroupoid::pair(3)),
        ("Z2swap", z2_swap()),
        ("BV4", FiniteGroupoid::from_group(&z2.product(&z2))),
        ("BS3", FiniteGroupoid::from_group(&FiniteGroup::symmetric(3))),
        ("Pair2xBZ2", FiniteGroupoid::transitive(2, &z2)),
        ("Disc2+BZ2", FiniteGroupoid::discrete(2).disjoint_union(&bz(2))),
        ("pt+BZ2", FiniteGroupoid::point().disjoint_union(&bz(2))),
    ]
}

fn small_groups() -> Vec<FiniteGroup> {
    let z2 = FiniteGroup::cyclic(2);
    vec![
        FiniteGroup::trivial(),
        z2.clone(),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        z2.product(&z2),
        FiniteGroup::symmetric(3),
    ]
}

/// A disjoint union of transitive groupoids `Pair(n) × BK` with at most
/// `max_arrows` arrows in total and at least one object, with objects and
/// arrows shuffled.
pub fn random_groupoid(rng: &mut CorpusRng, max_arrows: usize) -> FiniteGroupoid {
    let groups = small_groups();
    let mut out: Option<FiniteGroupoid> = None;
    let mut budget = max_arrows.max(1);
    loop {
        let fits: Vec<(usize, &FiniteGroup)> = (1..=3)
            .flat_map(|n| groups.iter().map(move |k| (n, k)))
            .filter(|(n, k)| n * n * k.order() <= budget)
            .collect();
        let Some(&(n, k)) = fits.choose(rng) else { break };
        let piece = FiniteGroupoid::transitive(n, k);
        budget -= piece.arrow_count();
        out = Some(match out {
            None => piece,
            Some(g) => g.disjoint_union(&piece),
        });
        if rng.gen_bool(0.5) {
            break;
        }
    }
    let g = out.expect("budget admits a point");
    shuffle(rng, &g)
}

fn shuffle(rng: &mut CorpusRng, g: &FiniteGroupoid) -> FiniteGroupoid {
    let mut objs: Vec<usize> = g.objects().collect();
    let mut arrs: Vec<usize> = g.arrows().collect();
    objs.shuffle(rng);
    arrs.shuffle(rng);
    g.permuted(&objs, &arrs)
}

/// A uniformly chosen functor `g -> h`, if any exists.
pub fn random_functor(
    rng: &mut CorpusRng,
    g: &Arc<FiniteGroupoid>,
    h: &Arc<FiniteGroupoid>,
) -> Option<GroupoidFunctor> {
    functors(g, h).choose(rng).cloned()
}

/// A cover of `n` points by at most `max_pieces` nonempty pieces; missing
/// points are added to random pieces.
pub fn random_cover(rng: &mut CorpusRng, n: usize, max_pieces: usize) -> SetCover {
    let base: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let k = rng.gen_range(1..=max_pieces.max(1));
    let mut pieces: Vec<Vec<usize>> = (0..k)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    for m in 0..n {
        if !pieces.iter().any(|u| u.contains(&m)) {
            let i = rng.gen_range(0..k);
            pieces[i].push(m);
        }
    }
    for u in &mut pieces {
        if u.is_empty() && n > 0 {
            u.push(rng.gen_range(0..n));
        }
        u.sort_unstable();
    }
    SetCover::new(base, pieces).expect("random cover is onto")
}

/// Every cover of `n` points by distinct nonempty pieces, at most
/// `max_pieces` of them, with pieces listed in increasing bitmask order.
pub fn all_covers(n: usize, max_pieces: usize) -> Vec<SetCover> {
    let base: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let full = (1u32 << n) - 1;
    let masks: Vec<u32> = (1..=full).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(masks: &[u32], start: usize, full: u32, max: usize, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if chosen.iter().fold(0, |a, &m| a | m) == full {
            out.push(chosen.clone());
        }
        if chosen.len() == max {
            return;
        }
        for i in start..masks.len() {
            chosen.push(masks[i]);
            go(masks, i + 1, full, max, chosen, out);
            chosen.pop();
        }
    }
    if n == 0 {
        return vec![SetCover::new(base, vec![]).expect("empty cover")];
    }
    let mut families = Vec::new();
    go(&masks, 0, full, max_pieces, &mut chosen, &mut families);
    for fam in families {
        let pieces = fam
            .iter()
            .map(|&m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
            .collect();
        out.push(SetCover::new(base.clone(), pieces).expect("covering family"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_corpus_is_valid() {
        let all = named();
        assert_eq!(all.len(), 12);
        assert!(by_name("Z2swap").is_some());
    }

    #[test]
    fn random_groupoids_respect_the_bound() {
        let mut r = rng(7);
        for _ in 0..50 {
            let g = random_groupoid(&mut r, 10);
            assert!(g.arrow_count() <= 10 && g.object_count() >= 1);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_groupoid(&mut rng(3), 12);
        let b = random_groupoid(&mut rng(3), 12);
        assert_eq!(a, b);
    }

    #[test]
    fn cover_counts() {
        // covering families of a 2-point set by distinct nonempty pieces
        assert_eq!(all_covers(2, 3).len(), 5);
        assert_eq!(all_covers(1, 3).len(), 1);
        let mut r = rng(1);
        for _ in 0..20 {
            let c = random_cover(&mut r, 4, 3);
            assert!(c.piece_count() <= 3);
        }
    }
}
