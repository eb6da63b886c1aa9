use thiserror::Error;

use super::action::Point;
use super::bundle::{Bibundle, BibundleError};
use super::iso::{find_isomorphism, BibundleIso, IsoError};
use super::principal::PrincipalityWitness;
use crate::fingpd::same_groupoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("right groupoid of the first bibundle is not the left groupoid of the second")]
    MiddleMismatch,
    #[error("composite is not a bibundle: {0}")]
    Invalid(BibundleError),
}

/// `Q∘P = (P ×_{H_0} Q)/H` for `P: G -> H`, `Q: H -> K`, where `H` acts by
/// `(p, q)·h = (p·h, h⁻¹·q)`. Each orbit is represented by its
/// lexicographically least pair, and orbits are ordered by representative.
pub fn compose(p: &Bibundle, q: &Bibundle) -> Result<Bibundle, ComposeError> {
    if !same_groupoid(p.right_groupoid(), q.left_groupoid()) {
        return Err(ComposeError::MiddleMismatch);
    }
    let h = p.right_groupoid().clone();
    let pairs: Vec<(Point, Point)> = (0..p.point_count())
        .flat_map(|x| {
            (0..q.point_count())
                .filter(move |&y| p.right_anchor()[x] == q.left_anchor()[y])
                .map(move |y| (x, y))
        })
        .collect();
    let pair_index = |x: Point, y: Point| pairs.binary_search(&(x, y)).ok();
    let mut orbit_of = vec![usize::MAX; pairs.len()];
    let mut reps = Vec::new();
    for i in 0..pairs.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let k = reps.len();
        reps.push(pairs[i]);
        let (x, y) = pairs[i];
        for a in p.right_action().acting_arrows(x) {
            let moved = (
                p.act_right(x, a).expect("acting"),
                q.act_left(h.inv(a), y).expect("acting"),
            );
            orbit_of[pair_index(moved.0, moved.1).expect("fiber product is invariant")] = k;
        }
    }
    let orbit = |x: Point, y: Point| orbit_of[pair_index(x, y).expect("pair")];
    let names = reps
        .iter()
        .map(|&(x, y)| format!("[{},{}]", p.point_name(x), q.point_name(y)))
        .collect();
    Bibundle::from_tables(
        p.left_groupoid().clone(),
        q.right_groupoid().clone(),
        names,
        reps.iter().map(|&(x, _)| p.left_anchor()[x]).collect(),
        reps.iter().map(|&(_, y)| q.right_anchor()[y]).collect(),
        |g, i| {
            let (x, y) = reps[i];
            Some(orbit(p.act_left(g, x)?, y))
        },
        |i, k| {
            let (x, y) = reps[i];
            Some(orbit(x, q.act_right(y, k)?))
        },
    )
    .map_err(ComposeError::Invalid)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("left action is not principal over the right anchor: {0:?}")]
    NotLeftPrincipal(PrincipalityWitness),
    #[error("witness search failed: {0}")]
    Search(IsoError),
    #[error("no isomorphism to the unit bibundle was found")]
    NoWitness,
}

/// `P⁻¹` with the witnesses `P⁻¹∘P ≅ ⟨id_G⟩` and `P∘P⁻¹ ≅ ⟨id_H⟩`.
#[derive(Clone, Debug)]
pub struct Inverse {
    pub inverse: Bibundle,
    /// `P⁻¹∘P -> ⟨id_G⟩`, on `compose(P, P⁻¹)`.
    pub left_unit: BibundleIso,
    /// `P∘P⁻¹ -> ⟨id_H⟩`, on `compose(P⁻¹, P)`.
    pub right_unit: BibundleIso,
}

/// Swaps the anchors and turns each action into one on the other side:
/// `h·p := p·h⁻¹` and `p·g := g⁻¹·p`.
pub fn invert(p: &Bibundle) -> Result<Inverse, InvertError> {
    if let Some(w) = p.left_principality().witness {
        return Err(InvertError::NotLeftPrincipal(w));
    }
    let (g, h) = (p.left_groupoid().clone(), p.right_groupoid().clone());
    let inverse = Bibundle::new(
        p.point_names().to_vec(),
        p.right_action().as_left(),
        p.left_action().as_right(),
    )
    .expect("inverse of a left-principal bibundle");
    let find = |a: &Bibundle, b: &Bibundle| -> Result<BibundleIso, InvertError> {
        find_isomorphism(a, b)
            .map_err(InvertError::Search)?
            .ok_or(InvertError::NoWitness)
    };
    let left_unit = find(
        &compose(p, &inverse).expect("composable"),
        &Bibundle::unit(g),
    )?;
    let right_unit = find(
        &compose(&inverse, p).expect("composable"),
        &Bibundle::unit(h),
    )?;
    Ok(Inverse {
        inverse,
        left_unit,
        right_unit,
    })
}
