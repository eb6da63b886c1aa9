//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so each line reports its own timing.

use std::ops::ControlFlow;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gpdcalc::bibundle::{
    compose, equivalence_iff_principal, equivariant_maps, find_isomorphism, is_isomorphism, Bibundle,
    PrincipalBundle,
};
use gpdcalc::category::{CategoryFunctor, FiniteCategory};
use gpdcalc::constructions::{pullback_groupoid, pullback_reaches_every_object, restrict, SetCover};
use gpdcalc::corpus::{self, all_covers, random_cover, random_functor, random_groupoid, CorpusRng};
use gpdcalc::descent::{
    check_cocycle, glue_round_trip, groupoid_from_atlas, restrict_round_trip, restrict_to_cover, DescentDatum,
    Transition,
};
use gpdcalc::fingpd::{functors, is_equivalence, Obj};
use gpdcalc::graphtop::{circle_demo, gauge_equivalent, restrict_cocycle};
use gpdcalc::morita::{
    check_universal_property, for_each_bibundle, hs_hom_classes, localize_symbolic, morita_by_search,
    morita_equivalent, skeleton_hom_count, LocalizationError, HS_BOUND,
};
use gpdcalc::{FiniteGroupoid, GroupoidFunctor};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

// 1

fn circle() -> Outcome {
    for n in 3..=8 {
        let r = circle_demo(n).map_err(|e| e.to_string())?;
        ensure(r.global_classes == 2, || format!("C_{n}: {} global classes", r.global_classes))?;
        ensure(r.arc_classes == [1, 1], || format!("C_{n}: arc classes {:?}", r.arc_classes))?;
        for i in 0..2 {
            let a = restrict_cocycle(&r.trivial, &r.cover.vertices[i], &r.cover.edges[i]).map_err(|e| e.to_string())?;
            let b = restrict_cocycle(&r.twisted, &r.cover.vertices[i], &r.cover.edges[i]).map_err(|e| e.to_string())?;
            ensure(r.arc_witnesses[i].apply(&a) == b, || format!("C_{n}: arc {i} witness does not transform"))?;
        }
        ensure(r.global_witness.is_none(), || format!("C_{n}: global witness found"))?;
        let again = gauge_equivalent(&r.trivial, &r.twisted).map_err(|e| e.to_string())?;
        ensure(again.is_none(), || format!("C_{n}: cocycles gauge equivalent"))?;
        ensure(r.holonomy.0 != r.holonomy.1, || format!("C_{n}: holonomies agree"))?;
        ensure(r.obstruction(), || format!("C_{n}: arc witnesses glue"))?;
    }
    Ok("C_3..C_8: 2 global classes, 1+1 arc classes, no global transform".into())
}

// 2

fn equivalence_principality() -> Outcome {
    let mut rng = corpus::rng(2);
    let (mut total, mut equivalences) = (0, 0);
    while total < 240 {
        let g = random_groupoid(&mut rng, 10).into_arc();
        let h = random_groupoid(&mut rng, 10).into_arc();
        let mut fs = functors(&g, &h);
        fs.shuffle(&mut rng);
        for f in fs.iter().take(6) {
            let report = equivalence_iff_principal(f);
            ensure(report.agree(), || format!("disagreement on functor {:?}", f.arr_map()))?;
            total += 1;
            if report.equivalence.is_equivalence() {
                equivalences += 1;
            }
        }
    }
    ensure(equivalences > 0 && equivalences < total, || "corpus is one-sided".into())?;
    Ok(format!("{total} functors, {equivalences} equivalences, 0 discrepancies"))
}

// 3

fn some_bibundles(rng: &mut CorpusRng, g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>) -> Option<Bibundle> {
    let mut found = Vec::new();
    for_each_bibundle(g, h, |b| {
        if b.point_count() <= 32 {
            found.push(b);
        }
        if found.len() >= 24 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found.choose(rng).cloned()
}

fn iso(p: &Bibundle, q: &Bibundle, what: &str) -> Result<(), String> {
    match find_isomorphism(p, q) {
        Ok(Some(m)) if is_isomorphism(p, q, &m.map) => Ok(()),
        Ok(Some(_)) => Err(format!("{what}: returned map is not an isomorphism")),
        Ok(None) => Err(format!("{what}: no isomorphism")),
        Err(e) => Err(format!("{what}: {e}")),
    }
}

fn two_category_laws() -> Outcome {
    let mut rng = corpus::rng(3);
    let mut triples = 0;
    while triples < 120 {
        let gs: Vec<Arc<FiniteGroupoid>> = (0..4).map(|_| random_groupoid(&mut rng, 6).into_arc()).collect();
        let (Some(p), Some(q), Some(r)) = (
            some_bibundles(&mut rng, &gs[0], &gs[1]),
            some_bibundles(&mut rng, &gs[1], &gs[2]),
            some_bibundles(&mut rng, &gs[2], &gs[3]),
        ) else {
            continue;
        };
        let pq = compose(&p, &q).map_err(|e| e.to_string())?;
        let qr = compose(&q, &r).map_err(|e| e.to_string())?;
        if pq.point_count() > 32 || qr.point_count() > 32 {
            continue;
        }
        let left = compose(&pq, &r).map_err(|e| e.to_string())?;
        let right = compose(&p, &qr).map_err(|e| e.to_string())?;
        if left.point_count() > 32 {
            continue;
        }
        iso(&left, &right, "associator")?;
        let lu = compose(&Bibundle::unit(gs[0].clone()), &p).map_err(|e| e.to_string())?;
        let ru = compose(&p, &Bibundle::unit(gs[1].clone())).map_err(|e| e.to_string())?;
        iso(&lu, &p, "left unitor")?;
        iso(&ru, &p, "right unitor")?;
        triples += 1;
    }
    let mut pairs = 0;
    while pairs < 120 {
        let gs: Vec<Arc<FiniteGroupoid>> = (0..3).map(|_| random_groupoid(&mut rng, 8).into_arc()).collect();
        let (Some(f), Some(g)) = (
            random_functor(&mut rng, &gs[0], &gs[1]),
            random_functor(&mut rng, &gs[1], &gs[2]),
        ) else {
            continue;
        };
        let gf = f.then(&g).map_err(|e| e.to_string())?;
        let composite = compose(&Bibundle::from_functor(&f), &Bibundle::from_functor(&g)).map_err(|e| e.to_string())?;
        iso(&Bibundle::from_functor(&gf), &composite, "functor composite")?;
        pairs += 1;
    }
    Ok(format!("{triples} triples (associator, both unitors), {pairs} functor pairs"))
}

// 4

fn morita_oracle() -> Outcome {
    let named: Vec<(&str, Arc<FiniteGroupoid>)> = corpus::named().into_iter().map(|(n, g)| (n, g.into_arc())).collect();
    let mut positives = 0;
    for (a, g) in &named {
        for (b, h) in &named {
            let decided = morita_equivalent(g, h).equivalent;
            let searched = morita_by_search(g, h);
            ensure(decided == searched.is_some(), || {
                format!("{a} vs {b}: decision {decided}, search {}", searched.is_some())
            })?;
            if let Some(w) = &searched {
                ensure(w.left_principality().is_principal(), || format!("{a} vs {b}: witness not principal"))?;
            }
            positives += decided as usize;
        }
    }
    let get = |n: &str| named.iter().find(|(m, _)| *m == n).map(|(_, g)| g.clone()).expect("named");
    ensure(!morita_equivalent(&get("BZ2"), &get("pt")).equivalent, || "BZ2 ~ pt".into())?;
    ensure(morita_equivalent(&get("Z2swap"), &get("pt")).equivalent, || "Z2swap !~ pt".into())?;
    Ok(format!("{} pairs agree, {positives} equivalent", named.len() * named.len()))
}

// 5

fn hs_counts() -> Outcome {
    let pt = FiniteGroupoid::point().into_arc();
    let bz2 = corpus::bz(2).into_arc();
    let disc2 = FiniteGroupoid::discrete(2).into_arc();
    let count = |g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>| {
        hs_hom_classes(g, h, HS_BOUND).map(|c| c.len()).map_err(|e| e.to_string())
    };
    for (label, g, h, n) in [("pt->BZ2", &pt, &bz2, 1), ("BZ2->BZ2", &bz2, &bz2, 2), ("Disc2->BZ2", &disc2, &bz2, 1)] {
        let found = count(g, h)?;
        ensure(found == n, || format!("{label}: {found} classes"))?;
        ensure(skeleton_hom_count(g, h) == n, || format!("{label}: oracle disagrees"))?;
    }
    let mut rng = corpus::rng(5);
    let mut random = 0;
    while random < 10 {
        let g = random_groupoid(&mut rng, 6).into_arc();
        let h = random_groupoid(&mut rng, 8).into_arc();
        if g.object_count() * h.arrow_count() > 24 {
            continue;
        }
        let (found, oracle) = (count(&g, &h)?, skeleton_hom_count(&g, &h));
        ensure(found == oracle, || format!("random pair {random}: {found} classes, oracle {oracle}"))?;
        random += 1;
    }
    Ok("3 fixed pairs and 10 random pairs match the conjugacy-class count".into())
}

// 6

fn random_preorder(rng: &mut CorpusRng) -> FiniteCategory {
    let n = rng.gen_range(2..=4);
    let mut le = vec![vec![false; n]; n];
    for (x, row) in le.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = x == y || rng.gen_bool(0.35);
        }
    }
    for k in 0..n {
        for x in 0..n {
            for y in 0..n {
                if le[x][k] && le[k][y] {
                    le[x][y] = true;
                }
            }
        }
    }
    FiniteCategory::preorder(names("o", n), |x, y| le[x][y]).expect("closed relation")
}

fn random_w(rng: &mut CorpusRng, c: &FiniteCategory) -> Vec<String> {
    let proper: Vec<usize> = c.arrows().filter(|&a| !c.is_unit(a)).collect();
    let mut w: Vec<String> = proper
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|&a| c.arrow_name(a).to_string())
        .collect();
    if w.is_empty() {
        if let Some(&a) = proper.choose(rng) {
            w.push(c.arrow_name(a).to_string());
        }
    }
    w
}

fn localization() -> Outcome {
    let mut rng = corpus::rng(6);
    let mut instances = 0;
    let mut inverted = 0;
    while instances < 20 {
        let c = if instances < 14 {
            random_preorder(&mut rng)
        } else {
            FiniteCategory::from_groupoid(&random_groupoid(&mut rng, 8))
        };
        let w = random_w(&mut rng, &c);
        if w.is_empty() {
            continue;
        }
        let loc = localize_symbolic(c, &w).map_err(|e| e.to_string())?;
        for &a in loc.w() {
            ensure(loc.verify_inverse(a), || format!("instance {instances}: no inverse for {}", loc.category().arrow_name(a)))?;
            inverted += 1;
        }
        instances += 1;
    }

    let mut positive = 0;
    while positive < 10 {
        let (c, e, phi) = if positive < 5 {
            let c = random_preorder(&mut rng);
            let e = FiniteCategory::from_groupoid(&FiniteGroupoid::pair(rng.gen_range(1..=3)));
            let obj: Vec<Obj> = c.objects().map(|_| rng.gen_range(0..e.object_count())).collect();
            let arr = c.arrows().map(|a| e.hom(obj[c.src(a)], obj[c.tgt(a)])[0]).collect();
            let phi = CategoryFunctor::new(&c, &e, obj, arr).map_err(|e| e.to_string())?;
            (c, e, phi)
        } else {
            let g = random_groupoid(&mut rng, 8).into_arc();
            let h = random_groupoid(&mut rng, 8).into_arc();
            let Some(f) = random_functor(&mut rng, &g, &h) else { continue };
            let (c, e) = (FiniteCategory::from_groupoid(&g), FiniteCategory::from_groupoid(&h));
            let phi = CategoryFunctor::new(&c, &e, f.obj_map().to_vec(), f.arr_map().to_vec()).map_err(|e| e.to_string())?;
            (c, e, phi)
        };
        let w = random_w(&mut rng, &c);
        let loc = localize_symbolic(c, &w).map_err(|e| e.to_string())?;
        check_universal_property(&loc, &e, &phi, 3).map_err(|err| format!("positive instance {positive}: {err}"))?;
        positive += 1;
    }

    let mut negative = 0;
    while negative < 5 {
        let c = random_preorder(&mut rng);
        let w = random_w(&mut rng, &c);
        let loc = localize_symbolic(c.clone(), &w).map_err(|e| e.to_string())?;
        let Some(&bad) = loc.w().iter().find(|&&a| c.inverse(a).is_none()) else { continue };
        let id = CategoryFunctor::new(&c, &c, c.objects().collect(), c.arrows().collect()).map_err(|e| e.to_string())?;
        let expected = LocalizationError::NotInverted(c.arrow_name(bad).to_string());
        match check_universal_property(&loc, &c, &id, 3) {
            Err(err) if err == expected => negative += 1,
            other => return Err(format!("negative instance {negative}: got {other:?}")),
        }
    }
    Ok(format!("{instances} instances ({inverted} inverses), {positive} positive, {negative} negative"))
}

// 7

/// A datum isomorphic to `d` with the transitions conjugated by random
/// automorphisms of the local bundles.
fn twist(rng: &mut CorpusRng, d: &DescentDatum) -> DescentDatum {
    let autos: Vec<Vec<usize>> = d
        .bundles()
        .iter()
        .map(|b| equivariant_maps(b, b).expect("same groupoid").choose(rng).cloned().expect("identity"))
        .collect();
    let transitions = d
        .transitions()
        .iter()
        .map(|t| {
            let mut map: Vec<(usize, usize)> = t.map.iter().map(|&(p, q)| (autos[t.j][p], autos[t.i][q])).collect();
            map.sort_unstable();
            Transition { i: t.i, j: t.j, map }
        })
        .collect();
    DescentDatum::new(d.cover().clone(), d.bundles().to_vec(), transitions).expect("twist keeps the shape")
}

fn object_maps(n: usize, k: usize) -> Vec<Vec<Obj>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..k).map(move |y| {
                    let mut m = m.clone();
                    m.push(y);
                    m
                })
            })
            .collect();
    }
    out
}

fn round_trips(rng: &mut CorpusRng, p: &PrincipalBundle, cover: &SetCover) -> Result<(), String> {
    restrict_round_trip(p, cover).map_err(|e| format!("glue after restrict: {e}"))?;
    let d = twist(rng, &restrict_to_cover(p, cover));
    let (_, arrow) = glue_round_trip(&d).map_err(|e| format!("restrict after glue: {e}"))?;
    ensure(arrow.is_isomorphism(), || "comparison arrow is not invertible".into())
}

/// Points of `ξ_i` over base point `m`.
fn fiber(d: &DescentDatum, i: usize, m: usize) -> Vec<usize> {
    (0..d.bundles()[i].point_count()).filter(|&p| d.base_point(i, p) == m).collect()
}

/// Moves one value of a transition to another point of the same fiber, or
/// permutes a fiber at a point lying in three pieces.
fn mutate(rng: &mut CorpusRng, d: &DescentDatum, triple: bool) -> Option<DescentDatum> {
    let cover = d.cover();
    let candidates: Vec<(usize, usize)> = d
        .transitions()
        .iter()
        .enumerate()
        .flat_map(|(ti, t)| t.map.iter().enumerate().map(move |(k, _)| (ti, k)))
        .filter(|&(ti, k)| {
            let t = &d.transitions()[ti];
            let m = d.base_point(t.j, t.map[k].0);
            let third = (0..cover.piece_count())
                .any(|l| l != t.i && l != t.j && cover.local_index(l, m).is_some());
            fiber(d, t.i, m).len() >= 2 && (!triple || third)
        })
        .collect();
    let &(ti, k) = candidates.choose(rng)?;
    let mut t = d.transitions()[ti].clone();
    let (p, q) = t.map[k];
    let m = d.base_point(t.j, p);
    let others: Vec<usize> = fiber(d, t.i, m).into_iter().filter(|&r| r != q).collect();
    if triple {
        let r = *others.choose(rng)?;
        for entry in &mut t.map {
            if entry.1 == q {
                entry.1 = r;
            } else if entry.1 == r {
                entry.1 = q;
            }
        }
    } else {
        t.map[k].1 = *others.choose(rng)?;
    }
    Some(d.with_transition(t).expect("mutation keeps the shape"))
}

fn stack_condition() -> Outcome {
    let mut rng = corpus::rng(7);
    let hs = [FiniteGroupoid::point(), corpus::bz(2), FiniteGroupoid::pair(2)].map(FiniteGroupoid::into_arc);
    let mut checked = 0;
    for n in 1..=5 {
        let max_pieces = match n {
            0..=3 => usize::MAX,
            4 => 4,
            _ => 3,
        };
        let covers = all_covers(n, max_pieces);
        for h in &hs {
            let maps = object_maps(n, h.object_count());
            for cover in &covers {
                for phi in &maps {
                    let p = PrincipalBundle::pulled_unit(h.clone(), names("m", n), phi);
                    round_trips(&mut rng, &p, cover).map_err(|e| format!("n={n}, phi={phi:?}: {e}"))?;
                    checked += 1;
                }
            }
        }
    }

    let mut caught = [0usize; 2];
    let mut injected = 0;
    while injected < 50 {
        let triple = injected % 2 == 1;
        let h = hs[rng.gen_range(1..3)].clone();
        let n = rng.gen_range(3..=5);
        let cover = random_cover(&mut rng, n, 4);
        let phi: Vec<Obj> = (0..n).map(|_| rng.gen_range(0..h.object_count())).collect();
        let p = PrincipalBundle::pulled_unit(h, names("m", n), &phi);
        let d = twist(&mut rng, &restrict_to_cover(&p, &cover));
        ensure(check_cocycle(&d).is_ok(), || "valid datum rejected".into())?;
        let Some(bad) = mutate(&mut rng, &d, triple) else { continue };
        injected += 1;
        if check_cocycle(&bad).is_err() {
            caught[triple as usize] += 1;
        }
    }
    let total = caught[0] + caught[1];
    ensure(total == injected, || format!("caught {total} of {injected} violations"))?;
    Ok(format!(
        "{checked} bundle/cover round trips; caught {total}/{injected} violations ({} reassigned, {} triple-overlap)",
        caught[0], caught[1]
    ))
}

// 8

fn atlas() -> Outcome {
    let mut rng = corpus::rng(8);
    let mut all: Vec<FiniteGroupoid> = corpus::named().into_iter().map(|(_, g)| g).collect();
    all.extend((0..30).map(|_| random_groupoid(&mut rng, 24)));
    for (idx, g) in all.into_iter().enumerate() {
        let g = g.into_arc();
        let r = groupoid_from_atlas(&g);
        let (re, f) = (&r.groupoid, &r.iso);
        ensure(f.is_isomorphism(), || format!("groupoid {idx}: not an isomorphism"))?;
        ensure(re.arrow_count() == r.triples.len(), || format!("groupoid {idx}: triple count"))?;
        for a in re.arrows() {
            let t = &r.triples[a];
            ensure(re.src(a) == t.source && re.tgt(a) == t.target, || format!("groupoid {idx}: triple ends"))?;
            ensure(
                g.src(f.on_arrow(a)) == f.on_object(re.src(a)) && g.tgt(f.on_arrow(a)) == f.on_object(re.tgt(a)),
                || format!("groupoid {idx}: s or t not respected"),
            )?;
        }
        for (b, a) in re.composable_pairs() {
            ensure(
                f.on_arrow(re.compose(b, a)) == g.compose(f.on_arrow(b), f.on_arrow(a)),
                || format!("groupoid {idx}: composition not respected"),
            )?;
        }
    }
    Ok("12 named and 30 random groupoids rebuilt isomorphically".into())
}

// 9

fn pullbacks() -> Outcome {
    let mut rng = corpus::rng(9);
    let mut all: Vec<FiniteGroupoid> = corpus::named().into_iter().map(|(_, g)| g).collect();
    all.extend((0..10).map(|_| random_groupoid(&mut rng, 16)));
    let (mut inclusions, mut surjective, mut reaching) = (0, 0, 0);
    for g in all {
        let g = g.into_arc();
        let k = g.object_count();
        for mask in 1u32..(1 << k) {
            let subset: Vec<Obj> = (0..k).filter(|&x| mask & (1 << x) != 0).collect();
            let labels: Vec<String> = subset.iter().map(|&x| g.object_name(x).to_string()).collect();
            let (pulled, proj) = pullback_groupoid(&g, &labels, &subset).map_err(|e| e.to_string())?;
            let restricted = restrict(&g, &subset).map_err(|e| e.to_string())?.into_arc();
            let arr = pulled
                .arrows()
                .map(|a| restricted.arrow_index(g.arrow_name(proj.on_arrow(a))).expect("kept arrow"))
                .collect();
            let f = GroupoidFunctor::with_object_map(pulled.into_arc(), restricted, (0..subset.len()).collect(), arr)
                .map_err(|e| e.to_string())?;
            ensure(f.is_isomorphism(), || format!("inclusion {subset:?}: not restriction"))?;
            inclusions += 1;
        }
        for trial in 0..8 {
            let extra = rng.gen_range(0..3);
            let mut f: Vec<Obj> = if trial < 4 {
                let mut f: Vec<Obj> = g.objects().collect();
                f.extend((0..extra).map(|_| rng.gen_range(0..k)));
                f
            } else {
                (0..=extra).map(|_| rng.gen_range(0..k)).collect()
            };
            f.shuffle(&mut rng);
            let (_, proj) = pullback_groupoid(&g, &names("n", f.len()), &f).map_err(|e| e.to_string())?;
            let reaches = pullback_reaches_every_object(&g, &f);
            let equivalence = is_equivalence(&proj).is_equivalence();
            if trial < 4 {
                ensure(equivalence, || format!("surjective map {f:?}: pullback not an equivalence"))?;
                surjective += 1;
            } else if reaches {
                ensure(equivalence, || format!("map {f:?}: pullback not an equivalence"))?;
                reaching += 1;
            } else {
                ensure(!equivalence, || format!("map {f:?}: misses an orbit yet equivalence"))?;
            }
        }
    }
    Ok(format!(
        "{inclusions} inclusions match restriction; {surjective} surjective and {reaching} orbit-reaching maps give equivalences"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("circle counterexample", 1, circle),
        ("equivalence iff principal", 30, equivalence_principality),
        ("weak 2-category laws", 60, two_category_laws),
        ("Morita oracle", 60, morita_oracle),
        ("HS class counts", 30, hs_counts),
        ("localization", 10, localization),
        ("stack condition", 60, stack_condition),
        ("atlas reconstruction", 30, atlas),
        ("pullback and restriction", 10, pullbacks),
    ];
    let mut failed = 0;
    for (n, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit);
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed < limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "{verdict} criterion {} ({name}): {detail} [{:.3}s / {}s]",
            n + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
