use std::sync::Arc;

use gpdcalc::bibundle::{compose, find_isomorphism, Bibundle, PrincipalBundle};
use gpdcalc::corpus::{self, random_cover, random_functor, random_groupoid};
use gpdcalc::descent::{check_cocycle, glue, glue_round_trip, restrict_round_trip, restrict_to_cover};
use gpdcalc::doc::Document;
use gpdcalc::fingpd::is_equivalence;
use gpdcalc::graphtop::{classify_bundles, gauge_equivalent, EdgeCocycle, Graph};
use gpdcalc::morita::{morita_equivalent, skeleton_hom_count};
use gpdcalc::{FiniteGroup, FiniteGroupoid};
use proptest::prelude::*;

fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3))
}

fn cocycle(g: &Arc<Graph>, k: &Arc<FiniteGroup>, labels: &[usize]) -> EdgeCocycle {
    let labels = labels.iter().take(g.edge_count()).map(|&l| l % k.order()).collect();
    EdgeCocycle::new(g.clone(), k.clone(), labels).unwrap()
}

fn wedge() -> impl Strategy<Value = Arc<Graph>> {
    prop::collection::vec(1usize..4, 1..3).prop_map(|l| Arc::new(Graph::wedge(&l)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauge_equivalence_is_an_equivalence(
        g in wedge(),
        a in prop::collection::vec(0usize..6, 8),
        b in prop::collection::vec(0usize..6, 8),
        c in prop::collection::vec(0usize..6, 8),
    ) {
        let k = s3();
        let (x, y, z) = (cocycle(&g, &k, &a), cocycle(&g, &k, &b), cocycle(&g, &k, &c));
        prop_assert!(gauge_equivalent(&x, &x).unwrap().is_some());
        let xy = gauge_equivalent(&x, &y).unwrap();
        prop_assert_eq!(xy.is_some(), gauge_equivalent(&y, &x).unwrap().is_some());
        if let Some(t) = &xy {
            prop_assert_eq!(&t.apply(&x), &y);
        }
        let yz = gauge_equivalent(&y, &z).unwrap().is_some();
        if xy.is_some() && yz {
            prop_assert!(gauge_equivalent(&x, &z).unwrap().is_some());
        }
    }

    #[test]
    fn cocycles_on_a_path_are_trivial(n in 1usize..7, labels in prop::collection::vec(0usize..6, 6)) {
        let k = s3();
        let g = Arc::new(Graph::path(n));
        let c = cocycle(&g, &k, &labels);
        prop_assert!(gauge_equivalent(&c, &EdgeCocycle::trivial(g, k)).unwrap().is_some());
    }

    #[test]
    fn subdivision_keeps_the_class_count(g in wedge(), order in 2usize..4) {
        let k = Arc::new(FiniteGroup::cyclic(order));
        let finer = Arc::new(g.subdivide());
        prop_assert_eq!(classify_bundles(&g, &k).count(), classify_bundles(&finer, &k).count());
    }

    #[test]
    fn groupoid_documents_round_trip(seed in any::<u64>()) {
        let g = random_groupoid(&mut corpus::rng(seed), 16);
        let text = Document::from(&g).to_text();
        let back = Document::parse(&text).unwrap().groupoid().unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(Document::from(&back).to_text(), text);
    }

    #[test]
    fn unitors_hold(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let g = random_groupoid(&mut rng, 8).into_arc();
        let h = random_groupoid(&mut rng, 8).into_arc();
        if let Some(f) = random_functor(&mut rng, &g, &h) {
            let p = Bibundle::from_functor(&f);
            let lu = compose(&Bibundle::unit(g), &p).unwrap();
            let ru = compose(&p, &Bibundle::unit(h)).unwrap();
            prop_assert!(find_isomorphism(&lu, &p).unwrap().is_some());
            prop_assert!(find_isomorphism(&ru, &p).unwrap().is_some());
        }
    }

    #[test]
    fn morita_decision_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let g = random_groupoid(&mut corpus::rng(a), 12).into_arc();
        let h = random_groupoid(&mut corpus::rng(b), 12).into_arc();
        prop_assert_eq!(morita_equivalent(&g, &h).equivalent, morita_equivalent(&h, &g).equivalent);
        prop_assert!(morita_equivalent(&g, &g).equivalent);
        prop_assert!(skeleton_hom_count(&g, &h) >= 1);
    }

    #[test]
    fn functor_equivalence_matches_morita(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let g = random_groupoid(&mut rng, 10).into_arc();
        let h = random_groupoid(&mut rng, 10).into_arc();
        if let Some(f) = random_functor(&mut rng, &g, &h) {
            if is_equivalence(&f).is_equivalence() {
                prop_assert!(morita_equivalent(&g, &h).equivalent);
            }
        }
    }

    #[test]
    fn restricted_bundles_glue_back(seed in any::<u64>(), n in 1usize..6, pieces in 1usize..5) {
        let mut rng = corpus::rng(seed);
        let h = [FiniteGroupoid::point(), corpus::bz(2), FiniteGroupoid::pair(2), corpus::bz(3)]
            [(seed % 4) as usize]
            .clone()
            .into_arc();
        let cover = random_cover(&mut rng, n, pieces);
        let phi: Vec<usize> = (0..n).map(|m| (seed as usize >> m) % h.object_count()).collect();
        let base = (0..n).map(|i| format!("m{i}")).collect();
        let p = PrincipalBundle::pulled_unit(h, base, &phi);
        let d = restrict_to_cover(&p, &cover);
        prop_assert!(check_cocycle(&d).is_ok());
        prop_assert_eq!(glue(&d).unwrap().bundle.point_count(), p.point_count());
        prop_assert!(restrict_round_trip(&p, &cover).is_ok());
        let (_, arrow) = glue_round_trip(&d).unwrap();
        prop_assert!(arrow.is_isomorphism());
    }
}
