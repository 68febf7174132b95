use std::sync::Arc;

use emtkit::cats::{colimit, limit, default_probes, verify_universal, CategoryTag};
use emtkit::extmetric::validate_pseudometric;
use emtkit::fintop::{is_continuous, validate_topology};
use emtkit::functors::{emt_fication, unit_is_iso};
use emtkit::gen::{random_instances, rng, small_emt, small_space, GenConfig, TopologyMode};
use emtkit::json::{emit_space, parse_space};
use emtkit::spaces::{enumerate_cs_morphisms, enumerate_homs, is_emt, is_mono_by_cancellation};
use emtkit::{Config, Exec, FinMap, HomKind, Partition, Space};
use proptest::prelude::*;

fn space(seed: u64, n: usize) -> Arc<Space> {
    Arc::new(small_space(&mut rng(seed), n))
}

fn emt(seed: u64, n: usize) -> Arc<Space> {
    Arc::new(small_emt(&mut rng(seed), n))
}

#[test]
fn generators_produce_valid_spaces() {
    for mode in [TopologyMode::Discrete, TopologyMode::Partition, TopologyMode::RandomPreorder] {
        for n in 0..=4 {
            let cfg = GenConfig { seed: 11, max_points: n, topology_mode: mode, ..GenConfig::default() };
            for s in random_instances(&cfg, 500).unwrap() {
                assert_eq!(s.len(), n);
                let opens = s.topology().opens(&Config::default().caps).unwrap();
                validate_topology(n, &opens).unwrap();
                validate_pseudometric(&s.metric().rows()).unwrap();
            }
        }
    }
}

#[test]
fn emt_generator_lands_in_emt() {
    for seed in 0..2000 {
        let s = emt(seed, (seed % 6) as usize);
        assert!(is_emt(&s).unwrap(), "{s:?}");
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let (seq, par) = (Config { exec: Exec::Sequential, ..Config::default() }, Config { exec: Exec::Parallel, ..Config::default() });
    for seed in 0..300 {
        let (a, b) = (space(seed, 3), space(seed + 10_000, 3));
        for kind in [HomKind::Any, HomKind::Continuous, HomKind::Short, HomKind::ContinuousShort] {
            assert_eq!(enumerate_homs(kind, &a, &b, &seq).unwrap(), enumerate_homs(kind, &a, &b, &par).unwrap());
        }
    }
}

#[test]
fn universal_property_of_products_and_coproducts() {
    let cfg = Config::default();
    for seed in 0..40 {
        let objects = vec![emt(seed, 2), emt(seed + 500, 2)];
        let d = emtkit::Diagram::discrete(CategoryTag::Emt, objects).unwrap();
        let probes = default_probes(CategoryTag::Emt);
        assert!(verify_universal(&d, &limit(&d, &cfg).unwrap(), &probes, &cfg).unwrap().is_pass());
        assert!(verify_universal(&d, &colimit(&d, &cfg).unwrap(), &probes, &cfg).unwrap().is_pass());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn json_round_trip(seed in any::<u64>(), n in 0usize..5) {
        let s = space(seed, n);
        let text = emit_space(&s, &Config::default().caps);
        prop_assert_eq!(parse_space(&text).unwrap(), (*s).clone());
    }

    #[test]
    fn recovered_distance_is_below_and_idempotent(seed in any::<u64>(), n in 0usize..5) {
        let s = space(seed, n);
        let r = s.recovered();
        prop_assert!(r.le(s.metric()));
        let again = Space::anonymous(s.topology().clone(), r.clone()).unwrap();
        prop_assert_eq!(again.recovered(), r);
    }

    #[test]
    fn emt_fication_is_idempotent(seed in any::<u64>(), n in 0usize..4) {
        let s = space(seed, n);
        let once = emt_fication(&s).unwrap();
        prop_assert!(is_emt(&once.object).unwrap());
        prop_assert!(once.unit.validate().is_ok());
        prop_assert!(once.unit.map.is_surjective());
        let twice = emt_fication(&once.object).unwrap();
        prop_assert!(unit_is_iso(&twice));
    }

    #[test]
    fn emt_spaces_are_fixed(seed in any::<u64>(), n in 0usize..5) {
        prop_assert!(unit_is_iso(&emt_fication(&emt(seed, n)).unwrap()));
    }

    #[test]
    fn composition_of_morphisms(seed in any::<u64>()) {
        let cfg = Config::default();
        let (a, b, c) = (space(seed, 2), space(seed ^ 1, 3), space(seed ^ 2, 2));
        for f in enumerate_cs_morphisms(&a, &b, &cfg).unwrap() {
            for g in enumerate_cs_morphisms(&b, &c, &cfg).unwrap() {
                let h = f.then(&g).unwrap();
                prop_assert!(h.validate().is_ok());
                prop_assert!(is_continuous(&h.map, a.topology(), c.topology()).unwrap());
            }
        }
    }

    #[test]
    fn mono_iff_injective(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let cfg = Config::default();
        let (a, b) = (emt(seed, n), emt(seed ^ 7, m));
        let probes = vec![Arc::new(Space::point())];
        for f in enumerate_cs_morphisms(&a, &b, &cfg).unwrap() {
            prop_assert_eq!(is_mono_by_cancellation(&f, &probes, &cfg).unwrap(), f.map.is_injective());
        }
    }

    #[test]
    fn finmap_laws(img in proptest::collection::vec(0usize..4, 0..6), img2 in proptest::collection::vec(0usize..3, 4)) {
        let f = FinMap::new(4, img.clone()).unwrap();
        let g = FinMap::new(3, img2).unwrap();
        prop_assert_eq!(FinMap::identity(img.len()).then(&f).unwrap(), f.clone());
        prop_assert_eq!(f.then(&FinMap::identity(4)).unwrap(), f.clone());
        let fg = f.then(&g).unwrap();
        for x in 0..img.len() {
            prop_assert_eq!(fg.apply(x), g.apply(f.apply(x)));
        }
    }

    #[test]
    fn partition_join_is_least_upper_bound(a in proptest::collection::vec(0u8..3, 5), b in proptest::collection::vec(0u8..3, 5)) {
        let (p, q) = (Partition::from_labels(&a), Partition::from_labels(&b));
        let j = p.join(&q).unwrap();
        prop_assert!(p.refines(&j) && q.refines(&j));
        let pairs = (0..5).flat_map(|x| (0..5).filter(|&y| p.same_class(x, y) || q.same_class(x, y)).map(move |y| (x, y)).collect::<Vec<_>>());
        prop_assert_eq!(Partition::generated_by(5, pairs).unwrap(), j);
    }
}
