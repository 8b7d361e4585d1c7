use proptest::prelude::*;

use pathcat::funcspaces::{TestCase, Verdict};
use pathcat::gpdcheck::{is_isofibration, FunctorProperties};
use pathcat::groupoid::{enumerate_functors, nat_transformations, Arrow, Budget, FinGroupoid, Group};
use pathcat::models::{load_model, save_model, to_document, GpdModel};
use pathcat::pathstruct::validate_path_axioms;
use pathcat::report::{CheckResult, Report, Violation};

mod common;
use common::{brute_functors, brute_isofibration, brute_nat_count};

/// Up to three components of one or two objects, vertex groups Z/1..Z/3.
fn groupoid() -> impl Strategy<Value = FinGroupoid> {
    prop::collection::vec((1u32..=2, 1u32..=3), 0..=3).prop_map(|parts| {
        let mut next = 0;
        let mut out = Vec::new();
        for (size, order) in parts {
            out.push(((next..next + size).collect(), Group::cyclic(order)));
            next += size;
        }
        FinGroupoid::new(next, out).unwrap()
    })
}

fn small_groupoid() -> impl Strategy<Value = FinGroupoid> {
    groupoid().prop_filter("keep brute force cheap", |g| g.n_morphisms() <= 8)
}

/// Between groupoids a full functor is essentially injective.
fn properties() -> impl Strategy<Value = FunctorProperties> {
    any::<[bool; 7]>().prop_map(|b| FunctorProperties {
        ess_surjective: b[0],
        ess_injective: b[1] || b[2],
        full: b[2],
        faithful: b[3],
        isofibration: b[4],
        equivalence: b[5],
        bijective_on_objects: b[6],
    })
}

fn as_arrows(src: &FinGroupoid, tgt: &FinGroupoid, f: &pathcat::groupoid::FunctorData) -> Vec<Arrow> {
    src.arrows().map(|a| f.apply(src, tgt, a)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_unital_and_invertible(g in groupoid()) {
        let arrows: Vec<Arrow> = g.arrows().collect();
        for &a in &arrows {
            prop_assert_eq!(g.compose(g.id(a.tgt), a), a);
            prop_assert_eq!(g.compose(a, g.id(a.src)), a);
            prop_assert_eq!(g.compose(g.inverse(a), a), g.id(a.src));
            for &b in arrows.iter().filter(|b| b.src == a.tgt) {
                for &c in arrows.iter().filter(|c| c.src == b.tgt) {
                    prop_assert_eq!(g.compose(c, g.compose(b, a)), g.compose(g.compose(c, b), a));
                }
            }
        }
        prop_assert_eq!(arrows.len() as u64, g.n_morphisms());
    }

    #[test]
    fn functor_and_transformation_counts_match_brute_force(x in small_groupoid(), y in small_groupoid()) {
        let fs = enumerate_functors(&x, &y, None, &mut Budget::new(200_000)).unwrap();
        let brute = brute_functors(&x, &y);
        prop_assert_eq!(fs.len(), brute.len());
        let mut images: Vec<Vec<Arrow>> = fs.iter().map(|f| as_arrows(&x, &y, f)).collect();
        images.sort();
        let mut brute_sorted = brute.clone();
        brute_sorted.sort();
        prop_assert_eq!(&images, &brute_sorted);
        for f in fs.iter().take(3) {
            for g in fs.iter().take(3) {
                let n = nat_transformations(&x, &y, f, g).len();
                prop_assert_eq!(n, brute_nat_count(&x, &y, &as_arrows(&x, &y, f), &as_arrows(&x, &y, g)));
            }
        }
    }

    #[test]
    fn isofibration_decision_matches_lifting(x in small_groupoid(), y in small_groupoid()) {
        for f in enumerate_functors(&x, &y, None, &mut Budget::new(200_000)).unwrap() {
            prop_assert_eq!(is_isofibration(&x, &y, &f), brute_isofibration(&x, &y, &as_arrows(&x, &y, &f)), "{:?}", f);
        }
    }

    #[test]
    fn verdict_grades_are_ordered(props in prop::collection::vec(properties(), 0..6)) {
        let cases: Vec<TestCase> =
            props.iter().enumerate().map(|(i, &p)| TestCase { test: i as u32, label: format!("t{i}"), properties: p }).collect();
        let v = Verdict::from_cases(cases);
        prop_assert!(v.ordering_holds());
        let first = |ok: &dyn Fn(&FunctorProperties) -> bool| props.iter().position(|p| !ok(p)).map(|i| i as u32);
        prop_assert_eq!(v.weak_witness, first(&|p| p.ess_surjective));
        prop_assert_eq!(v.ordinary_witness, first(&|p| p.ess_surjective && p.ess_injective));
        prop_assert_eq!(v.strong_witness, first(&|p| p.ess_surjective && p.full));
        prop_assert_eq!(v.strong, v.strong_witness.is_none());
    }

    #[test]
    fn report_json_round_trips(outcomes in prop::collection::vec(prop::collection::vec(any::<bool>(), 0..5), 0..4)) {
        let mut report = Report::new("laws", "m");
        for (i, results) in outcomes.iter().enumerate() {
            let mut c = CheckResult::new(format!("check {i}"));
            for (j, &ok) in results.iter().enumerate() {
                if ok {
                    c.pass();
                } else {
                    c.fail(Violation::new("kind", vec![i as u32, j as u32], "detail"));
                }
            }
            report.add(c);
        }
        let back: Report = serde_json::from_str(&report.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), report.to_json());
        prop_assert_eq!(back.failure_count(), outcomes.iter().flatten().filter(|&&ok| !ok).count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn saved_documents_load_back_unchanged(sizes in prop::collection::btree_set(0u32..=3, 0..=2)) {
        let sizes: Vec<u32> = sizes.into_iter().collect();
        let m = GpdModel::discrete(&sizes, 200_000);
        let doc = to_document(&m).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        save_model(&path, &doc).unwrap();
        let t = load_model(&path).unwrap();
        prop_assert_eq!(&t.document(), &doc);
        // re-export goes through the path-category interface, so it is exact only
        // when the table really is a path category
        if validate_path_axioms(&t).unwrap().is_empty() {
            prop_assert_eq!(to_document(&t).unwrap(), doc);
        }
    }
}
