use super::*;
use crate::fincat::Category;
use crate::gpdcheck::groupoid_iso_search;
use crate::groupoid::{nat_transformations, Compacted, FunctorGroupoid};
use crate::models::GpdModel;
use crate::pathstruct::{product, product_map, Tampered};

fn model() -> GpdModel {
    GpdModel::from_seed_names(&["interval", "bz2"], 200_000).unwrap()
}

const T: ObjId = ObjId(0);
const I: ObjId = ObjId(1);
const B: ObjId = ObjId(2);

#[test]
fn hom_groupoids_are_functor_groupoids() {
    let m = model();
    let en = Enrichment::new(&m);
    for x in [T, I, B] {
        for y in [T, I, B] {
            let h = en.hom(x, y).unwrap();
            let (gx, gy) = (m.gpd(x), m.gpd(y));
            let fun = FunctorGroupoid::new(&gx, &gy, &mut m.budget()).unwrap();
            let n_nat: usize =
                fun.objects.iter().flat_map(|f| fun.objects.iter().map(move |g| (f, g))).map(|(f, g)| nat_transformations(&gx, &gy, f, g).len()).sum();
            assert_eq!(h.objects.len(), fun.objects.len());
            assert_eq!(h.n_arrows(), n_nat, "C({x}, {y})");
            let fun = Compacted::build(fun, &mut m.budget()).unwrap();
            assert!(groupoid_iso_search(&h.gpd, &fun.gpd, &mut m.budget()).unwrap().is_some());
        }
    }
}

#[test]
fn groupoid_laws_hold() {
    let m = model();
    let en = Enrichment::new(&m);
    for x in [T, I, B] {
        for y in [T, I, B] {
            for r in groupoid_laws(&en, x, y).unwrap() {
                assert!(r.passed(), "{}: {:?}", r.name, r.failures);
                assert!(r.checked > 0 || r.name.starts_with("associativity"));
            }
        }
    }
}

#[test]
fn two_dimensional_laws_hold() {
    let m = model();
    let en = Enrichment::new(&m);
    for (x, y, z) in [(I, B, B), (B, B, B), (I, I, B), (T, I, I)] {
        assert!(interchange_law(&en, x, y, z).unwrap().passed());
        assert!(horizontal_formulas_agree(&en, x, y, z).unwrap().passed());
    }
    assert!(horizontal_associativity(&en, I, B, B, B).unwrap().passed());
    assert!(whisker_exchange(&en, T, B, B, I).unwrap().passed());
    assert!(whisker_exchange(&en, I, I, B, B).unwrap().passed());
}

#[test]
fn whiskering_by_identities_is_trivial() {
    let m = model();
    let en = Enrichment::new(&m);
    for (x, y) in [(I, B), (B, B), (T, I)] {
        let h = en.hom(x, y).unwrap();
        let idy = m.identity(y);
        let idx = m.identity(x);
        for k in 0..h.n_arrows() {
            assert_eq!(en.whisker_left(idy, x, k).unwrap(), k);
            assert_eq!(en.whisker_right(y, k, idx).unwrap(), k);
        }
    }
}

#[test]
fn whiskering_maps_are_functors() {
    let m = model();
    let en = Enrichment::new(&m);
    for f in m.hom_set(B, B).unwrap().into_iter().chain(m.hom_set(I, B).unwrap()) {
        let map = en.whisker_left_map(f, I).unwrap();
        assert!(map.is_functor(&m, &en.hom(I, m.dom(f)).unwrap(), &en.hom(I, m.cod(f)).unwrap()).unwrap());
        let map = en.whisker_right_map(B, f).unwrap();
        assert!(map.is_functor(&m, &en.hom(m.cod(f), B).unwrap(), &en.hom(m.dom(f), B).unwrap()).unwrap());
    }
}

#[test]
fn identity_functor_extends_to_identity() {
    let m = model();
    let en = Enrichment::new(&m);
    for (x, y) in [(I, B), (B, B), (B, I)] {
        let ext = extend_homotopical_functor(&en, &en, &IdentityFunctor, x, y).unwrap();
        let n = en.hom(x, y).unwrap().n_arrows();
        assert_eq!(ext.map.arr, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn product_functor_extends_functorially_and_composites_agree() {
    let m = model();
    let en = Enrichment::new(&m);
    let f = ProductWith { c: &m, x: B };
    let g = ProductWith { c: &m, x: I };
    let gf = Composite { first: &f, second: &g };
    let (x, y) = (T, B);
    let fe = extend_homotopical_functor(&en, &en, &f, x, y).unwrap();
    assert!(fe.map.is_functor(&m, &en.hom(x, y).unwrap(), &en.hom(fe.fx, fe.fy).unwrap()).unwrap());
    let ge = extension_map(&en, &en, &g, fe.fx, fe.fy).unwrap();
    let gfe = extension_map(&en, &en, &gf, x, y).unwrap();
    assert_eq!(fe.map.then(&ge.map), gfe.map);
}

#[test]
fn functor_extension_preserves_whiskers() {
    let m = model();
    let en = Enrichment::new(&m);
    let f = ProductWith { c: &m, x: I };
    let (x, y) = (I, B);
    let fe = extension_map(&en, &en, &f, x, y).unwrap();
    for u in m.hom_set(B, B).unwrap() {
        let fu = f.mor(u).unwrap();
        let after = extension_map(&en, &en, &f, x, B).unwrap();
        for k in 0..en.hom(x, y).unwrap().n_arrows() {
            let lhs = after.map.arr[en.whisker_left(u, x, k).unwrap()];
            let rhs = en.whisker_left(fu, fe.fx, fe.map.arr[k]).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn hom_groupoids_do_not_depend_on_the_path_object() {
    let m = model();
    for y in [I, B] {
        let alt_po = m.power_path_object(y, 3).unwrap();
        assert!(crate::pathstruct::is_path_object(&m, &alt_po).unwrap());
        let mut alt = Tampered::new(&m);
        alt.path_objects.insert(alt_po.fib, alt_po);
        for x in [T, I, B] {
            let (res, _) = path_object_independence(&m, &alt, x, y).unwrap();
            assert!(res.passed(), "{:?}", res.failures);
        }
    }
}

#[test]
fn product_with_a_point_picker_is_strictly_natural() {
    let m = model();
    let en = Enrichment::new(&m);
    let f = ProductWith { c: &m, x: T };
    let g = ProductWith { c: &m, x: I };
    let picks = m.hom_set(T, I).unwrap();
    let alpha_for = |pick: MorId, other: MorId| {
        let m = &m;
        move |z: ObjId| -> Result<MorId> {
            let (src, tgt) = (product(m, z, T)?, product(m, z, I)?);
            product_map(m, &src, &tgt, m.identity(z), if z == B { other } else { pick })
        }
    };
    let alpha = alpha_for(picks[0], picks[0]);
    let res = induced_strict_transformation(&en, &en, &f, &g, &alpha, I, B).unwrap();
    assert!(res.passed(), "{:?}", res.failures);
    // switching the picker between objects breaks naturality
    let bad = alpha_for(picks[0], picks[1]);
    let err = induced_strict_transformation(&en, &en, &f, &g, &bad, I, B).unwrap_err();
    assert!(matches!(err, Error::NaturalityFailure(_)));
}

#[test]
fn discrete_hom_groupoids_are_discrete() {
    let m = GpdModel::discrete(&[1, 2], 200_000);
    let en = Enrichment::new(&m);
    for &x in &m.objects() {
        for &y in &m.objects() {
            let h = en.hom(x, y).unwrap();
            assert_eq!(h.n_arrows(), h.objects.len());
            assert!(h.gpd.is_discrete());
        }
    }
}

#[test]
fn whiskering_lemmas_hold() {
    for names in [&["interval", "bz2"][..], &["interval"][..]] {
        let m = GpdModel::from_seed_names(names, 200_000).unwrap();
        let en = Enrichment::new(&m);
        for r in whiskering_lemmas(&en, &m.objects()).unwrap() {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.checked > 0, "{}", r.name);
        }
    }
}

#[test]
fn loop_squared_is_the_identity_class() {
    let m = model();
    let en = Enrichment::new(&m);
    let h = en.hom(T, B).unwrap();
    assert_eq!(h.objects.len(), 1);
    assert_eq!(h.n_arrows(), 2);
    let id = h.identity[0];
    let a = 1 - id;
    assert_eq!(h.compose(&m, a, a).unwrap(), id);
    assert_eq!(h.inverse(&m, a).unwrap(), a);
}

#[test]
fn whiskering_into_the_point_kills_loops() {
    let m = model();
    let en = Enrichment::new(&m);
    let bang = m.terminal_map(B).unwrap();
    let tgt = en.hom(I, T).unwrap();
    let map = en.whisker_left_map(bang, I).unwrap();
    assert!(map.arr.iter().all(|&k| k == tgt.identity[0]));
}

#[test]
fn extension_to_the_point_collapses() {
    let m = model();
    let en = Enrichment::new(&m);
    let ext = extend_homotopical_functor(&en, &en, &ToTerminal { tgt: &m }, B, B).unwrap();
    let tgt = en.hom(T, T).unwrap();
    assert_eq!(tgt.n_arrows(), 1);
    assert!(ext.map.arr.iter().all(|&k| k == 0));
}

#[test]
fn discrete_composition_and_inversion_are_trivial() {
    let m = GpdModel::discrete(&[1, 2], 200_000);
    for &y in &m.objects() {
        let eg = build_internal_egroupoid(&m, y).unwrap();
        // the path object is Y itself, so tau is the first projection and sigma the identity
        assert_eq!(eg.p.object, y);
        assert_eq!(eg.sigma, m.identity(y));
        assert_eq!(m.compose(eg.tau, eg.rr).unwrap(), m.identity(y));
    }
}

#[test]
fn extension_then_whisker_is_the_composite() {
    let m = model();
    let en = Enrichment::new(&m);
    let f = ProductWith { c: &m, x: I };
    for (x, y) in [(I, B), (B, B), (T, I)] {
        let ext = extension_map(&en, &en, &f, x, y).unwrap();
        for w in m.hom_set(ext.fy, B).unwrap().into_iter().take(4) {
            let composite = ext.map.then(&en.whisker_left_map(w, ext.fx).unwrap());
            assert_eq!(extension_then_whisker(&en, &en, &f, x, y, w).unwrap(), composite);
        }
    }
}
