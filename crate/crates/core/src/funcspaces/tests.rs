use super::*;
use crate::gpdcheck::groupoid_iso_search;
use crate::models::GpdModel;

fn model() -> GpdModel {
    GpdModel::from_seed_names(&["interval", "bz2"], 200_000).unwrap()
}

const T: ObjId = ObjId(0);
const I: ObjId = ObjId(1);
const B: ObjId = ObjId(2);

#[test]
fn functor_groupoids_are_strong_exponentials() {
    let m = model();
    for x in [T, I, B] {
        for y in [T, I, B] {
            let cand = m.functor_exponential(x, y).unwrap();
            let v = check_exponential(&m, &cand).unwrap();
            assert!(v.strong && v.ordinary && v.weak, "Fun({x}, {y}): {v:?}");
            assert_eq!(v.cases.len(), 3);
        }
    }
}

#[test]
fn discrete_exponential_is_strict() {
    let m = GpdModel::discrete(&[2, 3], 200_000);
    let size = |n: u32| m.objects().into_iter().find(|&o| m.gpd(o).n_objects() == n).unwrap();
    let (two, three) = (size(2), size(3));
    let cand = m.functor_exponential(two, three).unwrap();
    assert_eq!(m.gpd(cand.e).n_objects(), 9);
    let v = check_exponential(&m, &cand).unwrap();
    assert!(v.strong && v.ordinary && v.weak);
}

#[test]
fn a_point_is_too_small_for_the_endomorphisms_of_bz2() {
    let m = model();
    let eval = product(&m, T, B).unwrap().proj2;
    let cand = ExponentialCandidate::new(&m, B, B, T, eval).unwrap();
    let v = check_exponential(&m, &cand).unwrap();
    assert!(!v.weak && !v.ordinary && !v.strong);
    assert_eq!(v.weak_witness, Some(T.0));
    assert!(v.ordering_holds());
}

#[test]
fn transport_along_identities_changes_nothing() {
    let m = model();
    let cand = m.functor_exponential(I, B).unwrap();
    let id_e = m.identity(cand.e);
    assert_eq!(transport_along_weak_equivalence(&m, &cand, id_e, Position::DomainOfE).unwrap(), cand);
    assert_eq!(transport_along_weak_equivalence(&m, &cand, m.identity(B), Position::CodomainY).unwrap(), cand);
    assert_eq!(transport_along_weak_equivalence(&m, &cand, m.identity(I), Position::ArgumentX).unwrap(), cand);
}

#[test]
fn transport_preserves_strength() {
    let m = model();
    // a bigger codomain: the point includes into the interval
    let cand = m.functor_exponential(B, T).unwrap();
    let incl = m.hom_set(T, I).unwrap()[0];
    let moved = transport_along_weak_equivalence(&m, &cand, incl, Position::CodomainY).unwrap();
    assert_eq!(moved.y, I);
    assert!(check_exponential(&m, &moved).unwrap().strong);
    // a bigger domain: E x I projects onto E
    let cand = m.functor_exponential(T, B).unwrap();
    let h = product(&m, cand.e, I).unwrap().proj1;
    let moved = transport_along_weak_equivalence(&m, &cand, h, Position::DomainOfE).unwrap();
    assert!(check_exponential(&m, &moved).unwrap().strong);
    // a bigger argument: the interval collapses onto the point
    let h = m.terminal_map(I).unwrap();
    let moved = transport_along_weak_equivalence(&m, &cand, h, Position::ArgumentX).unwrap();
    assert_eq!(moved.x, I);
    assert!(check_exponential(&m, &moved).unwrap().strong);
    // only weak equivalences move candidates
    let err = transport_along_weak_equivalence(&m, &cand, m.terminal_map(B).unwrap(), Position::CodomainY).unwrap_err();
    assert!(matches!(err, Error::NotWeakEquivalence(_)));
}

#[test]
fn ordinary_candidates_upgrade() {
    let m = model();
    let strong = m.functor_exponential(I, B).unwrap();
    let h = product(&m, strong.e, I).unwrap().proj1;
    let other = transport_along_weak_equivalence(&m, &strong, h, Position::DomainOfE).unwrap();
    let up = verify_ordinary_upgrade(&m, &strong, &other).unwrap();
    assert!(up.strong);
    assert!(up.connecting.is_some());
    assert!(verify_ordinary_upgrade(&m, &strong, &strong).unwrap().strong);
    let mismatched = m.functor_exponential(B, B).unwrap();
    assert!(matches!(verify_ordinary_upgrade(&m, &strong, &mismatched), Err(Error::Precondition(_))));
}

#[test]
fn pi_types_along_identities_and_over_the_point() {
    let m = model();
    let bang = m.terminal_map(B).unwrap();
    let along_id = m.pi_type(bang, m.identity(T)).unwrap();
    let v = check_pi_type(&m, &along_id).unwrap();
    assert!(v.strong);
    // over the point a Pi-type is an exponential with X = 1
    let exp = m.functor_exponential(T, B).unwrap();
    assert_eq!(check_exponential(&m, &exp).unwrap().strong, v.strong);
    let proj = product(&m, I, B).unwrap().proj1;
    let along_id = m.pi_type(proj, m.identity(I)).unwrap();
    assert!(check_pi_type(&m, &along_id).unwrap().strong);
}

#[test]
fn an_undersized_pi_type_is_not_weak() {
    let m = GpdModel::discrete(&[2], 200_000);
    let two = m.objects().into_iter().find(|&o| m.gpd(o).n_objects() == 2).unwrap();
    let f = m.terminal_map(two).unwrap();
    let id1 = m.identity(T);
    // Pi = 1 with evaluation picking one of the two points
    let pullback = m.pullback(id1, id1).unwrap();
    let point = m.hom_set(pullback.apex, two).unwrap()[0];
    let cand = PiCandidate { f, g: id1, pi: T, proj: id1, eval: point, pullback };
    let v = check_pi_type(&m, &cand).unwrap();
    assert!(!v.weak);
    assert!(v.weak_witness.is_some());
}

#[test]
fn exponentials_over_fibrations() {
    let m = model();
    // Z = 1, X = 1: the result is B itself
    let base = m.functor_exponential(T, T).unwrap();
    let p = m.terminal_map(B).unwrap();
    let (out, px) = construct_exponential_over_fibration(&m, p, &base).unwrap();
    assert!(exponential_square_commutes(&m, p, &base, &out, px).unwrap());
    assert!(groupoid_iso_search(&m.gpd(out.e), &m.gpd(B), &mut m.budget()).unwrap().is_some());
    assert!(check_exponential(&m, &out).unwrap().strong);
    // the endpoints of the interval's path object, over X = B
    let pair = crate::pathstruct::path_object(&m, I).unwrap().pair;
    let base = m.functor_exponential(B, m.cod(pair)).unwrap();
    let (out, px) = construct_exponential_over_fibration(&m, pair, &base).unwrap();
    assert!(exponential_square_commutes(&m, pair, &base, &out, px).unwrap());
    assert!(check_exponential(&m, &out).unwrap().strong);
}

#[test]
fn pi_types_over_fibrations() {
    let m = model();
    let f = m.terminal_map(I).unwrap();
    let base = m.pi_type(m.identity(I), f).unwrap();
    let p = product(&m, I, B).unwrap().proj1;
    let (out, pi_p) = construct_pi_over_fibration(&m, f, p, &base).unwrap();
    assert!(pi_square_commutes(&m, p, &base, &out, pi_p).unwrap());
    assert!(check_pi_type(&m, &base).unwrap().strong);
    assert!(check_pi_type(&m, &out).unwrap().strong);
}

#[test]
fn pi_types_compose() {
    let m = model();
    let f = product(&m, I, B).unwrap().proj1;
    let (id_i, bang) = (m.identity(I), m.terminal_map(I).unwrap());
    let tower = compose_pi_horizontal(&m, f, id_i, bang).unwrap();
    assert!(check_pi_type(&m, &tower).unwrap().strong);
    let single = compose_pi_horizontal(&m, f, bang, m.identity(T)).unwrap();
    assert_eq!(check_pi_type(&m, &single).unwrap().strong, check_pi_type(&m, &m.pi_type(f, bang).unwrap()).unwrap().strong);
}

#[test]
fn function_extensionality() {
    let m = model();
    for (x, y) in [(T, B), (I, I)] {
        let cand = m.functor_exponential(x, y).unwrap();
        let fd = build_funext_comparison(&m, &cand).unwrap();
        assert!(funext_squares(&m, &fd).unwrap().passed());
        let v = check_funext(&m, &cand, &fd).unwrap();
        assert!(v.strong && v.phi_weak_equivalence && v.agree, "({x}, {y}): {v:?}");
        assert_eq!(v.fully_faithful, Some(true));
    }
}
