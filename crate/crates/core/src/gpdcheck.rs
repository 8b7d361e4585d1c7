//! Decision procedures for functors between finite groupoids.
//!
//! Everything here works on the compact form: a functor is full on a
//! component iff its homomorphism is onto, faithful iff it is injective, and
//! essentially injective iff distinct components land in distinct components.
//! The tests compare each decider against a brute-force scan of hom-sets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{homomorphisms, nat_transformations, Arrow, Budget, Compacted, FinGroupoid, FunctorData, StrictPullback, Subgroupoid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorProperties {
    pub ess_surjective: bool,
    pub ess_injective: bool,
    pub full: bool,
    pub faithful: bool,
    pub isofibration: bool,
    pub equivalence: bool,
    pub bijective_on_objects: bool,
}

impl FunctorProperties {
    /// e.s. and e.i.
    pub fn esei(&self) -> bool {
        self.ess_surjective && self.ess_injective
    }

    /// e.s. and full.
    pub fn esf(&self) -> bool {
        self.ess_surjective && self.full
    }
}

fn image_of(f: &FunctorData, src: &FinGroupoid, ci: usize, tgt_order: u32) -> Vec<bool> {
    let mut im = vec![false; tgt_order as usize];
    for &h in &f.rho[ci] {
        im[h as usize] = true;
    }
    let _ = src;
    im
}

pub fn is_isofibration(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> bool {
    for (ci, c) in src.components().iter().enumerate() {
        let fr = f.obj[c.objects[0] as usize];
        let g2 = tgt.group_of(fr);
        let im: Vec<u32> = image_of(f, src, ci, g2.order()).iter().enumerate().filter(|p| *p.1).map(|p| p.0 as u32).collect();
        let tc = &tgt.components()[tgt.component_of(fr) as usize];
        // an arrow (F x, b, h) lifts iff h lies in tree(x') im cx^-1 for some
        // x' over b; right multiplication by cx^-1 is a bijection, so x drops
        // out and the cosets tree(x') im over each b must cover the group
        let mut covered: std::collections::HashMap<u32, Vec<bool>> =
            tc.objects.iter().map(|&b| (b, vec![false; g2.order() as usize])).collect();
        for &x2 in &c.objects {
            let cov = covered.get_mut(&f.obj[x2 as usize]).expect("functor stays in one component");
            for &m in &im {
                cov[g2.mul(f.tree[x2 as usize], m) as usize] = true;
            }
        }
        if covered.values().any(|cov| cov.contains(&false)) {
            return false;
        }
    }
    true
}

/// All flags except `isofibration`, which is left `false`.
fn cheap_properties(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> FunctorProperties {
    let mut hit = vec![false; tgt.components().len()];
    let mut ess_injective = true;
    let mut full = true;
    let mut faithful = true;
    for (ci, c) in src.components().iter().enumerate() {
        let fr = f.obj[c.objects[0] as usize];
        let tc = tgt.component_of(fr) as usize;
        if hit[tc] {
            ess_injective = false;
            full = false;
        }
        hit[tc] = true;
        let order = tgt.group_of(fr).order();
        let im = image_of(f, src, ci, order);
        if im.iter().any(|b| !b) {
            full = false;
        }
        let mut seen = vec![false; order as usize];
        for &h in &f.rho[ci] {
            if std::mem::replace(&mut seen[h as usize], true) {
                faithful = false;
            }
        }
    }
    let ess_surjective = hit.iter().all(|&b| b);
    let mut img: Vec<u32> = f.obj.clone();
    img.sort();
    img.dedup();
    let bijective_on_objects = img.len() == f.obj.len() && img.len() == tgt.n_objects() as usize;
    FunctorProperties {
        ess_surjective,
        ess_injective,
        full,
        faithful,
        isofibration: false,
        equivalence: ess_surjective && full && faithful,
        bijective_on_objects,
    }
}

pub fn functor_properties(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> FunctorProperties {
    FunctorProperties { isofibration: is_isofibration(src, tgt, f), ..cheap_properties(src, tgt, f) }
}

pub fn is_equivalence(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> bool {
    cheap_properties(src, tgt, f).equivalence
}

/// Does a natural isomorphism `f => g` exist?
pub fn naturally_isomorphic(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData, g: &FunctorData) -> bool {
    !nat_transformations(src, tgt, f, g).is_empty()
}

/// A strict fiber of a functor: the subgroupoid over one object and its
/// identity, with the inclusion.
pub struct StrictFiber {
    pub gpd: FinGroupoid,
    /// Fiber object index -> object of the total groupoid.
    pub objects: Vec<u32>,
    pub inclusion: FunctorData,
}

pub fn strict_fiber(total: &FinGroupoid, base: &FinGroupoid, p: &FunctorData, point: u32, budget: &mut Budget) -> Result<StrictFiber> {
    let objects: Vec<u32> = (0..total.n_objects()).filter(|&x| p.obj[x as usize] == point).collect();
    let keep = |a: Arrow| p.apply(total, base, a) == base.id(point);
    let sub = Compacted::build(Subgroupoid { g: total, objects: objects.clone(), keep }, budget)?;
    let inclusion = FunctorData::from_fn(&sub.gpd, |x| objects[x as usize], |a| sub.from_compact(a));
    Ok(StrictFiber { gpd: sub.gpd, objects, inclusion })
}

/// The functor `alpha* A -> alpha* B` induced by `f : A -> B` between the
/// strict fibers of `g f` and `g` over `alpha`.
pub struct FiberRestriction {
    pub a_fiber: StrictFiber,
    pub b_fiber: StrictFiber,
    pub functor: FunctorData,
}

pub fn fiber_over_point(
    a: &FinGroupoid,
    b: &FinGroupoid,
    c: &FinGroupoid,
    f: &FunctorData,
    g: &FunctorData,
    alpha: u32,
    budget: &mut Budget,
) -> Result<FiberRestriction> {
    let gf = f.then(g, a, b, c);
    if !is_isofibration(a, c, &gf) {
        return Err(Error::NotIsofibration("g f".into()));
    }
    let fa = strict_fiber(a, c, &gf, alpha, budget)?;
    let fb = strict_fiber(b, c, g, alpha, budget)?;
    let b_index: HashMap<u32, u32> = fb.objects.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let sub_b = Compacted::build(
        Subgroupoid { g: b, objects: fb.objects.clone(), keep: |ar: Arrow| g.apply(b, c, ar) == c.id(alpha) },
        budget,
    )?;
    let functor = FunctorData::from_fn(
        &fa.gpd,
        |x| b_index[&f.obj[fa.objects[x as usize] as usize]],
        |ar| {
            let big = fa.inclusion.apply(&fa.gpd, a, ar);
            let img = f.apply(a, b, big);
            sub_b.to_compact(b_index[&img.src], b_index[&img.tgt], &img)
        },
    );
    Ok(FiberRestriction { a_fiber: fa, b_fiber: fb, functor })
}

/// The strict pullback of `f : A -> C` along the isofibration `g : B -> C`,
/// with its projection to `B`.
pub struct PulledBackFunctor {
    pub apex: FinGroupoid,
    pub to_a: FunctorData,
    pub to_b: FunctorData,
}

pub fn pullback_of_functor(
    a: &FinGroupoid,
    b: &FinGroupoid,
    c: &FinGroupoid,
    f: &FunctorData,
    g: &FunctorData,
    budget: &mut Budget,
) -> Result<PulledBackFunctor> {
    if !is_isofibration(b, c, g) {
        return Err(Error::NotIsofibration("g".into()));
    }
    let pb = Compacted::build(StrictPullback::new(a, b, c, f, g), budget)?;
    let objs = pb.explicit.objects.clone();
    let to_a = FunctorData::from_fn(&pb.gpd, |x| objs[x as usize].0, |ar| pb.from_compact(ar).0);
    let to_b = FunctorData::from_fn(&pb.gpd, |x| objs[x as usize].1, |ar| pb.from_compact(ar).1);
    Ok(PulledBackFunctor { apex: pb.gpd, to_a, to_b })
}

/// Inverse of a functor that is an isomorphism of groupoids.
pub fn inverse_iso(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> Option<FunctorData> {
    let p = functor_properties(src, tgt, f);
    if !(p.bijective_on_objects && p.full && p.faithful) {
        return None;
    }
    let mut inv_obj = vec![0u32; tgt.n_objects() as usize];
    for (x, &y) in f.obj.iter().enumerate() {
        inv_obj[y as usize] = x as u32;
    }
    let rho_inv: Vec<Vec<u32>> = f
        .rho
        .iter()
        .map(|h| {
            let mut v = vec![0u32; h.len()];
            for (g, &img) in h.iter().enumerate() {
                v[img as usize] = g as u32;
            }
            v
        })
        .collect();
    Some(FunctorData::from_fn(
        tgt,
        |y| inv_obj[y as usize],
        |a| {
            let (x1, x2) = (inv_obj[a.src as usize], inv_obj[a.tgt as usize]);
            let g2 = tgt.group_of(a.src);
            let h = g2.mul(g2.mul(g2.inv(f.tree[x2 as usize]), a.g), f.tree[x1 as usize]);
            Arrow::new(x1, x2, rho_inv[src.component_of(x1) as usize][h as usize])
        },
    ))
}

/// A weak inverse of `f`: each object goes to the least object over its
/// iso-class, each arrow to its unique preimage under the chosen isos. `None`
/// unless `f` is essentially surjective and fully faithful.
pub fn quasi_inverse(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> Option<FunctorData> {
    let mut obj = Vec::with_capacity(tgt.n_objects() as usize);
    let mut beta = Vec::with_capacity(tgt.n_objects() as usize);
    for y in 0..tgt.n_objects() {
        let x = (0..src.n_objects()).find(|&x| tgt.connected(f.obj[x as usize], y))?;
        obj.push(x);
        beta.push(tgt.hom(f.obj[x as usize], y)[0]);
    }
    if !is_equivalence(src, tgt, f) {
        return None;
    }
    Some(FunctorData::from_fn(
        tgt,
        |y| obj[y as usize],
        |b| {
            let want = tgt.compose(tgt.inverse(beta[b.tgt as usize]), tgt.compose(b, beta[b.src as usize]));
            let (x1, x2) = (obj[b.src as usize], obj[b.tgt as usize]);
            src.hom(x1, x2).into_iter().find(|&a| f.apply(src, tgt, a) == want).expect("fully faithful")
        },
    ))
}

/// An isomorphism `a -> b` with its inverse, if one exists.
///
/// Components are matched greedily: two components are isomorphic iff they
/// have the same number of objects and isomorphic vertex groups, and that is
/// an equivalence relation, so greedy matching is complete.
pub fn groupoid_iso_search(a: &FinGroupoid, b: &FinGroupoid, budget: &mut Budget) -> Result<Option<(FunctorData, FunctorData)>> {
    if a.n_objects() != b.n_objects() || a.components().len() != b.components().len() || a.n_morphisms() != b.n_morphisms() {
        return Ok(None);
    }
    let mut used = vec![false; b.components().len()];
    let mut f = FunctorData { obj: vec![0; a.n_objects() as usize], tree: vec![0; a.n_objects() as usize], rho: Vec::new() };
    for c in a.components() {
        let mut found = None;
        for (j, d) in b.components().iter().enumerate() {
            if used[j] || d.objects.len() != c.objects.len() || d.group.order() != c.group.order() {
                continue;
            }
            budget.spend(1, "searching for a groupoid isomorphism")?;
            let homs = homomorphisms(&c.group, &d.group);
            if let Some(h) = homs.iter().find(|h| {
                let mut s = (*h).clone();
                s.sort();
                s.dedup();
                s.len() == h.len()
            }) {
                found = Some((j, h.clone()));
                break;
            }
        }
        let Some((j, h)) = found else { return Ok(None) };
        used[j] = true;
        for (i, &x) in c.objects.iter().enumerate() {
            f.obj[x as usize] = b.components()[j].objects[i];
        }
        f.rho.push(h);
    }
    let inv = inverse_iso(a, b, &f).expect("matched components give an isomorphism");
    Ok(Some((f, inv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{enumerate_functors, Group};

    fn budget() -> Budget {
        Budget::new(1_000_000)
    }

    fn corpus() -> Vec<FinGroupoid> {
        vec![
            FinGroupoid::terminal(),
            FinGroupoid::interval(),
            FinGroupoid::bz2(),
            FinGroupoid::discrete(2),
            FinGroupoid::delooping(Group::cyclic(4)),
            FinGroupoid::new(3, vec![(vec![0, 2], Group::cyclic(2)), (vec![1], Group::trivial())]).unwrap(),
        ]
    }

    // brute-force oracle straight from the definitions
    fn brute(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData) -> FunctorProperties {
        let n = src.n_objects();
        let m = tgt.n_objects();
        let ess_surjective = (0..m).all(|y| (0..n).any(|x| tgt.connected(f.obj[x as usize], y)));
        let ess_injective = (0..n).all(|x| (0..n).all(|x2| !tgt.connected(f.obj[x as usize], f.obj[x2 as usize]) || src.connected(x, x2)));
        let mut full = true;
        let mut faithful = true;
        for x in 0..n {
            for x2 in 0..n {
                let imgs: Vec<Arrow> = src.hom(x, x2).into_iter().map(|a| f.apply(src, tgt, a)).collect();
                let mut d = imgs.clone();
                d.sort();
                d.dedup();
                faithful &= d.len() == imgs.len();
                full &= d.len() == tgt.hom(f.obj[x as usize], f.obj[x2 as usize]).len();
            }
        }
        let mut isofibration = true;
        for x in 0..n {
            for y in 0..m {
                for b in tgt.hom(f.obj[x as usize], y) {
                    isofibration &= (0..n).any(|x2| src.hom(x, x2).into_iter().any(|a| f.apply(src, tgt, a) == b));
                }
            }
        }
        let mut img = f.obj.clone();
        img.sort();
        img.dedup();
        FunctorProperties {
            ess_surjective,
            ess_injective,
            full,
            faithful,
            isofibration,
            equivalence: ess_surjective && full && faithful,
            bijective_on_objects: img.len() == n as usize && img.len() == m as usize,
        }
    }

    #[test]
    fn deciders_agree_with_brute_force() {
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                for f in enumerate_functors(a, b, None, &mut budget()).unwrap() {
                    assert_eq!(functor_properties(a, b, &f), brute(a, b, &f), "{a:?} -> {b:?} via {f:?}");
                }
            }
        }
    }

    #[test]
    fn named_examples() {
        let b = FinGroupoid::bz2();
        let t = FinGroupoid::terminal();
        let bang = enumerate_functors(&b, &t, None, &mut budget()).unwrap().remove(0);
        let p = functor_properties(&b, &t, &bang);
        assert!(p.ess_surjective && p.full && !p.faithful && p.isofibration);
        let incl = enumerate_functors(&t, &b, None, &mut budget()).unwrap().remove(0);
        let p = functor_properties(&t, &b, &incl);
        assert!(p.ess_surjective && !p.full && p.faithful);
        let id = FunctorData::identity(&b);
        let p = functor_properties(&b, &b, &id);
        assert!(p.ess_surjective && p.ess_injective && p.full && p.faithful && p.isofibration && p.equivalence);
    }

    #[test]
    fn strength_ordering_within_groupoids() {
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                for f in enumerate_functors(a, b, None, &mut budget()).unwrap() {
                    let p = functor_properties(a, b, &f);
                    if p.esf() {
                        assert!(p.esei());
                    }
                    if p.equivalence {
                        assert!(p.esf() && p.esei() && p.ess_surjective);
                    }
                }
            }
        }
    }

    #[test]
    fn quasi_inverses_are_inverse_up_to_iso() {
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                for f in enumerate_functors(a, b, None, &mut budget()).unwrap() {
                    match quasi_inverse(a, b, &f) {
                        None => assert!(!functor_properties(a, b, &f).equivalence),
                        Some(g) => {
                            assert!(g.well_formed(b, a));
                            assert!(naturally_isomorphic(a, a, &f.then(&g, a, b, a), &FunctorData::identity(a)));
                            assert!(naturally_isomorphic(b, b, &g.then(&f, b, a, b), &FunctorData::identity(b)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn iso_search_examples() {
        let i = FinGroupoid::interval();
        let (f, g) = groupoid_iso_search(&i, &FinGroupoid::indiscrete(2), &mut budget()).unwrap().unwrap();
        assert_eq!(f.then(&g, &i, &i, &i), FunctorData::identity(&i));
        assert!(groupoid_iso_search(&FinGroupoid::bz2(), &FinGroupoid::indiscrete(2), &mut budget()).unwrap().is_none());
        let b = FinGroupoid::bz2();
        assert!(groupoid_iso_search(&b, &b, &mut budget()).unwrap().is_some());
    }

    #[test]
    fn iso_search_agrees_with_brute_force() {
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                let brute = enumerate_functors(a, b, None, &mut budget()).unwrap().into_iter().any(|f| inverse_iso(a, b, &f).is_some());
                assert_eq!(groupoid_iso_search(a, b, &mut budget()).unwrap().is_some(), brute);
            }
        }
    }

    #[test]
    fn pullback_along_identity_is_the_functor() {
        let cs = corpus();
        for a in &cs[..4] {
            for c in &cs[..4] {
                for f in enumerate_functors(a, c, None, &mut budget()).unwrap() {
                    let id = FunctorData::identity(c);
                    let pb = pullback_of_functor(a, c, c, &f, &id, &mut budget()).unwrap();
                    let (iso, _) = groupoid_iso_search(&pb.apex, a, &mut budget()).unwrap().unwrap();
                    let _ = iso;
                    assert_eq!(functor_properties(&pb.apex, c, &pb.to_b), functor_properties(a, c, &f));
                }
            }
        }
    }

    #[test]
    fn fiber_over_terminal_is_the_functor() {
        let t = FinGroupoid::terminal();
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                let bang_b = enumerate_functors(b, &t, None, &mut budget()).unwrap().remove(0);
                for f in enumerate_functors(a, b, None, &mut budget()).unwrap() {
                    let r = fiber_over_point(a, b, &t, &f, &bang_b, 0, &mut budget()).unwrap();
                    assert_eq!(r.a_fiber.gpd, *a);
                    assert_eq!(r.b_fiber.gpd, *b);
                    assert_eq!(r.functor, f);
                }
            }
        }
    }
}
