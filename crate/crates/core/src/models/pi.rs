//! Dependent products along isofibrations of finite groupoids.
//!
//! For `f : X -> I` and an isofibration `g : I -> J`, an object of `Pi_g X`
//! is a pair `(j, s)` with `s` a section of `f` over the strict fiber `I_j`.
//! An arrow `(j, s) -> (j', s')` over `u : j -> j'` assigns to every `m` of
//! `I` over `u` an arrow `theta_m : s(dom m) -> s'(cod m)` over `m`, natural
//! in vertical arrows. Every such `m` is `b m_C a^-1` for the canonical lift
//! `m_C` at the root of its fiber component, so `theta` is stored as one
//! value per fiber component.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gpdcheck::is_isofibration;
use crate::groupoid::{
    enumerate_functors, odometer, Arrow, Budget, Compacted, ExplicitGroupoid, FinGroupoid, FunctorData, LiftOver, Subgroupoid,
    Translation,
};

/// A strict fiber `I_j` in compact form with the translation back to `I`.
pub struct Fiber {
    pub gpd: FinGroupoid,
    /// Fiber object -> object of `I`.
    pub objects: Vec<u32>,
    pub pos: HashMap<u32, u32>,
    trans: Translation<Arrow>,
}

impl Fiber {
    pub fn build(i: &FinGroupoid, j: &FinGroupoid, g: &FunctorData, point: u32, budget: &mut Budget) -> Result<Fiber> {
        let objects: Vec<u32> = (0..i.n_objects()).filter(|&x| g.obj[x as usize] == point).collect();
        let keep = |a: Arrow| g.apply(i, j, a) == j.id(point);
        let c = Compacted::build(Subgroupoid { g: i, objects: objects.clone(), keep }, budget)?;
        let pos = objects.iter().enumerate().map(|(k, &x)| (x, k as u32)).collect();
        Ok(Fiber { gpd: c.gpd, objects, pos, trans: c.trans })
    }

    pub fn to_fiber(&self, i: &FinGroupoid, a: Arrow) -> Arrow {
        self.trans.to_compact(&self.gpd, self.pos[&a.src], self.pos[&a.tgt], &a, |g, f| i.compose(*g, *f))
    }

    pub fn from_fiber(&self, i: &FinGroupoid, a: Arrow) -> Arrow {
        self.trans.from_compact(&self.gpd, a, |g, f| i.compose(*g, *f))
    }

    pub fn inclusion(&self, i: &FinGroupoid) -> FunctorData {
        FunctorData::from_fn(&self.gpd, |x| self.objects[x as usize], |a| self.from_fiber(i, a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiArrow {
    pub u: Arrow,
    pub src: u32,
    pub tgt: u32,
    pub theta: Vec<Arrow>,
}

pub struct PiExplicit {
    pub x: FinGroupoid,
    pub i: FinGroupoid,
    pub j: FinGroupoid,
    pub f: FunctorData,
    pub g: FunctorData,
    pub fibers: Vec<Fiber>,
    /// `(j, s)` ordered by `j`, then section enumeration order.
    pub objects: Vec<(u32, FunctorData)>,
}

impl PiExplicit {
    /// Least arrow of `I` over `u` out of `c`, by target then group element.
    fn canon(&self, u: Arrow, c: u32) -> Arrow {
        for &t in &self.fibers[u.tgt as usize].objects {
            for m in self.i.hom(c, t) {
                if self.g.apply(&self.i, &self.j, m) == u {
                    return m;
                }
            }
        }
        unreachable!("isofibration lifts every arrow")
    }

    /// `s` applied to a vertical arrow of `I` over `j`.
    fn section_at(&self, obj: u32, a: Arrow) -> Arrow {
        let (j, s) = &self.objects[obj as usize];
        let fib = &self.fibers[*j as usize];
        s.apply(&fib.gpd, &self.x, fib.to_fiber(&self.i, a))
    }

    /// `theta_m` for an arbitrary `m` over `u`.
    pub fn theta_at(&self, a: &PiArrow, m: Arrow) -> Arrow {
        let (x, i) = (&self.x, &self.i);
        let fib = &self.fibers[self.objects[a.src as usize].0 as usize];
        let fi = fib.pos[&m.src];
        let comp = fib.gpd.component_of(fi) as usize;
        let c = fib.objects[fib.gpd.root_of(fi) as usize];
        let path = fib.from_fiber(i, fib.gpd.tree(fi));
        let mc = self.canon(a.u, c);
        let b = i.compose(i.compose(m, path), i.inverse(mc));
        x.compose(x.compose(self.section_at(a.tgt, b), a.theta[comp]), x.inverse(self.section_at(a.src, path)))
    }

    /// Value of the section of `obj` at the object `i` of `I`.
    pub fn section_obj(&self, obj: u32, i: u32) -> u32 {
        let (j, s) = &self.objects[obj as usize];
        s.obj[self.fibers[*j as usize].pos[&i] as usize]
    }
}

impl ExplicitGroupoid for PiExplicit {
    type A = PiArrow;

    fn n_objects(&self) -> u32 {
        self.objects.len() as u32
    }

    fn homs(&self, src: u32, tgt: u32) -> Vec<PiArrow> {
        let (j0, s0) = &self.objects[src as usize];
        let (j1, s1) = &self.objects[tgt as usize];
        let mut out = Vec::new();
        if !self.j.connected(*j0, *j1) {
            return out;
        }
        let fib0 = &self.fibers[*j0 as usize];
        let fib1 = &self.fibers[*j1 as usize];
        for u in self.j.hom(*j0, *j1) {
            let mut per_comp: Vec<Vec<Arrow>> = Vec::new();
            for comp in fib0.gpd.components() {
                let r = comp.objects[0];
                let c = fib0.objects[r as usize];
                let mc = self.canon(u, c);
                let gens: Vec<(Arrow, Arrow)> = comp
                    .group
                    .generators()
                    .into_iter()
                    .map(|k| {
                        let a = fib0.from_fiber(&self.i, Arrow::new(r, r, k));
                        let b = self.i.compose(self.i.compose(mc, a), self.i.inverse(mc));
                        (s0.apply(&fib0.gpd, &self.x, fib0.to_fiber(&self.i, a)), s1.apply(&fib1.gpd, &self.x, fib1.to_fiber(&self.i, b)))
                    })
                    .collect();
                let cands: Vec<Arrow> = self
                    .x
                    .hom(s0.obj[r as usize], s1.obj[fib1.pos[&mc.tgt] as usize])
                    .into_iter()
                    .filter(|&th| {
                        self.f.apply(&self.x, &self.i, th) == mc
                            && gens.iter().all(|&(sa, sb)| self.x.compose(sb, th) == self.x.compose(th, sa))
                    })
                    .collect();
                per_comp.push(cands);
            }
            if per_comp.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut digits = vec![0u32; per_comp.len()];
            loop {
                let theta = digits.iter().enumerate().map(|(k, &d)| per_comp[k][d as usize]).collect();
                out.push(PiArrow { u, src, tgt, theta });
                if !odometer(&mut digits, |k| per_comp[k].len() as u32) {
                    break;
                }
            }
        }
        out
    }

    fn id(&self, obj: u32) -> PiArrow {
        let j = self.objects[obj as usize].0;
        let u = self.j.id(j);
        let fib = &self.fibers[j as usize];
        let theta = fib.gpd.components().iter().map(|c| self.section_at(obj, self.canon(u, fib.objects[c.objects[0] as usize]))).collect();
        PiArrow { u, src: obj, tgt: obj, theta }
    }

    fn compose(&self, g: &PiArrow, f: &PiArrow) -> PiArrow {
        let i = &self.i;
        let u = self.j.compose(g.u, f.u);
        let fib = &self.fibers[self.objects[f.src as usize].0 as usize];
        let theta = fib
            .gpd
            .components()
            .iter()
            .enumerate()
            .map(|(k, comp)| {
                let c = fib.objects[comp.objects[0] as usize];
                let (m2, m1) = (self.canon(u, c), self.canon(f.u, c));
                self.x.compose(self.theta_at(g, i.compose(m2, i.inverse(m1))), f.theta[k])
            })
            .collect();
        PiArrow { u, src: f.src, tgt: g.tgt, theta }
    }

    fn inverse(&self, a: &PiArrow) -> PiArrow {
        let u = self.j.inverse(a.u);
        let fib = &self.fibers[self.objects[a.tgt as usize].0 as usize];
        let theta = fib
            .gpd
            .components()
            .iter()
            .map(|comp| {
                let m = self.canon(u, fib.objects[comp.objects[0] as usize]);
                self.x.inverse(self.theta_at(a, self.i.inverse(m)))
            })
            .collect();
        PiArrow { u, src: a.tgt, tgt: a.src, theta }
    }
}

/// `Pi_g X` in compact form with its projection to `J`.
pub struct PiGroupoid {
    pub built: Compacted<PiExplicit>,
    pub proj: FunctorData,
}

impl PiGroupoid {
    pub fn gpd(&self) -> &FinGroupoid {
        &self.built.gpd
    }

    /// The evaluation at an object `(p, i)` of the pullback `g* Pi`.
    pub fn eval_obj(&self, p: u32, i: u32) -> u32 {
        self.built.explicit.section_obj(p, i)
    }

    /// The evaluation at an arrow `(a, m)` of the pullback `g* Pi`.
    pub fn eval_arrow(&self, a: Arrow, m: Arrow) -> Arrow {
        self.built.explicit.theta_at(&self.built.from_compact(a), m)
    }
}

pub fn pi_groupoid(
    x: &FinGroupoid,
    i: &FinGroupoid,
    j: &FinGroupoid,
    f: &FunctorData,
    g: &FunctorData,
    budget: &mut Budget,
) -> Result<PiGroupoid> {
    if !is_isofibration(i, j, g) {
        return Err(Error::NotIsofibration("the map Pi is taken along".into()));
    }
    let mut fibers = Vec::new();
    let mut objects = Vec::new();
    for pt in 0..j.n_objects() {
        let fib = Fiber::build(i, j, g, pt, budget)?;
        let incl = fib.inclusion(i);
        let lift = LiftOver { p: f, base: i, k: &incl };
        for s in enumerate_functors(&fib.gpd, x, Some(&lift), budget)? {
            objects.push((pt, s));
        }
        fibers.push(fib);
    }
    let explicit = PiExplicit { x: x.clone(), i: i.clone(), j: j.clone(), f: f.clone(), g: g.clone(), fibers, objects };
    let built = Compacted::build(explicit, budget)?;
    let proj = FunctorData::from_fn(&built.gpd, |p| built.explicit.objects[p as usize].0, |a| built.from_compact(a).u);
    Ok(PiGroupoid { built, proj })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpdcheck::{functor_properties, groupoid_iso_search};
    use crate::groupoid::{is_functorial, FunctorGroupoid, Group, StrictPullback};

    fn budget() -> Budget {
        Budget::new(2_000_000)
    }

    fn bang(a: &FinGroupoid) -> FunctorData {
        enumerate_functors(a, &FinGroupoid::terminal(), None, &mut budget()).unwrap().remove(0)
    }

    fn corpus() -> Vec<FinGroupoid> {
        vec![
            FinGroupoid::terminal(),
            FinGroupoid::interval(),
            FinGroupoid::bz2(),
            FinGroupoid::discrete(2),
            FinGroupoid::new(3, vec![(vec![0, 2], Group::cyclic(2)), (vec![1], Group::trivial())]).unwrap(),
        ]
    }

    #[test]
    fn empty_groupoid_has_one_functor_out() {
        let e = FinGroupoid::empty();
        assert_eq!(enumerate_functors(&e, &FinGroupoid::bz2(), None, &mut budget()).unwrap().len(), 1);
    }

    // over a point, Pi of a product projection is the functor groupoid
    #[test]
    fn pi_over_point_is_functor_groupoid() {
        let t = FinGroupoid::terminal();
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                let (ba, bb) = (bang(a), bang(b));
                let prod = StrictPullback::new(a, b, &t, &ba, &bb);
                let pc = Compacted::build(prod, &mut budget()).unwrap();
                let objs = pc.explicit.objects.clone();
                let p1 = FunctorData::from_fn(&pc.gpd, |x| objs[x as usize].0, |ar| pc.from_compact(ar).0);
                let pi = pi_groupoid(&pc.gpd, a, &t, &p1, &ba, &mut budget()).unwrap();
                let fun = Compacted::build(FunctorGroupoid::new(a, b, &mut budget()).unwrap(), &mut budget()).unwrap();
                assert!(groupoid_iso_search(pi.gpd(), &fun.gpd, &mut budget()).unwrap().is_some(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn pi_along_identity_is_the_section_groupoid() {
        // along an identity every fiber is a point, so Pi is X again
        let cs = corpus();
        for x in &cs {
            for i in &cs {
                for f in enumerate_functors(x, i, None, &mut budget()).unwrap() {
                    if !is_isofibration(x, i, &f) {
                        continue;
                    }
                    let id = FunctorData::identity(i);
                    let pi = pi_groupoid(x, i, i, &f, &id, &mut budget()).unwrap();
                    assert!(groupoid_iso_search(pi.gpd(), x, &mut budget()).unwrap().is_some());
                    assert!(functor_properties(pi.gpd(), i, &pi.proj).isofibration);
                }
            }
        }
    }

    #[test]
    fn operations_are_functorial() {
        let i = FinGroupoid::interval();
        let b = FinGroupoid::bz2();
        let t = FinGroupoid::terminal();
        // X = I x BZ2 over I, along I -> 1
        let (bi, bb) = (bang(&i), bang(&b));
        let prod = Compacted::build(StrictPullback::new(&i, &b, &t, &bi, &bb), &mut budget()).unwrap();
        let objs = prod.explicit.objects.clone();
        let p1 = FunctorData::from_fn(&prod.gpd, |x| objs[x as usize].0, |ar| prod.from_compact(ar).0);
        let pi = pi_groupoid(&prod.gpd, &i, &t, &p1, &bi, &mut budget()).unwrap();
        let ex = &pi.built.explicit;
        let n = ex.objects.len() as u32;
        for a in 0..n {
            for c in 0..n {
                for f in ex.homs(a, c) {
                    assert_eq!(ex.compose(&f, &ex.id(a)), f);
                    assert_eq!(ex.compose(&ex.id(c), &f), f);
                    assert_eq!(ex.compose(&ex.inverse(&f), &f), ex.id(a));
                }
            }
        }
        // evaluation is a functor on the pullback
        let bp = bang(pi.gpd());
        let pb = Compacted::build(StrictPullback::new(pi.gpd(), &i, &t, &bp, &bi), &mut budget()).unwrap();
        let po = pb.explicit.objects.clone();
        assert!(is_functorial(
            &pb.gpd,
            &prod.gpd,
            |x| pi.eval_obj(po[x as usize].0, po[x as usize].1),
            |ar| {
                let (a, m) = pb.from_compact(ar);
                pi.eval_arrow(a, m)
            }
        ));
    }
}
