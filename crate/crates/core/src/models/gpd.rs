//! The computed groupoid model.
//!
//! Objects are finite groupoids interned by structure, morphisms are functors
//! interned by their compact data. Fibrations are isofibrations, weak
//! equivalences are equivalences, pullbacks are strict, and the path object
//! of `q : Y -> B` is the groupoid of arrows of `Y` over identities of `B`.
//! All tables are built lazily and memoized; `objects()` is the fixed
//! fragment (terminal plus seeds) that searches quantify over.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::fincat::{Category, MorId, ObjId, ProviderKind, PullbackData};
use crate::funcspaces::{ExponentialCandidate, PiCandidate};
use crate::gpdcheck::{is_equivalence, is_isofibration, quasi_inverse};
use crate::groupoid::{
    enumerate_functors, Arrow, FunctorSearch, Budget, Compacted, FinGroupoid, FunctorData, FunctorGroupoid, LiftOver, StrictPullback,
    Translation, VerticalPaths,
};
use crate::models::pi::pi_groupoid;
use crate::pathstruct::{PathCategory, PathObjectData};

struct PbEntry {
    data: PullbackData,
    objects: Vec<(u32, u32)>,
    index: HashMap<(u32, u32), u32>,
    trans: Translation<(Arrow, Arrow)>,
}

#[derive(Default)]
struct State {
    objs: Vec<(Rc<FinGroupoid>, String)>,
    obj_index: HashMap<Rc<FinGroupoid>, ObjId>,
    mors: Vec<(ObjId, ObjId, Rc<FunctorData>)>,
    mor_index: HashMap<(ObjId, ObjId, Rc<FunctorData>), MorId>,
    homs: HashMap<(ObjId, ObjId), Vec<MorId>>,
    lifts: HashMap<(MorId, MorId), Vec<MorId>>,
    fib: HashMap<MorId, bool>,
    we: HashMap<MorId, bool>,
    pullbacks: HashMap<(MorId, MorId), Rc<PbEntry>>,
    paths: HashMap<MorId, PathObjectData>,
    pis: HashMap<(MorId, MorId), PiCandidate>,
}

pub struct GpdModel {
    name: String,
    fragment: Vec<ObjId>,
    cap: usize,
    st: RefCell<State>,
}

/// The builtin seed groupoids by name.
pub fn builtin_seed(name: &str) -> Option<FinGroupoid> {
    match name {
        "terminal" => Some(FinGroupoid::terminal()),
        "interval" => Some(FinGroupoid::interval()),
        "bz2" => Some(FinGroupoid::bz2()),
        "indiscrete3" => Some(FinGroupoid::indiscrete(3)),
        _ => None,
    }
}

impl GpdModel {
    /// The model whose fragment is the terminal groupoid followed by `seeds`.
    pub fn new(name: &str, seeds: Vec<(String, FinGroupoid)>, cap: usize) -> Self {
        let m = GpdModel { name: name.to_string(), fragment: Vec::new(), cap, st: RefCell::new(State::default()) };
        let mut fragment = vec![m.add_object(FinGroupoid::terminal(), "1")];
        for (label, g) in seeds {
            fragment.push(m.add_object(g, &label));
        }
        fragment.sort();
        fragment.dedup();
        GpdModel { fragment, ..m }
    }

    /// `gpd(names)` with builtin seeds.
    pub fn from_seed_names(names: &[&str], cap: usize) -> Result<Self> {
        let mut seeds = Vec::new();
        for n in names {
            let g = builtin_seed(n).ok_or_else(|| Error::pre(format!("unknown seed groupoid {n:?}")))?;
            seeds.push((n.to_string(), g));
        }
        Ok(GpdModel::new(&format!("gpd[{}]", names.join(",")), seeds, cap))
    }

    /// Finite sets as discrete groupoids, with the empty set included.
    pub fn discrete(sizes: &[u32], cap: usize) -> Self {
        let mut seeds = vec![("0".to_string(), FinGroupoid::empty())];
        seeds.extend(sizes.iter().map(|&n| (n.to_string(), FinGroupoid::discrete(n))));
        let names: Vec<String> = sizes.iter().map(|n| n.to_string()).collect();
        GpdModel::new(&format!("discrete[{}]", names.join(",")), seeds, cap)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.cap)
    }

    pub fn add_object(&self, g: FinGroupoid, label: &str) -> ObjId {
        let mut st = self.st.borrow_mut();
        if let Some(&o) = st.obj_index.get(&g) {
            return o;
        }
        let o = ObjId(st.objs.len() as u32);
        let g = Rc::new(g);
        st.objs.push((g.clone(), label.to_string()));
        st.obj_index.insert(g, o);
        o
    }

    pub fn add_morphism(&self, src: ObjId, tgt: ObjId, f: FunctorData) -> MorId {
        debug_assert!(f.well_formed(&self.gpd(src), &self.gpd(tgt)), "ill-formed functor {f:?}");
        let mut st = self.st.borrow_mut();
        let key = (src, tgt, Rc::new(f));
        if let Some(&m) = st.mor_index.get(&key) {
            return m;
        }
        let m = MorId(st.mors.len() as u32);
        st.mors.push(key.clone());
        st.mor_index.insert(key, m);
        m
    }

    pub fn gpd(&self, x: ObjId) -> Rc<FinGroupoid> {
        self.st.borrow().objs[x.0 as usize].0.clone()
    }

    pub fn functor(&self, m: MorId) -> Rc<FunctorData> {
        self.st.borrow().mors[m.0 as usize].2.clone()
    }

    pub fn object_count(&self) -> usize {
        self.st.borrow().objs.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.st.borrow().mors.len()
    }

    /// Looks up an object by structure without adding it.
    pub fn find_object(&self, g: &FinGroupoid) -> Option<ObjId> {
        self.st.borrow().obj_index.get(g).copied()
    }

    fn pb_entry(&self, f: MorId, g: MorId) -> Result<Rc<PbEntry>> {
        self.pullback(f, g)?;
        Ok(self.st.borrow().pullbacks[&(f, g)].clone())
    }

    /// The pair of arrows behind an arrow of the chosen pullback of `(f, g)`.
    pub fn pullback_arrow(&self, f: MorId, g: MorId, a: Arrow) -> Result<(Arrow, Arrow)> {
        let e = self.pb_entry(f, g)?;
        let (ga, gb) = (self.gpd(self.dom(f)), self.gpd(self.dom(g)));
        Ok(e.trans.from_compact(&self.gpd(e.data.apex), a, |x, y| (ga.compose(x.0, y.0), gb.compose(x.1, y.1))))
    }

    /// The pair of objects behind an object of the chosen pullback of `(f, g)`.
    pub fn pullback_object(&self, f: MorId, g: MorId, x: u32) -> Result<(u32, u32)> {
        Ok(self.pb_entry(f, g)?.objects[x as usize])
    }

    /// The functor groupoid `Fun(x, y)` with evaluation.
    pub fn functor_exponential(&self, x: ObjId, y: ObjId) -> Result<ExponentialCandidate> {
        let (gx, gy) = (self.gpd(x), self.gpd(y));
        let fun = Compacted::build(FunctorGroupoid::new(&gx, &gy, &mut self.budget())?, &mut self.budget())?;
        let label = format!("{}^{}", self.label_obj(y), self.label_obj(x));
        let e = self.add_object(fun.gpd.clone(), &label);
        let product = self.pullback(self.terminal_map(e)?, self.terminal_map(x)?)?;
        let entry = self.pb_entry(product.f, product.g)?;
        let ge = self.gpd(product.apex);
        let (ge_ref, fun_gpd) = (&ge, &fun.gpd);
        let eval = FunctorData::from_fn(
            &ge,
            |o| {
                let (fo, xo) = entry.objects[o as usize];
                fun.explicit.objects[fo as usize].obj[xo as usize]
            },
            |a| {
                let (alpha, m) = entry.trans.from_compact(ge_ref, a, |p, q| (fun_gpd.compose(p.0, q.0), gx.compose(p.1, q.1)));
                let eta = fun.from_compact(alpha);
                let g = &fun.explicit.objects[alpha.tgt as usize];
                gy.compose(g.apply(&gx, &gy, m), eta[m.src as usize])
            },
        );
        let eval = self.add_morphism(product.apex, y, eval);
        Ok(ExponentialCandidate { x, y, e, eval, product })
    }

    /// An alternative path object of `y`: `Fun(J, y)` for the indiscrete
    /// groupoid `J` on `n >= 2` objects, with constant functors for `r` and
    /// evaluation at the first two objects for `s` and `t`.
    pub fn power_path_object(&self, y: ObjId, n: u32) -> Result<PathObjectData> {
        if n < 2 {
            return Err(Error::pre("the shape needs at least two objects"));
        }
        let shape = FinGroupoid::indiscrete(n);
        let gy = self.gpd(y);
        let fun = Compacted::build(FunctorGroupoid::new(&shape, &gy, &mut self.budget())?, &mut self.budget())?;
        let p = self.add_object(fun.gpd.clone(), &format!("{}^J{n}", self.label_obj(y)));
        let konst = |v: u32| fun.explicit.index[&FunctorData::from_fn(&shape, |_| v, |_| gy.id(v))];
        let r = FunctorData::from_fn(&gy, konst, |g| fun.to_compact(konst(g.src), konst(g.tgt), &vec![g; n as usize]));
        let s = FunctorData::from_fn(&fun.gpd, |o| fun.explicit.objects[o as usize].obj[0], |a| fun.from_compact(a)[0]);
        let t = FunctorData::from_fn(&fun.gpd, |o| fun.explicit.objects[o as usize].obj[1], |a| fun.from_compact(a)[1]);
        let (r, s, t) = (self.add_morphism(y, p, r), self.add_morphism(p, y, s), self.add_morphism(p, y, t));
        let q = self.terminal_map(y)?;
        let fiber_product = self.pullback(q, q)?;
        let pair = self.mediator(&fiber_product, s, t)?;
        Ok(PathObjectData { fib: q, base: self.cod(q), underlying: y, object: p, r, s, t, pair, fiber_product })
    }

    fn build_pi(&self, f: MorId, g: MorId) -> Result<PiCandidate> {
        if self.cod(f) != self.dom(g) {
            return Err(Error::NotComposable { g, f });
        }
        let (xo, io, jo) = (self.dom(f), self.dom(g), self.cod(g));
        if !self.is_fibration(f) {
            return Err(Error::NotIsofibration(format!("{f}")));
        }
        let (gx, gi, gj) = (self.gpd(xo), self.gpd(io), self.gpd(jo));
        let pi = pi_groupoid(&gx, &gi, &gj, &self.functor(f), &self.functor(g), &mut self.budget())?;
        let label = format!("Pi({g},{f})");
        let po = self.add_object(pi.gpd().clone(), &label);
        let proj = self.add_morphism(po, jo, pi.proj.clone());
        let pullback = self.pullback(proj, g)?;
        let gp = self.gpd(pullback.apex);
        let entry = self.pb_entry(proj, g)?;
        let eval = FunctorData::from_fn(
            &gp,
            |o| {
                let (p, i) = entry.objects[o as usize];
                pi.eval_obj(p, i)
            },
            |a| {
                let (pa, m) = entry.trans.from_compact(&gp, a, |x, y| (pi.gpd().compose(x.0, y.0), gi.compose(x.1, y.1)));
                pi.eval_arrow(pa, m)
            },
        );
        let eval = self.add_morphism(pullback.apex, xo, eval);
        Ok(PiCandidate { f, g, pi: po, proj, eval, pullback })
    }
}

impl Category for GpdModel {
    fn objects(&self) -> Vec<ObjId> {
        self.fragment.clone()
    }

    fn dom(&self, m: MorId) -> ObjId {
        self.st.borrow().mors[m.0 as usize].0
    }

    fn cod(&self, m: MorId) -> ObjId {
        self.st.borrow().mors[m.0 as usize].1
    }

    fn identity(&self, x: ObjId) -> MorId {
        let f = FunctorData::identity(&self.gpd(x));
        self.add_morphism(x, x, f)
    }

    fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        if b != self.dom(g) {
            return Err(Error::NotComposable { g, f });
        }
        let c = self.cod(g);
        let h = self.functor(f).then(&self.functor(g), &self.gpd(a), &self.gpd(b), &self.gpd(c));
        Ok(self.add_morphism(a, c, h))
    }

    fn hom_set(&self, x: ObjId, y: ObjId) -> Result<Vec<MorId>> {
        if let Some(v) = self.st.borrow().homs.get(&(x, y)) {
            return Ok(v.clone());
        }
        let fs = enumerate_functors(&self.gpd(x), &self.gpd(y), None, &mut self.budget())?;
        let mut v: Vec<MorId> = fs.into_iter().map(|f| self.add_morphism(x, y, f)).collect();
        v.sort();
        self.st.borrow_mut().homs.insert((x, y), v.clone());
        Ok(v)
    }

    fn provider_kind(&self) -> ProviderKind {
        ProviderKind::Computed
    }

    fn lifts(&self, p: MorId, k: MorId) -> Result<Vec<MorId>> {
        if self.cod(p) != self.cod(k) {
            return Err(Error::pre(format!("{p} and {k} do not share a codomain")));
        }
        if let Some(v) = self.st.borrow().lifts.get(&(p, k)) {
            return Ok(v.clone());
        }
        let (t, a, b) = (self.dom(k), self.dom(p), self.cod(p));
        let (pf, kf, gb) = (self.functor(p), self.functor(k), self.gpd(b));
        let lift = LiftOver { p: &pf, base: &gb, k: &kf };
        let fs = enumerate_functors(&self.gpd(t), &self.gpd(a), Some(&lift), &mut self.budget())?;
        let v: Vec<MorId> = fs.into_iter().map(|f| self.add_morphism(t, a, f)).collect();
        self.st.borrow_mut().lifts.insert((p, k), v.clone());
        Ok(v)
    }

    fn find_lift(&self, p: MorId, k: MorId, pred: &mut dyn FnMut(MorId) -> Result<bool>) -> Result<Option<MorId>> {
        if self.cod(p) != self.cod(k) {
            return Err(Error::pre(format!("{p} and {k} do not share a codomain")));
        }
        let cached = self.st.borrow().lifts.get(&(p, k)).cloned();
        if let Some(v) = cached {
            for l in v {
                if pred(l)? {
                    return Ok(Some(l));
                }
            }
            return Ok(None);
        }
        let (t, a, b) = (self.dom(k), self.dom(p), self.cod(p));
        let (pf, kf, gb, gt) = (self.functor(p), self.functor(k), self.gpd(b), self.gpd(t));
        let lift = LiftOver { p: &pf, base: &gb, k: &kf };
        let mut budget = self.budget();
        let mut search = FunctorSearch::new(&gt, &self.gpd(a), Some(&lift), &mut budget)?;
        while let Some(f) = search.next(&mut budget)? {
            let l = self.add_morphism(t, a, f);
            if pred(l)? {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }

    fn terminal(&self) -> Result<ObjId> {
        Ok(self.fragment[0])
    }

    fn terminal_map(&self, x: ObjId) -> Result<MorId> {
        let g = self.gpd(x);
        let f = FunctorData {
            obj: vec![0; g.n_objects() as usize],
            tree: vec![0; g.n_objects() as usize],
            rho: g.components().iter().map(|c| vec![0; c.group.order() as usize]).collect(),
        };
        Ok(self.add_morphism(x, self.terminal()?, f))
    }

    fn pullback(&self, f: MorId, g: MorId) -> Result<PullbackData> {
        if let Some(e) = self.st.borrow().pullbacks.get(&(f, g)) {
            return Ok(e.data);
        }
        let (a, b, c) = (self.dom(f), self.dom(g), self.cod(f));
        if self.cod(g) != c {
            return Err(Error::NoPullback { f, g });
        }
        let (ga, gb, gc) = (self.gpd(a), self.gpd(b), self.gpd(c));
        let (ff, gf) = (self.functor(f), self.functor(g));
        let built = Compacted::build(StrictPullback::new(&ga, &gb, &gc, &ff, &gf), &mut self.budget())?;
        let objects = built.explicit.objects.clone();
        let index = built.explicit.index.clone();
        let label = format!("{} x_{} {}", self.label_obj(a), self.label_obj(c), self.label_obj(b));
        let apex = self.add_object(built.gpd.clone(), &label);
        let p1 = FunctorData::from_fn(&built.gpd, |x| objects[x as usize].0, |ar| built.from_compact(ar).0);
        let p2 = FunctorData::from_fn(&built.gpd, |x| objects[x as usize].1, |ar| built.from_compact(ar).1);
        let proj1 = self.add_morphism(apex, a, p1);
        let proj2 = self.add_morphism(apex, b, p2);
        let data = PullbackData { f, g, apex, proj1, proj2 };
        let entry = PbEntry { data, objects, index, trans: built.trans };
        self.st.borrow_mut().pullbacks.insert((f, g), Rc::new(entry));
        Ok(data)
    }

    fn mediator(&self, pb: &PullbackData, a: MorId, b: MorId) -> Result<MorId> {
        let e = self.pb_entry(pb.f, pb.g)?;
        let t = self.dom(a);
        if self.dom(b) != t || self.cod(a) != self.dom(pb.f) || self.cod(b) != self.dom(pb.g) {
            return Err(Error::pre(format!("({a}, {b}) is not a cone over ({}, {})", pb.f, pb.g)));
        }
        if self.compose(pb.f, a)? != self.compose(pb.g, b)? {
            return Err(Error::pre(format!("cone ({a}, {b}) does not commute")));
        }
        let (fa, fb) = (self.functor(a), self.functor(b));
        let (gt, ga, gb, gp) = (self.gpd(t), self.gpd(self.cod(a)), self.gpd(self.cod(b)), self.gpd(pb.apex));
        let m = FunctorData::from_fn(
            &gt,
            |x| e.index[&(fa.obj[x as usize], fb.obj[x as usize])],
            |ar| {
                let pair = (fa.apply(&gt, &ga, ar), fb.apply(&gt, &gb, ar));
                let (x, y) = (e.index[&(pair.0.src, pair.1.src)], e.index[&(pair.0.tgt, pair.1.tgt)]);
                e.trans.to_compact(&gp, x, y, &pair, |p, q| (ga.compose(p.0, q.0), gb.compose(p.1, q.1)))
            },
        );
        Ok(self.add_morphism(t, pb.apex, m))
    }

    fn label_obj(&self, x: ObjId) -> String {
        self.st.borrow().objs[x.0 as usize].1.clone()
    }
}

impl PathCategory for GpdModel {
    fn is_fibration(&self, f: MorId) -> bool {
        if let Some(&b) = self.st.borrow().fib.get(&f) {
            return b;
        }
        let b = is_isofibration(&self.gpd(self.dom(f)), &self.gpd(self.cod(f)), &self.functor(f));
        self.st.borrow_mut().fib.insert(f, b);
        b
    }

    fn is_weak_equivalence(&self, f: MorId) -> bool {
        if let Some(&b) = self.st.borrow().we.get(&f) {
            return b;
        }
        let b = is_equivalence(&self.gpd(self.dom(f)), &self.gpd(self.cod(f)), &self.functor(f));
        self.st.borrow_mut().we.insert(f, b);
        b
    }

    fn path_object_over(&self, q: MorId) -> Result<PathObjectData> {
        if let Some(po) = self.st.borrow().paths.get(&q) {
            return Ok(*po);
        }
        if !self.is_fibration(q) {
            return Err(Error::MissingSlicePathObject(q));
        }
        let (y, b) = (self.dom(q), self.cod(q));
        let (gy, gb, qf) = (self.gpd(y), self.gpd(b), self.functor(q));
        let vp = Compacted::build(VerticalPaths::new(&gy, &gb, &qf), &mut self.budget())?;
        let label = if gb.n_objects() == 1 && gb.n_morphisms() == 1 {
            format!("P{}", self.label_obj(y))
        } else {
            format!("P_{}{}", self.label_obj(b), self.label_obj(y))
        };
        let p = self.add_object(vp.gpd.clone(), &label);
        let paths = &vp.explicit.objects;
        let r = FunctorData::from_fn(&gy, |x| vp.explicit.index[&gy.id(x)], |g| vp.to_compact(vp.explicit.index[&gy.id(g.src)], vp.explicit.index[&gy.id(g.tgt)], &(g, g)));
        let s = FunctorData::from_fn(&vp.gpd, |x| paths[x as usize].src, |a| vp.from_compact(a).0);
        let t = FunctorData::from_fn(&vp.gpd, |x| paths[x as usize].tgt, |a| vp.from_compact(a).1);
        let r = self.add_morphism(y, p, r);
        let s = self.add_morphism(p, y, s);
        let t = self.add_morphism(p, y, t);
        let fiber_product = self.pullback(q, q)?;
        let pair = self.mediator(&fiber_product, s, t)?;
        let po = PathObjectData { fib: q, base: b, underlying: y, object: p, r, s, t, pair, fiber_product };
        self.st.borrow_mut().paths.insert(q, po);
        Ok(po)
    }

    fn cap(&self) -> usize {
        self.cap
    }

    fn pi_type(&self, f: MorId, g: MorId) -> Result<PiCandidate> {
        if let Some(p) = self.st.borrow().pis.get(&(f, g)) {
            return Ok(*p);
        }
        let p = self.build_pi(f, g)?;
        self.st.borrow_mut().pis.insert((f, g), p);
        Ok(p)
    }

    /// The constructed weak inverse (when `f` is essentially surjective and
    /// fully faithful) followed by the whole hom-set.
    fn homotopy_inverse_candidates(&self, f: MorId) -> Result<Vec<MorId>> {
        let (x, y) = (self.dom(f), self.cod(f));
        let mut out = Vec::new();
        if let Some(g) = quasi_inverse(&self.gpd(x), &self.gpd(y), &self.functor(f)) {
            out.push(self.add_morphism(y, x, g));
        }
        match self.hom_set(y, x) {
            Ok(v) => out.extend(v),
            // a weak inverse was found; the exhaustive tail is only needed when none exists
            Err(Error::ResourceCap { .. }) if !out.is_empty() => {}
            Err(e) => return Err(e),
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpdcheck::groupoid_iso_search;
    use crate::pathstruct::{
        enumerate_homotopies, find_filler, homotopy_category, is_homotopy_equivalence, is_path_object, path_object, validate_path_axioms,
        LiftingSquare,
    };

    fn gpd(names: &[&str]) -> GpdModel {
        GpdModel::from_seed_names(names, 200_000).unwrap()
    }

    #[test]
    fn corpus_models_satisfy_the_axioms() {
        for m in [GpdModel::discrete(&[1, 2], 200_000), gpd(&["interval"]), gpd(&["bz2"])] {
            let rep = validate_path_axioms(&m).unwrap();
            assert!(rep.is_empty(), "{}: {:?}", m.name(), rep);
        }
    }

    #[test]
    fn terminal_is_interned_first() {
        let m = gpd(&["bz2", "interval"]);
        assert_eq!(m.terminal().unwrap(), ObjId(0));
        assert_eq!(m.objects().len(), 3);
        assert_eq!(m.label_obj(ObjId(1)), "bz2");
    }

    #[test]
    fn homotopy_counts() {
        let m = gpd(&["bz2", "interval"]);
        let (t, b, i) = (ObjId(0), ObjId(1), ObjId(2));
        let pb = path_object(&m, b).unwrap();
        let f = m.hom_set(t, b).unwrap()[0];
        assert_eq!(enumerate_homotopies(&m, &pb, f, f).unwrap().len(), 2);
        let pi = path_object(&m, i).unwrap();
        let pick = m.hom_set(t, i).unwrap();
        assert_eq!(pick.len(), 2);
        assert_eq!(enumerate_homotopies(&m, &pi, pick[0], pick[1]).unwrap().len(), 1);
        assert_eq!(enumerate_homotopies(&m, &pi, pick[0], pick[0]).unwrap().len(), 1);
    }

    #[test]
    fn path_object_of_bz2_is_valid_and_is_the_arrow_groupoid() {
        let m = gpd(&["bz2"]);
        let po = path_object(&m, ObjId(1)).unwrap();
        assert!(is_path_object(&m, &po).unwrap());
        // Y^I for Y = BZ2: two objects (the loops), connected, with vertex group Z/2
        let p = m.gpd(po.object);
        assert_eq!(p.n_objects(), 2);
        assert_eq!(p.n_morphisms(), 8);
        let fun = m.functor_exponential(m.add_object(FinGroupoid::interval(), "I"), ObjId(1)).unwrap();
        assert!(groupoid_iso_search(&p, &m.gpd(fun.e), &mut m.budget()).unwrap().is_some());
    }

    #[test]
    fn path_object_with_r_not_an_equivalence_is_rejected() {
        let m = gpd(&["bz2"]);
        let mut po = path_object(&m, ObjId(1)).unwrap();
        // r through the terminal object is not an equivalence of BZ2 into PBZ2
        let c = m.compose(m.hom_set(ObjId(0), po.object).unwrap()[0], m.terminal_map(ObjId(1)).unwrap()).unwrap();
        po.r = c;
        assert!(!is_path_object(&m, &po).unwrap());
    }

    #[test]
    fn homotopy_category_hom_sizes() {
        let m = gpd(&["interval", "bz2"]);
        let (ho, reps) = homotopy_category(&m).unwrap();
        let (t, i, b) = (ObjId(0), ObjId(1), ObjId(2));
        let pos = |x: ObjId| ObjId(m.objects().iter().position(|&y| y == x).unwrap() as u32);
        assert_eq!(ho.hom_set(pos(t), pos(i)).unwrap().len(), 1);
        assert_eq!(ho.hom_set(pos(b), pos(b)).unwrap().len(), 2);
        assert!(crate::fincat::validate_category(&ho).is_empty());
        assert_eq!(reps.len(), ho.morphism_count());
    }

    #[test]
    fn weak_equivalences_are_homotopy_equivalences() {
        let m = gpd(&["interval", "bz2"]);
        for &x in &m.objects() {
            for &y in &m.objects() {
                for f in m.hom_set(x, y).unwrap() {
                    assert_eq!(m.is_weak_equivalence(f), is_homotopy_equivalence(&m, f).unwrap(), "{f}");
                }
            }
        }
    }

    #[test]
    fn component_inclusion_has_no_homotopy_inverse() {
        let two = FinGroupoid::new(2, vec![(vec![0], crate::groupoid::Group::cyclic(2)), (vec![1], crate::groupoid::Group::trivial())]).unwrap();
        let m = GpdModel::new("two", vec![("BZ2+1".into(), two)], 200_000);
        let x = ObjId(1);
        let incl = m.hom_set(ObjId(0), x).unwrap();
        assert!(incl.iter().all(|&f| !is_homotopy_equivalence(&m, f).unwrap()));
        let bang = m.terminal_map(ObjId(0)).unwrap();
        assert!(is_homotopy_equivalence(&m, bang).unwrap());
    }

    #[test]
    fn sections_of_acyclic_fibrations_are_fillers() {
        let m = gpd(&["interval"]);
        let (t, i) = (ObjId(0), ObjId(1));
        let p = m.terminal_map(i).unwrap();
        let id1 = m.identity(t);
        let sq = LiftingSquare { w: m.terminal_map(t).unwrap(), p, h: m.hom_set(t, i).unwrap()[0], k: id1 };
        let l = find_filler(&m, &sq).unwrap();
        assert_eq!(m.compose(p, l).unwrap(), id1);
    }

    #[test]
    fn pi_type_over_identity_is_equivalent_to_the_source() {
        let m = gpd(&["interval", "bz2"]);
        let b = ObjId(2);
        let f = m.terminal_map(b).unwrap();
        let t = m.terminal().unwrap();
        let pi = m.pi_type(f, m.identity(t)).unwrap();
        assert!(groupoid_iso_search(&m.gpd(pi.pi), &m.gpd(b), &mut m.budget()).unwrap().is_some());
        assert!(m.is_fibration(pi.proj));
        assert_eq!(m.compose(f, pi.eval).unwrap(), m.compose(m.identity(t), pi.pullback.proj2).unwrap());
    }

    #[test]
    fn discrete_path_objects_are_degenerate() {
        let m = GpdModel::discrete(&[1, 2], 200_000);
        for &x in &m.objects() {
            let po = path_object(&m, x).unwrap();
            assert_eq!(po.object, x);
            assert_eq!(po.r, m.identity(x));
            assert_eq!(po.s, m.identity(x));
        }
    }
}
