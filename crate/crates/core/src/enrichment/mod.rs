//! Hom-groupoids of a path category.
//!
//! The arrows of `C(X, Y)` are the maps `X -> PY` modulo homotopy over
//! `Y x Y`; they compose through the filler `tau`, invert through `sigma`,
//! and the identity at `f` is the class of `r f`. Every class is represented
//! by its least member, and all operations act on representatives; the law
//! suite re-checks each operation against every member.

mod extension;
mod laws;
mod lemmas;

pub use extension::{
    check_homotopical, extend_homotopical_functor, extension_map, extension_then_whisker, induced_strict_transformation, lambda_for, Composite,
    FunctorExtension, HomotopicalFunctor, IdentityFunctor, Postcompose, ProductWith, SlicePullback, ToTerminal,
};
pub use laws::{
    groupoid_laws, horizontal_associativity, horizontal_formulas_agree, interchange_law, path_object_independence, whisker_exchange,
    IndependenceWitness,
};
pub use lemmas::whiskering_lemmas;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::fincat::{MorId, ObjId, PullbackData};
use crate::groupoid::{Arrow, Budget, FinGroupoid, FunctorData, Group};
use crate::pathstruct::{find_filler, homotopy_classes, path_object, HomotopyClasses, LiftingSquare, PathCategory, PathObjectData};

/// The internal groupoid structure on the path object of `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EGroupoidData {
    pub y: ObjId,
    pub p: PathObjectData,
    /// The path object of `(s, t) : PY -> Y x Y` over `Y x Y`.
    pub pp: PathObjectData,
    /// `PY x_Y PY`, pairs `(H, K)` with `t H = s K`.
    pub comp_domain: PullbackData,
    /// `(r, r) : Y -> PY x_Y PY`.
    pub rr: MorId,
    pub tau: MorId,
    pub sigma: MorId,
}

/// `(s, t) : PY -> Y x Y` composed with a map into `PY`.
fn boundary<C: PathCategory + ?Sized>(c: &C, p: &PathObjectData, a: MorId, b: MorId) -> Result<MorId> {
    c.mediator(&p.fiber_product, a, b)
}

pub fn build_internal_egroupoid<C: PathCategory + ?Sized>(c: &C, y: ObjId) -> Result<EGroupoidData> {
    let p = path_object(c, y)?;
    let pp = c.path_object_over(p.pair)?;
    let comp_domain = c.pullback(p.t, p.s)?;
    let rr = c.mediator(&comp_domain, p.r, p.r)?;
    if !c.is_weak_equivalence(rr) {
        return Err(Error::NotWeakEquivalence(rr));
    }
    let k_tau = boundary(c, &p, c.compose(p.s, comp_domain.proj1)?, c.compose(p.t, comp_domain.proj2)?)?;
    let tau = find_filler(c, &LiftingSquare { w: rr, p: p.pair, h: p.r, k: k_tau })?;
    let k_sigma = boundary(c, &p, p.t, p.s)?;
    let sigma = find_filler(c, &LiftingSquare { w: p.r, p: p.pair, h: p.r, k: k_sigma })?;
    Ok(EGroupoidData { y, p, pp, comp_domain, rr, tau, sigma })
}

/// `C(X, Y)` with classes indexed densely; `arrows[k]` is the least member of
/// class `k`. Composition and inversion are computed on demand through the
/// category and memoized; the compact form is read off spanning trees.
#[derive(Debug, Clone)]
pub struct HomGroupoid {
    pub x: ObjId,
    pub y: ObjId,
    pub eg: EGroupoidData,
    pub objects: Vec<MorId>,
    pub obj_index: HashMap<MorId, usize>,
    pub classes: HomotopyClasses,
    pub arrows: Vec<MorId>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub identity: Vec<usize>,
    pub gpd: FinGroupoid,
    by_pair: HashMap<(usize, usize), Vec<usize>>,
    out: Vec<Vec<usize>>,
    class_index: HashMap<MorId, usize>,
    /// Per object, the class of its tree arrow from the component root.
    tree: Vec<usize>,
    /// Per component, the vertex group at the root, identity first.
    loops: Vec<Vec<usize>>,
    loop_index: Vec<HashMap<usize, u32>>,
    comp: RefCell<HashMap<(usize, usize), usize>>,
    inv: RefCell<HashMap<usize, usize>>,
}

impl HomGroupoid {
    /// The class of any map `X -> PY`.
    pub fn class_of(&self, h: MorId) -> Result<usize> {
        let rep = self.classes.rep(h).ok_or(Error::UnknownMorphism(h))?;
        Ok(self.class_index[&rep])
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Classes from `i` to `j`, ascending.
    pub fn arrows_between(&self, i: usize, j: usize) -> &[usize] {
        self.by_pair.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }

    /// Classes out of `i`, ascending.
    pub fn arrows_from(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    /// Members of a class, ascending.
    pub fn members(&self, k: usize) -> Vec<MorId> {
        self.classes.maps.iter().copied().filter(|&m| self.class_of(m).ok() == Some(k)).collect()
    }

    /// `beta . alpha`, the class of `tau (H, K)` on representatives.
    pub fn compose<C: PathCategory + ?Sized>(&self, c: &C, beta: usize, alpha: usize) -> Result<usize> {
        if let Some(&k) = self.comp.borrow().get(&(beta, alpha)) {
            return Ok(k);
        }
        if self.tgt[alpha] != self.src[beta] {
            return Err(Error::NotComposable { g: self.arrows[beta], f: self.arrows[alpha] });
        }
        let pair = c.mediator(&self.eg.comp_domain, self.arrows[alpha], self.arrows[beta])?;
        let k = self.class_of(c.compose(self.eg.tau, pair)?)?;
        self.comp.borrow_mut().insert((beta, alpha), k);
        Ok(k)
    }

    /// The class of `sigma H`.
    pub fn inverse<C: PathCategory + ?Sized>(&self, c: &C, alpha: usize) -> Result<usize> {
        if let Some(&k) = self.inv.borrow().get(&alpha) {
            return Ok(k);
        }
        let k = self.class_of(c.compose(self.eg.sigma, self.arrows[alpha])?)?;
        self.inv.borrow_mut().insert(alpha, k);
        Ok(k)
    }

    /// The compact arrow of class `k`.
    pub fn arrow_of<C: PathCategory + ?Sized>(&self, c: &C, k: usize) -> Result<Arrow> {
        let (i, j) = (self.src[k], self.tgt[k]);
        let tj = self.inverse(c, self.tree[j])?;
        let l = self.compose(c, tj, self.compose(c, k, self.tree[i])?)?;
        let ci = self.gpd.component_of(i as u32) as usize;
        let g = *self.loop_index[ci].get(&l).ok_or_else(|| Error::pre(format!("class {l} is not a loop at the root")))?;
        Ok(Arrow::new(i as u32, j as u32, g))
    }

    /// The class behind a compact arrow.
    pub fn class_of_arrow<C: PathCategory + ?Sized>(&self, c: &C, a: Arrow) -> Result<usize> {
        let ci = self.gpd.component_of(a.src) as usize;
        let ti = self.inverse(c, self.tree[a.src as usize])?;
        let l = self.loops[ci][a.g as usize];
        self.compose(c, self.tree[a.tgt as usize], self.compose(c, l, ti)?)
    }
}

/// A map of hom-groupoids given on objects and classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
}

impl GroupoidMap {
    /// Endpoints and identities are preserved and the class map agrees with
    /// the functor read off the spanning trees and root loops, which is
    /// itself well formed; together these amount to functoriality.
    pub fn is_functor<C: PathCategory + ?Sized>(&self, c: &C, src: &HomGroupoid, tgt: &HomGroupoid) -> Result<bool> {
        for k in 0..src.n_arrows() {
            let a = self.arr[k];
            if tgt.src[a] != self.obj[src.src[k]] || tgt.tgt[a] != self.obj[src.tgt[k]] {
                return Ok(false);
            }
        }
        for (i, &id) in src.identity.iter().enumerate() {
            if self.arr[id] != tgt.identity[self.obj[i]] {
                return Ok(false);
            }
        }
        let f = self.functor_data(c, src, tgt)?;
        if !f.well_formed(&src.gpd, &tgt.gpd) {
            return Ok(false);
        }
        for k in 0..src.n_arrows() {
            let image = f.apply(&src.gpd, &tgt.gpd, src.arrow_of(c, k)?);
            if tgt.class_of_arrow(c, image)? != self.arr[k] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The compact functor read off trees and root loops; meaningful when
    /// `is_functor` holds.
    pub fn functor_data<C: PathCategory + ?Sized>(&self, c: &C, src: &HomGroupoid, tgt: &HomGroupoid) -> Result<FunctorData> {
        self.functor_data_between(c, src, c, tgt)
    }

    /// As `functor_data`, for hom-groupoids of two different categories.
    pub fn functor_data_between<C, D>(&self, c: &C, src: &HomGroupoid, d: &D, tgt: &HomGroupoid) -> Result<FunctorData>
    where
        C: PathCategory + ?Sized,
        D: PathCategory + ?Sized,
    {
        let err = RefCell::new(None);
        let f = FunctorData::from_fn(
            &src.gpd,
            |o| self.obj[o as usize] as u32,
            |a| {
                let r = src.class_of_arrow(c, a).and_then(|k| tgt.arrow_of(d, self.arr[k]));
                r.unwrap_or_else(|e| {
                    err.borrow_mut().get_or_insert(e);
                    Arrow::new(0, 0, 0)
                })
            },
        );
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(f),
        }
    }

    pub fn then(&self, g: &GroupoidMap) -> GroupoidMap {
        GroupoidMap { obj: self.obj.iter().map(|&o| g.obj[o]).collect(), arr: self.arr.iter().map(|&a| g.arr[a]).collect() }
    }
}

pub fn hom_groupoid<C: PathCategory + ?Sized>(c: &C, eg: &EGroupoidData, x: ObjId) -> Result<HomGroupoid> {
    let y = eg.y;
    let objects = c.hom_set(x, y)?;
    let obj_index: HashMap<MorId, usize> = objects.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let classes = homotopy_classes(c, &eg.pp, x)?;
    let arrows = classes.reps.clone();
    let class_index: HashMap<MorId, usize> = arrows.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let end = |m: MorId| -> Result<usize> { obj_index.get(&m).copied().ok_or(Error::UnknownMorphism(m)) };
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, &h) in arrows.iter().enumerate() {
        let (i, j) = (end(c.compose(eg.p.s, h)?)?, end(c.compose(eg.p.t, h)?)?);
        src.push(i);
        tgt.push(j);
        by_pair.entry((i, j)).or_default().push(k);
    }
    let mut identity = Vec::new();
    for &f in &objects {
        let rep = classes.rep(c.compose(eg.p.r, f)?).ok_or(Error::UnknownMorphism(f))?;
        identity.push(class_index[&rep]);
    }
    let n = objects.len();
    let mut out = vec![Vec::new(); n];
    for (k, &i) in src.iter().enumerate() {
        out[i].push(k);
    }
    let mut h = HomGroupoid {
        x,
        y,
        eg: *eg,
        objects,
        obj_index,
        classes,
        arrows,
        src,
        tgt,
        identity,
        gpd: FinGroupoid::empty(),
        by_pair,
        out,
        class_index,
        tree: vec![usize::MAX; n],
        loops: Vec::new(),
        loop_index: Vec::new(),
        comp: RefCell::default(),
        inv: RefCell::default(),
    };
    let mut budget = Budget::new(c.cap());
    let mut parts = Vec::new();
    for r in 0..n {
        if h.tree[r] != usize::MAX {
            continue;
        }
        h.tree[r] = h.identity[r];
        let mut objs = vec![r as u32];
        for j in r + 1..n {
            if h.tree[j] == usize::MAX {
                if let Some(&k) = h.arrows_between(r, j).first() {
                    h.tree[j] = k;
                    objs.push(j as u32);
                }
            }
        }
        let id = h.identity[r];
        let mut ls = vec![id];
        ls.extend(h.arrows_between(r, r).iter().copied().filter(|&k| k != id));
        let idx: HashMap<usize, u32> = ls.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let order = ls.len() as u32;
        budget.spend((order * order) as usize, "compacting a hom-groupoid")?;
        let mut mul = Vec::with_capacity(ls.len() * ls.len());
        for &a in &ls {
            for &b in &ls {
                mul.push(idx[&h.compose(c, a, b)?]);
            }
        }
        parts.push((objs, Group::from_table(order, mul)?));
        h.loops.push(ls);
        h.loop_index.push(idx);
    }
    h.gpd = FinGroupoid::new(n as u32, parts)?;
    Ok(h)
}

/// `Pf`, transporting homotopies along `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhiskerData {
    pub f: MorId,
    pub pf: MorId,
}

/// Memoized enrichment of one path category.
pub struct Enrichment<'a, C: PathCategory + ?Sized> {
    pub c: &'a C,
    eg: RefCell<HashMap<ObjId, Rc<EGroupoidData>>>,
    homs: RefCell<HashMap<(ObjId, ObjId), Rc<HomGroupoid>>>,
    whiskers: RefCell<HashMap<MorId, WhiskerData>>,
}

impl<'a, C: PathCategory + ?Sized> Enrichment<'a, C> {
    pub fn new(c: &'a C) -> Self {
        Enrichment { c, eg: RefCell::default(), homs: RefCell::default(), whiskers: RefCell::default() }
    }

    pub fn egroupoid(&self, y: ObjId) -> Result<Rc<EGroupoidData>> {
        if let Some(e) = self.eg.borrow().get(&y) {
            return Ok(e.clone());
        }
        let e = Rc::new(build_internal_egroupoid(self.c, y)?);
        self.eg.borrow_mut().insert(y, e.clone());
        Ok(e)
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> Result<Rc<HomGroupoid>> {
        if let Some(h) = self.homs.borrow().get(&(x, y)) {
            return Ok(h.clone());
        }
        let eg = self.egroupoid(y)?;
        let h = Rc::new(hom_groupoid(self.c, &eg, x)?);
        self.homs.borrow_mut().insert((x, y), h.clone());
        Ok(h)
    }

    /// `Pf : PY -> PZ` for `f : Y -> Z`.
    pub fn whisker_data(&self, f: MorId) -> Result<WhiskerData> {
        if let Some(w) = self.whiskers.borrow().get(&f) {
            return Ok(*w);
        }
        let c = self.c;
        let (py, pz) = (path_object(c, c.dom(f))?, path_object(c, c.cod(f))?);
        let k = boundary(c, &pz, c.compose(f, py.s)?, c.compose(f, py.t)?)?;
        let pf = find_filler(c, &LiftingSquare { w: py.r, p: pz.pair, h: c.compose(pz.r, f)?, k })?;
        let w = WhiskerData { f, pf };
        self.whiskers.borrow_mut().insert(f, w);
        Ok(w)
    }

    /// `f * alpha` for `alpha` in `C(x, dom f)`.
    pub fn whisker_left(&self, f: MorId, x: ObjId, alpha: usize) -> Result<usize> {
        let c = self.c;
        let src = self.hom(x, c.dom(f))?;
        let tgt = self.hom(x, c.cod(f))?;
        let pf = self.whisker_data(f)?.pf;
        tgt.class_of(c.compose(pf, src.arrows[alpha])?)
    }

    /// `alpha * g` for `alpha` in `C(cod g, z)`.
    pub fn whisker_right(&self, z: ObjId, alpha: usize, g: MorId) -> Result<usize> {
        let c = self.c;
        let src = self.hom(c.cod(g), z)?;
        let tgt = self.hom(c.dom(g), z)?;
        tgt.class_of(c.compose(src.arrows[alpha], g)?)
    }

    /// `f * - : C(x, Y) -> C(x, Z)`.
    pub fn whisker_left_map(&self, f: MorId, x: ObjId) -> Result<GroupoidMap> {
        let c = self.c;
        let src = self.hom(x, c.dom(f))?;
        let tgt = self.hom(x, c.cod(f))?;
        let mut obj = Vec::new();
        for &u in &src.objects {
            obj.push(tgt.obj_index[&c.compose(f, u)?]);
        }
        let arr = (0..src.n_arrows()).map(|k| self.whisker_left(f, x, k)).collect::<Result<_>>()?;
        Ok(GroupoidMap { obj, arr })
    }

    /// `- * g : C(Y, z) -> C(X, z)`.
    pub fn whisker_right_map(&self, z: ObjId, g: MorId) -> Result<GroupoidMap> {
        let c = self.c;
        let src = self.hom(c.cod(g), z)?;
        let tgt = self.hom(c.dom(g), z)?;
        let mut obj = Vec::new();
        for &u in &src.objects {
            obj.push(tgt.obj_index[&c.compose(u, g)?]);
        }
        let arr = (0..src.n_arrows()).map(|k| self.whisker_right(z, k, g)).collect::<Result<_>>()?;
        Ok(GroupoidMap { obj, arr })
    }

    /// `beta * alpha = (beta * f') . (g * alpha)` for `alpha : f => f'` in
    /// `C(x, y)` and `beta : g => g'` in `C(y, z)`.
    pub fn horizontal(&self, x: ObjId, y: ObjId, z: ObjId, beta: usize, alpha: usize) -> Result<usize> {
        let (hxy, hyz, hxz) = (self.hom(x, y)?, self.hom(y, z)?, self.hom(x, z)?);
        let f2 = hxy.objects[hxy.tgt[alpha]];
        let g = hyz.objects[hyz.src[beta]];
        let left = self.whisker_right(z, beta, f2)?;
        let right = self.whisker_left(g, x, alpha)?;
        hxz.compose(self.c, left, right)
    }

    /// The other formula, `(g' * alpha) . (beta * f)`.
    pub fn horizontal_alt(&self, x: ObjId, y: ObjId, z: ObjId, beta: usize, alpha: usize) -> Result<usize> {
        let (hxy, hyz, hxz) = (self.hom(x, y)?, self.hom(y, z)?, self.hom(x, z)?);
        let f = hxy.objects[hxy.src[alpha]];
        let g2 = hyz.objects[hyz.tgt[beta]];
        let left = self.whisker_left(g2, x, alpha)?;
        let right = self.whisker_right(z, beta, f)?;
        hxz.compose(self.c, left, right)
    }
}

#[cfg(test)]
mod tests;
