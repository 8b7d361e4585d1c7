//! Path-category structure: markings, path objects, axiom validation,
//! fiberwise homotopy, lifting, and the homotopy category.
//!
//! Path objects are designated by the provider and addressed by the fibration
//! they live over: `path_object_over(q)` for `q : Y -> B` returns `P_B Y`
//! together with `r`, `s`, `t` and the pairing into `Y x_B Y`. The absolute
//! path object of `Y` is the one over `Y -> 1`.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::fincat::{Category, MorId, ObjId, ProviderKind, PullbackData, TableCategory};
use crate::funcspaces::PiCandidate;
use crate::report::{ValidationReport, Violation};

pub const DEFAULT_CAP: usize = 200_000;

/// A path object of `underlying` over the fibration `fib : underlying -> base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathObjectData {
    pub fib: MorId,
    pub base: ObjId,
    pub underlying: ObjId,
    pub object: ObjId,
    pub r: MorId,
    pub s: MorId,
    pub t: MorId,
    /// `(s, t) : object -> underlying x_base underlying`.
    pub pair: MorId,
    pub fiber_product: PullbackData,
}

pub trait PathCategory: Category {
    fn is_fibration(&self, f: MorId) -> bool;
    fn is_weak_equivalence(&self, f: MorId) -> bool;
    /// The designated path object over the fibration `q`.
    fn path_object_over(&self, q: MorId) -> Result<PathObjectData>;

    fn cap(&self) -> usize {
        DEFAULT_CAP
    }

    /// A Pi-type of `f : X -> I` along `g : I -> J`, if the provider has one.
    fn pi_type(&self, f: MorId, g: MorId) -> Result<PiCandidate> {
        let _ = g;
        Err(Error::MissingPiType(format!("no Pi-type provider for {f}")))
    }

    /// The maps searched when looking for a homotopy inverse of `f`. Every
    /// homotopy inverse must be homotopic to one of them.
    fn homotopy_inverse_candidates(&self, f: MorId) -> Result<Vec<MorId>> {
        self.hom_set(self.cod(f), self.dom(f))
    }
}

pub fn is_acyclic_fibration<C: PathCategory + ?Sized>(c: &C, f: MorId) -> bool {
    c.is_fibration(f) && c.is_weak_equivalence(f)
}

/// The absolute path object of `y`.
pub fn path_object<C: PathCategory + ?Sized>(c: &C, y: ObjId) -> Result<PathObjectData> {
    c.path_object_over(c.terminal_map(y)?)
}

/// The product `a x b` as the pullback of the two terminal maps.
pub fn product<C: Category + ?Sized>(c: &C, a: ObjId, b: ObjId) -> Result<PullbackData> {
    c.pullback(c.terminal_map(a)?, c.terminal_map(b)?)
}

/// `f x g` between chosen products.
pub fn product_map<C: Category + ?Sized>(c: &C, src: &PullbackData, tgt: &PullbackData, f: MorId, g: MorId) -> Result<MorId> {
    let a = c.compose(f, src.proj1)?;
    let b = c.compose(g, src.proj2)?;
    c.mediator(tgt, a, b)
}

/// A homotopy `map : X -> P` from `src = s map` to `tgt = t map`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Homotopy {
    pub map: MorId,
    pub path_object: PathObjectData,
    pub src: MorId,
    pub tgt: MorId,
}

/// All homotopies `f ~ g` in the path object `po`, ascending. Empty if `f`
/// and `g` do not agree over the base.
pub fn enumerate_homotopies<C: PathCategory + ?Sized>(c: &C, po: &PathObjectData, f: MorId, g: MorId) -> Result<Vec<Homotopy>> {
    if c.dom(f) != c.dom(g) || c.cod(f) != po.underlying || c.cod(g) != po.underlying {
        return Err(Error::pre(format!("{f} and {g} are not parallel maps into {}", po.underlying)));
    }
    if c.compose(po.fib, f)? != c.compose(po.fib, g)? {
        return Ok(Vec::new());
    }
    let fg = c.mediator(&po.fiber_product, f, g)?;
    Ok(c.lifts(po.pair, fg)?.into_iter().map(|map| Homotopy { map, path_object: *po, src: f, tgt: g }).collect())
}

pub fn homotopic_over<C: PathCategory + ?Sized>(c: &C, po: &PathObjectData, f: MorId, g: MorId) -> Result<bool> {
    if f == g {
        return Ok(true);
    }
    if c.dom(f) != c.dom(g) || c.cod(f) != po.underlying || c.cod(g) != po.underlying {
        return Err(Error::pre(format!("{f} and {g} are not parallel maps into {}", po.underlying)));
    }
    if c.compose(po.fib, f)? != c.compose(po.fib, g)? {
        return Ok(false);
    }
    let fg = c.mediator(&po.fiber_product, f, g)?;
    Ok(c.find_lift(po.pair, fg, &mut |_| Ok(true))?.is_some())
}

/// `f ~ g` in the absolute sense.
pub fn homotopic<C: PathCategory + ?Sized>(c: &C, f: MorId, g: MorId) -> Result<bool> {
    let po = path_object(c, c.cod(f))?;
    homotopic_over(c, &po, f, g)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// The maps `X -> Y` modulo fiberwise homotopy in `po`; each class is
/// represented by its least member. The homotopies out of the first member
/// met determine a class, which is exact when homotopy is an equivalence
/// relation (as it is under the axioms).
#[derive(Debug, Clone)]
pub struct HomotopyClasses {
    pub maps: Vec<MorId>,
    pub class_of: HashMap<MorId, usize>,
    /// Least member per class, ascending.
    pub reps: Vec<MorId>,
}

impl HomotopyClasses {
    pub fn rep(&self, m: MorId) -> Option<MorId> {
        self.class_of.get(&m).map(|&i| self.reps[i])
    }

    pub fn same(&self, a: MorId, b: MorId) -> bool {
        matches!((self.class_of.get(&a), self.class_of.get(&b)), (Some(x), Some(y)) if x == y)
    }
}

pub fn homotopy_classes<C: PathCategory + ?Sized>(c: &C, po: &PathObjectData, x: ObjId) -> Result<HomotopyClasses> {
    let maps = c.hom_set(x, po.underlying)?;
    let pos: HashMap<MorId, usize> = maps.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..maps.len()).collect();
    let mut seen = vec![false; maps.len()];
    for (i, &h) in maps.iter().enumerate() {
        // homotopy is an equivalence relation whenever the axioms hold, so
        // the homotopies out of one member reach its whole class
        if seen[i] {
            continue;
        }
        seen[i] = true;
        for g in c.lifts(po.s, h)? {
            let other = c.compose(po.t, g)?;
            let j = *pos.get(&other).ok_or(Error::UnknownMorphism(other))?;
            seen[j] = true;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // maps are ascending, so the least index of a class is its least member
    let mut rep_idx: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut class_of = HashMap::new();
    for (i, &m) in maps.iter().enumerate() {
        let root = find(&mut parent, i);
        let k = *rep_idx.entry(root).or_insert_with(|| {
            reps.push(maps[root]);
            reps.len() - 1
        });
        class_of.insert(m, k);
    }
    Ok(HomotopyClasses { maps, class_of, reps })
}

/// Does `cand` factor the diagonal of `cand.underlying` over `cand.base` as a
/// weak equivalence followed by a fibration?
pub fn is_path_object<C: PathCategory + ?Sized>(c: &C, cand: &PathObjectData) -> Result<bool> {
    let y = cand.underlying;
    if c.cod(cand.fib) != cand.base || c.dom(cand.fib) != y || !c.is_fibration(cand.fib) {
        return Err(Error::pre(format!("{y} is not fibrant over {}", cand.base)));
    }
    let fp = &cand.fiber_product;
    if fp.f != cand.fib || fp.g != cand.fib {
        return Err(Error::MissingPullback(format!("{y} x_{} {y}", cand.base)));
    }
    let id = c.identity(y);
    let shapes_ok = c.dom(cand.r) == y
        && c.cod(cand.r) == cand.object
        && c.dom(cand.s) == cand.object
        && c.dom(cand.t) == cand.object
        && c.cod(cand.s) == y
        && c.cod(cand.t) == y
        && c.dom(cand.pair) == cand.object
        && c.cod(cand.pair) == fp.apex;
    if !shapes_ok {
        return Ok(false);
    }
    Ok(c.is_weak_equivalence(cand.r)
        && c.is_fibration(cand.pair)
        && c.compose(cand.s, cand.r)? == id
        && c.compose(cand.t, cand.r)? == id
        && c.compose(fp.proj1, cand.pair)? == cand.s
        && c.compose(fp.proj2, cand.pair)? == cand.t)
}

/// All morphisms among the objects searches range over, grouped by domain.
fn fragment_morphisms<C: Category + ?Sized>(c: &C) -> Result<Vec<MorId>> {
    let objs = c.objects();
    let mut all = Vec::new();
    for &x in &objs {
        for &y in &objs {
            all.extend(c.hom_set(x, y)?);
        }
    }
    Ok(all)
}

fn is_iso<C: Category + ?Sized>(c: &C, f: MorId) -> Result<bool> {
    for g in c.hom_set(c.cod(f), c.dom(f))? {
        if c.compose(g, f)? == c.identity(c.dom(f)) && c.compose(f, g)? == c.identity(c.cod(f)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks the seven axioms exhaustively over the objects of `c`.
pub fn validate_path_axioms<C: PathCategory + ?Sized>(c: &C) -> Result<ValidationReport> {
    let mut rep = ValidationReport::default();
    let all = fragment_morphisms(c)?;
    let mut by_dom: HashMap<ObjId, Vec<MorId>> = HashMap::new();
    let mut by_cod: HashMap<ObjId, Vec<MorId>> = HashMap::new();
    for &f in &all {
        by_dom.entry(c.dom(f)).or_default().push(f);
        by_cod.entry(c.cod(f)).or_default().push(f);
    }
    let empty = Vec::new();
    let out_of = |x: ObjId| by_dom.get(&x).unwrap_or(&empty);
    let into = |x: ObjId| by_cod.get(&x).unwrap_or(&empty);

    // fibrations compose
    for &f in &all {
        if !c.is_fibration(f) {
            continue;
        }
        for &g in out_of(c.cod(f)) {
            if c.is_fibration(g) {
                let gf = c.compose(g, f)?;
                if !c.is_fibration(gf) {
                    rep.push(Violation::new("fibration_closure", vec![g.0, f.0, gf.0], "composite of fibrations is not a fibration"));
                }
            }
        }
    }
    // pullbacks of (acyclic) fibrations
    for &f in &all {
        if !c.is_fibration(f) {
            continue;
        }
        let acyclic = c.is_weak_equivalence(f);
        for &g in into(c.cod(f)) {
            let pb = match c.pullback(f, g) {
                Ok(pb) => pb,
                Err(e) => {
                    rep.push(Violation::new("pullback_fibration", vec![f.0, g.0], format!("no pullback: {e}")));
                    continue;
                }
            };
            if !c.is_fibration(pb.proj2) {
                rep.push(Violation::new("pullback_fibration", vec![f.0, g.0, pb.proj2.0], "pullback of a fibration is not a fibration"));
            } else if acyclic && !c.is_weak_equivalence(pb.proj2) {
                rep.push(Violation::new("acyclic_pullback", vec![f.0, g.0, pb.proj2.0], "pullback of an acyclic fibration is not acyclic"));
            }
        }
    }
    // 2-out-of-6
    for &f in &all {
        for &g in out_of(c.cod(f)) {
            let gf = c.compose(g, f)?;
            if !c.is_weak_equivalence(gf) {
                continue;
            }
            for &h in out_of(c.cod(g)) {
                let hg = c.compose(h, g)?;
                if !c.is_weak_equivalence(hg) {
                    continue;
                }
                let hgf = c.compose(h, gf)?;
                for (name, m) in [("f", f), ("g", g), ("h", h), ("hgf", hgf)] {
                    if !c.is_weak_equivalence(m) {
                        rep.push(Violation::new("two_out_of_six", vec![h.0, g.0, f.0], format!("gf and hg are weak equivalences but {name} = {m} is not")));
                    }
                }
            }
        }
    }
    // isomorphisms are acyclic fibrations; acyclic fibrations have sections
    for &f in &all {
        if !is_acyclic_fibration(c, f) && is_iso(c, f)? {
            rep.push(Violation::new("iso_acyclic", vec![f.0], "isomorphism is not an acyclic fibration"));
        }
        if is_acyclic_fibration(c, f) && c.lifts(f, c.identity(c.cod(f)))?.is_empty() {
            rep.push(Violation::new("acyclic_section", vec![f.0], "acyclic fibration has no section"));
        }
    }
    // terminal object, fibrant objects, path objects
    match c.terminal() {
        Err(_) => rep.push(Violation::new("terminal", vec![], "no terminal object")),
        Ok(_) => {
            for x in c.objects() {
                let bang = c.terminal_map(x)?;
                if !c.is_fibration(bang) {
                    rep.push(Violation::new("terminal_fibrant", vec![x.0, bang.0], "map to the terminal object is not a fibration"));
                    continue;
                }
                match c.path_object_over(bang) {
                    Ok(po) => {
                        if !is_path_object(c, &po)? {
                            rep.push(Violation::new("path_object", vec![x.0, po.object.0], "designated path object fails the factorisation"));
                        }
                    }
                    Err(e) => rep.push(Violation::new("path_object", vec![x.0], e.to_string())),
                }
            }
        }
    }
    Ok(rep)
}

/// A commuting square `p h = k w` with `w` a weak equivalence and `p` a fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftingSquare {
    pub w: MorId,
    pub p: MorId,
    pub h: MorId,
    pub k: MorId,
}

impl LiftingSquare {
    pub fn check<C: PathCategory + ?Sized>(&self, c: &C) -> Result<()> {
        if !c.is_weak_equivalence(self.w) || !c.is_fibration(self.p) {
            return Err(Error::pre(format!("square {self:?} is not weak equivalence against fibration")));
        }
        if c.compose(self.p, self.h)? != c.compose(self.k, self.w)? {
            return Err(Error::pre(format!("square {self:?} does not commute")));
        }
        Ok(())
    }
}

/// Every `l` with `p l = k` and `l w ~ h` over `cod p`, in search order.
pub fn all_fillers<C: PathCategory + ?Sized>(c: &C, sq: &LiftingSquare) -> Result<Vec<MorId>> {
    sq.check(c)?;
    let po = c.path_object_over(sq.p)?;
    let mut out = Vec::new();
    for l in c.lifts(sq.p, sq.k)? {
        if homotopic_over(c, &po, c.compose(l, sq.w)?, sq.h)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// The first filler of the square in search order.
pub fn find_filler<C: PathCategory + ?Sized>(c: &C, sq: &LiftingSquare) -> Result<MorId> {
    sq.check(c)?;
    let po = c.path_object_over(sq.p)?;
    if let Some(l) = c.find_lift(sq.p, sq.k, &mut |l| homotopic_over(c, &po, c.compose(l, sq.w)?, sq.h))? {
        return Ok(l);
    }
    Err(Error::NoFiller(format!("w={} p={} h={} k={}", sq.w, sq.p, sq.h, sq.k)))
}

/// Are all the given fillers pairwise homotopic over `cod p`?
pub fn fillers_unique<C: PathCategory + ?Sized>(c: &C, sq: &LiftingSquare, fillers: &[MorId]) -> Result<bool> {
    let po = c.path_object_over(sq.p)?;
    for (i, &a) in fillers.iter().enumerate() {
        for &b in &fillers[i + 1..] {
            if !homotopic_over(c, &po, a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Is there `g` with `fg ~ 1` and `gf ~ 1`?
pub fn is_homotopy_equivalence<C: PathCategory + ?Sized>(c: &C, f: MorId) -> Result<bool> {
    let (x, y) = (c.dom(f), c.cod(f));
    let (px, py) = (path_object(c, x)?, path_object(c, y)?);
    for g in c.homotopy_inverse_candidates(f)? {
        if homotopic_over(c, &py, c.compose(f, g)?, c.identity(y))? && homotopic_over(c, &px, c.compose(g, f)?, c.identity(x))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The homotopy category on the objects of `c`, with the least member of each
/// class as representative. Returns the table and, per table morphism, its
/// representative in `c`.
pub fn homotopy_category<C: PathCategory + ?Sized>(c: &C) -> Result<(TableCategory, Vec<MorId>)> {
    let objs = c.objects();
    let pos: HashMap<ObjId, u32> = objs.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let mut classes: HashMap<(ObjId, ObjId), HomotopyClasses> = HashMap::new();
    for &y in &objs {
        let po = path_object(c, y)?;
        for &x in &objs {
            classes.insert((x, y), homotopy_classes(c, &po, x)?);
        }
    }
    // congruence: homotopic maps stay homotopic under pre- and post-composition
    for &x in &objs {
        for &y in &objs {
            let cl = &classes[&(x, y)];
            for &f in &cl.maps {
                for &f2 in &cl.maps {
                    if f >= f2 || !cl.same(f, f2) {
                        continue;
                    }
                    for &z in &objs {
                        for g in c.hom_set(y, z)? {
                            let (a, b) = (c.compose(g, f)?, c.compose(g, f2)?);
                            if !classes[&(x, z)].same(a, b) {
                                return Err(Error::CongruenceFailure(format!("{f} ~ {f2} but {g}{f} !~ {g}{f2}")));
                            }
                        }
                        for h in c.hom_set(z, x)? {
                            let (a, b) = (c.compose(f, h)?, c.compose(f2, h)?);
                            if !classes[&(z, y)].same(a, b) {
                                return Err(Error::CongruenceFailure(format!("{f} ~ {f2} but {f}{h} !~ {f2}{h}")));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut t = TableCategory::new(objs.len() as u32);
    let mut reps = Vec::new();
    let mut index: HashMap<MorId, MorId> = HashMap::new();
    for &x in &objs {
        let id = c.identity(x);
        let rep = classes[&(x, x)].rep(id).unwrap();
        let m = t.add_morphism(ObjId(pos[&x]), ObjId(pos[&x]));
        t.identities.push(m);
        reps.push(rep);
        index.insert(rep, m);
    }
    for &x in &objs {
        for &y in &objs {
            for &rep in &classes[&(x, y)].reps {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(rep) {
                    e.insert(t.add_morphism(ObjId(pos[&x]), ObjId(pos[&y])));
                    reps.push(rep);
                }
            }
        }
    }
    for (i, &f) in reps.iter().enumerate() {
        let y = c.cod(f);
        for (j, &g) in reps.iter().enumerate() {
            if c.dom(g) != y {
                continue;
            }
            let gf = c.compose(g, f)?;
            let rep = classes[&(c.dom(f), c.cod(g))].rep(gf).ok_or(Error::UnknownMorphism(gf))?;
            t.set_comp(MorId(j as u32), MorId(i as u32), index[&rep]);
        }
    }
    Ok((t, reps))
}

/// A path category with some markings or path objects overridden; used to
/// build faulty structures and alternative path-object choices.
pub struct Tampered<'a, C: PathCategory + ?Sized> {
    pub inner: &'a C,
    pub fib_add: BTreeSet<MorId>,
    pub fib_remove: BTreeSet<MorId>,
    pub we_add: BTreeSet<MorId>,
    pub we_remove: BTreeSet<MorId>,
    pub path_objects: HashMap<MorId, PathObjectData>,
}

impl<'a, C: PathCategory + ?Sized> Tampered<'a, C> {
    pub fn new(inner: &'a C) -> Self {
        Tampered {
            inner,
            fib_add: BTreeSet::new(),
            fib_remove: BTreeSet::new(),
            we_add: BTreeSet::new(),
            we_remove: BTreeSet::new(),
            path_objects: HashMap::new(),
        }
    }
}

impl<C: PathCategory + ?Sized> Category for Tampered<'_, C> {
    fn objects(&self) -> Vec<ObjId> {
        self.inner.objects()
    }
    fn dom(&self, m: MorId) -> ObjId {
        self.inner.dom(m)
    }
    fn cod(&self, m: MorId) -> ObjId {
        self.inner.cod(m)
    }
    fn identity(&self, x: ObjId) -> MorId {
        self.inner.identity(x)
    }
    fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        self.inner.compose(g, f)
    }
    fn hom_set(&self, x: ObjId, y: ObjId) -> Result<Vec<MorId>> {
        self.inner.hom_set(x, y)
    }
    fn provider_kind(&self) -> ProviderKind {
        self.inner.provider_kind()
    }
    fn lifts(&self, p: MorId, k: MorId) -> Result<Vec<MorId>> {
        self.inner.lifts(p, k)
    }
    fn find_lift(&self, p: MorId, k: MorId, pred: &mut dyn FnMut(MorId) -> Result<bool>) -> Result<Option<MorId>> {
        self.inner.find_lift(p, k, pred)
    }
    fn terminal(&self) -> Result<ObjId> {
        self.inner.terminal()
    }
    fn terminal_map(&self, x: ObjId) -> Result<MorId> {
        self.inner.terminal_map(x)
    }
    fn pullback(&self, f: MorId, g: MorId) -> Result<PullbackData> {
        self.inner.pullback(f, g)
    }
    fn mediator(&self, pb: &PullbackData, a: MorId, b: MorId) -> Result<MorId> {
        self.inner.mediator(pb, a, b)
    }
    fn label_obj(&self, x: ObjId) -> String {
        self.inner.label_obj(x)
    }
}

impl<C: PathCategory + ?Sized> PathCategory for Tampered<'_, C> {
    fn is_fibration(&self, f: MorId) -> bool {
        self.fib_add.contains(&f) || (!self.fib_remove.contains(&f) && self.inner.is_fibration(f))
    }
    fn is_weak_equivalence(&self, f: MorId) -> bool {
        self.we_add.contains(&f) || (!self.we_remove.contains(&f) && self.inner.is_weak_equivalence(f))
    }
    fn path_object_over(&self, q: MorId) -> Result<PathObjectData> {
        match self.path_objects.get(&q) {
            Some(po) => Ok(*po),
            None => self.inner.path_object_over(q),
        }
    }
    fn cap(&self) -> usize {
        self.inner.cap()
    }
    fn pi_type(&self, f: MorId, g: MorId) -> Result<PiCandidate> {
        self.inner.pi_type(f, g)
    }
    fn homotopy_inverse_candidates(&self, f: MorId) -> Result<Vec<MorId>> {
        self.inner.homotopy_inverse_candidates(f)
    }
}

#[derive(Default)]
struct SliceIds {
    objs: Vec<(ObjId, MorId)>,
    obj_index: HashMap<(ObjId, MorId), ObjId>,
    mors: Vec<(MorId, ObjId, ObjId)>,
    mor_index: HashMap<(MorId, ObjId), MorId>,
    fragment: Option<Vec<ObjId>>,
}

/// The slice `C/I`: objects are maps into `I`, morphisms commuting triangles.
/// Markings and path objects are inherited from `C`.
pub struct Slice<'a, C: PathCategory + ?Sized> {
    pub base: &'a C,
    pub over: ObjId,
    ids: RefCell<SliceIds>,
}

impl<'a, C: PathCategory + ?Sized> Slice<'a, C> {
    pub fn new(base: &'a C, over: ObjId) -> Self {
        Slice { base, over, ids: RefCell::new(SliceIds::default()) }
    }

    /// The slice object `(x, a)` for `a : x -> I`.
    pub fn obj(&self, a: MorId) -> ObjId {
        debug_assert_eq!(self.base.cod(a), self.over);
        let key = (self.base.dom(a), a);
        let mut ids = self.ids.borrow_mut();
        if let Some(&o) = ids.obj_index.get(&key) {
            return o;
        }
        let o = ObjId(ids.objs.len() as u32);
        ids.objs.push(key);
        ids.obj_index.insert(key, o);
        o
    }

    /// The slice morphism with underlying `f` into the slice object `cod`.
    pub fn mor(&self, f: MorId, cod: ObjId) -> Result<MorId> {
        let b = self.structure_map(cod);
        let a = self.base.compose(b, f)?;
        let dom = self.obj(a);
        let mut ids = self.ids.borrow_mut();
        if let Some(&m) = ids.mor_index.get(&(f, cod)) {
            return Ok(m);
        }
        let m = MorId(ids.mors.len() as u32);
        ids.mors.push((f, dom, cod));
        ids.mor_index.insert((f, cod), m);
        Ok(m)
    }

    pub fn underlying_obj(&self, x: ObjId) -> ObjId {
        self.ids.borrow().objs[x.0 as usize].0
    }

    pub fn structure_map(&self, x: ObjId) -> MorId {
        self.ids.borrow().objs[x.0 as usize].1
    }

    pub fn underlying(&self, m: MorId) -> MorId {
        self.ids.borrow().mors[m.0 as usize].0
    }

    fn base_pullback(&self, f: MorId, g: MorId) -> Result<PullbackData> {
        self.base.pullback(self.underlying(f), self.underlying(g))
    }
}

impl<C: PathCategory + ?Sized> Category for Slice<'_, C> {
    fn objects(&self) -> Vec<ObjId> {
        if let Some(v) = self.ids.borrow().fragment.clone() {
            return v;
        }
        let mut v = Vec::new();
        for t in self.base.objects() {
            for a in self.base.hom_set(t, self.over).unwrap_or_default() {
                v.push(self.obj(a));
            }
        }
        v.sort();
        v.dedup();
        self.ids.borrow_mut().fragment = Some(v.clone());
        v
    }
    fn dom(&self, m: MorId) -> ObjId {
        self.ids.borrow().mors[m.0 as usize].1
    }
    fn cod(&self, m: MorId) -> ObjId {
        self.ids.borrow().mors[m.0 as usize].2
    }
    fn identity(&self, x: ObjId) -> MorId {
        let u = self.base.identity(self.underlying_obj(x));
        self.mor(u, x).expect("identity composes")
    }
    fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        if self.cod(f) != self.dom(g) {
            return Err(Error::NotComposable { g, f });
        }
        let u = self.base.compose(self.underlying(g), self.underlying(f))?;
        self.mor(u, self.cod(g))
    }
    fn hom_set(&self, x: ObjId, y: ObjId) -> Result<Vec<MorId>> {
        let mut v = Vec::new();
        for f in self.base.lifts(self.structure_map(y), self.structure_map(x))? {
            v.push(self.mor(f, y)?);
        }
        v.sort();
        Ok(v)
    }
    fn provider_kind(&self) -> ProviderKind {
        self.base.provider_kind()
    }
    fn lifts(&self, p: MorId, k: MorId) -> Result<Vec<MorId>> {
        let mut v = Vec::new();
        for f in self.base.lifts(self.underlying(p), self.underlying(k))? {
            v.push(self.mor(f, self.dom(p))?);
        }
        Ok(v)
    }
    fn find_lift(&self, p: MorId, k: MorId, pred: &mut dyn FnMut(MorId) -> Result<bool>) -> Result<Option<MorId>> {
        let d = self.dom(p);
        let found = self.base.find_lift(self.underlying(p), self.underlying(k), &mut |f| pred(self.mor(f, d)?))?;
        found.map(|f| self.mor(f, d)).transpose()
    }
    fn terminal(&self) -> Result<ObjId> {
        Ok(self.obj(self.base.identity(self.over)))
    }
    fn terminal_map(&self, x: ObjId) -> Result<MorId> {
        let t = self.terminal()?;
        self.mor(self.structure_map(x), t)
    }
    fn pullback(&self, f: MorId, g: MorId) -> Result<PullbackData> {
        if self.cod(f) != self.cod(g) {
            return Err(Error::pre(format!("{f} and {g} do not share a codomain")));
        }
        let pb = self.base_pullback(f, g)?;
        let (a, b) = (self.dom(f), self.dom(g));
        let proj1 = self.mor(pb.proj1, a)?;
        let proj2 = self.mor(pb.proj2, b)?;
        Ok(PullbackData { f, g, apex: self.dom(proj1), proj1, proj2 })
    }
    fn mediator(&self, pb: &PullbackData, a: MorId, b: MorId) -> Result<MorId> {
        let base_pb = self.base_pullback(pb.f, pb.g)?;
        let m = self.base.mediator(&base_pb, self.underlying(a), self.underlying(b))?;
        self.mor(m, pb.apex)
    }
    fn label_obj(&self, x: ObjId) -> String {
        let (o, a) = self.ids.borrow().objs[x.0 as usize];
        format!("({} via {a})", self.base.label_obj(o))
    }
}

impl<C: PathCategory + ?Sized> PathCategory for Slice<'_, C> {
    fn is_fibration(&self, f: MorId) -> bool {
        self.base.is_fibration(self.underlying(f))
    }
    fn is_weak_equivalence(&self, f: MorId) -> bool {
        self.base.is_weak_equivalence(self.underlying(f))
    }
    fn path_object_over(&self, q: MorId) -> Result<PathObjectData> {
        let bp = self.base.path_object_over(self.underlying(q))?;
        let y = self.dom(q);
        let p_obj = self.obj(self.base.compose(self.structure_map(y), bp.s)?);
        let fp = self.pullback(q, q)?;
        Ok(PathObjectData {
            fib: q,
            base: self.cod(q),
            underlying: y,
            object: p_obj,
            r: self.mor(bp.r, p_obj)?,
            s: self.mor(bp.s, y)?,
            t: self.mor(bp.t, y)?,
            pair: self.mor(bp.pair, fp.apex)?,
            fiber_product: fp,
        })
    }
    fn cap(&self) -> usize {
        self.base.cap()
    }
}
