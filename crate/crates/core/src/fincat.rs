//! Finite categories, the provider interface, and search-based limits.
//!
//! A [`Category`] hands out dense integer ids for objects and morphisms. Two
//! kinds of provider implement it: [`TableCategory`], which stores the whole
//! composition table, and the computed groupoid model in [`crate::models`],
//! which builds objects on demand. The free functions in this module
//! ([`find_terminal`], [`find_pullback`], [`validate_category`]) work against
//! either one, searching over [`Category::objects`] in ascending id order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct ObjId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct MorId(pub u32);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// A chosen pullback square `proj1: apex -> dom f`, `proj2: apex -> dom g`
/// with `f proj1 = g proj2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PullbackData {
    pub f: MorId,
    pub g: MorId,
    pub apex: ObjId,
    pub proj1: MorId,
    pub proj2: MorId,
}

/// Which kind of provider backs a category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    Table,
    Computed,
}

/// The read interface shared by table-backed and computed categories.
///
/// Computed providers may allocate new ids while answering queries, so every
/// method takes `&self` and implementations use interior mutability.
pub trait Category {
    /// The objects searches range over, ascending. For computed providers
    /// this is the designated fragment, not every object ever generated.
    fn objects(&self) -> Vec<ObjId>;
    fn dom(&self, m: MorId) -> ObjId;
    fn cod(&self, m: MorId) -> ObjId;
    fn identity(&self, x: ObjId) -> MorId;
    fn compose(&self, g: MorId, f: MorId) -> Result<MorId>;
    /// All morphisms `x -> y`, ascending.
    fn hom_set(&self, x: ObjId, y: ObjId) -> Result<Vec<MorId>>;

    fn provider_kind(&self) -> ProviderKind {
        ProviderKind::Table
    }

    /// All `l` with `p l = k`, in the provider's search order (ascending
    /// for tables).
    fn lifts(&self, p: MorId, k: MorId) -> Result<Vec<MorId>> {
        let mut out = Vec::new();
        for l in self.hom_set(self.dom(k), self.dom(p))? {
            if self.compose(p, l)? == k {
                out.push(l);
            }
        }
        Ok(out)
    }

    /// The first lift of `k` through `p`, in search order, accepted by
    /// `pred`. Providers may stream candidates instead of listing them all.
    fn find_lift(&self, p: MorId, k: MorId, pred: &mut dyn FnMut(MorId) -> Result<bool>) -> Result<Option<MorId>> {
        for l in self.lifts(p, k)? {
            if pred(l)? {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }

    fn terminal(&self) -> Result<ObjId> {
        find_terminal(self)
    }

    fn terminal_map(&self, x: ObjId) -> Result<MorId> {
        let t = self.terminal()?;
        self.hom_set(x, t)?.first().copied().ok_or(Error::NoTerminal)
    }

    fn pullback(&self, f: MorId, g: MorId) -> Result<PullbackData> {
        find_pullback(self, f, g)
    }

    /// The unique map into the apex with the given two projections.
    fn mediator(&self, pb: &PullbackData, a: MorId, b: MorId) -> Result<MorId> {
        mediator_by_search(self, pb, a, b)
    }

    fn label_obj(&self, x: ObjId) -> String {
        x.to_string()
    }
}

/// `comp(g, f)`, rejecting non-composable pairs.
pub fn compose_morphisms<C: Category + ?Sized>(c: &C, g: MorId, f: MorId) -> Result<MorId> {
    if c.cod(f) != c.dom(g) {
        return Err(Error::NotComposable { g, f });
    }
    c.compose(g, f)
}

/// Composes a path given in diagrammatic order reversed: `chain(c, &[h, g, f]) = h g f`.
pub fn chain<C: Category + ?Sized>(c: &C, ms: &[MorId]) -> Result<MorId> {
    let mut it = ms.iter().rev();
    let mut acc = *it.next().ok_or_else(|| Error::pre("empty composite"))?;
    for &m in it {
        acc = compose_morphisms(c, m, acc)?;
    }
    Ok(acc)
}

pub fn hom_set<C: Category + ?Sized>(c: &C, x: ObjId, y: ObjId) -> Result<Vec<MorId>> {
    c.hom_set(x, y)
}

/// Least object with exactly one incoming morphism from every object.
pub fn find_terminal<C: Category + ?Sized>(c: &C) -> Result<ObjId> {
    let objs = c.objects();
    'cand: for &t in &objs {
        for &x in &objs {
            if c.hom_set(x, t)?.len() != 1 {
                continue 'cand;
            }
        }
        return Ok(t);
    }
    Err(Error::NoTerminal)
}

fn is_pullback_cone<C: Category + ?Sized>(c: &C, f: MorId, g: MorId, a: MorId, b: MorId) -> Result<bool> {
    let objs = c.objects();
    let (x, y) = (c.dom(f), c.dom(g));
    let p = c.dom(a);
    for &w in &objs {
        let to_p = c.hom_set(w, p)?;
        for u in c.hom_set(w, x)? {
            let fu = c.compose(f, u)?;
            for v in c.hom_set(w, y)? {
                if fu != c.compose(g, v)? {
                    continue;
                }
                let mut count = 0;
                for &m in &to_p {
                    if c.compose(a, m)? == u && c.compose(b, m)? == v {
                        count += 1;
                    }
                }
                if count != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Searches the objects of `c` for a pullback of `f` and `g`, verifying the
/// universal property against every commuting cone.
pub fn find_pullback<C: Category + ?Sized>(c: &C, f: MorId, g: MorId) -> Result<PullbackData> {
    if c.cod(f) != c.cod(g) {
        return Err(Error::pre(format!("{f} and {g} do not share a codomain")));
    }
    let (x, y) = (c.dom(f), c.dom(g));
    for p in c.objects() {
        for a in c.hom_set(p, x)? {
            let fa = c.compose(f, a)?;
            for b in c.hom_set(p, y)? {
                if fa == c.compose(g, b)? && is_pullback_cone(c, f, g, a, b)? {
                    return Ok(PullbackData { f, g, apex: p, proj1: a, proj2: b });
                }
            }
        }
    }
    Err(Error::NoPullback { f, g })
}

pub fn mediator_by_search<C: Category + ?Sized>(c: &C, pb: &PullbackData, a: MorId, b: MorId) -> Result<MorId> {
    let w = c.dom(a);
    if c.dom(b) != w {
        return Err(Error::pre(format!("cone legs {a}, {b} have different domains")));
    }
    for m in c.hom_set(w, pb.apex)? {
        if c.compose(pb.proj1, m)? == a && c.compose(pb.proj2, m)? == b {
            return Ok(m);
        }
    }
    Err(Error::pre(format!("cone ({a}, {b}) does not commute over ({}, {})", pb.f, pb.g)))
}

/// Lists every identity, composability and associativity violation.
pub fn validate_category<C: Category + ?Sized>(c: &C) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let objs = c.objects();
    let mut all = Vec::new();
    for &x in &objs {
        for &y in &objs {
            match c.hom_set(x, y) {
                Ok(h) => all.extend(h),
                Err(e) => rep.push(Violation::new("hom", vec![x.0, y.0], e.to_string())),
            }
        }
    }
    let comp = |g: MorId, f: MorId, rep: &mut ValidationReport| -> Option<MorId> {
        match c.compose(g, f) {
            Ok(h) => {
                if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) {
                    rep.push(Violation::new("composability", vec![g.0, f.0, h.0], "composite has wrong boundary"));
                }
                Some(h)
            }
            Err(e) => {
                rep.push(Violation::new("missing_entry", vec![g.0, f.0], e.to_string()));
                None
            }
        }
    };
    for &f in &all {
        let (x, y) = (c.dom(f), c.cod(f));
        if comp(c.identity(y), f, &mut rep) != Some(f) {
            rep.push(Violation::new("left_identity", vec![f.0], format!("id_{y} . {f} != {f}")));
        }
        if comp(f, c.identity(x), &mut rep) != Some(f) {
            rep.push(Violation::new("right_identity", vec![f.0], format!("{f} . id_{x} != {f}")));
        }
    }
    let mut by_dom: BTreeMap<ObjId, Vec<MorId>> = BTreeMap::new();
    for &f in &all {
        by_dom.entry(c.dom(f)).or_default().push(f);
    }
    for &f in &all {
        for &g in by_dom.get(&c.cod(f)).map(|v| v.as_slice()).unwrap_or(&[]) {
            let Some(gf) = comp(g, f, &mut rep) else { continue };
            for &h in by_dom.get(&c.cod(g)).map(|v| v.as_slice()).unwrap_or(&[]) {
                let Some(hg) = comp(h, g, &mut rep) else { continue };
                let l = comp(h, gf, &mut rep);
                let r = comp(hg, f, &mut rep);
                if l != r {
                    rep.push(Violation::new("associativity", vec![h.0, g.0, f.0], "h(gf) != (hg)f"));
                }
            }
        }
    }
    rep
}

/// A category stored as an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCategory {
    pub n_objects: u32,
    /// `(dom, cod)` per morphism id.
    pub morphisms: Vec<(ObjId, ObjId)>,
    pub identities: Vec<MorId>,
    pub comp: BTreeMap<(MorId, MorId), MorId>,
}

impl TableCategory {
    pub fn new(n_objects: u32) -> Self {
        TableCategory { n_objects, morphisms: Vec::new(), identities: Vec::new(), comp: BTreeMap::new() }
    }

    /// Adds identities for every object and returns the table.
    pub fn with_identities(mut self) -> Self {
        for x in 0..self.n_objects {
            let id = self.add_morphism(ObjId(x), ObjId(x));
            self.identities.push(id);
        }
        let ids = self.identities.clone();
        for id in ids {
            self.comp.insert((id, id), id);
        }
        self
    }

    pub fn add_morphism(&mut self, dom: ObjId, cod: ObjId) -> MorId {
        self.morphisms.push((dom, cod));
        MorId(self.morphisms.len() as u32 - 1)
    }

    pub fn set_comp(&mut self, g: MorId, f: MorId, gf: MorId) {
        self.comp.insert((g, f), gf);
    }

    /// Fills in the identity-law entries for every non-identity morphism.
    pub fn fill_identity_laws(&mut self) {
        for m in 0..self.morphisms.len() as u32 {
            let m = MorId(m);
            let (x, y) = self.morphisms[m.0 as usize];
            let (ix, iy) = (self.identities[x.0 as usize], self.identities[y.0 as usize]);
            self.comp.entry((iy, m)).or_insert(m);
            self.comp.entry((m, ix)).or_insert(m);
        }
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    /// The interval groupoid: objects 0, 1 and isomorphisms `u: 0 -> 1`, `v: 1 -> 0`.
    /// Returns the table and `(u, v)`.
    pub fn interval() -> (Self, MorId, MorId) {
        let mut c = TableCategory::new(2).with_identities();
        let u = c.add_morphism(ObjId(0), ObjId(1));
        let v = c.add_morphism(ObjId(1), ObjId(0));
        c.fill_identity_laws();
        let (i0, i1) = (c.identities[0], c.identities[1]);
        c.set_comp(v, u, i0);
        c.set_comp(u, v, i1);
        (c, u, v)
    }

    /// The one-object one-morphism category.
    pub fn point() -> Self {
        TableCategory::new(1).with_identities()
    }

    /// The one-object groupoid of the group Z/2: identity `e` and `a` with `aa = e`.
    pub fn bz2() -> (Self, MorId) {
        let mut c = TableCategory::new(1).with_identities();
        let a = c.add_morphism(ObjId(0), ObjId(0));
        c.fill_identity_laws();
        c.set_comp(a, a, c.identities[0]);
        (c, a)
    }
}

impl Category for TableCategory {
    fn objects(&self) -> Vec<ObjId> {
        (0..self.n_objects).map(ObjId).collect()
    }

    fn dom(&self, m: MorId) -> ObjId {
        self.morphisms[m.0 as usize].0
    }

    fn cod(&self, m: MorId) -> ObjId {
        self.morphisms[m.0 as usize].1
    }

    fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.0 as usize]
    }

    fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        if self.cod(f) != self.dom(g) {
            return Err(Error::NotComposable { g, f });
        }
        self.comp.get(&(g, f)).copied().ok_or(Error::MissingEntry { g, f })
    }

    fn hom_set(&self, x: ObjId, y: ObjId) -> Result<Vec<MorId>> {
        Ok((0..self.morphisms.len() as u32)
            .map(MorId)
            .filter(|&m| self.morphisms[m.0 as usize] == (x, y))
            .collect())
    }
}

/// A functor between table categories, given pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub obj_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
}

impl FinFunctor {
    /// Checks preservation of boundaries, identities and composition.
    pub fn validate(&self, source: &TableCategory, target: &TableCategory) -> ValidationReport {
        let mut rep = ValidationReport::default();
        if self.obj_map.len() != source.n_objects as usize || self.mor_map.len() != source.morphisms.len() {
            rep.push(Violation::new("shape", vec![], "map sizes do not match the source"));
            return rep;
        }
        for (i, &(x, y)) in source.morphisms.iter().enumerate() {
            let fm = self.mor_map[i];
            if target.dom(fm) != self.obj_map[x.0 as usize] || target.cod(fm) != self.obj_map[y.0 as usize] {
                rep.push(Violation::new("boundary", vec![i as u32], "image has wrong boundary"));
            }
        }
        for x in source.objects() {
            let fid = self.mor_map[source.identity(x).0 as usize];
            if fid != target.identity(self.obj_map[x.0 as usize]) {
                rep.push(Violation::new("identity", vec![x.0], "identity not preserved"));
            }
        }
        for (&(g, f), &gf) in &source.comp {
            let lhs = self.mor_map[gf.0 as usize];
            match target.compose(self.mor_map[g.0 as usize], self.mor_map[f.0 as usize]) {
                Ok(rhs) if rhs == lhs => {}
                _ => rep.push(Violation::new("composition", vec![g.0, f.0], "composition not preserved")),
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_composition_is_forced() {
        let (c, u, v) = TableCategory::interval();
        assert_eq!(c.compose(v, u).unwrap(), c.identity(ObjId(0)));
        // one morphism per ordered pair: the composite has no other candidate
        for x in c.objects() {
            for y in c.objects() {
                assert_eq!(c.hom_set(x, y).unwrap().len(), 1);
            }
        }
        assert_eq!(c.compose(c.identity(ObjId(1)), u).unwrap(), u);
        assert_eq!(c.compose(u, c.identity(ObjId(0))).unwrap(), u);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let (c, u, _) = TableCategory::interval();
        assert_eq!(compose_morphisms(&c, u, u), Err(Error::NotComposable { g: u, f: u }));
        let mut broken = c.clone();
        broken.comp.remove(&(u, c.identity(ObjId(0))));
        assert!(matches!(broken.compose(u, c.identity(ObjId(0))), Err(Error::MissingEntry { .. })));
    }

    #[test]
    fn validation_of_small_categories() {
        assert!(validate_category(&TableCategory::interval().0).is_empty());
        assert!(validate_category(&TableCategory::point()).is_empty());
        assert!(validate_category(&TableCategory::bz2().0).is_empty());
        let (mut c, u, v) = TableCategory::interval();
        c.set_comp(v, u, u);
        let rep = validate_category(&c);
        // the corrupted entry is reported as the triple (g, f, gf)
        assert!(rep.violations.iter().any(|x| x.kind == "composability" && x.witness == vec![v.0, u.0, u.0]));
    }

    #[test]
    fn terminal_search() {
        assert_eq!(find_terminal(&TableCategory::point()), Ok(ObjId(0)));
        // two parallel arrows 0 => 1: object 1 has two maps in from 0
        let mut c = TableCategory::new(2).with_identities();
        c.add_morphism(ObjId(0), ObjId(1));
        c.add_morphism(ObjId(0), ObjId(1));
        c.fill_identity_laws();
        assert!(validate_category(&c).is_empty());
        assert_eq!(find_terminal(&c), Err(Error::NoTerminal));
    }

    #[test]
    fn hom_sets() {
        let (c, u, _) = TableCategory::interval();
        assert_eq!(c.hom_set(ObjId(0), ObjId(1)).unwrap(), vec![u]);
        assert_eq!(TableCategory::bz2().0.hom_set(ObjId(0), ObjId(0)).unwrap().len(), 2);
    }

    #[test]
    fn pullback_search() {
        let p = TableCategory::point();
        let id = p.identity(ObjId(0));
        let pb = find_pullback(&p, id, id).unwrap();
        assert_eq!((pb.apex, pb.proj1, pb.proj2), (ObjId(0), id, id));
        // two distinct points of a two-object discrete category over a single
        // object: 0 -> 2 <- 1 has no apex because there is no empty object
        let mut c = TableCategory::new(3).with_identities();
        let a = c.add_morphism(ObjId(0), ObjId(2));
        let b = c.add_morphism(ObjId(1), ObjId(2));
        c.fill_identity_laws();
        assert!(validate_category(&c).is_empty());
        assert_eq!(find_pullback(&c, a, b), Err(Error::NoPullback { f: a, g: b }));
    }

    #[test]
    fn functor_validation() {
        let (i, _, _) = TableCategory::interval();
        let p = TableCategory::point();
        let collapse = FinFunctor { obj_map: vec![ObjId(0); 2], mor_map: vec![MorId(0); 4] };
        assert!(collapse.validate(&i, &p).is_empty());
        let bad = FinFunctor { obj_map: vec![ObjId(0), ObjId(1)], mor_map: vec![MorId(0), MorId(1), MorId(1), MorId(3)] };
        assert!(!bad.validate(&i, &i).is_empty());
    }
}
