//! Table-backed path categories and the JSON model document.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{find_pullback, find_terminal, Category, MorId, ObjId, PullbackData, TableCategory};
use crate::pathstruct::{PathCategory, PathObjectData};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub id: u32,
    pub dom: u32,
    pub cod: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathObjectEntry {
    pub base: u32,
    pub object: u32,
    #[serde(rename = "P")]
    pub p: u32,
    pub r: u32,
    pub s: u32,
    pub t: u32,
}

/// The on-disk form of a table-backed path category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub objects: Vec<u32>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<u32, u32>,
    pub comp: Vec<[u32; 3]>,
    #[serde(default)]
    pub fibrations: Vec<u32>,
    #[serde(default)]
    pub weak_equivalences: Vec<u32>,
    #[serde(default)]
    pub path_objects: Vec<PathObjectEntry>,
}

impl ModelDocument {
    /// Sorts every array ascending.
    pub fn normalize(&mut self) {
        self.objects.sort();
        self.morphisms.sort_by_key(|m| m.id);
        self.comp.sort();
        self.fibrations.sort();
        self.fibrations.dedup();
        self.weak_equivalences.sort();
        self.weak_equivalences.dedup();
        self.path_objects.sort();
    }

    pub fn to_json(&self) -> String {
        let mut d = self.clone();
        d.normalize();
        serde_json::to_string_pretty(&d).expect("document serializes")
    }
}

#[derive(Default)]
struct Caches {
    terminal: Option<Result<ObjId>>,
    pullbacks: HashMap<(MorId, MorId), Result<PullbackData>>,
    paths: HashMap<MorId, Result<PathObjectData>>,
}

/// A path category given entirely by tables.
pub struct TableModel {
    pub name: String,
    pub cat: TableCategory,
    pub fibrations: BTreeSet<MorId>,
    pub weak_equivalences: BTreeSet<MorId>,
    pub path_objects: Vec<PathObjectEntry>,
    caches: RefCell<Caches>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

impl TableModel {
    pub fn new(name: &str, cat: TableCategory, fibrations: BTreeSet<MorId>, weak_equivalences: BTreeSet<MorId>, path_objects: Vec<PathObjectEntry>) -> Self {
        TableModel { name: name.to_string(), cat, fibrations, weak_equivalences, path_objects, caches: RefCell::default() }
    }

    pub fn from_document(name: &str, doc: &ModelDocument) -> Result<Self> {
        let mut objs = doc.objects.clone();
        objs.sort();
        if objs.iter().enumerate().any(|(i, &o)| i as u32 != o) {
            return Err(schema("object ids must be dense from 0 and distinct"));
        }
        let n = objs.len() as u32;
        let mut mors = doc.morphisms.clone();
        mors.sort_by_key(|m| m.id);
        if mors.iter().enumerate().any(|(i, m)| i as u32 != m.id) {
            return Err(schema("morphism ids must be dense from 0 and distinct"));
        }
        let mut cat = TableCategory::new(n);
        for m in &mors {
            if m.dom >= n || m.cod >= n {
                return Err(schema(format!("morphism {} has an unknown endpoint", m.id)));
            }
            cat.add_morphism(ObjId(m.dom), ObjId(m.cod));
        }
        let n_mor = mors.len() as u32;
        let known = |m: u32, what: &str| if m < n_mor { Ok(MorId(m)) } else { Err(schema(format!("{what} refers to unknown morphism {m}"))) };
        for x in 0..n {
            let id = *doc.identities.get(&x).ok_or_else(|| schema(format!("object {x} has no identity")))?;
            let id = known(id, "identities")?;
            if cat.morphisms[id.0 as usize] != (ObjId(x), ObjId(x)) {
                return Err(schema(format!("identity of {x} is not an endomorphism of {x}")));
            }
            cat.identities.push(id);
        }
        if let Some(&x) = doc.identities.keys().find(|&&x| x >= n) {
            return Err(schema(format!("identity given for unknown object {x}")));
        }
        for &[g, f, gf] in &doc.comp {
            let (g, f, gf) = (known(g, "comp")?, known(f, "comp")?, known(gf, "comp")?);
            if cat.cod(f) != cat.dom(g) {
                return Err(schema(format!("comp entry for non-composable pair ({}, {})", g.0, f.0)));
            }
            if cat.comp.insert((g, f), gf).is_some() {
                return Err(schema(format!("duplicate comp entry for ({}, {})", g.0, f.0)));
            }
        }
        for f in 0..n_mor {
            for g in 0..n_mor {
                let (f, g) = (MorId(f), MorId(g));
                if cat.cod(f) == cat.dom(g) && !cat.comp.contains_key(&(g, f)) {
                    return Err(schema(format!("missing comp entry for ({}, {})", g.0, f.0)));
                }
            }
        }
        let fibrations = doc.fibrations.iter().map(|&m| known(m, "fibrations")).collect::<Result<_>>()?;
        let weak_equivalences = doc.weak_equivalences.iter().map(|&m| known(m, "weak_equivalences")).collect::<Result<_>>()?;
        for p in &doc.path_objects {
            for o in [p.base, p.object, p.p] {
                if o >= n {
                    return Err(schema(format!("path object refers to unknown object {o}")));
                }
            }
            for m in [p.r, p.s, p.t] {
                known(m, "path_objects")?;
            }
        }
        let mut pos = doc.path_objects.clone();
        pos.sort();
        Ok(TableModel::new(name, cat, fibrations, weak_equivalences, pos))
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse { location: format!("line {} column {}", e.line(), e.column()), message: e.to_string() })?;
        TableModel::from_document(name, &doc)
    }

    pub fn document(&self) -> ModelDocument {
        let mut doc = ModelDocument {
            objects: (0..self.cat.n_objects).collect(),
            morphisms: self.cat.morphisms.iter().enumerate().map(|(i, &(d, c))| MorphismEntry { id: i as u32, dom: d.0, cod: c.0 }).collect(),
            identities: self.cat.identities.iter().enumerate().map(|(x, m)| (x as u32, m.0)).collect(),
            comp: self.cat.comp.iter().map(|(&(g, f), &gf)| [g.0, f.0, gf.0]).collect(),
            fibrations: self.fibrations.iter().map(|m| m.0).collect(),
            weak_equivalences: self.weak_equivalences.iter().map(|m| m.0).collect(),
            path_objects: self.path_objects.clone(),
        };
        doc.normalize();
        doc
    }

    fn pair_for(&self, q: MorId, object: ObjId, r: MorId, s: MorId, t: MorId) -> Result<PathObjectData> {
        let fp = self.pullback(q, q)?;
        let pair = self.mediator(&fp, s, t)?;
        Ok(PathObjectData { fib: q, base: self.cod(q), underlying: self.dom(q), object, r, s, t, pair, fiber_product: fp })
    }

    /// The least `(P, r, s, t)` that factors the diagonal over `cod q`.
    fn search_path_object(&self, q: MorId) -> Result<PathObjectData> {
        let y = self.dom(q);
        let id = self.identity(y);
        for p in self.objects() {
            let back = self.cat.hom_set(p, y)?;
            for r in self.cat.hom_set(y, p)? {
                if !self.is_weak_equivalence(r) {
                    continue;
                }
                for &s in &back {
                    if self.compose(s, r)? != id {
                        continue;
                    }
                    for &t in &back {
                        if self.compose(t, r)? != id || self.compose(q, s)? != self.compose(q, t)? {
                            continue;
                        }
                        if let Ok(po) = self.pair_for(q, p, r, s, t) {
                            if self.is_fibration(po.pair) {
                                return Ok(po);
                            }
                        }
                    }
                }
            }
        }
        Err(Error::MissingSlicePathObject(q))
    }
}

impl Category for TableModel {
    fn objects(&self) -> Vec<ObjId> {
        self.cat.objects()
    }
    fn dom(&self, m: MorId) -> ObjId {
        self.cat.dom(m)
    }
    fn cod(&self, m: MorId) -> ObjId {
        self.cat.cod(m)
    }
    fn identity(&self, x: ObjId) -> MorId {
        self.cat.identity(x)
    }
    fn compose(&self, g: MorId, f: MorId) -> Result<MorId> {
        self.cat.compose(g, f)
    }
    fn hom_set(&self, x: ObjId, y: ObjId) -> Result<Vec<MorId>> {
        self.cat.hom_set(x, y)
    }
    fn terminal(&self) -> Result<ObjId> {
        if let Some(t) = &self.caches.borrow().terminal {
            return t.clone();
        }
        let t = find_terminal(&self.cat);
        self.caches.borrow_mut().terminal = Some(t.clone());
        t
    }
    fn pullback(&self, f: MorId, g: MorId) -> Result<PullbackData> {
        if let Some(p) = self.caches.borrow().pullbacks.get(&(f, g)) {
            return p.clone();
        }
        let p = find_pullback(&self.cat, f, g);
        self.caches.borrow_mut().pullbacks.insert((f, g), p.clone());
        p
    }
}

impl PathCategory for TableModel {
    fn is_fibration(&self, f: MorId) -> bool {
        self.fibrations.contains(&f)
    }

    fn is_weak_equivalence(&self, f: MorId) -> bool {
        self.weak_equivalences.contains(&f)
    }

    /// The designated path object if there is one, else the least one found
    /// by search.
    fn path_object_over(&self, q: MorId) -> Result<PathObjectData> {
        if let Some(p) = self.caches.borrow().paths.get(&q) {
            return p.clone();
        }
        let (y, b) = (self.dom(q), self.cod(q));
        let designated = self.path_objects.iter().find(|e| e.object == y.0 && e.base == b.0);
        let res = match designated {
            Some(e) => self.pair_for(q, ObjId(e.p), MorId(e.r), MorId(e.s), MorId(e.t)),
            None if self.is_fibration(q) => self.search_path_object(q),
            None => Err(Error::MissingSlicePathObject(q)),
        };
        self.caches.borrow_mut().paths.insert(q, res.clone());
        res
    }
}

/// Materializes the fragment of any path category as a document. Absolute
/// path objects are included when they lie inside the fragment.
pub fn to_document<C: PathCategory + ?Sized>(c: &C) -> Result<ModelDocument> {
    let objs = c.objects();
    let opos: HashMap<ObjId, u32> = objs.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let mut mors = Vec::new();
    for &x in &objs {
        for &y in &objs {
            mors.extend(c.hom_set(x, y)?);
        }
    }
    let mpos: HashMap<MorId, u32> = mors.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let mut comp = Vec::new();
    for &f in &mors {
        for &g in &mors {
            if c.cod(f) == c.dom(g) {
                let gf = c.compose(g, f)?;
                comp.push([mpos[&g], mpos[&f], *mpos.get(&gf).ok_or(Error::UnknownMorphism(gf))?]);
            }
        }
    }
    let mut path_objects = Vec::new();
    let term = c.terminal()?;
    for &x in &objs {
        let Ok(po) = c.path_object_over(c.terminal_map(x)?) else { continue };
        if let (Some(&p), Some(&r), Some(&s), Some(&t), Some(&b)) =
            (opos.get(&po.object), mpos.get(&po.r), mpos.get(&po.s), mpos.get(&po.t), opos.get(&term))
        {
            path_objects.push(PathObjectEntry { base: b, object: opos[&x], p, r, s, t });
        }
    }
    let mut doc = ModelDocument {
        objects: (0..objs.len() as u32).collect(),
        morphisms: mors.iter().enumerate().map(|(i, &m)| MorphismEntry { id: i as u32, dom: opos[&c.dom(m)], cod: opos[&c.cod(m)] }).collect(),
        identities: objs.iter().map(|&x| (opos[&x], mpos[&c.identity(x)])).collect(),
        comp,
        fibrations: mors.iter().filter(|&&m| c.is_fibration(m)).map(|m| mpos[m]).collect(),
        weak_equivalences: mors.iter().filter(|&&m| c.is_weak_equivalence(m)).map(|m| mpos[m]).collect(),
        path_objects,
    };
    doc.normalize();
    Ok(doc)
}

pub fn load_model(path: &Path) -> Result<TableModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "table".into());
    TableModel::parse(&name, &text)
}

pub fn save_model(path: &Path, doc: &ModelDocument) -> Result<()> {
    std::fs::write(path, doc.to_json() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::GpdModel;
    use crate::pathstruct::validate_path_axioms;

    fn point_doc() -> String {
        r#"{"objects":[0],"morphisms":[{"id":0,"dom":0,"cod":0}],"identities":{"0":0},"comp":[[0,0,0]],
            "fibrations":[0],"weak_equivalences":[0],"path_objects":[{"base":0,"object":0,"P":0,"r":0,"s":0,"t":0}]}"#
            .to_string()
    }

    #[test]
    fn round_trip_of_discrete_model() {
        let m = GpdModel::discrete(&[1], 200_000);
        let doc = to_document(&m).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.json");
        save_model(&path, &doc).unwrap();
        let t = load_model(&path).unwrap();
        assert_eq!(t.document(), doc);
        assert!(validate_path_axioms(&t).unwrap().is_empty());
        assert_eq!(to_document(&t).unwrap(), doc);
    }

    #[test]
    fn point_document_loads_and_validates() {
        let t = TableModel::parse("pt", &point_doc()).unwrap();
        assert!(validate_path_axioms(&t).unwrap().is_empty());
    }

    #[test]
    fn missing_comp_entry_is_named() {
        let text = r#"{"objects":[0,1],"morphisms":[{"id":0,"dom":0,"cod":0},{"id":1,"dom":1,"cod":1},{"id":2,"dom":0,"cod":1}],
            "identities":{"0":0,"1":1},"comp":[[0,0,0],[1,1,1],[2,0,2]]}"#;
        match TableModel::parse("x", text) {
            Err(Error::Schema(m)) => assert!(m.contains("(1, 2)"), "{m}"),
            other => panic!("unexpected {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn sparse_ids_and_unknown_keys_are_rejected() {
        let sparse = point_doc().replace(r#""objects":[0]"#, r#""objects":[1]"#);
        assert!(matches!(TableModel::parse("x", &sparse), Err(Error::Schema(_))));
        let extra = point_doc().replacen('{', r#"{"colour":1,"#, 1);
        assert!(matches!(TableModel::parse("x", &extra), Err(Error::Parse { .. })));
        assert!(matches!(TableModel::parse("x", "{\n  \"objects\": [0,"), Err(Error::Parse { .. })));
    }

    #[test]
    fn undesignated_path_objects_are_searched() {
        let text = point_doc().replace(r#","path_objects":[{"base":0,"object":0,"P":0,"r":0,"s":0,"t":0}]"#, "");
        let t = TableModel::parse("pt", &text).unwrap();
        let po = t.path_object_over(MorId(0)).unwrap();
        assert_eq!((po.object, po.r), (ObjId(0), MorId(0)));
    }
}
