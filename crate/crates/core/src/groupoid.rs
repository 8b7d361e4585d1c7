//! Finite groupoids in skeletal form.
//!
//! A connected groupoid with `n` objects is determined up to isomorphism by
//! its vertex group, but we need more than "up to isomorphism": every arrow
//! must have a stable address. Each component therefore stores its objects,
//! the vertex group at its root (the least object), and a spanning tree of
//! arrows `t_x : root -> x`. An arrow `x -> y` is written `(x, y, g)` and
//! denotes `t_y . g . t_x^-1`, so that
//!
//! ```text
//! (y, z, h) . (x, y, g) = (x, z, hg)        (x, y, g)^-1 = (y, x, g^-1)
//! ```
//!
//! A functor is likewise stored compactly: its object map, the group element
//! `c_x` with `F(t_x) = (F root, F x, c_x)`, and a group homomorphism `rho`
//! per component. Equal data means equal functors.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::Hash;
use std::rc::Rc;

use crate::error::{Error, Result};

/// A finite group with elements `0..order`; `0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    order: u32,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl Group {
    pub fn trivial() -> Self {
        Group { order: 1, mul: vec![0], inv: vec![0] }
    }

    pub fn cyclic(n: u32) -> Self {
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        Group::from_table(n, mul).expect("cyclic table is a group")
    }

    /// Builds a group from a row-major multiplication table, `mul[a*n+b] = ab`.
    pub fn from_table(order: u32, mul: Vec<u32>) -> Result<Self> {
        let n = order as usize;
        if n == 0 || mul.len() != n * n || mul.iter().any(|&x| x >= order) {
            return Err(Error::Schema("malformed group table".into()));
        }
        for a in 0..n {
            if mul[a] != a as u32 || mul[a * n] != a as u32 {
                return Err(Error::Schema("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        if inv.contains(&u32::MAX) {
            return Err(Error::Schema("group table lacks inverses".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = mul[a * n + b] as usize;
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(Error::Schema("group table is not associative".into()));
                    }
                }
            }
        }
        Ok(Group { order, mul, inv })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.order + b) as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// A generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order as usize];
        span[0] = true;
        for a in 1..self.order {
            if !span[a as usize] {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[u32]) -> Vec<bool> {
        let mut seen = vec![false; self.order as usize];
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

type HomTables = Rc<Vec<Vec<u32>>>;

thread_local! {
    static HOM_CACHE: RefCell<HashMap<(Group, Group), HomTables>> = RefCell::new(HashMap::new());
}

/// All homomorphisms `src -> tgt`, as image tables, in lexicographic order of
/// the images of the generators.
pub fn homomorphisms(src: &Group, tgt: &Group) -> Rc<Vec<Vec<u32>>> {
    let key = (src.clone(), tgt.clone());
    if let Some(v) = HOM_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let gens = src.generators();
    // spanning tree of words: each element reached as parent * generator
    let mut via = vec![None; src.order as usize];
    let mut order = vec![0u32];
    let mut seen = vec![false; src.order as usize];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (k, &g) in gens.iter().enumerate() {
            let y = src.mul(x, g);
            if !seen[y as usize] {
                seen[y as usize] = true;
                via[y as usize] = Some((x, k));
                order.push(y);
            }
        }
        i += 1;
    }
    let mut out = Vec::new();
    let mut imgs = vec![0u32; gens.len()];
    loop {
        let mut h = vec![0u32; src.order as usize];
        for &y in &order[1..] {
            let (x, k) = via[y as usize].unwrap();
            h[y as usize] = tgt.mul(h[x as usize], imgs[k]);
        }
        let ok = (0..src.order).all(|a| (0..src.order).all(|b| h[src.mul(a, b) as usize] == tgt.mul(h[a as usize], h[b as usize])));
        if ok {
            out.push(h);
        }
        if !odometer(&mut imgs, |_| tgt.order) {
            break;
        }
    }
    let v = Rc::new(out);
    HOM_CACHE.with(|c| c.borrow_mut().insert(key, v.clone()));
    v
}

/// Advances a mixed-radix counter; returns false after the last value.
pub(crate) fn odometer(digits: &mut [u32], radix: impl Fn(usize) -> u32) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// An arrow `(src, tgt, g)` of a [`FinGroupoid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub src: u32,
    pub tgt: u32,
    pub g: u32,
}

impl Arrow {
    pub fn new(src: u32, tgt: u32, g: u32) -> Self {
        Arrow { src, tgt, g }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    /// Ascending; the first entry is the root.
    pub objects: Vec<u32>,
    pub group: Group,
}

/// A finite groupoid in skeletal form; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinGroupoid {
    comp_of: Vec<u32>,
    local: Vec<u32>,
    components: Vec<Component>,
    offsets: Vec<u64>,
}

impl FinGroupoid {
    /// `parts` must partition `0..n`, each part ascending, parts ordered by
    /// least member.
    pub fn new(n: u32, parts: Vec<(Vec<u32>, Group)>) -> Result<Self> {
        let mut comp_of = vec![u32::MAX; n as usize];
        let mut local = vec![0; n as usize];
        let mut offsets = Vec::with_capacity(parts.len());
        let mut off = 0u64;
        let mut last_root = None;
        let mut components = Vec::with_capacity(parts.len());
        for (ci, (objs, group)) in parts.into_iter().enumerate() {
            if objs.is_empty() || objs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Schema("component objects must be ascending and nonempty".into()));
            }
            if last_root.is_some_and(|r| r >= objs[0]) {
                return Err(Error::Schema("components must be ordered by least object".into()));
            }
            last_root = Some(objs[0]);
            for (li, &x) in objs.iter().enumerate() {
                if x >= n || comp_of[x as usize] != u32::MAX {
                    return Err(Error::Schema(format!("object {x} misplaced in components")));
                }
                comp_of[x as usize] = ci as u32;
                local[x as usize] = li as u32;
            }
            offsets.push(off);
            let k = objs.len() as u64;
            off += k * k * group.order() as u64;
            components.push(Component { objects: objs, group });
        }
        if comp_of.contains(&u32::MAX) {
            return Err(Error::Schema("components do not cover every object".into()));
        }
        Ok(FinGroupoid { comp_of, local, components, offsets })
    }

    pub fn empty() -> Self {
        FinGroupoid::new(0, vec![]).unwrap()
    }

    pub fn discrete(n: u32) -> Self {
        FinGroupoid::new(n, (0..n).map(|x| (vec![x], Group::trivial())).collect()).unwrap()
    }

    /// One component with `n` objects and trivial vertex group.
    pub fn indiscrete(n: u32) -> Self {
        if n == 0 {
            return FinGroupoid::empty();
        }
        FinGroupoid::new(n, vec![((0..n).collect(), Group::trivial())]).unwrap()
    }

    /// The one-object groupoid of a group.
    pub fn delooping(g: Group) -> Self {
        FinGroupoid::new(1, vec![(vec![0], g)]).unwrap()
    }

    pub fn terminal() -> Self {
        FinGroupoid::indiscrete(1)
    }

    pub fn interval() -> Self {
        FinGroupoid::indiscrete(2)
    }

    pub fn bz2() -> Self {
        FinGroupoid::delooping(Group::cyclic(2))
    }

    pub fn n_objects(&self) -> u32 {
        self.comp_of.len() as u32
    }

    pub fn n_morphisms(&self) -> u64 {
        match self.components.last() {
            None => 0,
            Some(c) => {
                let k = c.objects.len() as u64;
                self.offsets[self.components.len() - 1] + k * k * c.group.order() as u64
            }
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, x: u32) -> u32 {
        self.comp_of[x as usize]
    }

    pub fn root_of(&self, x: u32) -> u32 {
        self.components[self.comp_of[x as usize] as usize].objects[0]
    }

    pub fn group_of(&self, x: u32) -> &Group {
        &self.components[self.comp_of[x as usize] as usize].group
    }

    pub fn connected(&self, x: u32, y: u32) -> bool {
        self.comp_of[x as usize] == self.comp_of[y as usize]
    }

    pub fn is_discrete(&self) -> bool {
        self.components.iter().all(|c| c.objects.len() == 1 && c.group.order() == 1)
    }

    pub fn id(&self, x: u32) -> Arrow {
        Arrow::new(x, x, 0)
    }

    /// The spanning-tree arrow `root -> x`.
    pub fn tree(&self, x: u32) -> Arrow {
        Arrow::new(self.root_of(x), x, 0)
    }

    pub fn compose(&self, g: Arrow, f: Arrow) -> Arrow {
        debug_assert_eq!(f.tgt, g.src);
        Arrow::new(f.src, g.tgt, self.group_of(f.src).mul(g.g, f.g))
    }

    pub fn inverse(&self, a: Arrow) -> Arrow {
        Arrow::new(a.tgt, a.src, self.group_of(a.src).inv(a.g))
    }

    pub fn hom(&self, x: u32, y: u32) -> Vec<Arrow> {
        if !self.connected(x, y) {
            return Vec::new();
        }
        (0..self.group_of(x).order()).map(|g| Arrow::new(x, y, g)).collect()
    }

    pub fn hom_size(&self, x: u32, y: u32) -> u32 {
        if self.connected(x, y) {
            self.group_of(x).order()
        } else {
            0
        }
    }

    /// Dense index of an arrow, ascending in (component, src, tgt, g).
    pub fn index(&self, a: Arrow) -> u64 {
        let c = self.comp_of[a.src as usize] as usize;
        let n = self.components[c].objects.len() as u64;
        let ord = self.components[c].group.order() as u64;
        let (i, j) = (self.local[a.src as usize] as u64, self.local[a.tgt as usize] as u64);
        self.offsets[c] + (i * n + j) * ord + a.g as u64
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.components.iter().flat_map(|c| {
            c.objects.iter().flat_map(move |&x| {
                c.objects.iter().flat_map(move |&y| (0..c.group.order()).map(move |g| Arrow::new(x, y, g)))
            })
        })
    }

    /// Iso classes of objects, by component: `iso_class[x]` is the component index.
    pub fn iso_classes(&self) -> &[u32] {
        &self.comp_of
    }
}

/// A functor between compact groupoids; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctorData {
    pub obj: Vec<u32>,
    /// `c_x`, in the vertex group of the target component; `0` at roots.
    pub tree: Vec<u32>,
    /// One homomorphism table per source component.
    pub rho: Vec<Vec<u32>>,
}

impl FunctorData {
    pub fn identity(a: &FinGroupoid) -> Self {
        FunctorData {
            obj: (0..a.n_objects()).collect(),
            tree: vec![0; a.n_objects() as usize],
            rho: a.components.iter().map(|c| (0..c.group.order()).collect()).collect(),
        }
    }

    pub fn apply(&self, src: &FinGroupoid, tgt: &FinGroupoid, a: Arrow) -> Arrow {
        let c = src.component_of(a.src) as usize;
        let (fx, fy) = (self.obj[a.src as usize], self.obj[a.tgt as usize]);
        let g = tgt.group_of(fx);
        let h = g.mul(g.mul(self.tree[a.tgt as usize], self.rho[c][a.g as usize]), g.inv(self.tree[a.src as usize]));
        Arrow::new(fx, fy, h)
    }

    /// Reads off the compact data of a functor given by its action. The
    /// action is assumed functorial; use [`is_functorial`] to audit.
    pub fn from_fn(src: &FinGroupoid, obj: impl Fn(u32) -> u32, arr: impl Fn(Arrow) -> Arrow) -> Self {
        let obj_v: Vec<u32> = (0..src.n_objects()).map(&obj).collect();
        let tree = (0..src.n_objects()).map(|x| arr(src.tree(x)).g).collect();
        let rho = src
            .components
            .iter()
            .map(|c| {
                let r = c.objects[0];
                (0..c.group.order()).map(|g| arr(Arrow::new(r, r, g)).g).collect()
            })
            .collect();
        FunctorData { obj: obj_v, tree, rho }
    }

    /// `g . self` where `self: a -> b`, `g: b -> c`.
    pub fn then(&self, g: &FunctorData, a: &FinGroupoid, b: &FinGroupoid, c: &FinGroupoid) -> FunctorData {
        FunctorData::from_fn(a, |x| g.obj[self.obj[x as usize] as usize], |ar| g.apply(b, c, self.apply(a, b, ar)))
    }

    /// Structural sanity: shapes, root normalisation and homomorphisms.
    pub fn well_formed(&self, src: &FinGroupoid, tgt: &FinGroupoid) -> bool {
        if self.obj.len() != src.n_objects() as usize
            || self.tree.len() != self.obj.len()
            || self.rho.len() != src.components.len()
        {
            return false;
        }
        if self.obj.iter().any(|&y| y >= tgt.n_objects()) {
            return false;
        }
        for (ci, c) in src.components.iter().enumerate() {
            let fr = self.obj[c.objects[0] as usize];
            let g2 = tgt.group_of(fr);
            if self.tree[c.objects[0] as usize] != 0 {
                return false;
            }
            for &x in &c.objects {
                if !tgt.connected(fr, self.obj[x as usize]) || self.tree[x as usize] >= g2.order() {
                    return false;
                }
            }
            let h = &self.rho[ci];
            if h.len() != c.group.order() as usize || h.iter().any(|&v| v >= g2.order()) {
                return false;
            }
            for a in 0..c.group.order() {
                for b in 0..c.group.order() {
                    if h[c.group.mul(a, b) as usize] != g2.mul(h[a as usize], h[b as usize]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Checks a functor given by its action against every identity and
/// composable pair. Quadratic in the number of arrows; intended for audits.
pub fn is_functorial(src: &FinGroupoid, tgt: &FinGroupoid, obj: impl Fn(u32) -> u32, arr: impl Fn(Arrow) -> Arrow) -> bool {
    for x in 0..src.n_objects() {
        if arr(src.id(x)) != tgt.id(obj(x)) {
            return false;
        }
    }
    let all: Vec<Arrow> = src.arrows().collect();
    for &f in &all {
        let ff = arr(f);
        if ff.src != obj(f.src) || ff.tgt != obj(f.tgt) {
            return false;
        }
        for g in src.hom(f.tgt, f.tgt) {
            for y in &src.components[src.component_of(f.tgt) as usize].objects {
                let g = Arrow::new(f.tgt, *y, g.g);
                if arr(src.compose(g, f)) != tgt.compose(arr(g), ff) {
                    return false;
                }
            }
        }
    }
    true
}

/// Counts candidate evaluations against a cap.
#[derive(Debug, Clone)]
pub struct Budget {
    pub cap: usize,
    pub used: usize,
}

impl Budget {
    pub fn new(cap: usize) -> Self {
        Budget { cap, used: 0 }
    }

    pub fn spend(&mut self, n: usize, ctx: &str) -> Result<()> {
        self.used += n;
        if self.used > self.cap {
            return Err(Error::cap(self.cap, ctx.to_string()));
        }
        Ok(())
    }
}

/// Restricts an enumeration to functors `l` with `p . l = k`.
pub struct LiftOver<'a> {
    pub p: &'a FunctorData,
    pub base: &'a FinGroupoid,
    pub k: &'a FunctorData,
}

/// The functors out of one source component landing in one target
/// component with a fixed root image: the image and tree element of each
/// non-root object are chosen independently, then the homomorphism.
struct ComponentSpace {
    pairs: Vec<Vec<(u32, u32)>>,
    rhos: Rc<Vec<Vec<u32>>>,
    rho_idx: Vec<usize>,
}

struct Cursor {
    space: usize,
    digits: Vec<u32>,
    rho: usize,
}

impl Cursor {
    fn start(spaces: &[ComponentSpace]) -> Self {
        Cursor { space: 0, digits: vec![0; spaces[0].pairs.len()], rho: 0 }
    }

    /// Steps to the next choice; false (and back at the start) on wrap-around.
    fn advance(&mut self, spaces: &[ComponentSpace]) -> bool {
        let sp = &spaces[self.space];
        self.rho += 1;
        if self.rho < sp.rho_idx.len() {
            return true;
        }
        self.rho = 0;
        if odometer(&mut self.digits, |i| sp.pairs[i].len() as u32) {
            return true;
        }
        self.space += 1;
        let wrapped = self.space == spaces.len();
        if wrapped {
            self.space = 0;
        }
        self.digits = vec![0; spaces[self.space].pairs.len()];
        !wrapped
    }
}

/// A lazy enumeration of the functors `src -> tgt` (optionally over `lift`)
/// in the canonical order: per source component (first most significant), by
/// target component, root image, image and tree element of each further
/// object in order, then homomorphism.
pub struct FunctorSearch<'a> {
    src: &'a FinGroupoid,
    spaces: Vec<Vec<ComponentSpace>>,
    cursors: Option<Vec<Cursor>>,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(src: &'a FinGroupoid, tgt: &FinGroupoid, lift: Option<&LiftOver>, budget: &mut Budget) -> Result<Self> {
        let mut spaces = Vec::new();
        let mut empty = false;
        for c in &src.components {
            let mut cs = Vec::new();
            let root = c.objects[0];
            for tc in &tgt.components {
                let g2 = &tc.group;
                let homs = homomorphisms(&c.group, g2);
                for &a in &tc.objects {
                    if lift.is_some_and(|l| l.p.obj[a as usize] != l.k.obj[root as usize]) {
                        continue;
                    }
                    budget.spend(1, "enumerating functors")?;
                    let rho_idx: Vec<usize> = (0..homs.len())
                        .filter(|&hi| {
                            lift.is_none_or(|l| {
                                (0..c.group.order()).all(|g| {
                                    l.p.apply(tgt, l.base, Arrow::new(a, a, homs[hi][g as usize]))
                                        == l.k.apply(src, l.base, Arrow::new(root, root, g))
                                })
                            })
                        })
                        .collect();
                    if rho_idx.is_empty() {
                        continue;
                    }
                    // a tree arrow out of the root determines its target
                    let mut pairs: Vec<Vec<(u32, u32)>> = vec![vec![(a, 0)]];
                    for &x in c.objects.iter().skip(1) {
                        let mut v = Vec::new();
                        for &y in &tc.objects {
                            if lift.is_some_and(|l| l.p.obj[y as usize] != l.k.obj[x as usize]) {
                                continue;
                            }
                            for cx in 0..g2.order() {
                                budget.spend(1, "enumerating functors")?;
                                if lift.is_none_or(|l| l.p.apply(tgt, l.base, Arrow::new(a, y, cx)) == l.k.apply(src, l.base, src.tree(x))) {
                                    v.push((y, cx));
                                }
                            }
                        }
                        if v.is_empty() {
                            break;
                        }
                        pairs.push(v);
                    }
                    if pairs.len() == c.objects.len() {
                        cs.push(ComponentSpace { pairs, rhos: homs.clone(), rho_idx });
                    }
                }
            }
            empty |= cs.is_empty();
            spaces.push(cs);
        }
        let cursors = if empty { None } else { Some(spaces.iter().map(|s| Cursor::start(s)).collect()) };
        Ok(FunctorSearch { src, spaces, cursors })
    }

    /// An upper bound on the number of remaining functors, saturating.
    pub fn size_hint(&self) -> usize {
        if self.cursors.is_none() {
            return 0;
        }
        self.spaces
            .iter()
            .map(|cs| {
                cs.iter()
                    .map(|sp| sp.pairs.iter().map(|v| v.len()).fold(sp.rho_idx.len(), |a, n| a.saturating_mul(n)))
                    .fold(0usize, |a, n| a.saturating_add(n))
            })
            .fold(1usize, |a, n| a.saturating_mul(n))
    }

    fn current(&self, cursors: &[Cursor]) -> FunctorData {
        let n = self.src.n_objects() as usize;
        let mut f = FunctorData { obj: vec![0; n], tree: vec![0; n], rho: Vec::with_capacity(cursors.len()) };
        for (ci, c) in self.src.components.iter().enumerate() {
            let cur = &cursors[ci];
            let sp = &self.spaces[ci][cur.space];
            for (i, &x) in c.objects.iter().enumerate() {
                let (y, cx) = sp.pairs[i][cur.digits[i] as usize];
                f.obj[x as usize] = y;
                f.tree[x as usize] = cx;
            }
            f.rho.push(sp.rhos[sp.rho_idx[cur.rho]].clone());
        }
        f
    }

    /// The next functor, spending one unit of `budget`.
    pub fn next(&mut self, budget: &mut Budget) -> Result<Option<FunctorData>> {
        let Some(cursors) = self.cursors.as_ref() else { return Ok(None) };
        budget.spend(1, "enumerating functors")?;
        let f = self.current(cursors);
        let cursors = self.cursors.as_mut().unwrap();
        let mut more = false;
        for ci in (0..cursors.len()).rev() {
            if cursors[ci].advance(&self.spaces[ci]) {
                more = true;
                break;
            }
        }
        if !more {
            self.cursors = None;
        }
        Ok(Some(f))
    }
}

/// Every functor `src -> tgt` (optionally over `lift`), in the order of
/// [`FunctorSearch`].
pub fn enumerate_functors(src: &FinGroupoid, tgt: &FinGroupoid, lift: Option<&LiftOver>, budget: &mut Budget) -> Result<Vec<FunctorData>> {
    let mut search = FunctorSearch::new(src, tgt, lift, budget)?;
    let hint = search.size_hint();
    if hint > budget.cap.saturating_sub(budget.used) {
        return Err(Error::cap(budget.cap, "enumerating functors"));
    }
    let mut out = Vec::with_capacity(hint);
    while let Some(f) = search.next(budget)? {
        out.push(f);
    }
    Ok(out)
}

/// Natural transformations `f => g` between functors `src -> tgt`, as
/// component lists indexed by source object.
pub fn nat_transformations(src: &FinGroupoid, tgt: &FinGroupoid, f: &FunctorData, g: &FunctorData) -> Vec<Vec<Arrow>> {
    let mut per_comp: Vec<Vec<Vec<Arrow>>> = Vec::new();
    for c in &src.components {
        let r = c.objects[0];
        let (fr, gr) = (f.obj[r as usize], g.obj[r as usize]);
        let mut opts = Vec::new();
        for eta_r in tgt.hom(fr, gr) {
            let comps: Vec<Arrow> = c
                .objects
                .iter()
                .map(|&x| {
                    let t = src.tree(x);
                    tgt.compose(tgt.compose(g.apply(src, tgt, t), eta_r), tgt.inverse(f.apply(src, tgt, t)))
                })
                .collect();
            let natural = c.group.generators().iter().all(|&h| {
                let loop_ = Arrow::new(r, r, h);
                tgt.compose(eta_r, f.apply(src, tgt, loop_)) == tgt.compose(g.apply(src, tgt, loop_), eta_r)
            });
            if natural {
                opts.push(comps);
            }
        }
        if opts.is_empty() {
            return Vec::new();
        }
        per_comp.push(opts);
    }
    let n = src.n_objects() as usize;
    let mut out = Vec::new();
    let mut pos = vec![0u32; per_comp.len()];
    loop {
        let mut eta = vec![Arrow::new(0, 0, 0); n];
        for (ci, c) in src.components.iter().enumerate() {
            for (i, &x) in c.objects.iter().enumerate() {
                eta[x as usize] = per_comp[ci][pos[ci] as usize][i];
            }
        }
        out.push(eta);
        if !odometer(&mut pos, |i| per_comp[i].len() as u32) {
            break;
        }
    }
    out
}

/// A groupoid given by explicit hom-sets, to be put into compact form.
pub trait ExplicitGroupoid {
    type A: Clone + Eq + Hash + std::fmt::Debug;
    fn n_objects(&self) -> u32;
    /// Nonempty iff `x` and `y` are connected; for `x == y` it contains the identity.
    fn homs(&self, x: u32, y: u32) -> Vec<Self::A>;
    fn id(&self, x: u32) -> Self::A;
    fn compose(&self, g: &Self::A, f: &Self::A) -> Self::A;
    fn inverse(&self, a: &Self::A) -> Self::A;
}

/// The translation between an explicit groupoid and its compact form:
/// spanning-tree arrows and the vertex groups as explicit loops.
#[derive(Debug, Clone)]
pub struct Translation<A> {
    tree: Vec<A>,
    tree_inv: Vec<A>,
    loops: Vec<Vec<A>>,
    loop_index: Vec<HashMap<A, u32>>,
}

impl<A: Clone + Eq + Hash + std::fmt::Debug> Translation<A> {
    pub fn to_compact(&self, gpd: &FinGroupoid, x: u32, y: u32, a: &A, compose: impl Fn(&A, &A) -> A) -> Arrow {
        let l = compose(&self.tree_inv[y as usize], &compose(a, &self.tree[x as usize]));
        let c = gpd.component_of(x) as usize;
        let g = *self.loop_index[c].get(&l).unwrap_or_else(|| panic!("arrow {a:?} is not in the vertex group"));
        Arrow::new(x, y, g)
    }

    pub fn from_compact(&self, gpd: &FinGroupoid, a: Arrow, compose: impl Fn(&A, &A) -> A) -> A {
        let c = gpd.component_of(a.src) as usize;
        compose(&self.tree[a.tgt as usize], &compose(&self.loops[c][a.g as usize], &self.tree_inv[a.src as usize]))
    }
}

/// An explicit groupoid together with its compact form.
pub struct Compacted<E: ExplicitGroupoid> {
    pub explicit: E,
    pub gpd: FinGroupoid,
    pub trans: Translation<E::A>,
}

impl<E: ExplicitGroupoid> Compacted<E> {
    pub fn build(explicit: E, budget: &mut Budget) -> Result<Self> {
        let n = explicit.n_objects();
        let mut comp_of = vec![u32::MAX; n as usize];
        let mut parts: Vec<Vec<u32>> = Vec::new();
        let mut tree: Vec<Option<E::A>> = vec![None; n as usize];
        for x in 0..n {
            if comp_of[x as usize] != u32::MAX {
                continue;
            }
            let ci = parts.len() as u32;
            comp_of[x as usize] = ci;
            tree[x as usize] = Some(explicit.id(x));
            let mut objs = vec![x];
            for y in x + 1..n {
                if comp_of[y as usize] != u32::MAX {
                    continue;
                }
                budget.spend(1, "compacting a groupoid")?;
                if let Some(a) = explicit.homs(x, y).into_iter().next() {
                    comp_of[y as usize] = ci;
                    tree[y as usize] = Some(a);
                    objs.push(y);
                }
            }
            parts.push(objs);
        }
        let tree: Vec<E::A> = tree.into_iter().map(|t| t.unwrap()).collect();
        let tree_inv: Vec<E::A> = tree.iter().map(|a| explicit.inverse(a)).collect();
        let mut loops = Vec::new();
        let mut loop_index = Vec::new();
        let mut groups = Vec::new();
        for objs in &parts {
            let r = objs[0];
            let idr = explicit.id(r);
            let mut ls = vec![idr.clone()];
            ls.extend(explicit.homs(r, r).into_iter().filter(|a| *a != idr));
            let idx: HashMap<E::A, u32> = ls.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();
            if idx.len() != ls.len() {
                return Err(Error::Schema("repeated arrow in explicit hom-set".into()));
            }
            let k = ls.len() as u32;
            budget.spend((k * k) as usize, "compacting a groupoid")?;
            let mut mul = Vec::with_capacity((k * k) as usize);
            for a in &ls {
                for b in &ls {
                    let ab = explicit.compose(a, b);
                    mul.push(*idx.get(&ab).ok_or_else(|| Error::Schema("vertex group not closed".into()))?);
                }
            }
            groups.push(Group::from_table(k, mul)?);
            loops.push(ls);
            loop_index.push(idx);
        }
        let gpd = FinGroupoid::new(n, parts.into_iter().zip(groups).collect())?;
        Ok(Compacted { explicit, gpd, trans: Translation { tree, tree_inv, loops, loop_index } })
    }

    pub fn to_compact(&self, x: u32, y: u32, a: &E::A) -> Arrow {
        self.trans.to_compact(&self.gpd, x, y, a, |g, f| self.explicit.compose(g, f))
    }

    pub fn from_compact(&self, a: Arrow) -> E::A {
        self.trans.from_compact(&self.gpd, a, |g, f| self.explicit.compose(g, f))
    }
}

/// Strict pullback `A x_C B` of `f: A -> C` and `g: B -> C`; objects are the
/// pairs `(a, b)` with `f a = g b`, in lexicographic order.
pub struct StrictPullback<'a> {
    pub a: &'a FinGroupoid,
    pub b: &'a FinGroupoid,
    pub c: &'a FinGroupoid,
    pub f: &'a FunctorData,
    pub g: &'a FunctorData,
    pub objects: Vec<(u32, u32)>,
    pub index: HashMap<(u32, u32), u32>,
}

impl<'a> StrictPullback<'a> {
    pub fn new(a: &'a FinGroupoid, b: &'a FinGroupoid, c: &'a FinGroupoid, f: &'a FunctorData, g: &'a FunctorData) -> Self {
        let mut objects = Vec::new();
        for x in 0..a.n_objects() {
            for y in 0..b.n_objects() {
                if f.obj[x as usize] == g.obj[y as usize] {
                    objects.push((x, y));
                }
            }
        }
        let index = objects.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
        StrictPullback { a, b, c, f, g, objects, index }
    }
}

impl ExplicitGroupoid for StrictPullback<'_> {
    type A = (Arrow, Arrow);

    fn n_objects(&self) -> u32 {
        self.objects.len() as u32
    }

    fn homs(&self, x: u32, y: u32) -> Vec<(Arrow, Arrow)> {
        let (x1, x2) = self.objects[x as usize];
        let (y1, y2) = self.objects[y as usize];
        let mut out = Vec::new();
        let hb = self.b.hom(x2, y2);
        for al in self.a.hom(x1, y1) {
            let fa = self.f.apply(self.a, self.c, al);
            for &be in &hb {
                if fa == self.g.apply(self.b, self.c, be) {
                    out.push((al, be));
                }
            }
        }
        out
    }

    fn id(&self, x: u32) -> (Arrow, Arrow) {
        let (x1, x2) = self.objects[x as usize];
        (self.a.id(x1), self.b.id(x2))
    }

    fn compose(&self, g: &(Arrow, Arrow), f: &(Arrow, Arrow)) -> (Arrow, Arrow) {
        (self.a.compose(g.0, f.0), self.b.compose(g.1, f.1))
    }

    fn inverse(&self, a: &(Arrow, Arrow)) -> (Arrow, Arrow) {
        (self.a.inverse(a.0), self.b.inverse(a.1))
    }
}

/// The vertical path groupoid of `q: Y -> B`: objects are the arrows of `Y`
/// sent to identities, arrows `a -> a'` are squares `(g0, g1)` with
/// `g1 a = a' g0`.
pub struct VerticalPaths<'a> {
    pub y: &'a FinGroupoid,
    pub objects: Vec<Arrow>,
    pub index: HashMap<Arrow, u32>,
}

impl<'a> VerticalPaths<'a> {
    pub fn new(y: &'a FinGroupoid, base: &FinGroupoid, q: &FunctorData) -> Self {
        let objects: Vec<Arrow> = y.arrows().filter(|&a| q.apply(y, base, a) == base.id(q.obj[a.src as usize])).collect();
        let mut objects = objects;
        objects.sort_by_key(|a| (a.src, a.tgt, a.g));
        let index = objects.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect();
        VerticalPaths { y, objects, index }
    }
}

impl ExplicitGroupoid for VerticalPaths<'_> {
    type A = (Arrow, Arrow);

    fn n_objects(&self) -> u32 {
        self.objects.len() as u32
    }

    fn homs(&self, x: u32, y: u32) -> Vec<(Arrow, Arrow)> {
        let (a, b) = (self.objects[x as usize], self.objects[y as usize]);
        self.y
            .hom(a.src, b.src)
            .into_iter()
            .map(|g0| (g0, self.y.compose(self.y.compose(b, g0), self.y.inverse(a))))
            .collect()
    }

    fn id(&self, x: u32) -> (Arrow, Arrow) {
        let a = self.objects[x as usize];
        (self.y.id(a.src), self.y.id(a.tgt))
    }

    fn compose(&self, g: &(Arrow, Arrow), f: &(Arrow, Arrow)) -> (Arrow, Arrow) {
        (self.y.compose(g.0, f.0), self.y.compose(g.1, f.1))
    }

    fn inverse(&self, a: &(Arrow, Arrow)) -> (Arrow, Arrow) {
        (self.y.inverse(a.0), self.y.inverse(a.1))
    }
}

/// The functor groupoid `Fun(X, Y)`: objects are functors in enumeration
/// order, arrows natural transformations.
pub struct FunctorGroupoid<'a> {
    pub x: &'a FinGroupoid,
    pub y: &'a FinGroupoid,
    pub objects: Vec<FunctorData>,
    pub index: HashMap<FunctorData, u32>,
}

impl<'a> FunctorGroupoid<'a> {
    pub fn new(x: &'a FinGroupoid, y: &'a FinGroupoid, budget: &mut Budget) -> Result<Self> {
        let objects = enumerate_functors(x, y, None, budget)?;
        let index = objects.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
        Ok(FunctorGroupoid { x, y, objects, index })
    }
}

impl ExplicitGroupoid for FunctorGroupoid<'_> {
    type A = Vec<Arrow>;

    fn n_objects(&self) -> u32 {
        self.objects.len() as u32
    }

    fn homs(&self, a: u32, b: u32) -> Vec<Vec<Arrow>> {
        nat_transformations(self.x, self.y, &self.objects[a as usize], &self.objects[b as usize])
    }

    fn id(&self, a: u32) -> Vec<Arrow> {
        self.objects[a as usize].obj.iter().map(|&y| self.y.id(y)).collect()
    }

    fn compose(&self, g: &Vec<Arrow>, f: &Vec<Arrow>) -> Vec<Arrow> {
        g.iter().zip(f).map(|(&b, &a)| self.y.compose(b, a)).collect()
    }

    fn inverse(&self, a: &Vec<Arrow>) -> Vec<Arrow> {
        a.iter().map(|&x| self.y.inverse(x)).collect()
    }
}

/// The subgroupoid on `objects` (ascending) with arrows accepted by `keep`,
/// which must be closed under composition and inverses.
pub struct Subgroupoid<'a, K: Fn(Arrow) -> bool> {
    pub g: &'a FinGroupoid,
    pub objects: Vec<u32>,
    pub keep: K,
}

impl<K: Fn(Arrow) -> bool> ExplicitGroupoid for Subgroupoid<'_, K> {
    type A = Arrow;

    fn n_objects(&self) -> u32 {
        self.objects.len() as u32
    }

    fn homs(&self, x: u32, y: u32) -> Vec<Arrow> {
        self.g.hom(self.objects[x as usize], self.objects[y as usize]).into_iter().filter(|&a| (self.keep)(a)).collect()
    }

    fn id(&self, x: u32) -> Arrow {
        self.g.id(self.objects[x as usize])
    }

    fn compose(&self, g: &Arrow, f: &Arrow) -> Arrow {
        self.g.compose(*g, *f)
    }

    fn inverse(&self, a: &Arrow) -> Arrow {
        self.g.inverse(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big() -> Budget {
        Budget::new(1_000_000)
    }

    #[test]
    fn group_homs_of_small_cyclic_groups() {
        // Hom(Z/m, Z/n) has gcd(m, n) elements
        for m in 1..=4u32 {
            for n in 1..=4u32 {
                let gcd = (1..=m.min(n)).rev().find(|d| m % d == 0 && n % d == 0).unwrap();
                assert_eq!(homomorphisms(&Group::cyclic(m), &Group::cyclic(n)).len() as u32, gcd);
            }
        }
    }

    #[test]
    fn klein_group_homs() {
        // Z/2 x Z/2 as a table
        let mul = (0..4u32).flat_map(|a| (0..4u32).map(move |b| a ^ b)).collect();
        let v4 = Group::from_table(4, mul).unwrap();
        assert_eq!(v4.generators().len(), 2);
        assert_eq!(homomorphisms(&v4, &Group::cyclic(2)).len(), 4);
        assert_eq!(homomorphisms(&v4, &v4).len(), 16);
    }

    #[test]
    fn functor_counts_match_closed_forms() {
        let i = FinGroupoid::interval();
        let b = FinGroupoid::bz2();
        let t = FinGroupoid::terminal();
        let count = |x: &FinGroupoid, y: &FinGroupoid| enumerate_functors(x, y, None, &mut big()).unwrap().len();
        // functors between indiscrete groupoids are arbitrary object maps
        assert_eq!(count(&i, &i), 4);
        assert_eq!(count(&FinGroupoid::indiscrete(3), &FinGroupoid::indiscrete(4)), 64);
        assert_eq!(count(&t, &b), 1);
        assert_eq!(count(&b, &b), 2);
        assert_eq!(count(&b, &i), 2);
        assert_eq!(count(&i, &b), 2);
        assert_eq!(count(&FinGroupoid::empty(), &b), 1);
        assert_eq!(count(&t, &FinGroupoid::empty()), 0);
    }

    #[test]
    fn enumerated_functors_are_functorial_and_distinct() {
        let gs = [FinGroupoid::interval(), FinGroupoid::bz2(), FinGroupoid::discrete(2), FinGroupoid::delooping(Group::cyclic(3))];
        for x in &gs {
            for y in &gs {
                let fs = enumerate_functors(x, y, None, &mut big()).unwrap();
                for f in &fs {
                    assert!(f.well_formed(x, y));
                    assert!(is_functorial(x, y, |o| f.obj[o as usize], |a| f.apply(x, y, a)));
                }
                let mut sorted = fs.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), fs.len());
            }
        }
    }

    #[test]
    fn functor_composition_matches_pointwise() {
        let x = FinGroupoid::indiscrete(3);
        let y = FinGroupoid::bz2();
        let z = FinGroupoid::delooping(Group::cyclic(4));
        for f in enumerate_functors(&x, &y, None, &mut big()).unwrap() {
            for g in enumerate_functors(&y, &z, None, &mut big()).unwrap() {
                let gf = f.then(&g, &x, &y, &z);
                for a in x.arrows() {
                    assert_eq!(gf.apply(&x, &z, a), g.apply(&y, &z, f.apply(&x, &y, a)));
                }
            }
        }
    }

    #[test]
    fn builder_recovers_interval_and_fun_groupoid() {
        let i = FinGroupoid::interval();
        let fun = Compacted::build(FunctorGroupoid::new(&i, &i, &mut big()).unwrap(), &mut big()).unwrap();
        // Fun(I, I) is indiscrete on four objects
        assert_eq!(fun.gpd, FinGroupoid::indiscrete(4));
        let b = FinGroupoid::bz2();
        let fb = Compacted::build(FunctorGroupoid::new(&b, &b, &mut big()).unwrap(), &mut big()).unwrap();
        // two homomorphisms, each with centraliser Z/2, no cross transformations
        assert_eq!(fb.gpd.components().len(), 2);
        assert!(fb.gpd.components().iter().all(|c| c.group.order() == 2));
        for a in fb.gpd.arrows() {
            let e = fb.from_compact(a);
            assert_eq!(fb.to_compact(a.src, a.tgt, &e), a);
        }
    }

    #[test]
    fn vertical_paths_of_bz2() {
        let b = FinGroupoid::bz2();
        let t = FinGroupoid::terminal();
        let q = enumerate_functors(&b, &t, None, &mut big()).unwrap().remove(0);
        let p = Compacted::build(VerticalPaths::new(&b, &t, &q), &mut big()).unwrap();
        // two loops as objects, each pair connected by two squares
        assert_eq!(p.gpd.n_objects(), 2);
        assert_eq!(p.gpd.n_morphisms(), 8);
        assert_eq!(p.gpd.components().len(), 1);
    }

    #[test]
    fn pullback_of_projections() {
        let i = FinGroupoid::interval();
        let t = FinGroupoid::terminal();
        let bang = FunctorData { obj: vec![0, 0], tree: vec![0, 0], rho: vec![vec![0]] };
        let ii = Compacted::build(StrictPullback::new(&i, &i, &t, &bang, &bang), &mut big()).unwrap();
        assert_eq!(ii.gpd, FinGroupoid::indiscrete(4));
    }

    #[test]
    fn lift_constrained_enumeration_filters_exactly() {
        let i = FinGroupoid::interval();
        let ii = FinGroupoid::indiscrete(4);
        let all = enumerate_functors(&i, &ii, None, &mut big()).unwrap();
        // p: 4 objects -> I, (a,b) |-> a with objects ordered (0,0),(0,1),(1,0),(1,1)
        let p = FunctorData { obj: vec![0, 0, 1, 1], tree: vec![0; 4], rho: vec![vec![0]] };
        for k in enumerate_functors(&i, &i, None, &mut big()).unwrap() {
            let lifted = enumerate_functors(&i, &ii, Some(&LiftOver { p: &p, base: &i, k: &k }), &mut big()).unwrap();
            let brute: Vec<_> = all.iter().filter(|l| l.then(&p, &i, &ii, &i) == k).cloned().collect();
            assert_eq!(lifted, brute);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let r = enumerate_functors(&FinGroupoid::discrete(6), &FinGroupoid::discrete(6), None, &mut Budget::new(100));
        assert!(matches!(r, Err(Error::ResourceCap { .. })));
    }
}
