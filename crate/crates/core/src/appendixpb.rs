//! Pullback constructions on slices: a path object of `X` over `Y` built
//! from absolute path objects, the comparison functor into a strict fiber of
//! a slice hom-groupoid, and transposition of homotopies across a pullback.

use serde::{Deserialize, Serialize};

use crate::enrichment::{extension_map, extension_then_whisker, lambda_for, Enrichment, GroupoidMap, HomGroupoid, Postcompose};
use crate::error::{Error, Result};
use crate::fincat::{Category, MorId, PullbackData};
use crate::pathstruct::{homotopic_over, is_path_object, path_object, PathCategory, PathObjectData, Slice, Tampered};
use crate::report::CheckResult;

/// `Q = (Y x_{YxY} PX) x_{PY x_{YxY} PY} P_{YxY}PY`, a path object of `X`
/// over `Y` for a fibration `f : X -> Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberwisePathObject {
    pub f: MorId,
    /// `PX -> PY` over `f x f`, a fibration with `(Pf) r = r f`.
    pub pf: MorId,
    /// `Y x_{YxY} PX`.
    pub base_square: PullbackData,
    /// `Q` over `Y x_{YxY} PX`.
    pub top_square: PullbackData,
    pub p1: MorId,
    pub p2: MorId,
    pub data: PathObjectData,
}

/// The first `Pf` in search order that is a fibration with `(s, t) Pf =
/// (f s, f t)` and `(Pf) r = r f`.
pub fn find_pf<C: PathCategory + ?Sized>(c: &C, f: MorId) -> Result<MorId> {
    let (px, py) = (path_object(c, c.dom(f))?, path_object(c, c.cod(f))?);
    let k = c.mediator(&py.fiber_product, c.compose(f, px.s)?, c.compose(f, px.t)?)?;
    let rf = c.compose(py.r, f)?;
    let found = c.find_lift(py.pair, k, &mut |pf| Ok(c.is_fibration(pf) && c.compose(pf, px.r)? == rf))?;
    found.ok_or(Error::NoSuitablePf(f))
}

pub fn construct_fiberwise_path_object<C: PathCategory + ?Sized>(c: &C, f: MorId) -> Result<FiberwisePathObject> {
    if !c.is_fibration(f) {
        return Err(Error::pre(format!("{f} is not a fibration")));
    }
    let (x, y) = (c.dom(f), c.cod(f));
    let (px, py) = (path_object(c, x)?, path_object(c, y)?);
    let pf = find_pf(c, f)?;
    let yy = py.fiber_product;
    let diagonal = c.mediator(&yy, c.identity(y), c.identity(y))?;
    let fst = c.mediator(&yy, c.compose(f, px.s)?, c.compose(f, px.t)?)?;
    let base_square = c.pullback(diagonal, fst)?;
    let pp = c.path_object_over(py.pair)?;
    let bottom = c.mediator(&pp.fiber_product, c.compose(py.r, base_square.proj1)?, c.compose(pf, base_square.proj2)?)?;
    let top_square = c.pullback(bottom, pp.pair)?;
    let to_base = top_square.proj1;
    let (p1, p2) = (c.compose(base_square.proj1, to_base)?, c.compose(base_square.proj2, to_base)?);
    let fr = c.mediator(&base_square, f, px.r)?;
    let rrf = c.compose(pp.r, c.compose(py.r, f)?)?;
    let r = c.mediator(&top_square, fr, rrf)?;
    let (s, t) = (c.compose(px.s, p2)?, c.compose(px.t, p2)?);
    let fiber_product = c.pullback(f, f)?;
    let pair = c.mediator(&fiber_product, s, t)?;
    let data = PathObjectData { fib: f, base: y, underlying: x, object: top_square.apex, r, s, t, pair, fiber_product };
    Ok(FiberwisePathObject { f, pf, base_square, top_square, p1, p2, data })
}

/// `J : (C/Y)(W, X) -> <h>*(C/Z)(W, X)` for fibrations `g : Y -> Z`,
/// `f : X -> Y` and a map `h : W -> Y`. The target is the subgroupoid of
/// maps `k` with `f k = h` and classes `H` with `f * H = 1_h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceComparison {
    /// Class-level map into `(C/Z)(W, X)`.
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
    /// Objects and arrows of `(C/Z)(W, X)` in the fiber over `h`.
    pub fiber_objects: Vec<usize>,
    pub fiber_arrows: Vec<usize>,
    pub lands_in_fiber: bool,
    pub bijective_on_objects: bool,
    pub full: bool,
    /// For each fiber arrow, a source class mapping onto it.
    pub preimages: Vec<(usize, usize)>,
}

impl SliceComparison {
    pub fn esf(&self) -> bool {
        self.lands_in_fiber && self.bijective_on_objects && self.full
    }
}

pub fn slice_comparison<C: PathCategory + ?Sized>(c: &C, g: MorId, f: MorId, h: MorId) -> Result<SliceComparison> {
    if !c.is_fibration(g) || !c.is_fibration(f) {
        return Err(Error::pre("g and f must be fibrations"));
    }
    let (y, z) = (c.cod(f), c.cod(g));
    if c.dom(g) != y || c.cod(h) != y {
        return Err(Error::pre("maps do not meet at Y"));
    }
    let (sy, sz) = (Slice::new(c, y), Slice::new(c, z));
    let (ey, ez) = (Enrichment::new(&sy), Enrichment::new(&sz));
    let push = Postcompose { src: &sy, tgt: &sz, g };
    let (w, x) = (sy.obj(h), sy.obj(f));
    let ext = extension_map(&ey, &ez, &push, w, x)?;
    let (gw, gx) = (ext.fx, ext.fy);
    let f_z = sz.mor(f, sz.obj(g))?;
    let tgt = ez.hom(gw, gx)?;
    let below = ez.hom(gw, sz.cod(f_z))?;
    let h_z = sz.mor(h, sz.cod(f_z))?;
    let h_index = below.obj_index[&h_z];
    let push_f = ez.whisker_left_map(f_z, gw)?;
    let fiber_objects: Vec<usize> = (0..tgt.objects.len()).filter(|&i| push_f.obj[i] == h_index).collect();
    let fiber_arrows: Vec<usize> = (0..tgt.n_arrows()).filter(|&k| push_f.arr[k] == below.identity[h_index]).collect();
    let src = ey.hom(w, x)?;
    let lands_in_fiber =
        ext.map.obj.iter().all(|o| fiber_objects.contains(o)) && ext.map.arr.iter().all(|a| fiber_arrows.contains(a));
    let mut image = ext.map.obj.clone();
    image.sort();
    let bijective_on_objects = image == fiber_objects;
    let mut preimages = Vec::new();
    let mut full = true;
    for &a in &fiber_arrows {
        match (0..src.n_arrows()).find(|&k| ext.map.arr[k] == a) {
            Some(k) => preimages.push((a, k)),
            None => full = false,
        }
    }
    Ok(SliceComparison {
        obj: ext.map.obj,
        arr: ext.map.arr,
        fiber_objects,
        fiber_arrows,
        lands_in_fiber,
        bijective_on_objects,
        full,
        preimages,
    })
}

/// A pullback square `W = X x_Z Y` of `k : X -> Z` along `g : Y -> Z`, with
/// `l : Z -> I` and `v : V -> Y`; `k`, `g` and `l` are fibrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransposeSquare {
    pub k: MorId,
    pub g: MorId,
    pub l: MorId,
    pub v: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransposeIso {
    /// `(C/Y)(V, W) -> (C/Z)(V, X)`.
    pub forward: GroupoidMap,
    pub backward: GroupoidMap,
    /// The path object of `W` over `Y` that was used.
    pub path_object: PathObjectData,
    pub certificate: Vec<CheckResult>,
}

impl TransposeIso {
    pub fn passed(&self) -> bool {
        self.certificate.iter().all(|c| c.passed())
    }
}

/// `Y x_Z P_Z X` as a path object of `W` over `Y`.
pub fn transposed_path_object<C: PathCategory + ?Sized>(c: &C, sq: &TransposeSquare) -> Result<PathObjectData> {
    let w_pb = c.pullback(sq.k, sq.g)?;
    let (f, h) = (w_pb.proj1, w_pb.proj2);
    let pzx = c.path_object_over(sq.k)?;
    let over = c.compose(sq.k, pzx.s)?;
    let pb = c.pullback(sq.g, over)?;
    let r = c.mediator(&pb, h, c.compose(pzx.r, f)?)?;
    let s = c.mediator(&w_pb, c.compose(pzx.s, pb.proj2)?, pb.proj1)?;
    let t = c.mediator(&w_pb, c.compose(pzx.t, pb.proj2)?, pb.proj1)?;
    let fiber_product = c.pullback(h, h)?;
    let pair = c.mediator(&fiber_product, s, t)?;
    Ok(PathObjectData { fib: h, base: c.cod(h), underlying: w_pb.apex, object: pb.apex, r, s, t, pair, fiber_product })
}

/// The isomorphism `(C/Y)(V, W) ~ (C/Z)(V, X)`. With `prescribed`, `W` gets
/// the path object `Y x_Z P_Z X` and arrows go to their transposes `pi2 H`;
/// otherwise the designated path objects are kept and arrows go through
/// `f * g_*(-)`. Either way the map is checked to be a bijective functor,
/// and the square against `(lg)_*` and `l_*` into `C/I` is checked.
pub fn transpose_hom_iso<C: PathCategory + ?Sized>(c: &C, sq: &TransposeSquare, prescribed: bool) -> Result<TransposeIso> {
    if !c.is_fibration(sq.k) || !c.is_fibration(sq.g) || !c.is_fibration(sq.l) {
        return Err(Error::pre("k, g and l must be fibrations"));
    }
    if c.cod(sq.k) != c.cod(sq.g) || c.cod(sq.v) != c.dom(sq.g) || c.dom(sq.l) != c.cod(sq.k) {
        return Err(Error::pre("the square is ill-typed"));
    }
    let w_pb = c.pullback(sq.k, sq.g)?;
    let (f, h) = (w_pb.proj1, w_pb.proj2);
    // only C/Y sees the prescription: h may coincide with k when g is an identity
    let mut over_y = Tampered::new(c);
    let po = if prescribed {
        let po = transposed_path_object(c, sq)?;
        over_y.path_objects.insert(h, po);
        po
    } else {
        c.path_object_over(h)?
    };
    let (y, z, i) = (c.dom(sq.g), c.cod(sq.g), c.cod(sq.l));
    let (sy, sz, si) = (Slice::new(&over_y, y), Slice::new(c, z), Slice::new(c, i));
    let (ey, ez, ei) = (Enrichment::new(&sy), Enrichment::new(&sz), Enrichment::new(&si));
    let (vy, wy) = (sy.obj(sq.v), sy.obj(h));
    let (vz, xz) = (sz.obj(c.compose(sq.g, sq.v)?), sz.obj(sq.k));
    let src = ey.hom(vy, wy)?;
    let tgt = ez.hom(vz, xz)?;
    let push_g = Postcompose { src: &sy, tgt: &sz, g: sq.g };
    let f_z = sz.mor(f, xz)?;
    let forward = if prescribed {
        let pzx = ez.egroupoid(xz)?.p.object;
        // P_Y W is the pullback of g along s : P_Z X -> Z
        let to_pzx = c.pullback(sq.g, c.compose(sq.k, c.path_object_over(sq.k)?.s)?)?.proj2;
        let mut obj = Vec::new();
        for &u in &src.objects {
            let fu = sz.mor(c.compose(f, sy.underlying(u))?, xz)?;
            obj.push(tgt.obj_index[&fu]);
        }
        let mut arr = Vec::new();
        for &hh in &src.arrows {
            let moved = sz.mor(c.compose(to_pzx, sy.underlying(hh))?, pzx)?;
            arr.push(tgt.class_of(moved)?);
        }
        GroupoidMap { obj, arr }
    } else {
        extension_then_whisker(&ey, &ez, &push_g, vy, wy, f_z)?
    };
    let mut certificate = Vec::new();
    let mut iso = CheckResult::new("transpose is an isomorphism of groupoids");
    let (backward, bijective) = invert(&forward, &src, &tgt);
    iso.record(bijective, "not_bijective", vec![], || "transpose is not bijective on objects and arrows".into());
    // the object part is the adjunction bijection u |-> f u with inverse (u', v)
    for (j, &u2) in tgt.objects.iter().enumerate() {
        let back = sy.mor(c.mediator(&w_pb, sz.underlying(u2), sq.v)?, wy)?;
        let ok = bijective && src.objects[backward.obj[j]] == back;
        iso.record(ok, "object_bijection", vec![u2.0], || format!("{u2} does not transpose back to {back}"));
    }
    certificate.push(iso);
    certificate.push(functoriality(&sy, &src, &sz, &tgt, &forward, "forward")?);
    if bijective {
        certificate.push(functoriality(&sz, &tgt, &sy, &src, &backward, "backward")?);
    }

    let lg = c.compose(sq.l, sq.g)?;
    let push_lg = Postcompose { src: &sy, tgt: &si, g: lg };
    let push_l = Postcompose { src: &sz, tgt: &si, g: sq.l };
    let x_i = si.obj(c.compose(sq.l, sq.k)?);
    let f_i = si.mor(f, x_i)?;
    let down_left = extension_then_whisker(&ey, &ei, &push_lg, vy, wy, f_i)?;
    let down_right = extension_map(&ez, &ei, &push_l, vz, xz)?.map;
    let around = forward.then(&down_right);
    let mut square = CheckResult::new("transpose square into C/I commutes");
    for (k, (&a, &b)) in down_left.arr.iter().zip(&around.arr).enumerate() {
        square.record(a == b, "square_arrow", vec![k as u32], || format!("class {k}: {a} vs {b}"));
    }
    square.record(down_left.obj == around.obj, "square_objects", vec![], || "object maps differ".into());
    certificate.push(square);

    if prescribed {
        // (Pf) lambda_{(lg)_*} ~ lambda_{l_*} pi2 over X x_I X
        let lam_lg = lambda_for(&ey, &ei, &push_lg, wy)?;
        let lam_l = lambda_for(&ez, &ei, &push_l, xz)?;
        let lhs = si.compose(ei.whisker_data(f_i)?.pf, lam_lg)?;
        let to_pzx = c.pullback(sq.g, c.compose(sq.k, c.path_object_over(sq.k)?.s)?)?.proj2;
        let rhs = si.compose(lam_l, si.mor(to_pzx, si.dom(lam_l))?)?;
        let pxi = path_object(&si, x_i)?;
        let over = si.path_object_over(pxi.pair)?;
        let mut coh = CheckResult::new("lambda coherence across the pullback");
        coh.record(homotopic_over(&si, &over, lhs, rhs)?, "lambda_coherence", vec![lhs.0, rhs.0], || {
            "(Pf) lambda is not homotopic to lambda pi2".into()
        });
        certificate.push(coh);
    }
    Ok(TransposeIso { forward, backward, path_object: po, certificate })
}

fn invert(m: &GroupoidMap, src: &HomGroupoid, tgt: &HomGroupoid) -> (GroupoidMap, bool) {
    let mut obj = vec![usize::MAX; tgt.objects.len()];
    let mut arr = vec![usize::MAX; tgt.n_arrows()];
    let mut ok = src.objects.len() == tgt.objects.len() && src.n_arrows() == tgt.n_arrows();
    for (i, &o) in m.obj.iter().enumerate() {
        ok &= obj[o] == usize::MAX;
        obj[o] = i;
    }
    for (k, &a) in m.arr.iter().enumerate() {
        ok &= arr[a] == usize::MAX;
        arr[a] = k;
    }
    (GroupoidMap { obj, arr }, ok)
}

/// Endpoints, identities and composition are preserved, on classes.
fn functoriality<C, D>(c: &C, src: &HomGroupoid, d: &D, tgt: &HomGroupoid, m: &GroupoidMap, label: &str) -> Result<CheckResult>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    let mut res = CheckResult::new(format!("{label} map is a functor"));
    for k in 0..src.n_arrows() {
        let a = m.arr[k];
        let ok = tgt.src[a] == m.obj[src.src[k]] && tgt.tgt[a] == m.obj[src.tgt[k]];
        res.record(ok, "endpoints", vec![k as u32], || format!("class {k} lands on the wrong endpoints"));
    }
    for (o, &id) in src.identity.iter().enumerate() {
        let ok = m.arr[id] == tgt.identity[m.obj[o]];
        res.record(ok, "identity", vec![o as u32], || format!("identity at {o} is not preserved"));
    }
    for a in 0..src.n_arrows() {
        for &b in src.arrows_from(src.tgt[a]) {
            let l = m.arr[src.compose(c, b, a)?];
            let r = tgt.compose(d, m.arr[b], m.arr[a])?;
            res.record(l == r, "composition", vec![a as u32, b as u32], || format!("{l} vs {r}"));
        }
    }
    Ok(res)
}

/// Does the constructed `Q` pass the path-object check over `Y`?
pub fn fiberwise_path_object_is_valid<C: PathCategory + ?Sized>(c: &C, q: &FiberwisePathObject) -> Result<bool> {
    is_path_object(c, &q.data)
}
