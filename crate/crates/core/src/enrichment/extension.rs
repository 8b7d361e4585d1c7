//! Homotopical functors act on hom-groupoids through a comparison
//! `lambda_F : F(PY) -> P(FY)`.

use crate::error::{Error, Result};
use crate::fincat::{Category, MorId, ObjId};
use crate::pathstruct::{find_filler, path_object, product, product_map, LiftingSquare, PathCategory, Slice};
use crate::report::CheckResult;

use super::{Enrichment, GroupoidMap};

/// A functor between path categories, given on ids. Sources and targets are
/// captured by the implementor.
pub trait HomotopicalFunctor {
    fn name(&self) -> String;
    fn obj(&self, x: ObjId) -> Result<ObjId>;
    fn mor(&self, f: MorId) -> Result<MorId>;
}

pub struct IdentityFunctor;

impl HomotopicalFunctor for IdentityFunctor {
    fn name(&self) -> String {
        "id".into()
    }
    fn obj(&self, x: ObjId) -> Result<ObjId> {
        Ok(x)
    }
    fn mor(&self, f: MorId) -> Result<MorId> {
        Ok(f)
    }
}

/// `- x X`.
pub struct ProductWith<'a, C: PathCategory + ?Sized> {
    pub c: &'a C,
    pub x: ObjId,
}

impl<C: PathCategory + ?Sized> HomotopicalFunctor for ProductWith<'_, C> {
    fn name(&self) -> String {
        format!("- x {}", self.c.label_obj(self.x))
    }
    fn obj(&self, t: ObjId) -> Result<ObjId> {
        Ok(product(self.c, t, self.x)?.apex)
    }
    fn mor(&self, f: MorId) -> Result<MorId> {
        let src = product(self.c, self.c.dom(f), self.x)?;
        let tgt = product(self.c, self.c.cod(f), self.x)?;
        product_map(self.c, &src, &tgt, f, self.c.identity(self.x))
    }
}

/// Everything to the terminal object of `tgt`.
pub struct ToTerminal<'a, D: PathCategory + ?Sized> {
    pub tgt: &'a D,
}

impl<D: PathCategory + ?Sized> HomotopicalFunctor for ToTerminal<'_, D> {
    fn name(&self) -> String {
        "!".into()
    }
    fn obj(&self, _: ObjId) -> Result<ObjId> {
        self.tgt.terminal()
    }
    fn mor(&self, _: MorId) -> Result<MorId> {
        Ok(self.tgt.identity(self.tgt.terminal()?))
    }
}

/// `g^* : C/J -> C/I` for `g : I -> J`, by the chosen pullbacks.
pub struct SlicePullback<'a, 'b, C: PathCategory + ?Sized> {
    pub src: &'a Slice<'b, C>,
    pub tgt: &'a Slice<'b, C>,
    pub g: MorId,
}

impl<C: PathCategory + ?Sized> HomotopicalFunctor for SlicePullback<'_, '_, C> {
    fn name(&self) -> String {
        format!("{}^*", self.g)
    }
    fn obj(&self, x: ObjId) -> Result<ObjId> {
        let pb = self.src.base.pullback(self.src.structure_map(x), self.g)?;
        Ok(self.tgt.obj(pb.proj2))
    }
    fn mor(&self, f: MorId) -> Result<MorId> {
        let base = self.src.base;
        let pb = base.pullback(self.src.structure_map(self.src.dom(f)), self.g)?;
        let pb2 = base.pullback(self.src.structure_map(self.src.cod(f)), self.g)?;
        let m = base.mediator(&pb2, base.compose(self.src.underlying(f), pb.proj1)?, pb.proj2)?;
        self.tgt.mor(m, self.obj(self.src.cod(f))?)
    }
}

/// `g_! : C/I -> C/J`, postcomposition with `g : I -> J`.
/// The two slices may sit over different views of the same morphism ids.
pub struct Postcompose<'a, 'b, C: PathCategory + ?Sized, D: PathCategory + ?Sized = C> {
    pub src: &'a Slice<'b, C>,
    pub tgt: &'a Slice<'b, D>,
    pub g: MorId,
}

impl<C: PathCategory + ?Sized, D: PathCategory + ?Sized> HomotopicalFunctor for Postcompose<'_, '_, C, D> {
    fn name(&self) -> String {
        format!("{}_!", self.g)
    }
    fn obj(&self, x: ObjId) -> Result<ObjId> {
        Ok(self.tgt.obj(self.src.base.compose(self.g, self.src.structure_map(x))?))
    }
    fn mor(&self, f: MorId) -> Result<MorId> {
        self.tgt.mor(self.src.underlying(f), self.obj(self.src.cod(f))?)
    }
}

/// `second . first`.
pub struct Composite<'a> {
    pub first: &'a dyn HomotopicalFunctor,
    pub second: &'a dyn HomotopicalFunctor,
}

impl HomotopicalFunctor for Composite<'_> {
    fn name(&self) -> String {
        format!("({}) . ({})", self.second.name(), self.first.name())
    }
    fn obj(&self, x: ObjId) -> Result<ObjId> {
        self.second.obj(self.first.obj(x)?)
    }
    fn mor(&self, f: MorId) -> Result<MorId> {
        self.second.mor(self.first.mor(f)?)
    }
}

/// Fails unless every weak equivalence of the fragment of `c` goes to one.
pub fn check_homotopical<C, D>(c: &C, d: &D, f: &dyn HomotopicalFunctor) -> Result<()>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    let objs = c.objects();
    for &x in &objs {
        for &y in &objs {
            for m in c.hom_set(x, y)? {
                if c.is_weak_equivalence(m) && !d.is_weak_equivalence(f.mor(m)?) {
                    return Err(Error::NotHomotopical(format!("{} sends the weak equivalence {m} to {}", f.name(), f.mor(m)?)));
                }
            }
        }
    }
    Ok(())
}

/// The least filler `lambda : F(PY) -> P(FY)` of
/// `F r` against `(s, t)` with top `r` and bottom `(Fs, Ft)`.
pub fn lambda_for<C, D>(ec: &Enrichment<C>, ed: &Enrichment<D>, f: &dyn HomotopicalFunctor, y: ObjId) -> Result<MorId>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    let d = ed.c;
    let py = path_object(ec.c, y)?;
    let pfy = path_object(d, f.obj(y)?)?;
    let w = f.mor(py.r)?;
    let k = d.mediator(&pfy.fiber_product, f.mor(py.s)?, f.mor(py.t)?)?;
    find_filler(d, &LiftingSquare { w, p: pfy.pair, h: pfy.r, k })
}

/// `F_{X,Y} : C(X, Y) -> D(FX, FY)`.
#[derive(Debug, Clone)]
pub struct FunctorExtension {
    pub x: ObjId,
    pub y: ObjId,
    pub fx: ObjId,
    pub fy: ObjId,
    pub lambda: MorId,
    pub map: GroupoidMap,
}

/// The action on `C(x, y)`, assuming `f` is homotopical.
pub fn extension_map<C, D>(ec: &Enrichment<C>, ed: &Enrichment<D>, f: &dyn HomotopicalFunctor, x: ObjId, y: ObjId) -> Result<FunctorExtension>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    let d = ed.c;
    let (fx, fy) = (f.obj(x)?, f.obj(y)?);
    let lambda = lambda_for(ec, ed, f, y)?;
    let src = ec.hom(x, y)?;
    let tgt = ed.hom(fx, fy)?;
    let mut obj = Vec::new();
    for &u in &src.objects {
        let fu = f.mor(u)?;
        obj.push(*tgt.obj_index.get(&fu).ok_or(Error::UnknownMorphism(fu))?);
    }
    let mut arr = Vec::new();
    for &h in &src.arrows {
        arr.push(tgt.class_of(d.compose(lambda, f.mor(h)?)?)?);
    }
    Ok(FunctorExtension { x, y, fx, fy, lambda, map: GroupoidMap { obj, arr } })
}

/// `whisker_left(w) . F_{x,y}` from `C(x, y)` to `D(Fx, cod w)`, computed on
/// representatives so that `D(Fx, Fy)` itself is never built.
pub fn extension_then_whisker<C, D>(
    ec: &Enrichment<C>,
    ed: &Enrichment<D>,
    f: &dyn HomotopicalFunctor,
    x: ObjId,
    y: ObjId,
    w: MorId,
) -> Result<GroupoidMap>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    let d = ed.c;
    let (fx, fy) = (f.obj(x)?, f.obj(y)?);
    if d.dom(w) != fy {
        return Err(Error::pre(format!("{w} does not start at {fy}")));
    }
    let lambda = lambda_for(ec, ed, f, y)?;
    let pw = d.compose(ed.whisker_data(w)?.pf, lambda)?;
    let src = ec.hom(x, y)?;
    let tgt = ed.hom(fx, d.cod(w))?;
    let mut obj = Vec::new();
    for &u in &src.objects {
        let wu = d.compose(w, f.mor(u)?)?;
        obj.push(*tgt.obj_index.get(&wu).ok_or(Error::UnknownMorphism(wu))?);
    }
    let mut arr = Vec::new();
    for &h in &src.arrows {
        arr.push(tgt.class_of(d.compose(pw, f.mor(h)?)?)?);
    }
    Ok(GroupoidMap { obj, arr })
}

pub fn extend_homotopical_functor<C, D>(
    ec: &Enrichment<C>,
    ed: &Enrichment<D>,
    f: &dyn HomotopicalFunctor,
    x: ObjId,
    y: ObjId,
) -> Result<FunctorExtension>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    check_homotopical(ec.c, ed.c, f)?;
    extension_map(ec, ed, f, x, y)
}

/// For a strictly natural `alpha : F => G`, compares
/// `alpha_y * F(-)` and `G(-) * alpha_x` on `C(x, y)`.
pub fn induced_strict_transformation<C, D>(
    ec: &Enrichment<C>,
    ed: &Enrichment<D>,
    f: &dyn HomotopicalFunctor,
    g: &dyn HomotopicalFunctor,
    alpha: &dyn Fn(ObjId) -> Result<MorId>,
    x: ObjId,
    y: ObjId,
) -> Result<CheckResult>
where
    C: PathCategory + ?Sized,
    D: PathCategory + ?Sized,
{
    let (c, d) = (ec.c, ed.c);
    let (ax, ay) = (alpha(x)?, alpha(y)?);
    for u in c.hom_set(x, y)? {
        if d.compose(ay, f.mor(u)?)? != d.compose(g.mor(u)?, ax)? {
            return Err(Error::NaturalityFailure(format!("square at {u} does not commute")));
        }
    }
    check_homotopical(c, d, f)?;
    check_homotopical(c, d, g)?;
    let fe = extension_map(ec, ed, f, x, y)?;
    let ge = extension_map(ec, ed, g, x, y)?;
    let src = ec.hom(x, y)?;
    let mut res = CheckResult::new(format!("induced transformation on C({x}, {y})"));
    for k in 0..src.n_arrows() {
        let lhs = ed.whisker_left(ay, fe.fx, fe.map.arr[k])?;
        let rhs = ed.whisker_right(ge.fy, ge.map.arr[k], ax)?;
        res.record(lhs == rhs, "naturality_square", vec![k as u32], || format!("class {k}: {lhs} vs {rhs}"));
    }
    Ok(res)
}
