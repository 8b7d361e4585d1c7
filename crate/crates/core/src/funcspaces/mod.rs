//! Homotopy exponentials and Pi-types: deciders, constructions, and
//! function extensionality.
//!
//! A candidate is judged by the functors it induces on hom-groupoids, one per
//! test object (or test map into the base): weak, ordinary and strong ask
//! for e.s., e.s. + e.i. and e.s. + full at every test.

mod construct;
mod funext;

pub use construct::{
    compose_pi_horizontal, construct_exponential_over_fibration, construct_pi_over_fibration, exponential_square_commutes,
    pi_square_commutes, transport_along_weak_equivalence, Position,
};
pub use funext::{build_funext_comparison, check_funext, funext_squares, verify_ordinary_upgrade, FunextData, FunextVerdict, Upgrade};

use serde::{Deserialize, Serialize};

use crate::enrichment::{check_homotopical, extension_then_whisker, Enrichment, HomotopicalFunctor, ProductWith, SlicePullback};
use crate::error::{Error, Result};
use crate::fincat::{Category, MorId, ObjId, PullbackData};
use crate::gpdcheck::FunctorProperties;
use crate::pathstruct::{product, PathCategory, Slice};

/// `(E, eval : E x X -> Y)` with the chosen product `E x X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentialCandidate {
    pub x: ObjId,
    pub y: ObjId,
    pub e: ObjId,
    pub eval: MorId,
    pub product: PullbackData,
}

impl ExponentialCandidate {
    /// The candidate with the chosen product `e x x`.
    pub fn new<C: Category + ?Sized>(c: &C, x: ObjId, y: ObjId, e: ObjId, eval: MorId) -> Result<Self> {
        let product = product(c, e, x)?;
        if c.dom(eval) != product.apex || c.cod(eval) != y {
            return Err(Error::pre(format!("{eval} is not a map {} -> {y}", product.apex)));
        }
        Ok(ExponentialCandidate { x, y, e, eval, product })
    }
}

/// A candidate Pi-type of `f : X -> I` along `g : I -> J`: the fibration
/// `proj : Pi -> J` and `eval : g*Pi -> X` over `I`, where `g*Pi` is the apex
/// of `pullback = pullback(proj, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiCandidate {
    pub f: MorId,
    pub g: MorId,
    pub pi: ObjId,
    pub proj: MorId,
    pub eval: MorId,
    pub pullback: PullbackData,
}

/// The induced functor at one test object (or test map, for Pi-types).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub test: u32,
    pub label: String,
    pub properties: FunctorProperties,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub weak: bool,
    pub ordinary: bool,
    pub strong: bool,
    /// The first test at which each grade fails.
    pub weak_witness: Option<u32>,
    pub ordinary_witness: Option<u32>,
    pub strong_witness: Option<u32>,
    pub cases: Vec<TestCase>,
}

impl Verdict {
    pub fn from_cases(cases: Vec<TestCase>) -> Self {
        let first = |ok: fn(&FunctorProperties) -> bool| cases.iter().find(|t| !ok(&t.properties)).map(|t| t.test);
        let weak_witness = first(|p| p.ess_surjective);
        let ordinary_witness = first(|p| p.esei());
        let strong_witness = first(|p| p.esf());
        Verdict {
            weak: weak_witness.is_none(),
            ordinary: ordinary_witness.is_none(),
            strong: strong_witness.is_none(),
            weak_witness,
            ordinary_witness,
            strong_witness,
            cases,
        }
    }

    /// strong implies ordinary implies weak.
    pub fn ordering_holds(&self) -> bool {
        (!self.strong || self.ordinary) && (!self.ordinary || self.weak)
    }
}

/// `C(T, E) -> C(T x X, E x X) -> C(T x X, Y)` for every `T` in the fragment:
/// the extension of `- x X` followed by whiskering with `eval`.
pub fn check_exponential<C: PathCategory + ?Sized>(c: &C, cand: &ExponentialCandidate) -> Result<Verdict> {
    let en = Enrichment::new(c);
    check_exponential_with(&en, cand)
}

pub fn check_exponential_with<C: PathCategory + ?Sized>(en: &Enrichment<C>, cand: &ExponentialCandidate) -> Result<Verdict> {
    let c = en.c;
    if cand.product != product(c, cand.e, cand.x)? {
        return Err(Error::MissingPullback(format!("{} x {} is not the chosen product", cand.e, cand.x)));
    }
    let times_x = ProductWith { c, x: cand.x };
    check_homotopical(c, c, &times_x)?;
    let mut cases = Vec::new();
    for t in c.objects() {
        let map = extension_then_whisker(en, en, &times_x, t, cand.e, cand.eval)?;
        let (src, tgt) = (en.hom(t, cand.e)?, en.hom(times_x.obj(t)?, cand.y)?);
        cases.push(TestCase { test: t.0, label: c.label_obj(t), properties: map.properties(c, &src, &tgt)? });
    }
    Ok(Verdict::from_cases(cases))
}

/// For every `t : T -> J`, `(C/J)(t, Pi) -> (C/I)(g*t, g*Pi) -> (C/I)(g*t, f)`:
/// the extension of `g*` followed by whiskering with `eval`.
pub fn check_pi_type<C: PathCategory + ?Sized>(c: &C, cand: &PiCandidate) -> Result<Verdict> {
    for m in [cand.f, cand.g, cand.proj] {
        if !c.is_fibration(m) {
            return Err(Error::pre(format!("{m} is not a fibration")));
        }
    }
    let (i, j) = (c.dom(cand.g), c.cod(cand.g));
    if c.cod(cand.f) != i || c.cod(cand.proj) != j || c.dom(cand.proj) != cand.pi {
        return Err(Error::pre("candidate is ill-typed"));
    }
    if cand.pullback != c.pullback(cand.proj, cand.g)? {
        return Err(Error::MissingPullback(format!("pullback of {} along {} is not the chosen one", cand.proj, cand.g)));
    }
    if c.compose(cand.f, cand.eval)? != cand.pullback.proj2 {
        return Err(Error::pre("eval does not live over I"));
    }
    let (sj, si) = (Slice::new(c, j), Slice::new(c, i));
    let (ej, ei) = (Enrichment::new(&sj), Enrichment::new(&si));
    let g_star = SlicePullback { src: &sj, tgt: &si, g: cand.g };
    check_homotopical(&sj, &si, &g_star)?;
    let e = sj.obj(cand.proj);
    let xf = si.obj(cand.f);
    let eval = si.mor(cand.eval, xf)?;
    let mut cases = Vec::new();
    for t in sj.objects() {
        let map = extension_then_whisker(&ej, &ei, &g_star, t, e, eval)?;
        let (src, tgt) = (ej.hom(t, e)?, ei.hom(g_star.obj(t)?, xf)?);
        let test = sj.structure_map(t);
        cases.push(TestCase { test: test.0, label: format!("{test}"), properties: map.properties_between(&sj, &src, &si, &tgt)? });
    }
    Ok(Verdict::from_cases(cases))
}

#[cfg(test)]
mod tests;
