//! The law suite: groupoid laws on each hom-groupoid, the 2-categorical
//! laws of whiskering and horizontal composition, and independence of the
//! chosen path object.

use crate::error::Result;
use crate::fincat::{MorId, ObjId};
use crate::pathstruct::{find_filler, LiftingSquare, PathCategory, Tampered};
use crate::report::CheckResult;

use super::{Enrichment, GroupoidMap};

/// Associativity, units, inverses, and that composition and inversion do
/// not depend on the chosen representatives.
pub fn groupoid_laws<C: PathCategory + ?Sized>(en: &Enrichment<C>, x: ObjId, y: ObjId) -> Result<Vec<CheckResult>> {
    let c = en.c;
    let h = en.hom(x, y)?;
    let eg = en.egroupoid(y)?;
    let n = h.n_arrows();
    let label = format!("C({x}, {y})");

    let mut assoc = CheckResult::new(format!("associativity in {label}"));
    for a in 0..n {
        for &b in h.arrows_from(h.tgt[a]) {
            let ba = h.compose(c, b, a)?;
            for &g in h.arrows_from(h.tgt[b]) {
                let l = h.compose(c, g, ba)?;
                let r = h.compose(c, h.compose(c, g, b)?, a)?;
                assoc.record(l == r, "associativity", vec![a as u32, b as u32, g as u32], || format!("{l} vs {r}"));
            }
        }
    }

    let mut unit = CheckResult::new(format!("unit laws in {label}"));
    for a in 0..n {
        let l = h.compose(c, h.identity[h.tgt[a]], a)?;
        let r = h.compose(c, a, h.identity[h.src[a]])?;
        unit.record(l == a && r == a, "unit", vec![a as u32], || format!("1.a = {l}, a.1 = {r}, a = {a}"));
    }

    let mut inv = CheckResult::new(format!("inverse laws in {label}"));
    for a in 0..n {
        let i = h.inverse(c, a)?;
        let ok = h.src[i] == h.tgt[a]
            && h.tgt[i] == h.src[a]
            && h.compose(c, i, a)? == h.identity[h.src[a]]
            && h.compose(c, a, i)? == h.identity[h.tgt[a]];
        inv.record(ok, "inverse", vec![a as u32], || format!("inverse {i} of {a} fails"));
    }

    let mut wd = CheckResult::new(format!("well-definedness in {label}"));
    let members: Vec<Vec<MorId>> = (0..n).map(|k| h.members(k)).collect();
    for a in 0..n {
        for &ha in &members[a] {
            let ia = h.class_of(c.compose(eg.sigma, ha)?)?;
            wd.record(ia == h.inverse(c, a)?, "inverse_representative", vec![ha.0], || format!("sigma {ha} lands in {ia}"));
        }
        for &b in h.arrows_from(h.tgt[a]) {
            let want = h.compose(c, b, a)?;
            for &ha in &members[a] {
                for &hb in &members[b] {
                    let pair = c.mediator(&eg.comp_domain, ha, hb)?;
                    let got = h.class_of(c.compose(eg.tau, pair)?)?;
                    wd.record(got == want, "composition_representative", vec![ha.0, hb.0], || format!("tau({ha}, {hb}) in {got}, expected {want}"));
                }
            }
        }
    }
    Ok(vec![assoc, unit, inv, wd])
}

/// `(b' * a') . (b * a) = (b' . b) * (a' . a)`.
pub fn interchange_law<C: PathCategory + ?Sized>(en: &Enrichment<C>, x: ObjId, y: ObjId, z: ObjId) -> Result<CheckResult> {
    let c = en.c;
    let (hxy, hyz, hxz) = (en.hom(x, y)?, en.hom(y, z)?, en.hom(x, z)?);
    let mut res = CheckResult::new(format!("interchange on {x} -> {y} -> {z}"));
    let pairs = |h: &super::HomGroupoid| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for a in 0..h.n_arrows() {
            for &a2 in h.arrows_from(h.tgt[a]) {
                v.push((a, a2));
            }
        }
        v
    };
    let alphas = pairs(&hxy);
    let betas = pairs(&hyz);
    for &(a, a2) in &alphas {
        let aa = hxy.compose(c, a2, a)?;
        for &(b, b2) in &betas {
            let lhs = hxz.compose(c, en.horizontal(x, y, z, b2, a2)?, en.horizontal(x, y, z, b, a)?)?;
            let rhs = en.horizontal(x, y, z, hyz.compose(c, b2, b)?, aa)?;
            res.record(lhs == rhs, "interchange", vec![a as u32, a2 as u32, b as u32, b2 as u32], || format!("{lhs} vs {rhs}"));
        }
    }
    Ok(res)
}

/// The two whiskering formulas for `beta * alpha` agree.
pub fn horizontal_formulas_agree<C: PathCategory + ?Sized>(en: &Enrichment<C>, x: ObjId, y: ObjId, z: ObjId) -> Result<CheckResult> {
    let (hxy, hyz) = (en.hom(x, y)?, en.hom(y, z)?);
    let mut res = CheckResult::new(format!("horizontal formulas on {x} -> {y} -> {z}"));
    for a in 0..hxy.n_arrows() {
        for b in 0..hyz.n_arrows() {
            let l = en.horizontal(x, y, z, b, a)?;
            let r = en.horizontal_alt(x, y, z, b, a)?;
            res.record(l == r, "horizontal_formulas", vec![a as u32, b as u32], || format!("{l} vs {r}"));
        }
    }
    Ok(res)
}

/// `(c * b) * a = c * (b * a)`.
pub fn horizontal_associativity<C: PathCategory + ?Sized>(en: &Enrichment<C>, x: ObjId, y: ObjId, z: ObjId, w: ObjId) -> Result<CheckResult> {
    let (hxy, hyz, hzw) = (en.hom(x, y)?, en.hom(y, z)?, en.hom(z, w)?);
    let mut res = CheckResult::new(format!("horizontal associativity on {x} -> {y} -> {z} -> {w}"));
    for a in 0..hxy.n_arrows() {
        for b in 0..hyz.n_arrows() {
            let ba = en.horizontal(x, y, z, b, a)?;
            for g in 0..hzw.n_arrows() {
                let l = en.horizontal(x, y, w, en.horizontal(y, z, w, g, b)?, a)?;
                let r = en.horizontal(x, z, w, g, ba)?;
                res.record(l == r, "horizontal_associativity", vec![a as u32, b as u32, g as u32], || format!("{l} vs {r}"));
            }
        }
    }
    Ok(res)
}

/// `g * (alpha * f) = (g * alpha) * f`.
pub fn whisker_exchange<C: PathCategory + ?Sized>(en: &Enrichment<C>, x: ObjId, y: ObjId, z: ObjId, w: ObjId) -> Result<CheckResult> {
    let c = en.c;
    let hyz = en.hom(y, z)?;
    let mut res = CheckResult::new(format!("whisker exchange on {x} -> {y} -> {z} -> {w}"));
    for f in c.hom_set(x, y)? {
        for g in c.hom_set(z, w)? {
            for a in 0..hyz.n_arrows() {
                let l = en.whisker_left(g, x, en.whisker_right(z, a, f)?)?;
                let r = en.whisker_right(w, en.whisker_left(g, y, a)?, f)?;
                res.record(l == r, "whisker_exchange", vec![f.0, a as u32, g.0], || format!("{l} vs {r}"));
            }
        }
    }
    Ok(res)
}

/// The comparison between hom-groupoids built from two path objects of `y`.
#[derive(Debug, Clone)]
pub struct IndependenceWitness {
    /// `P Y -> P' Y` over `Y x Y`.
    pub phi: MorId,
    pub psi: MorId,
    pub forward: GroupoidMap,
    pub backward: GroupoidMap,
}

/// `alt` differs from `base` in the path object chosen for `y`; the induced
/// maps between the two versions of `C(x, y)` are mutually inverse functors.
pub fn path_object_independence<C: PathCategory + ?Sized>(
    base: &C,
    alt: &Tampered<C>,
    x: ObjId,
    y: ObjId,
) -> Result<(CheckResult, IndependenceWitness)> {
    let (e1, e2) = (Enrichment::new(base), Enrichment::new(alt));
    let (h1, h2) = (e1.hom(x, y)?, e2.hom(x, y)?);
    let (p1, p2) = (e1.egroupoid(y)?.p, e2.egroupoid(y)?.p);
    let phi = find_filler(alt, &LiftingSquare { w: p1.r, p: p2.pair, h: p2.r, k: p1.pair })?;
    let psi = find_filler(alt, &LiftingSquare { w: p2.r, p: p1.pair, h: p1.r, k: p2.pair })?;
    let ident: Vec<usize> = (0..h1.objects.len()).collect();
    let mut fwd = Vec::new();
    for &h in &h1.arrows {
        fwd.push(h2.class_of(base.compose(phi, h)?)?);
    }
    let mut bwd = Vec::new();
    for &h in &h2.arrows {
        bwd.push(h1.class_of(base.compose(psi, h)?)?);
    }
    let forward = GroupoidMap { obj: ident.clone(), arr: fwd };
    let backward = GroupoidMap { obj: ident, arr: bwd };
    let mut res = CheckResult::new(format!("path-object independence of C({x}, {y})"));
    res.record(h1.objects == h2.objects, "objects", vec![], || "object sets differ".into());
    res.record(forward.is_functor(base, &h1, &h2)?, "forward_functor", vec![phi.0], || "phi does not induce a functor".into());
    res.record(backward.is_functor(alt, &h2, &h1)?, "backward_functor", vec![psi.0], || "psi does not induce a functor".into());
    let round1 = (0..h1.n_arrows()).all(|k| backward.arr[forward.arr[k]] == k);
    let round2 = (0..h2.n_arrows()).all(|k| forward.arr[backward.arr[k]] == k);
    res.record(round1 && round2, "mutually_inverse", vec![phi.0, psi.0], || "induced maps are not inverse".into());
    Ok((res, IndependenceWitness { phi, psi, forward, backward }))
}
