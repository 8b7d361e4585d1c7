//! New candidates from old: transport along weak equivalences, exponentials
//! and Pi-types of fibrations, and composites of Pi-types.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::MorId;
use crate::pathstruct::{product, product_map, PathCategory};

use super::{ExponentialCandidate, PiCandidate};

/// Where a weak equivalence is spliced into an exponential candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    /// `h : Z -> E`, giving `(Z, eval (h x 1))`.
    DomainOfE,
    /// `h : Y -> Y'`, giving `(E, h eval)`.
    CodomainY,
    /// `h : X' -> X`, giving `(E, eval (1 x h))`.
    ArgumentX,
}

pub fn transport_along_weak_equivalence<C: PathCategory + ?Sized>(
    c: &C,
    cand: &ExponentialCandidate,
    h: MorId,
    position: Position,
) -> Result<ExponentialCandidate> {
    if !c.is_weak_equivalence(h) {
        return Err(Error::NotWeakEquivalence(h));
    }
    let mismatch = || Error::pre(format!("{h} does not fit the {position:?} position"));
    match position {
        Position::DomainOfE => {
            if c.cod(h) != cand.e {
                return Err(mismatch());
            }
            let z = c.dom(h);
            let prod = product(c, z, cand.x)?;
            let hx = product_map(c, &prod, &cand.product, h, c.identity(cand.x))?;
            Ok(ExponentialCandidate { x: cand.x, y: cand.y, e: z, eval: c.compose(cand.eval, hx)?, product: prod })
        }
        Position::CodomainY => {
            if c.dom(h) != cand.y {
                return Err(mismatch());
            }
            Ok(ExponentialCandidate { y: c.cod(h), eval: c.compose(h, cand.eval)?, ..*cand })
        }
        Position::ArgumentX => {
            if c.cod(h) != cand.x {
                return Err(mismatch());
            }
            let x2 = c.dom(h);
            let prod = product(c, cand.e, x2)?;
            let eh = product_map(c, &prod, &cand.product, c.identity(cand.e), h)?;
            Ok(ExponentialCandidate { x: x2, y: cand.y, e: cand.e, eval: c.compose(cand.eval, eh)?, product: prod })
        }
    }
}

/// For a fibration `p : Y -> Z` and a candidate `Z^X`: pull `p` back along
/// the evaluation to `q : Q -> Z^X x X`, take `Y^X = Pi_{pi1} q`, and
/// evaluate through `Q -> Y`. Also returns `p^X : Y^X -> Z^X`.
pub fn construct_exponential_over_fibration<C: PathCategory + ?Sized>(
    c: &C,
    p: MorId,
    base: &ExponentialCandidate,
) -> Result<(ExponentialCandidate, MorId)> {
    if !c.is_fibration(p) {
        return Err(Error::pre(format!("{p} is not a fibration")));
    }
    if c.cod(p) != base.y {
        return Err(Error::pre(format!("{p} does not land in {}", base.y)));
    }
    let q_pb = c.pullback(p, base.eval)?;
    let pi = c.pi_type(q_pb.proj2, base.product.proj1)?;
    let px = pi.proj;
    let prod = product(c, pi.pi, base.x)?;
    let down = c.mediator(&base.product, c.compose(px, prod.proj1)?, prod.proj2)?;
    let m = c.mediator(&pi.pullback, prod.proj1, down)?;
    let eval = c.compose(q_pb.proj1, c.compose(pi.eval, m)?)?;
    Ok((ExponentialCandidate { x: base.x, y: c.dom(p), e: pi.pi, eval, product: prod }, px))
}

/// `eval_Z (p^X x 1) = p eval_Y`.
pub fn exponential_square_commutes<C: PathCategory + ?Sized>(
    c: &C,
    p: MorId,
    base: &ExponentialCandidate,
    out: &ExponentialCandidate,
    px: MorId,
) -> Result<bool> {
    let px1 = product_map(c, &out.product, &base.product, px, c.identity(base.x))?;
    Ok(c.compose(base.eval, px1)? == c.compose(p, out.eval)?)
}

/// For `f : I -> J`, a fibration `p : X -> Y` and a candidate `Pi_f Y` for
/// `fy : Y -> I`: pull `p` back along the evaluation, take `Pi_{pi1}` of it,
/// and evaluate through `Q -> X`. Also returns `Pi_f p : Pi_f X -> Pi_f Y`.
pub fn construct_pi_over_fibration<C: PathCategory + ?Sized>(c: &C, f: MorId, p: MorId, base: &PiCandidate) -> Result<(PiCandidate, MorId)> {
    if base.g != f {
        return Err(Error::pre(format!("the base Pi-type is not taken along {f}")));
    }
    if !c.is_fibration(p) {
        return Err(Error::pre(format!("{p} is not a fibration")));
    }
    if c.cod(p) != c.dom(base.f) {
        return Err(Error::pre(format!("{p} does not land in the source of {}", base.f)));
    }
    let q_pb = c.pullback(p, base.eval)?;
    let inner = c.pi_type(q_pb.proj2, base.pullback.proj1)?;
    let proj = c.compose(base.proj, inner.proj)?;
    let pullback = c.pullback(proj, f)?;
    let down = c.mediator(&base.pullback, c.compose(inner.proj, pullback.proj1)?, pullback.proj2)?;
    let m = c.mediator(&inner.pullback, pullback.proj1, down)?;
    let eval = c.compose(q_pb.proj1, c.compose(inner.eval, m)?)?;
    let cand = PiCandidate { f: c.compose(base.f, p)?, g: f, pi: inner.pi, proj, eval, pullback };
    Ok((cand, inner.proj))
}

/// `eval_Y (Pi_f p x_J I) = p eval_X`, and `Pi_f p` lies over `J`.
pub fn pi_square_commutes<C: PathCategory + ?Sized>(c: &C, p: MorId, base: &PiCandidate, out: &PiCandidate, pi_p: MorId) -> Result<bool> {
    if c.compose(base.proj, pi_p)? != out.proj {
        return Ok(false);
    }
    let down = c.mediator(&base.pullback, c.compose(pi_p, out.pullback.proj1)?, out.pullback.proj2)?;
    Ok(c.compose(base.eval, down)? == c.compose(p, out.eval)?)
}

/// `Pi_h Pi_g X` as a Pi-type of `f` along `h g`, evaluating through
/// `g*(eval_h)` and then `eval_g`.
pub fn compose_pi_horizontal<C: PathCategory + ?Sized>(c: &C, f: MorId, g: MorId, h: MorId) -> Result<PiCandidate> {
    let inner = c.pi_type(f, g)?;
    let outer = c.pi_type(inner.proj, h)?;
    let hg = c.compose(h, g)?;
    let pullback = c.pullback(outer.proj, hg)?;
    let to_outer = c.mediator(&outer.pullback, pullback.proj1, c.compose(g, pullback.proj2)?)?;
    let e2 = c.compose(outer.eval, to_outer)?;
    let to_inner = c.mediator(&inner.pullback, e2, pullback.proj2)?;
    let eval = c.compose(inner.eval, to_inner)?;
    Ok(PiCandidate { f, g: hg, pi: outer.pi, proj: outer.proj, eval, pullback })
}
