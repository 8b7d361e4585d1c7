//! Function extensionality: the comparison `phi : P(Y^X) -> (PY)^X`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::MorId;
use crate::pathstruct::{
    find_filler, homotopic, homotopic_over, is_homotopy_equivalence, path_object, product, product_map, LiftingSquare, PathCategory,
    PathObjectData,
};
use crate::report::CheckResult;

use super::{check_exponential, construct_exponential_over_fibration, exponential_square_commutes, ExponentialCandidate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunextData {
    pub cand: ExponentialCandidate,
    /// The path object of `Y`.
    pub py: PathObjectData,
    /// The path object of `Y^X`.
    pub pe: PathObjectData,
    /// `(E x E, eval_{YxY})` with `eval_{YxY} = (eval (pi1, pi3), eval (pi2, pi3))`.
    pub exp_yy: ExponentialCandidate,
    pub eval_pair: MorId,
    /// `(PY)^X` over `(s, t)`.
    pub pyx: ExponentialCandidate,
    /// `(s^X, t^X) : (PY)^X -> E x E`.
    pub st_pair: MorId,
    pub r_x: MorId,
    pub phi: MorId,
}

/// Builds `(PY)^X` over the exponential for `Y x Y`, the map `r^X` (the
/// first lift of the diagonal along `(s^X, t^X)` whose evaluation is
/// homotopic to `r eval` over `Y x Y`), and `phi` as the filler of `r_E`
/// against `(s^X, t^X)`.
pub fn build_funext_comparison<C: PathCategory + ?Sized>(c: &C, cand: &ExponentialCandidate) -> Result<FunextData> {
    let (x, e) = (cand.x, cand.e);
    let py = path_object(c, cand.y)?;
    let pe = path_object(c, e)?;
    let ee = product(c, e, e)?;
    let eex = product(c, ee.apex, x)?;
    let a1 = c.mediator(&cand.product, c.compose(ee.proj1, eex.proj1)?, eex.proj2)?;
    let a2 = c.mediator(&cand.product, c.compose(ee.proj2, eex.proj1)?, eex.proj2)?;
    let eval_pair = c.mediator(&py.fiber_product, c.compose(cand.eval, a1)?, c.compose(cand.eval, a2)?)?;
    let exp_yy = ExponentialCandidate { x, y: py.fiber_product.apex, e: ee.apex, eval: eval_pair, product: eex };
    let (pyx, st_pair) = construct_exponential_over_fibration(c, py.pair, &exp_yy)?;

    let diagonal = c.mediator(&ee, c.identity(e), c.identity(e))?;
    let over_yy = c.path_object_over(py.pair)?;
    let target = c.compose(py.r, cand.eval)?;
    let r_x = c.find_lift(st_pair, diagonal, &mut |u| {
        let u1 = product_map(c, &cand.product, &pyx.product, u, c.identity(x))?;
        homotopic_over(c, &over_yy, c.compose(pyx.eval, u1)?, target)
    })?;
    let r_x = r_x.ok_or_else(|| Error::NoFiller(format!("no transpose of r eval through {st_pair}")))?;
    let phi = find_filler(c, &LiftingSquare { w: pe.r, p: st_pair, h: r_x, k: pe.pair })?;
    Ok(FunextData { cand: *cand, py, pe, exp_yy, eval_pair, pyx, st_pair, r_x, phi })
}

/// The strict squares and the two homotopies the construction promises.
pub fn funext_squares<C: PathCategory + ?Sized>(c: &C, fd: &FunextData) -> Result<CheckResult> {
    let mut res = CheckResult::new("function extensionality comparison");
    let e = fd.cand.e;
    let diagonal = c.mediator(&fd.pe.fiber_product, c.identity(e), c.identity(e))?;
    res.record(
        exponential_square_commutes(c, fd.py.pair, &fd.exp_yy, &fd.pyx, fd.st_pair)?,
        "st_square",
        vec![fd.st_pair.0],
        || "eval_{YxY} ((s,t)^X x 1) differs from (s,t) eval_{PY}".into(),
    );
    res.record(c.compose(fd.st_pair, fd.r_x)? == diagonal, "diagonal_square", vec![fd.r_x.0], || "(s^X, t^X) r^X is not the diagonal".into());
    res.record(c.compose(fd.st_pair, fd.phi)? == fd.pe.pair, "phi_square", vec![fd.phi.0], || "(s^X, t^X) phi is not (s, t)".into());
    let over_ee = c.path_object_over(fd.st_pair)?;
    res.record(
        homotopic_over(c, &over_ee, c.compose(fd.phi, fd.pe.r)?, fd.r_x)?,
        "phi_r_homotopy",
        vec![fd.phi.0, fd.r_x.0],
        || "phi r is not homotopic to r^X over E x E".into(),
    );
    let over_yy = c.path_object_over(fd.py.pair)?;
    let u1 = product_map(c, &fd.cand.product, &fd.pyx.product, fd.r_x, c.identity(fd.cand.x))?;
    res.record(
        homotopic_over(c, &over_yy, c.compose(fd.pyx.eval, u1)?, c.compose(fd.py.r, fd.cand.eval)?)?,
        "r_transpose_homotopy",
        vec![fd.r_x.0],
        || "eval_{PY} (r^X x 1) is not homotopic to r eval over Y x Y".into(),
    );
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunextVerdict {
    pub strong: bool,
    pub phi_weak_equivalence: bool,
    pub agree: bool,
    /// Whether every induced functor is full and faithful; decided only for
    /// strong candidates.
    pub fully_faithful: Option<bool>,
}

/// Computes both sides of "strong iff phi is a weak equivalence"
/// independently.
pub fn check_funext<C: PathCategory + ?Sized>(c: &C, cand: &ExponentialCandidate, fd: &FunextData) -> Result<FunextVerdict> {
    if fd.cand != *cand {
        return Err(Error::pre("comparison data was built from another candidate"));
    }
    let verdict = check_exponential(c, cand)?;
    let phi_we = is_homotopy_equivalence(c, fd.phi)?;
    let fully_faithful = verdict.strong.then(|| verdict.cases.iter().all(|t| t.properties.full && t.properties.faithful));
    Ok(FunextVerdict { strong: verdict.strong, phi_weak_equivalence: phi_we, agree: verdict.strong == phi_we, fully_faithful })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Upgrade {
    pub strong: bool,
    /// A weak equivalence `h : E~ -> E` with `eval (h x 1) ~ eval~`.
    pub connecting: Option<MorId>,
}

/// Re-checks an ordinary candidate against a strong one for the same
/// `(X, Y)`, and searches for the comparison map between them.
pub fn verify_ordinary_upgrade<C: PathCategory + ?Sized>(c: &C, strong: &ExponentialCandidate, ordinary: &ExponentialCandidate) -> Result<Upgrade> {
    if (strong.x, strong.y) != (ordinary.x, ordinary.y) {
        return Err(Error::pre("candidates are for different (X, Y)"));
    }
    if !check_exponential(c, strong)?.strong {
        return Err(Error::pre("the first candidate is not strong"));
    }
    let v = check_exponential(c, ordinary)?;
    if !v.ordinary {
        return Err(Error::pre("the second candidate is not ordinary"));
    }
    let mut connecting = None;
    for h in c.hom_set(ordinary.e, strong.e)? {
        if !c.is_weak_equivalence(h) {
            continue;
        }
        let h1 = product_map(c, &ordinary.product, &strong.product, h, c.identity(strong.x))?;
        if homotopic(c, c.compose(strong.eval, h1)?, ordinary.eval)? {
            connecting = Some(h);
            break;
        }
    }
    Ok(Upgrade { strong: v.strong, connecting })
}
