//! What whiskering does to the marked classes: fibrations give
//! isofibrations, weak equivalences give equivalences, and homotopic maps
//! give naturally isomorphic functors.

use crate::error::Result;
use crate::fincat::{MorId, ObjId};
use crate::gpdcheck::{functor_properties, naturally_isomorphic, FunctorProperties};
use crate::pathstruct::{homotopic, PathCategory};
use crate::report::CheckResult;

use super::{Enrichment, GroupoidMap, HomGroupoid};

impl GroupoidMap {
    pub fn properties<C: PathCategory + ?Sized>(&self, c: &C, src: &HomGroupoid, tgt: &HomGroupoid) -> Result<FunctorProperties> {
        self.properties_between(c, src, c, tgt)
    }

    pub fn properties_between<C, D>(&self, c: &C, src: &HomGroupoid, d: &D, tgt: &HomGroupoid) -> Result<FunctorProperties>
    where
        C: PathCategory + ?Sized,
        D: PathCategory + ?Sized,
    {
        Ok(functor_properties(&src.gpd, &tgt.gpd, &self.functor_data_between(c, src, d, tgt)?))
    }
}

/// Checks the three whiskering lemmas for every map between `objs`, with
/// `objs` also as the range of the fixed end.
pub fn whiskering_lemmas<C: PathCategory + ?Sized>(en: &Enrichment<C>, objs: &[ObjId]) -> Result<Vec<CheckResult>> {
    let c = en.c;
    let mut fib = CheckResult::new("f * - is an isofibration for fibrations f");
    let mut we = CheckResult::new("f * - and - * f are equivalences for weak equivalences f");
    let mut htpy = CheckResult::new("homotopic maps whisker to isomorphic functors");
    for &y in objs {
        for &z in objs {
            let maps = c.hom_set(y, z)?;
            for &f in &maps {
                for &x in objs {
                    let (hxy, hxz) = (en.hom(x, y)?, en.hom(x, z)?);
                    let left = en.whisker_left_map(f, x)?;
                    if c.is_fibration(f) {
                        let p = left.properties(c, &hxy, &hxz)?;
                        fib.record(p.isofibration, "not_isofibration", vec![f.0, x.0], || format!("{f} * - on C({x}, {y})"));
                    }
                    if c.is_weak_equivalence(f) {
                        let p = left.properties(c, &hxy, &hxz)?;
                        we.record(p.equivalence, "left_not_equivalence", vec![f.0, x.0], || format!("{f} * - on C({x}, {y})"));
                        let (hzx, hyx) = (en.hom(z, x)?, en.hom(y, x)?);
                        let p = en.whisker_right_map(x, f)?.properties(c, &hzx, &hyx)?;
                        we.record(p.equivalence, "right_not_equivalence", vec![f.0, x.0], || format!("- * {f} on C({z}, {x})"));
                    }
                }
            }
            for (i, &f) in maps.iter().enumerate() {
                for &g in &maps[i + 1..] {
                    if !homotopic(c, f, g)? {
                        continue;
                    }
                    for &x in objs {
                        htpy.record(left_isomorphic(en, f, g, x)?, "left_not_isomorphic", vec![f.0, g.0, x.0], || {
                            format!("{f} * - and {g} * - on C({x}, {y})")
                        });
                        htpy.record(right_isomorphic(en, f, g, x)?, "right_not_isomorphic", vec![f.0, g.0, x.0], || {
                            format!("- * {f} and - * {g} on C({z}, {x})")
                        });
                    }
                }
            }
        }
    }
    Ok(vec![fib, we, htpy])
}

fn left_isomorphic<C: PathCategory + ?Sized>(en: &Enrichment<C>, f: MorId, g: MorId, x: ObjId) -> Result<bool> {
    let c = en.c;
    let (src, tgt) = (en.hom(x, c.dom(f))?, en.hom(x, c.cod(f))?);
    let ff = en.whisker_left_map(f, x)?.functor_data(c, &src, &tgt)?;
    let gg = en.whisker_left_map(g, x)?.functor_data(c, &src, &tgt)?;
    Ok(naturally_isomorphic(&src.gpd, &tgt.gpd, &ff, &gg))
}

fn right_isomorphic<C: PathCategory + ?Sized>(en: &Enrichment<C>, f: MorId, g: MorId, x: ObjId) -> Result<bool> {
    let c = en.c;
    let (src, tgt) = (en.hom(c.cod(f), x)?, en.hom(c.dom(f), x)?);
    let ff = en.whisker_right_map(x, f)?.functor_data(c, &src, &tgt)?;
    let gg = en.whisker_right_map(x, g)?.functor_data(c, &src, &tgt)?;
    Ok(naturally_isomorphic(&src.gpd, &tgt.gpd, &ff, &gg))
}
