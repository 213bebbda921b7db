use serde::{Deserialize, Serialize};

use super::{degrees, eta_map, hull, ChainMap, Complex};
use crate::base::BaseCategory;
use crate::error::Result;
use crate::fault::{active, Mutant};

/// `cone(f)` for `f: X → Y` with its standard pair `Y → cone(f) → X[1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Cone<B: BaseCategory> {
    pub complex: Complex<B>,
    pub inj: ChainMap<B>,
    pub proj: ChainMap<B>,
}

/// `cone(f)^n = X^{n+1} ⊕ Y^n` with differential `[[−d_X^{n+1}, 0], [f^{n+1}, d_Y^n]]`.
pub fn cone<B: BaseCategory>(cat: &B, f: &ChainMap<B>) -> Result<Cone<B>> {
    let x = f.source();
    let y = f.target();
    let span = hull(x.span().map(|(a, b)| (a - 1, b - 1)), y.span());
    let parts = |n: i64| [x.obj(cat, n + 1), y.obj(cat, n)];
    let mut objs = Vec::new();
    let mut diffs = Vec::new();
    for n in degrees(span) {
        let (src, dst) = (parts(n), parts(n + 1));
        objs.push((n, cat.direct_sum(&src)));
        let dx = x.diff(cat, n + 1);
        let ul = if active(Mutant::ConeNegBlock) { dx } else { cat.neg(&dx) };
        let fl = f.comp(cat, n + 1);
        let ll = if active(Mutant::ConeMapBlock) { cat.neg(&fl) } else { fl };
        let dy = y.diff(cat, n);
        let lr = if active(Mutant::ConeTargetBlock) { cat.neg(&dy) } else { dy };
        let d = cat.block(&dst, &src, &mut |r, c| match (r, c) {
            (0, 0) => Some(ul.clone()),
            (1, 0) => Some(ll.clone()),
            (1, 1) => Some(lr.clone()),
            _ => None,
        })?;
        diffs.push((n, d));
    }
    let complex = Complex::raw(cat, objs, diffs)?;
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    for n in degrees(span) {
        let p = parts(n);
        let yn = [y.obj(cat, n)];
        let xn = [x.obj(cat, n + 1)];
        inj.push((n, cat.block(&p, &yn, &mut |r, _| (r == 1).then(|| cat.identity(&yn[0])))?));
        proj.push((n, cat.block(&xn, &p, &mut |_, c| (c == 0).then(|| cat.identity(&xn[0])))?));
    }
    let inj = ChainMap::raw(cat, y.clone(), complex.clone(), inj)?;
    let proj = ChainMap::raw(cat, complex.clone(), x.shift(cat, 1), proj)?;
    Ok(Cone { complex, inj, proj })
}

/// The standard exact pair `X → cone(h) → Z` attached to `h: Z[−1] → X`.
///
/// Its middle term is `Z^n ⊕ X^n` with differential `[[d_Z, 0], [h^{n+1}, d_X]]`.
pub fn standard_pair<B: BaseCategory>(cat: &B, h: &ChainMap<B>) -> Result<Cone<B>> {
    cone(cat, h)
}

/// `η_{cone(f)} = diag(η_{X[1]}, η_Y)`, compared exactly.
pub fn eta_on_cone<B: BaseCategory>(cat: &B, f: &ChainMap<B>) -> Result<bool> {
    let c = cone(cat, f)?;
    let lhs = eta_map(cat, &c.complex);
    let x1 = f.source().shift(cat, 1);
    let y = f.target();
    let ex = eta_map(cat, &x1);
    let ey = eta_map(cat, y);
    let mut comps = Vec::new();
    for n in degrees(c.complex.span()) {
        let rows = [x1.obj(cat, n), y.obj(cat, n)];
        let cols = [cat.shift_obj(&rows[0], 1), cat.shift_obj(&rows[1], 1)];
        let (a, b) = (ex.comp(cat, n), ey.comp(cat, n));
        comps.push((
            n,
            cat.block(&rows, &cols, &mut |r, s| match (r, s) {
                (0, 0) => Some(a.clone()),
                (1, 1) => Some(b.clone()),
                _ => None,
            })?,
        ));
    }
    let rhs = ChainMap::raw(cat, c.complex.twist(cat, 1), c.complex.clone(), comps)?;
    Ok(lhs == rhs)
}
