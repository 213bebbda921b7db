use super::conflation::{is_eta_conflation, EtaConflation};
use crate::base::BaseCategory;
use crate::complex::{cone, degrees, eta_map, ChainMap, Complex, Cone};
use crate::error::{Error, Result};

/// `cone(η_V)`: `V^{n+1}(1) ⊕ V^n` with differential `[[−d_V^{n+1}(1), 0], [η_{V^{n+1}}, d_V^n]]`.
pub fn cone_eta<B: BaseCategory>(cat: &B, v: &Complex<B>) -> Result<Cone<B>> {
    cone(cat, &eta_map(cat, v))
}

/// Lifts `g = (g_1, g_2): cone(η_V) → Z` through the deflation of `conf`.
///
/// Into the standard middle term the lift is
/// `[[g_1^n, g_2^n], [0, α^n(−1) g_1^{n−1}(−1)]]`; it is then carried to `Y`
/// along the stored isomorphism and checked.
pub fn projective_lift<B: BaseCategory>(
    cat: &B,
    v: &Complex<B>,
    g: &ChainMap<B>,
    conf: &EtaConflation<B>,
) -> Result<ChainMap<B>> {
    let ce = cone_eta(cat, v)?.complex;
    let (x, z) = (conf.pair.x(), conf.pair.z());
    if g.source() != &ce || g.target() != z {
        return Err(Error::objects("g must map cone(η_V) to the end of the deflation"));
    }
    let cols = |n: i64| [cat.shift_obj(&v.obj(cat, n + 1), 1), v.obj(cat, n)];
    let g1 = |n: i64| cat.block_entry(&g.comp(cat, n), &[z.obj(cat, n)], &cols(n), 0, 0);
    let g2 = |n: i64| cat.block_entry(&g.comp(cat, n), &[z.obj(cat, n)], &cols(n), 0, 1);
    let mut comps = Vec::new();
    for n in degrees(ce.span()) {
        let rows = [z.obj(cat, n), x.obj(cat, n)];
        let (a, b) = (g1(n), g2(n));
        let low = cat.compose(&cat.shift_mor(&conf.alpha.comp(cat, n), -1), &cat.shift_mor(&g1(n - 1), -1))?;
        comps.push((
            n,
            cat.block(&rows, &cols(n), &mut |r, c| match (r, c) {
                (0, 0) => Some(a.clone()),
                (0, 1) => Some(b.clone()),
                (1, 1) => Some(low.clone()),
                _ => None,
            })?,
        ));
    }
    let standard = ChainMap::raw(cat, ce, conf.standard.complex.clone(), comps)?;
    let lift = conf.from_standard.compose(cat, &standard)?;
    if !lift.validate(cat) || conf.pair.p.compose(cat, &lift)? != *g {
        return Err(Error::NotNormalized("projective lift failed to validate".into()));
    }
    Ok(lift)
}

/// Extends `g = (g_1, g_2)ᵗ: X → cone(η_V)` along the inflation of `conf`.
///
/// From the standard middle term the extension is
/// `[[g_2^{n+1}(1) α^{n+1}, g_1^n], [0, g_2^n]]`, precomposed with the
/// stored isomorphism and checked.
pub fn injective_extend<B: BaseCategory>(
    cat: &B,
    v: &Complex<B>,
    g: &ChainMap<B>,
    conf: &EtaConflation<B>,
) -> Result<ChainMap<B>> {
    let ce = cone_eta(cat, v)?.complex;
    let (x, z) = (conf.pair.x(), conf.pair.z());
    if g.target() != &ce || g.source() != x {
        return Err(Error::objects("g must map the start of the inflation to cone(η_V)"));
    }
    let rows = |n: i64| [cat.shift_obj(&v.obj(cat, n + 1), 1), v.obj(cat, n)];
    let g1 = |n: i64| cat.block_entry(&g.comp(cat, n), &rows(n), &[x.obj(cat, n)], 0, 0);
    let g2 = |n: i64| cat.block_entry(&g.comp(cat, n), &rows(n), &[x.obj(cat, n)], 1, 0);
    let mut comps = Vec::new();
    for n in degrees(conf.standard.complex.span()) {
        let cols = [z.obj(cat, n), x.obj(cat, n)];
        let ul = cat.compose(&cat.shift_mor(&g2(n + 1), 1), &conf.alpha.comp(cat, n + 1))?;
        let (a, b) = (g1(n), g2(n));
        comps.push((
            n,
            cat.block(&rows(n), &cols, &mut |r, c| match (r, c) {
                (0, 0) => Some(ul.clone()),
                (0, 1) => Some(a.clone()),
                (1, 1) => Some(b.clone()),
                _ => None,
            })?,
        ));
    }
    let standard = ChainMap::raw(cat, conf.standard.complex.clone(), ce, comps)?;
    let ext = standard.compose(cat, &conf.to_standard)?;
    if !ext.validate(cat) || ext.compose(cat, &conf.pair.i)? != *g {
        return Err(Error::NotNormalized("injective extension failed to validate".into()));
    }
    Ok(ext)
}

/// `X →(0 1)ᵗ cone(η_X) →(1 0) X(1)[1]`, recognized as an η-conflation.
pub fn env_inflation<B: BaseCategory>(cat: &B, x: &Complex<B>) -> Result<EtaConflation<B>> {
    let k = cone_eta(cat, x)?;
    is_eta_conflation(cat, &k.inj, &k.proj)?
        .ok_or_else(|| Error::NotNormalized("envelope of X was not recognized".into()))
}

/// `X[−1](−1) → cone(η_{X[−1](−1)}) →(1 0) X`, recognized as an η-conflation.
pub fn cover_deflation<B: BaseCategory>(cat: &B, x: &Complex<B>) -> Result<EtaConflation<B>> {
    let w = x.shift(cat, -1).twist(cat, -1);
    let k = cone_eta(cat, &w)?;
    let proj = k.proj.retarget(cat, k.complex.clone(), x.clone())?;
    is_eta_conflation(cat, &k.inj, &proj)?.ok_or_else(|| Error::NotNormalized("cover of X was not recognized".into()))
}
