use std::collections::BTreeMap;

use super::lifts::env_inflation;
use crate::base::BaseCategory;
use crate::complex::{degrees, eta_map, extend_along, homotopic, ChainMap, HomotopyCertificate};
use crate::equations::MorphismSystem;
use crate::error::{Error, Result};

fn same_ends<B: BaseCategory>(f: &ChainMap<B>, g: &ChainMap<B>) -> Result<()> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::objects("maps have different endpoints"));
    }
    Ok(())
}

fn eta_span<B: BaseCategory>(f: &ChainMap<B>) -> Option<(i64, i64)> {
    f.span().map(|(lo, hi)| (lo - 1, hi + 1))
}

/// The system `(f^n − g^n) η_{X^n} = s^{n+1} d_X^n(1) + d_Y^{n−1} s^n` in
/// unknowns `s^n: X^n(1) → Y^{n−1}`, with the degree of each unknown.
pub fn eta_homotopy_system<'c, B: BaseCategory>(
    cat: &'c B,
    f: &ChainMap<B>,
    g: &ChainMap<B>,
) -> Result<(MorphismSystem<'c, B>, Vec<i64>)> {
    same_ends(f, g)?;
    let (x, y) = (f.source(), f.target());
    let mut sys = MorphismSystem::new(cat);
    let mut slots = BTreeMap::new();
    let mut degs = Vec::new();
    for n in degrees(eta_span(f)) {
        let (a, b) = (cat.shift_obj(&x.obj(cat, n), 1), y.obj(cat, n - 1));
        if cat.hom_dim(&a, &b) > 0 {
            slots.insert(n, sys.unknown(a, b));
            degs.push(n);
        }
    }
    for n in degrees(eta_span(f)) {
        let xn = x.obj(cat, n);
        let (a, b) = (cat.shift_obj(&xn, 1), y.obj(cat, n));
        if cat.hom_dim(&a, &b) == 0 {
            continue;
        }
        let lhs = cat.compose(&cat.sub(&f.comp(cat, n), &g.comp(cat, n))?, &cat.eta(&xn))?;
        let dx1 = cat.shift_mor(&x.diff(cat, n), 1);
        let dy = y.diff(cat, n - 1);
        let (next, here) = (slots.get(&(n + 1)).copied(), slots.get(&n).copied());
        sys.equation(a, b, next.into_iter().chain(here).collect(), move |v| {
            let mut acc = lhs.clone();
            if let Some(u) = next {
                acc = cat.sub(&acc, &cat.compose(&v[u], &dx1)?)?;
            }
            if let Some(u) = here {
                acc = cat.sub(&acc, &cat.compose(&dy, &v[u])?)?;
            }
            Ok(acc)
        });
    }
    Ok((sys, degs))
}

fn certificate<B: BaseCategory>(cat: &B, degs: &[i64], values: Vec<B::Mor>) -> HomotopyCertificate<B> {
    let s = degs.iter().copied().zip(values).filter(|(_, m)| !cat.is_zero_mor(m)).collect();
    HomotopyCertificate { eta: true, s }
}

/// An η-homotopy `f ∼_η g`, if one exists.
pub fn eta_homotopic<B: BaseCategory>(
    cat: &B,
    f: &ChainMap<B>,
    g: &ChainMap<B>,
) -> Result<Option<HomotopyCertificate<B>>> {
    if f == g {
        return Ok(Some(HomotopyCertificate { eta: true, s: BTreeMap::new() }));
    }
    let (sys, degs) = eta_homotopy_system(cat, f, g)?;
    Ok(sys.solve()?.map(|v| certificate(cat, &degs, v)))
}

/// Re-checks an η-certificate against its defining equation in every degree.
pub fn check_eta_homotopy<B: BaseCategory>(
    cat: &B,
    f: &ChainMap<B>,
    g: &ChainMap<B>,
    cert: &HomotopyCertificate<B>,
) -> Result<bool> {
    same_ends(f, g)?;
    if !cert.eta {
        return Ok(false);
    }
    let (x, y) = (f.source(), f.target());
    for (n, m) in &cert.s {
        if cat.source(m) != cat.shift_obj(&x.obj(cat, *n), 1) || cat.target(m) != y.obj(cat, n - 1) {
            return Ok(false);
        }
    }
    let s = |n: i64| {
        cert.s.get(&n).cloned().unwrap_or_else(|| cat.zero_mor(&cat.shift_obj(&x.obj(cat, n), 1), &y.obj(cat, n - 1)))
    };
    for n in degrees(eta_span(f)) {
        let xn = x.obj(cat, n);
        let lhs = cat.compose(&cat.sub(&f.comp(cat, n), &g.comp(cat, n))?, &cat.eta(&xn))?;
        let rhs = cat.add(
            &cat.compose(&s(n + 1), &cat.shift_mor(&x.diff(cat, n), 1))?,
            &cat.compose(&y.diff(cat, n - 1), &s(n))?,
        )?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality in the stable category: `f − g` is η-null-homotopic.
pub fn stable_equal<B: BaseCategory>(cat: &B, f: &ChainMap<B>, g: &ChainMap<B>) -> Result<bool> {
    Ok(eta_homotopic(cat, f, g)?.is_some())
}

/// A classical homotopy `f η_X ≃ g η_X` between the maps `X(1) → Y`.
pub fn homotopic_after_eta<B: BaseCategory>(
    cat: &B,
    f: &ChainMap<B>,
    g: &ChainMap<B>,
) -> Result<Option<HomotopyCertificate<B>>> {
    same_ends(f, g)?;
    let eta = eta_map(cat, f.source());
    homotopic(cat, &f.compose(cat, &eta)?, &g.compose(cat, &eta)?)
}

/// Factors `f: X → Y` through the envelope `X → cone(η_X)`, if possible.
///
/// An extension `E = (s^{•+1}, f): cone(η_X) → Y` is exactly an η-null
/// homotopy of `f`; the certificate is read off its first block column.
pub fn factor_through_envelope<B: BaseCategory>(
    cat: &B,
    f: &ChainMap<B>,
) -> Result<Option<(ChainMap<B>, HomotopyCertificate<B>)>> {
    let x = f.source();
    let env = env_inflation(cat, x)?;
    let Some(ext) = extend_along(cat, &env.pair.i, f)? else { return Ok(None) };
    let mut s = BTreeMap::new();
    for (&n, e) in ext.components() {
        let cols = [cat.shift_obj(&x.obj(cat, n + 1), 1), x.obj(cat, n)];
        let block = cat.block_entry(e, &[f.target().obj(cat, n)], &cols, 0, 0);
        if !cat.is_zero_mor(&block) {
            s.insert(n + 1, block);
        }
    }
    Ok(Some((ext, HomotopyCertificate { eta: true, s })))
}
