//! Constructive checks of the exact-category axioms for η-conflations.
//!
//! Each check builds the witness factorization explicitly, validates it, and
//! independently asks the recognizer about the resulting pair.

use super::conflation::{is_eta_conflation, standard_conflation};
use crate::base::BaseCategory;
use crate::complex::{cone, degrees, eta_map, hull, is_chainwise_split, ChainMap, Complex};
use crate::error::Result;

/// `⊕ maps: A → ⊕ targets`, stacked vertically.
pub fn column<B: BaseCategory>(cat: &B, maps: &[&ChainMap<B>]) -> Result<ChainMap<B>> {
    let src = maps[0].source().clone();
    let tgt = maps[1..].iter().try_fold(maps[0].target().clone(), |acc, f| acc.direct_sum(cat, f.target()))?;
    let span = maps.iter().fold(None, |s, f| hull(s, f.span()));
    let mut comps = Vec::new();
    for n in degrees(span) {
        let rows: Vec<_> = maps.iter().map(|f| f.target().obj(cat, n)).collect();
        let cols = [src.obj(cat, n)];
        comps.push((n, cat.block(&rows, &cols, &mut |r, _| Some(maps[r].comp(cat, n)))?));
    }
    ChainMap::new(cat, src, tgt, comps)
}

/// `(maps): ⊕ sources → B`, placed side by side.
pub fn row<B: BaseCategory>(cat: &B, maps: &[&ChainMap<B>]) -> Result<ChainMap<B>> {
    let tgt = maps[0].target().clone();
    let src = maps[1..].iter().try_fold(maps[0].source().clone(), |acc, f| acc.direct_sum(cat, f.source()))?;
    let span = maps.iter().fold(None, |s, f| hull(s, f.span()));
    let mut comps = Vec::new();
    for n in degrees(span) {
        let cols: Vec<_> = maps.iter().map(|f| f.source().obj(cat, n)).collect();
        let rows = [tgt.obj(cat, n)];
        comps.push((n, cat.block(&rows, &cols, &mut |_, c| Some(maps[c].comp(cat, n)))?));
    }
    ChainMap::new(cat, src, tgt, comps)
}

/// `diag(f, g): A ⊕ B → C ⊕ D`.
pub fn diagonal<B: BaseCategory>(cat: &B, f: &ChainMap<B>, g: &ChainMap<B>) -> Result<ChainMap<B>> {
    let src = f.source().direct_sum(cat, g.source())?;
    let tgt = f.target().direct_sum(cat, g.target())?;
    let mut comps = Vec::new();
    for n in degrees(hull(f.span(), g.span())) {
        let rows = [f.target().obj(cat, n), g.target().obj(cat, n)];
        let cols = [f.source().obj(cat, n), g.source().obj(cat, n)];
        let (a, b) = (f.comp(cat, n), g.comp(cat, n));
        comps.push((
            n,
            cat.block(&rows, &cols, &mut |r, c| match (r, c) {
                (0, 0) => Some(a.clone()),
                (1, 1) => Some(b.clone()),
                _ => None,
            })?,
        ));
    }
    ChainMap::new(cat, src, tgt, comps)
}

/// A chain map `source → target` assembled from blocks, where the terms
/// split as `rows(n)` and `cols(n)`.
fn assemble<B: BaseCategory>(
    cat: &B,
    source: &Complex<B>,
    target: &Complex<B>,
    rows: impl Fn(i64) -> Vec<B::Obj>,
    cols: impl Fn(i64) -> Vec<B::Obj>,
    entry: impl Fn(i64, usize, usize) -> Option<B::Mor>,
) -> Result<ChainMap<B>> {
    let mut comps = Vec::new();
    for n in degrees(hull(source.span(), target.span())) {
        comps.push((n, cat.block(&rows(n), &cols(n), &mut |r, c| entry(n, r, c))?));
    }
    ChainMap::new(cat, source.clone(), target.clone(), comps)
}

/// (Ex0): `0 → X →1 X` and `X →1 X → 0` are η-conflations.
pub fn check_ex0<B: BaseCategory>(cat: &B, x: &Complex<B>) -> Result<bool> {
    let id = ChainMap::identity(cat, x);
    let zero = Complex::zero();
    let a = is_eta_conflation(cat, &ChainMap::zero(&zero, x), &id)?;
    let b = is_eta_conflation(cat, &id, &ChainMap::zero(x, &zero))?;
    Ok(a.is_some_and(|c| c.alpha.is_zero()) && b.is_some_and(|c| c.alpha.is_zero()))
}

/// (Ex1): for `Y = cone(η_X α) → Z` and `W = cone(η_V β) → Y` with
/// `β = (β_1, β_2): Y[−1] → V(1)`, the composite `W → Z` is an η-deflation:
/// `W = cone((f; g_1))` over `cone(g_2)` with witness `(α; β_1)`.
pub fn check_ex1<B: BaseCategory>(cat: &B, alpha: &ChainMap<B>, beta: &ChainMap<B>) -> Result<bool> {
    let c1 = standard_conflation(cat, alpha)?;
    let c2 = standard_conflation(cat, beta)?;
    let (x, y, z) = (c1.pair.x(), c1.pair.y(), c1.pair.z());
    let v = c2.pair.x();
    if c2.pair.z() != y {
        return Ok(false);
    }
    let f = c1.h_tilde(cat)?;
    let g = c2.h_tilde(cat)?;
    let z1 = z.shift(cat, -1);
    let x1 = x.shift(cat, -1);
    let cols = |n: i64| vec![z.obj(cat, n - 1), x.obj(cat, n - 1)];
    let g2 = assemble(
        cat,
        &x1,
        v,
        |n| vec![v.obj(cat, n)],
        |n| vec![x.obj(cat, n - 1)],
        |n, _, _| Some(cat.block_entry(&g.comp(cat, n), &[v.obj(cat, n)], &cols(n), 0, 1)),
    )?;
    let k = cone(cat, &g2)?;
    let k1 = k.complex.twist(cat, 1);
    let fg1 = assemble(
        cat,
        &z1,
        &k.complex,
        |n| vec![x.obj(cat, n), v.obj(cat, n)],
        |n| vec![z.obj(cat, n - 1)],
        |n, r, _| {
            Some(if r == 0 {
                f.comp(cat, n)
            } else {
                cat.block_entry(&g.comp(cat, n), &[v.obj(cat, n)], &cols(n), 0, 0)
            })
        },
    )?;
    let rows1 = |n: i64| vec![cat.shift_obj(&x.obj(cat, n), 1), cat.shift_obj(&v.obj(cat, n), 1)];
    let witness = assemble(
        cat,
        &z1,
        &k1,
        rows1,
        |n| vec![z.obj(cat, n - 1)],
        |n, r, _| {
            let v1 = [cat.shift_obj(&v.obj(cat, n), 1)];
            Some(if r == 0 { alpha.comp(cat, n) } else { cat.block_entry(&beta.comp(cat, n), &v1, &cols(n), 0, 0) })
        },
    )?;
    let outer = cone(cat, &fg1)?;
    let composite = c1.pair.p.compose(cat, &c2.pair.p)?;
    let ok = fg1.validate(cat)
        && witness.validate(cat)
        && eta_map(cat, &k.complex).compose(cat, &witness)? == fg1
        && &outer.complex == c2.pair.y()
        && outer.proj.components() == composite.components()
        && is_eta_conflation(cat, &outer.inj, &composite.retarget(cat, outer.complex.clone(), z.clone())?)?.is_some();
    Ok(ok)
}

/// (Ex1)ᵒᵖ: for `X → Y = cone(η_X α)` and `Y → W = cone(η_Y β)` with
/// `β: U[−1] → Y(1)`, the composite `X → W` is an η-inflation with cokernel
/// `C = cone(g_Z)`, invariant `(g_X, f)` and witness `(β_X, α)`.
pub fn check_ex1_op<B: BaseCategory>(cat: &B, alpha: &ChainMap<B>, beta: &ChainMap<B>) -> Result<bool> {
    let c1 = standard_conflation(cat, alpha)?;
    let c2 = standard_conflation(cat, beta)?;
    let (x, y, z) = (c1.pair.x(), c1.pair.y(), c1.pair.z());
    if c2.pair.x() != y {
        return Ok(false);
    }
    let u1 = beta.source();
    let f = c1.h_tilde(cat)?;
    let g = c2.h_tilde(cat)?;
    let rows = |n: i64| vec![z.obj(cat, n), x.obj(cat, n)];
    let rows1 = |n: i64| vec![cat.shift_obj(&z.obj(cat, n), 1), cat.shift_obj(&x.obj(cat, n), 1)];
    let cols = |n: i64| vec![u1.obj(cat, n)];
    let g_z = assemble(
        cat,
        u1,
        z,
        |n| vec![z.obj(cat, n)],
        cols,
        |n, _, _| Some(cat.block_entry(&g.comp(cat, n), &rows(n), &cols(n), 0, 0)),
    )?;
    let c1m = cone(cat, &g_z)?.complex.shift(cat, -1);
    let split = |n: i64| vec![u1.obj(cat, n), z.obj(cat, n - 1)];
    let h = assemble(
        cat,
        &c1m,
        x,
        |n| vec![x.obj(cat, n)],
        split,
        |n, _, c| {
            Some(if c == 0 { cat.block_entry(&g.comp(cat, n), &rows(n), &cols(n), 1, 0) } else { f.comp(cat, n) })
        },
    )?;
    let witness = assemble(
        cat,
        &c1m,
        &x.twist(cat, 1),
        |n| vec![cat.shift_obj(&x.obj(cat, n), 1)],
        split,
        |n, _, c| {
            Some(if c == 0 {
                cat.block_entry(&beta.comp(cat, n), &rows1(n), &cols(n), 1, 0)
            } else {
                alpha.comp(cat, n)
            })
        },
    )?;
    let outer = cone(cat, &h)?;
    let composite = c2.pair.i.compose(cat, &c1.pair.i)?;
    let ok = h.validate(cat)
        && witness.validate(cat)
        && eta_map(cat, x).compose(cat, &witness)? == h
        && &outer.complex == c2.pair.y()
        && outer.inj.components() == composite.components()
        && is_eta_conflation(cat, &composite, &outer.proj)?.is_some();
    Ok(ok)
}

/// (Ex2): the pullback of `cone(f) → Z` along `k: Z' → Z` is
/// `cone(f k[−1]) → Z'` with comparison `diag(k, 1)` and witness `α k[−1]`.
pub fn check_ex2<B: BaseCategory>(cat: &B, alpha: &ChainMap<B>, k: &ChainMap<B>) -> Result<bool> {
    let c = standard_conflation(cat, alpha)?;
    let (x, y, z) = (c.pair.x(), c.pair.y(), c.pair.z());
    if k.target() != z {
        return Ok(false);
    }
    let f = c.h_tilde(cat)?;
    let k1 = k.shift(cat, -1);
    let fk = f.compose(cat, &k1)?;
    let witness = alpha.compose(cat, &k1)?;
    let pb = cone(cat, &fk)?;
    let zp = k.source();
    let proj = pb.proj.retarget(cat, pb.complex.clone(), zp.clone())?;
    let cmp = diagonal(cat, k, &ChainMap::identity(cat, x))?.retarget(cat, pb.complex.clone(), y.clone())?;
    let square = c.pair.p.compose(cat, &cmp)? == k.compose(cat, &proj)?;
    // P → Y ⊕ Z' → Z is chainwise split exact
    let into = column(cat, &[&cmp, &proj])?;
    let out = row(cat, &[&c.pair.p, &k.neg(cat)])?;
    let ok = square
        && eta_map(cat, x).compose(cat, &witness)? == fk
        && is_chainwise_split(cat, &into, &out)?
        && is_eta_conflation(cat, &pb.inj, &proj)?.is_some();
    Ok(ok)
}

/// (Ex2)ᵒᵖ: the pushout of `X → cone(f)` along `k: X → X'` is
/// `X' → cone(k f)` with comparison `diag(1, k)` and witness `k(1) α`.
pub fn check_ex2_op<B: BaseCategory>(cat: &B, alpha: &ChainMap<B>, k: &ChainMap<B>) -> Result<bool> {
    let c = standard_conflation(cat, alpha)?;
    let (x, y, z) = (c.pair.x(), c.pair.y(), c.pair.z());
    if k.source() != x {
        return Ok(false);
    }
    let f = c.h_tilde(cat)?;
    let kf = k.compose(cat, &f)?;
    let witness = k.twist(cat, 1).compose(cat, alpha)?;
    let po = cone(cat, &kf)?;
    let cmp = diagonal(cat, &ChainMap::identity(cat, z), k)?.retarget(cat, y.clone(), po.complex.clone())?;
    let square = cmp.compose(cat, &c.pair.i)? == po.inj.compose(cat, k)?;
    // X → Y ⊕ X' → Q is chainwise split exact
    let into = column(cat, &[&c.pair.i, &k.neg(cat)])?;
    let out = row(cat, &[&cmp, &po.inj])?;
    let ok = square
        && eta_map(cat, k.target()).compose(cat, &witness)? == kf
        && is_chainwise_split(cat, &into, &out)?
        && is_eta_conflation(cat, &po.inj, &po.proj)?.is_some();
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ScalarEta;
    use crate::linalg::{CoeffRing, RingMatrix};

    fn m(c: &ScalarEta, v: i64) -> RingMatrix {
        RingMatrix::from_i64(c.ring, 1, 1, &[v])
    }

    fn setup() -> (ScalarEta, Complex<ScalarEta>, ChainMap<ScalarEta>) {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, m(&c, 2))]).unwrap();
        let z = Complex::new(&c, [(-1, 1), (0, 1)], [(-1, m(&c, 2))]).unwrap();
        let alpha = ChainMap::new(&c, z.shift(&c, -1), x.clone(), [(0, m(&c, 1)), (1, m(&c, 3))]).unwrap();
        (c, x, alpha)
    }

    #[test]
    fn ex0_on_a_two_term_complex() {
        let (c, x, _) = setup();
        assert!(check_ex0(&c, &x).unwrap());
        assert!(check_ex0(&c, &Complex::zero()).unwrap());
    }

    #[test]
    fn ex1_with_identity_witnesses() {
        let (c, _, alpha) = setup();
        let y = standard_conflation(&c, &alpha).unwrap().pair.y().clone();
        let beta = ChainMap::identity(&c, &y.shift(&c, -1));
        assert!(check_ex1(&c, &alpha, &beta).unwrap());
        let u = Complex::stalk(&c, 0, 1);
        let beta = ChainMap::zero(&u.shift(&c, -1), &y);
        assert!(check_ex1_op(&c, &alpha, &beta).unwrap());
    }

    #[test]
    fn ex2_along_identities() {
        let (c, x, alpha) = setup();
        let z = standard_conflation(&c, &alpha).unwrap().pair.z().clone();
        assert!(check_ex2(&c, &alpha, &ChainMap::identity(&c, &z)).unwrap());
        assert!(check_ex2_op(&c, &alpha, &ChainMap::identity(&c, &x)).unwrap());
        assert!(check_ex2_op(&c, &alpha, &ChainMap::zero(&x, &Complex::zero())).unwrap());
    }
}
