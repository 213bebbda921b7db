//! Seeded random instances. Every generator takes the RNG explicitly so a
//! trial is reproducible from its seed alone.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};

use crate::base::{BaseCategory, EtaPower, Graded, GradedMorphism, GradedObject, ScalarEta};
use crate::bridge::{
    plain, psi_inv, psi_inv_mor, Bidegree, Convention, DeltaComplex, DeltaMap, Family, GMorphism, GSystem,
};
use crate::complex::{degrees, random_chain_map, standard_exact_pair, ChainMap, Complex};
use crate::equations::MorphismSystem;
use crate::error::Result;
use crate::frobenius::standard_conflation;
use crate::linalg::{CoeffRing, RingMatrix, Scalar};

/// A ring element drawn uniformly over finite rings and from a small window
/// over ℤ and ℚ (with denominators up to 2 over ℚ).
pub fn random_scalar<R: Rng + ?Sized>(ring: CoeffRing, rng: &mut R) -> Scalar {
    match ring {
        CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => Scalar::int(rng.gen_range(0..m)),
        CoeffRing::Integers => Scalar::int(rng.gen_range(-3..=3)),
        CoeffRing::Rationals => ring.canon(Scalar::frac(rng.gen_range(-3..=3), rng.gen_range(1..=2))),
    }
}

pub fn random_matrix<R: Rng + ?Sized>(ring: CoeffRing, rows: usize, cols: usize, rng: &mut R) -> RingMatrix {
    let entries = (0..rows * cols).map(|_| random_scalar(ring, rng)).collect();
    RingMatrix::new(ring, rows, cols, entries).expect("canonical entries")
}

/// Matrix with roughly `density` of its entries nonzero.
pub fn sparse_matrix<R: Rng + ?Sized>(
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    density: f64,
    rng: &mut R,
) -> RingMatrix {
    let entries =
        (0..rows * cols).map(|_| if rng.gen_bool(density) { random_scalar(ring, rng) } else { Scalar::ZERO }).collect();
    RingMatrix::new(ring, rows, cols, entries).expect("canonical entries")
}

/// Graded object supported in `0..span` with ranks up to `max_rank`.
pub fn random_graded_object<R: Rng + ?Sized>(rng: &mut R, span: i64, max_rank: usize) -> GradedObject {
    GradedObject::new((0..span).map(|j| (j, rng.gen_range(0..=max_rank))))
}

/// Random morphism between the given objects; every basis slot is filled
/// with probability one half.
pub fn random_graded_between<R: Rng + ?Sized>(
    c: &Graded,
    rng: &mut R,
    x: &GradedObject,
    y: &GradedObject,
) -> GradedMorphism {
    let coords: Vec<Scalar> = (0..c.hom_dim(x, y))
        .map(|_| if rng.gen_bool(0.5) { random_scalar(c.ring, rng) } else { Scalar::ZERO })
        .collect();
    c.unflatten(x, y, &coords)
}

pub fn random_graded_morphism<R: Rng + ?Sized>(c: &Graded, rng: &mut R, span: i64, max_rank: usize) -> GradedMorphism {
    let x = random_graded_object(rng, span, max_rank);
    random_graded_morphism_from(c, rng, &x, max_rank)
}

/// Random morphism out of `x` into a fresh target with the same span.
pub fn random_graded_morphism_from<R: Rng + ?Sized>(
    c: &Graded,
    rng: &mut R,
    x: &GradedObject,
    max_rank: usize,
) -> GradedMorphism {
    let span = x.degrees().last().map_or(1, |d| d + 1).max(1);
    let y = random_graded_object(rng, span, max_rank);
    random_graded_between(c, rng, x, &y)
}

/// Random morphism in a scalar-η category.
pub fn random_scalar_between<R: Rng + ?Sized>(c: &ScalarEta, rng: &mut R, x: usize, y: usize) -> RingMatrix {
    random_matrix(c.ring, y, x, rng)
}

/// Base categories the generators can draw from.
pub trait Sampler: BaseCategory {
    /// A random object with ranks up to `max_rank`.
    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize) -> Self::Obj;

    /// Each coordinate of `Hom(x, y)` is filled with probability one half.
    fn random_mor(&self, rng: &mut dyn RngCore, x: &Self::Obj, y: &Self::Obj) -> Self::Mor {
        let ring = self.ring();
        let coords: Vec<Scalar> = (0..self.hom_dim(x, y))
            .map(|_| if rng.gen_bool(0.5) { random_scalar(ring, rng) } else { Scalar::ZERO })
            .collect();
        self.unflatten(x, y, &coords)
    }
}

impl Sampler for ScalarEta {
    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize) -> usize {
        rng.gen_range(0..=max_rank)
    }
}

impl Sampler for Graded {
    /// Supported in degrees `0..2`.
    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize) -> GradedObject {
        random_graded_object(rng, 2, max_rank.min(2))
    }
}

impl<B: Sampler> Sampler for EtaPower<B> {
    fn random_obj(&self, rng: &mut dyn RngCore, max_rank: usize) -> B::Obj {
        self.inner.random_obj(rng, max_rank)
    }
}

/// A random complex in degrees `0..len`. Each differential is drawn from the
/// maps killing the previous one, so `d ∘ d = 0` holds by construction.
pub fn random_complex<B: Sampler>(cat: &B, rng: &mut dyn RngCore, len: usize, max_rank: usize) -> Result<Complex<B>> {
    let objs: Vec<B::Obj> = (0..len).map(|_| cat.random_obj(rng, max_rank)).collect();
    random_complex_on(cat, rng, objs)
}

/// A random complex with the given terms in degrees `0..objs.len()`.
pub fn random_complex_on<B: Sampler>(cat: &B, rng: &mut dyn RngCore, objs: Vec<B::Obj>) -> Result<Complex<B>> {
    let len = objs.len();
    let mut diffs: Vec<B::Mor> = Vec::new();
    for n in 0..len.saturating_sub(1) {
        let (a, b) = (&objs[n], &objs[n + 1]);
        let d = match diffs.last() {
            None => cat.random_mor(rng, a, b),
            Some(prev) => {
                let mut sys = MorphismSystem::new(cat);
                let u = sys.unknown(a.clone(), b.clone());
                let prev = prev.clone();
                sys.equation(cat.source(&prev), b.clone(), vec![u], move |v| cat.compose(&v[u], &prev));
                sys.sample(rng)?.expect("zero solves").remove(u)
            }
        };
        diffs.push(d);
    }
    Complex::new(
        cat,
        objs.into_iter().enumerate().map(|(n, x)| (n as i64, x)),
        diffs.into_iter().enumerate().map(|(n, d)| (n as i64, d)),
    )
}

/// `t d + d t` for a random family `t^n: X^n → Y^{n−1}`.
pub fn random_null_homotopic<B: Sampler>(
    cat: &B,
    rng: &mut dyn RngCore,
    x: &Complex<B>,
    y: &Complex<B>,
) -> Result<ChainMap<B>> {
    let span = crate::complex::hull(x.span(), y.span().map(|(lo, hi)| (lo + 1, hi + 1)));
    let t: BTreeMap<i64, B::Mor> =
        degrees(span).map(|n| (n, cat.random_mor(rng, &x.obj(cat, n), &y.obj(cat, n - 1)))).collect();
    let get = |n: i64| t.get(&n).cloned().unwrap_or_else(|| cat.zero_mor(&x.obj(cat, n), &y.obj(cat, n - 1)));
    let mut comps = Vec::new();
    for n in degrees(crate::complex::hull(x.span(), y.span())) {
        let a = cat.compose(&get(n + 1), &x.diff(cat, n))?;
        let b = cat.compose(&y.diff(cat, n - 1), &get(n))?;
        comps.push((n, cat.add(&a, &b)?));
    }
    ChainMap::new(cat, x.clone(), y.clone(), comps)
}

/// Conjugates the middle of a pair `Z ⊕ X` by `φ = [[1, b], [a, 1 + ab]]`
/// (a product of two unitriangular blocks) with `a, b` random per degree.
/// Returns `(i', p')` with `i' = φ i`, `p' = p φ^{−1}`.
pub fn disguise<B: Sampler>(
    cat: &B,
    rng: &mut dyn RngCore,
    i: &ChainMap<B>,
    p: &ChainMap<B>,
) -> Result<(ChainMap<B>, ChainMap<B>)> {
    let (x, y, z) = (i.source(), i.target(), p.target());
    let span = y.span();
    let mut phi = BTreeMap::new();
    let mut inv = BTreeMap::new();
    for n in degrees(span) {
        let parts = [z.obj(cat, n), x.obj(cat, n)];
        let a = cat.random_mor(rng, &parts[0], &parts[1]);
        let b = cat.random_mor(rng, &parts[1], &parts[0]);
        let id = |k: usize| cat.identity(&parts[k]);
        let l = |s: &B::Mor| {
            cat.block(&parts, &parts, &mut |r, c| match (r, c) {
                (0, 0) => Some(id(0)),
                (1, 1) => Some(id(1)),
                (1, 0) => Some(s.clone()),
                _ => None,
            })
        };
        let u = |s: &B::Mor| {
            cat.block(&parts, &parts, &mut |r, c| match (r, c) {
                (0, 0) => Some(id(0)),
                (1, 1) => Some(id(1)),
                (0, 1) => Some(s.clone()),
                _ => None,
            })
        };
        phi.insert(n, cat.compose(&l(&a)?, &u(&b)?)?);
        inv.insert(n, cat.compose(&u(&cat.neg(&b))?, &l(&cat.neg(&a))?)?);
    }
    let mut objs = Vec::new();
    let mut diffs = Vec::new();
    for n in degrees(span) {
        objs.push((n, y.obj(cat, n)));
        if let (Some(f), Some(g)) = (phi.get(&(n + 1)), inv.get(&n)) {
            diffs.push((n, cat.compose(f, &cat.compose(&y.diff(cat, n), g)?)?));
        }
    }
    let y2 = Complex::new(cat, objs, diffs)?;
    let comps = |f: &ChainMap<B>, m: &BTreeMap<i64, B::Mor>, before: bool| -> Result<Vec<(i64, B::Mor)>> {
        degrees(span)
            .map(|n| {
                let c =
                    if before { cat.compose(&f.comp(cat, n), &m[&n])? } else { cat.compose(&m[&n], &f.comp(cat, n))? };
                Ok((n, c))
            })
            .collect()
    };
    let i2 = ChainMap::new(cat, x.clone(), y2.clone(), comps(i, &phi, false)?)?;
    let p2 = ChainMap::new(cat, y2, z.clone(), comps(p, &inv, true)?)?;
    Ok((i2, p2))
}

/// Shape of generated complexes.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub len: usize,
    pub max_rank: usize,
}

/// A random η-conflation `X → Y → Z` built from a random witness
/// `α: Z[−1] → X(1)` and then disguised.
pub fn random_eta_conflation<B: Sampler>(
    cat: &B,
    rng: &mut dyn RngCore,
    shape: Shape,
) -> Result<(ChainMap<B>, ChainMap<B>)> {
    let x = random_complex(cat, rng, shape.len, shape.max_rank)?;
    let z = random_complex(cat, rng, shape.len, shape.max_rank)?;
    let alpha = random_chain_map(cat, &z.shift(cat, -1), &x.twist(cat, 1), rng)?;
    let conf = standard_conflation(cat, &alpha)?;
    disguise(cat, rng, &conf.pair.i, &conf.pair.p)
}

/// A random chainwise-split pair with invariant a random `h: Z[−1] → X`.
pub fn random_split_pair<B: Sampler>(
    cat: &B,
    rng: &mut dyn RngCore,
    shape: Shape,
) -> Result<(ChainMap<B>, ChainMap<B>)> {
    let x = random_complex(cat, rng, shape.len, shape.max_rank)?;
    let z = random_complex(cat, rng, shape.len, shape.max_rank)?;
    let h = random_chain_map(cat, &z.shift(cat, -1), &x, rng)?;
    let pair = standard_exact_pair(cat, &h)?;
    disguise(cat, rng, &pair.i, &pair.p)
}

/// What the columns of a generated column presentation look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Columns {
    /// Any complex of free modules.
    Arbitrary,
    /// Homotopy equivalent to free modules in degree 0: a stalk plus
    /// contractible pieces, in a random basis. Homotopy classes of maps of
    /// nonzero degree between such columns vanish, so extensions and
    /// null-homotopy completions never obstruct.
    DegreeZero,
}

/// A random invertible matrix with its inverse, as a product of elementary
/// row operations.
pub fn random_invertible(ring: CoeffRing, n: usize, rng: &mut dyn RngCore) -> (RingMatrix, RingMatrix) {
    let mut p = RingMatrix::identity(ring, n);
    let mut q = RingMatrix::identity(ring, n);
    if n < 2 {
        return (p, q);
    }
    // over the infinite rings keep entries small: a few ±1 operations
    let small = matches!(ring, CoeffRing::Integers | CoeffRing::Rationals);
    for _ in 0..if small { n } else { 2 * n } {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let c = if small { Scalar::int(if rng.gen_bool(0.5) { 1 } else { -1 }) } else { random_scalar(ring, rng) };
        let mut e = RingMatrix::identity(ring, n);
        e.set(a, b, c);
        let mut f = RingMatrix::identity(ring, n);
        f.set(a, b, ring.neg(c));
        p = e.mat_mul(&p).expect("square");
        q = q.mat_mul(&f).expect("square");
    }
    (p, q)
}

/// One column in `a`-degrees `0..len`.
pub fn random_column(
    ring: CoeffRing,
    rng: &mut dyn RngCore,
    shape: Shape,
    kind: Columns,
) -> Result<Complex<ScalarEta>> {
    let c = plain(ring);
    if kind == Columns::Arbitrary || shape.len == 0 {
        return random_complex(&c, rng, shape.len, shape.max_rank);
    }
    // pieces F --1--> F in degrees (a, a+1), plus a stalk in degree 0
    let pieces: Vec<usize> = (0..shape.len - 1).map(|_| rng.gen_range(0..=shape.max_rank.div_ceil(2))).collect();
    let stalk = rng.gen_range(0..=shape.max_rank);
    let ranks: Vec<usize> = (0..shape.len)
        .map(|a| {
            pieces.get(a).copied().unwrap_or(0)
                + a.checked_sub(1).map_or(0, |b| pieces[b])
                + if a == 0 { stalk } else { 0 }
        })
        .collect();
    let basis: Vec<(RingMatrix, RingMatrix)> = ranks.iter().map(|&r| random_invertible(ring, r, rng)).collect();
    let mut diffs = Vec::new();
    for a in 0..shape.len - 1 {
        // the piece starting at a sits first in degree a+1 and last in degree a
        let mut d = RingMatrix::zeros(ring, ranks[a + 1], ranks[a]);
        let off = ranks[a] - pieces[a];
        for k in 0..pieces[a] {
            d.set(k, off + k, Scalar::ONE);
        }
        diffs.push((a as i64, basis[a + 1].0.mat_mul(&d)?.mat_mul(&basis[a].1)?));
    }
    Complex::new(&c, ranks.into_iter().enumerate().map(|(a, r)| (a as i64, r)), diffs)
}

/// A random column presentation: `width` columns, each a random complex in
/// `a`-degrees `0..len`, joined by chain maps `δ_1` drawn together with a
/// certificate `h` so that `δ_1 δ_1 = δ_0 h + h δ_0`.
pub fn random_delta(
    ring: CoeffRing,
    rng: &mut dyn RngCore,
    shape: Shape,
    width: usize,
    kind: Columns,
) -> Result<DeltaComplex> {
    let c = plain(ring);
    let cols: Vec<Complex<ScalarEta>> =
        (0..width).map(|_| random_column(ring, rng, shape, kind)).collect::<Result<_>>()?;
    let mut d1: Vec<ChainMap<ScalarEta>> = Vec::new();
    let mut h: Vec<(Bidegree, RingMatrix)> = Vec::new();
    for j in 0..width.saturating_sub(1) {
        let (src, dst) = (&cols[j], &cols[j + 1]);
        let Some(prev) = j.checked_sub(1).map(|p| (&cols[p], &d1[p])) else {
            d1.push(random_chain_map(&c, src, dst, rng)?);
            continue;
        };
        let (back, before) = prev;
        let mut sys = MorphismSystem::new(&c);
        let u: Vec<usize> = (0..shape.len as i64).map(|a| sys.unknown(src.obj(&c, a), dst.obj(&c, a))).collect();
        let hs: Vec<usize> = (0..shape.len as i64).map(|a| sys.unknown(back.obj(&c, a), dst.obj(&c, a - 1))).collect();
        for a in 0..shape.len as i64 {
            let ai = a as usize;
            if a + 1 < shape.len as i64 {
                let (dx, dy) = (src.diff(&c, a), dst.diff(&c, a));
                let (here, next) = (u[ai], u[ai + 1]);
                sys.equation(src.obj(&c, a), dst.obj(&c, a + 1), vec![here, next], move |v| {
                    v[next].mat_mul(&dx)?.try_sub(&dy.mat_mul(&v[here])?)
                });
            }
            let first = before.comp(&c, a);
            let (dz, dw) = (dst.diff(&c, a - 1), back.diff(&c, a));
            let (ua, ha, hn) = (u[ai], hs[ai], hs.get(ai + 1).copied());
            let deps = [ua, ha].into_iter().chain(hn).collect();
            sys.equation(back.obj(&c, a), dst.obj(&c, a), deps, move |v| {
                let mut acc = v[ua].mat_mul(&first)?.try_sub(&dz.mat_mul(&v[ha])?)?;
                if let Some(k) = hn {
                    acc = acc.try_sub(&v[k].mat_mul(&dw)?)?;
                }
                Ok(acc)
            });
        }
        let sol = sys.sample(rng)?.expect("zero solves");
        let comps = (0..shape.len as i64).map(|a| (a, sol[u[a as usize]].clone()));
        d1.push(ChainMap::new(&c, src.clone(), dst.clone(), comps)?);
        for a in 0..shape.len as i64 {
            h.push(((a, j as i64 - 1), sol[hs[a as usize]].clone()));
        }
    }
    let ranks = cols.iter().enumerate().flat_map(|(j, x)| x.objects().iter().map(move |(&a, &r)| ((a, j as i64), r)));
    let d0 = cols
        .iter()
        .enumerate()
        .flat_map(|(j, x)| x.differentials().iter().map(move |(&a, m)| ((a, j as i64), m.clone())));
    let d1s =
        d1.iter().enumerate().flat_map(|(j, f)| f.components().iter().map(move |(&a, m)| ((a, j as i64), m.clone())));
    DeltaComplex::new(ring, ranks.collect::<Vec<_>>(), d0.collect::<Vec<_>>(), d1s.collect::<Vec<_>>(), Some(h))
}

/// A random map commuting with `δ_0` and `δ_1` exactly.
pub fn random_delta_map(rng: &mut dyn RngCore, x: &DeltaComplex, y: &DeltaComplex) -> Result<DeltaMap> {
    let c = plain(x.ring());
    let mut sys = MorphismSystem::new(&c);
    let mut slot = BTreeMap::new();
    for (&at, &r) in x.ranks() {
        if y.rank(at) > 0 {
            slot.insert(at, sys.unknown(r, y.rank(at)));
        }
    }
    for &(a, j) in x.ranks().keys() {
        let here = slot.get(&(a, j)).copied();
        for (next, dx, dy, to) in [
            (slot.get(&(a + 1, j)).copied(), x.d0((a, j)), y.d0((a, j)), (a + 1, j)),
            (slot.get(&(a, j + 1)).copied(), x.d1((a, j)), y.d1((a, j)), (a, j + 1)),
        ] {
            if y.rank(to) == 0 {
                continue;
            }
            let zero = RingMatrix::zeros(x.ring(), y.rank(to), x.rank((a, j)));
            sys.equation(x.rank((a, j)), y.rank(to), here.into_iter().chain(next).collect(), move |v| {
                let mut acc = zero.clone();
                if let Some(u) = next {
                    acc = acc.try_add(&v[u].mat_mul(&dx)?)?;
                }
                if let Some(u) = here {
                    acc = acc.try_sub(&dy.mat_mul(&v[u])?)?;
                }
                Ok(acc)
            });
        }
    }
    let sol = sys.sample(rng)?.expect("zero solves");
    DeltaMap::new(x.clone(), y.clone(), slot.iter().map(|(&at, &u)| (at, sol[u].clone())))
}

/// A column null-homotopic map `α = δ_1 s + s δ_1 + δ_0 k + k δ_0`, with
/// `s: (a, j) → (a, j−1)` commuting with `δ_0` and `k: (a, j) → (a−1, j)`
/// arbitrary. Returns `(α, s, k)`.
pub fn random_null_map(
    rng: &mut dyn RngCore,
    x: &DeltaComplex,
    y: &DeltaComplex,
) -> Result<(DeltaMap, Family, Family)> {
    let ring = x.ring();
    let c = plain(ring);
    let mut sys = MorphismSystem::new(&c);
    let mut slot = BTreeMap::new();
    for (&(a, j), &r) in x.ranks() {
        if y.rank((a, j - 1)) > 0 {
            slot.insert((a, j), sys.unknown(r, y.rank((a, j - 1))));
        }
    }
    for &(a, j) in x.ranks().keys() {
        let to = (a + 1, j - 1);
        if y.rank(to) == 0 {
            continue;
        }
        let (here, next) = (slot.get(&(a, j)).copied(), slot.get(&(a + 1, j)).copied());
        let (dx, dy) = (x.d0((a, j)), y.d0((a, j - 1)));
        let zero = RingMatrix::zeros(ring, y.rank(to), x.rank((a, j)));
        sys.equation(x.rank((a, j)), y.rank(to), here.into_iter().chain(next).collect(), move |v| {
            let mut acc = zero.clone();
            if let Some(u) = next {
                acc = acc.try_add(&v[u].mat_mul(&dx)?)?;
            }
            if let Some(u) = here {
                acc = acc.try_sub(&dy.mat_mul(&v[u])?)?;
            }
            Ok(acc)
        });
    }
    let sol = sys.sample(rng)?.expect("zero solves");
    let s: Family = slot.iter().map(|(&at, &u)| (at, sol[u].clone())).filter(|(_, m)| !m.is_zero()).collect();
    let k: Family = x
        .ranks()
        .iter()
        .filter(|&(&(a, j), _)| y.rank((a - 1, j)) > 0)
        .map(|(&(a, j), &r)| ((a, j), random_matrix(ring, y.rank((a - 1, j)), r, rng)))
        .collect();
    let get = |fam: &Family, at: Bidegree, rows: usize| {
        fam.get(&at).cloned().unwrap_or_else(|| RingMatrix::zeros(ring, rows, x.rank(at)))
    };
    let mut comps = Vec::new();
    for &(a, j) in x.ranks().keys() {
        if y.rank((a, j)) == 0 {
            continue;
        }
        let m = y
            .d1((a, j - 1))
            .mat_mul(&get(&s, (a, j), y.rank((a, j - 1))))?
            .try_add(&get(&s, (a, j + 1), y.rank((a, j))).mat_mul(&x.d1((a, j)))?)?
            .try_add(&y.d0((a - 1, j)).mat_mul(&get(&k, (a, j), y.rank((a - 1, j))))?)?
            .try_add(&get(&k, (a + 1, j), y.rank((a, j))).mat_mul(&x.d0((a, j)))?)?;
        comps.push(((a, j), m));
    }
    Ok((DeltaMap::new(x.clone(), y.clone(), comps)?, s, k))
}

/// A random system, built as a random complex of graded modules supported in
/// `j ∈ 0..span`, read in the requested convention.
pub fn random_gsystem(
    ring: CoeffRing,
    rng: &mut dyn RngCore,
    shape: Shape,
    span: i64,
    convention: Convention,
) -> Result<GSystem> {
    let g = Graded::new(ring);
    let objs = (0..shape.len).map(|_| random_graded_object(rng, span, shape.max_rank)).collect();
    let x = GSystem::from_complex(ring, &random_complex_on(&g, rng, objs)?)?;
    match convention {
        Convention::CgrA => Ok(x),
        Convention::GA => psi_inv(&x),
    }
}

/// A random morphism between two systems in the same convention.
pub fn random_gmorphism(rng: &mut dyn RngCore, x: &GSystem, y: &GSystem) -> Result<GMorphism> {
    let ring = x.ring();
    let g = Graded::new(ring);
    let (cx, cy) = match x.convention() {
        Convention::CgrA => (x.clone(), y.clone()),
        Convention::GA => (crate::bridge::psi(x)?, crate::bridge::psi(y)?),
    };
    let f = random_chain_map(&g, &cx.to_complex()?, &cy.to_complex()?, rng)?;
    let f = GMorphism::from_chain_map(ring, &f)?;
    // carry the endpoints exactly, since from_chain_map rebuilds them
    let f = GMorphism::new(cx, cy, f.components().iter().map(|(&k, m)| (k, m.clone())))?;
    match x.convention() {
        Convention::CgrA => Ok(f),
        Convention::GA => psi_inv_mor(&f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::is_chainwise_split;
    use crate::frobenius::is_eta_conflation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SHAPE: Shape = Shape { len: 3, max_rank: 2 };

    #[test]
    fn random_complexes_are_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let g = Graded::new(CoeffRing::PrimeField(5));
        for _ in 0..20 {
            assert!(random_complex(&c, &mut rng, 4, 3).unwrap().validate(&c));
            assert!(random_complex(&g, &mut rng, 3, 2).unwrap().validate(&g));
        }
        assert!(random_complex(&c, &mut rng, 0, 3).unwrap().is_zero());
    }

    #[test]
    fn generation_is_deterministic() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(9), 3);
        let a = random_eta_conflation(&c, &mut ChaCha8Rng::seed_from_u64(7), SHAPE).unwrap();
        let b = random_eta_conflation(&c, &mut ChaCha8Rng::seed_from_u64(7), SHAPE).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disguised_pairs_keep_their_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = ScalarEta::new(CoeffRing::IntegersMod(8), 2);
        for _ in 0..10 {
            let (i, p) = random_eta_conflation(&c, &mut rng, SHAPE).unwrap();
            assert!(is_eta_conflation(&c, &i, &p).unwrap().is_some());
            let (i, p) = random_split_pair(&c, &mut rng, SHAPE).unwrap();
            assert!(is_chainwise_split(&c, &i, &p).unwrap());
        }
    }

    #[test]
    fn random_deltas_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in [CoeffRing::PrimeField(5), CoeffRing::IntegersMod(4), CoeffRing::Integers] {
            for _ in 0..10 {
                let x = random_delta(ring, &mut rng, SHAPE, 3, Columns::Arbitrary).unwrap();
                assert!(x.commutes().unwrap());
                assert!(x.check_certificate().unwrap());
                let y = random_delta(ring, &mut rng, SHAPE, 3, Columns::DegreeZero).unwrap();
                let f = random_delta_map(&mut rng, &x, &y).unwrap();
                assert!(f.commutes_with_d0().unwrap() && f.commutes_with_d1().unwrap());
                let (n, _, _) = random_null_map(&mut rng, &x, &y).unwrap();
                assert!(n.commutes_with_d0().unwrap());
            }
        }
    }

    #[test]
    fn random_systems_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for conv in [Convention::CgrA, Convention::GA] {
            for _ in 0..10 {
                let x = random_gsystem(CoeffRing::IntegersMod(9), &mut rng, SHAPE, 3, conv).unwrap();
                let y = random_gsystem(CoeffRing::IntegersMod(9), &mut rng, SHAPE, 3, conv).unwrap();
                assert!(x.validate() && x.convention() == conv);
                let f = random_gmorphism(&mut rng, &x, &y).unwrap();
                assert!(f.validate());
            }
        }
    }
}
