use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::delta::{plain, DeltaComplex, DeltaMap};
use super::gsystem::{Bidegree, Convention, GMorphism, GSystem};
use super::totalize::{totalize, totalize_mor};
use crate::base::{Graded, ScalarEta};
use crate::complex::{cone, eta_map, ChainMap, Complex};
use crate::equations::MorphismSystem;
use crate::error::{Error, Result};
use crate::fault::{active, Mutant};
use crate::linalg::RingMatrix;

/// Sign placed on `δ_1` when it becomes `d_1^{ij}` (indices of the extension).
///
/// `Alternating` is `(−1)^i`, which makes `d_0 d_1 + d_1 d_0 = 0` follow from
/// `δ_0 δ_1 = δ_1 δ_0`. `Literal` is `(−1)^j`; it only satisfies the relation
/// when `2 δ_0 δ_1 = 0` and is kept for comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum D1Sign {
    #[default]
    Alternating,
    Literal,
}

impl D1Sign {
    fn effective(self) -> D1Sign {
        if active(Mutant::ThetaD1Sign) {
            D1Sign::Literal
        } else {
            self
        }
    }

    pub fn odd(self, (i, j): Bidegree) -> bool {
        match self.effective() {
            D1Sign::Alternating => i.rem_euclid(2) == 1,
            D1Sign::Literal => j.rem_euclid(2) == 1,
        }
    }
}

fn signed(m: RingMatrix, odd: bool) -> RingMatrix {
    if odd {
        m.negate()
    } else {
        m
    }
}

/// `d_0^{ij} = δ_0^{i−j,j}` and `d_1^{ij} = ±δ_1^{i−j,j}`, nothing higher.
pub fn theta_base(x: &DeltaComplex, sign: D1Sign) -> Result<GSystem> {
    let ranks = x.ranks().iter().map(|(&(a, j), &r)| ((a + j, j), r));
    let d0 = x.delta0().iter().map(|(&(a, j), m)| ((0, a + j, j), m.clone()));
    let d1 = x.delta1().iter().map(|(&(a, j), m)| ((1, a + j, j), signed(m.clone(), sign.odd((a + j, j)))));
    GSystem::new(x.ring(), Convention::CgrA, ranks, d0.chain(d1))
}

/// Whether `g` has the ranks, `d_0` and `d_1` prescribed by `x` and satisfies
/// every relation.
pub fn is_theta_extension(g: &GSystem, x: &DeltaComplex, sign: D1Sign) -> Result<bool> {
    let base = theta_base(x, sign)?;
    if g.convention() != Convention::CgrA || g.ranks() != base.ranks() {
        return Ok(false);
    }
    for &at in base.ranks().keys() {
        if g.d(0, at) != base.d(0, at) || g.d(1, at) != base.d(1, at) {
            return Ok(false);
        }
    }
    Ok(g.validate())
}

fn range(span: Option<(i64, i64)>) -> std::ops::RangeInclusive<i64> {
    crate::complex::degrees(span)
}

/// Extends `(δ_0, δ_1)` to a system by solving, for `n = 2, 3, …` and each
/// column `j`, `d_0 d_n + d_n d_0 = −Σ_{0<q<n} d_{n−q} d_q`.
///
/// Fails with an obstruction naming `(n, j)` when some level is inconsistent.
pub fn theta_extend(x: &DeltaComplex) -> Result<GSystem> {
    theta_extend_with(x, D1Sign::Alternating)
}

pub fn theta_extend_with(x: &DeltaComplex, sign: D1Sign) -> Result<GSystem> {
    let mut g = theta_base(x, sign)?;
    let c = plain(x.ring());
    let Some((jlo, jhi)) = g.j_span() else { return Ok(g) };
    let irange = range(g.i_span().map(|(lo, hi)| (lo - 1, hi)));
    for n in 2..=(jhi - jlo).max(1) as usize {
        let mut found: Vec<((usize, i64, i64), RingMatrix)> = Vec::new();
        for j in jlo..=jhi - n as i64 {
            let jn = j + n as i64;
            let mut sys = MorphismSystem::new(&c);
            let mut slot = BTreeMap::new();
            for i in irange.clone() {
                let (s, t) = (g.rank((i, j)), g.rank((i + 1, jn)));
                if s > 0 && t > 0 {
                    slot.insert(i, sys.unknown(s, t));
                }
            }
            for i in irange.clone() {
                let (s, t) = (g.rank((i, j)), g.rank((i + 2, jn)));
                if s == 0 || t == 0 {
                    continue;
                }
                let mut known = RingMatrix::zeros(x.ring(), t, s);
                for q in 1..n {
                    let term = g.d(n - q, (i + 1, j + q as i64)).mat_mul(&g.d(q, (i, j)))?;
                    known = known.try_add(&term)?;
                }
                let here = slot.get(&i).copied();
                let next = slot.get(&(i + 1)).copied();
                let (left, right) = (g.d(0, (i + 1, jn)), g.d(0, (i, j)));
                sys.equation(s, t, here.into_iter().chain(next).collect(), move |v| {
                    let mut acc = known.clone();
                    if let Some(u) = here {
                        acc = acc.try_add(&left.mat_mul(&v[u])?)?;
                    }
                    if let Some(u) = next {
                        acc = acc.try_add(&v[u].mat_mul(&right)?)?;
                    }
                    Ok(acc)
                });
            }
            if sys.num_equations() == 0 {
                continue;
            }
            let sol = sys.solve_or_obstruct("theta_extend", n as i64, vec![j])?;
            for (&i, &u) in &slot {
                found.push(((n, i, j), sol[u].clone()));
            }
        }
        let diffs = g.diffs().iter().map(|(&k, m)| (k, m.clone())).chain(found);
        g = GSystem::new(
            x.ring(),
            Convention::CgrA,
            g.ranks().iter().map(|(&k, &r)| (k, r)),
            diffs.collect::<Vec<_>>(),
        )?;
    }
    Ok(g)
}

/// Extends a column map `α` (commuting with `δ_0`) to a morphism
/// `{f_0, f_1, …}` with `f_0^{ij} = α^{i−j,j}`, solving level by level.
pub fn theta_extend_mor(alpha: &DeltaMap, xh: &GSystem, yh: &GSystem) -> Result<GMorphism> {
    if !alpha.commutes_with_d0()? {
        return Err(Error::InvalidChainMap("α does not commute with δ_0".into()));
    }
    let ring = xh.ring();
    let c = plain(ring);
    let f0: Vec<((usize, i64, i64), RingMatrix)> =
        alpha.components().iter().map(|(&(a, j), m)| ((0, a + j, j), m.clone())).collect();
    let mut f = GMorphism::new(xh.clone(), yh.clone(), f0)?;
    let (Some((xlo, xhi)), Some((_, yhi))) = (xh.j_span(), yh.j_span()) else { return Ok(f) };
    let irange = range(xh.i_span().map(|(lo, hi)| (lo - 1, hi)));
    for n in 1..=(yhi - xlo).max(0) as usize {
        let mut found = Vec::new();
        for j in xlo..=xhi.min(yhi - n as i64) {
            let jn = j + n as i64;
            let mut sys = MorphismSystem::new(&c);
            let mut slot = BTreeMap::new();
            for i in irange.clone() {
                let (s, t) = (xh.rank((i, j)), yh.rank((i, jn)));
                if s > 0 && t > 0 {
                    slot.insert(i, sys.unknown(s, t));
                }
            }
            for i in irange.clone() {
                let (s, t) = (xh.rank((i, j)), yh.rank((i + 1, jn)));
                if s == 0 || t == 0 {
                    continue;
                }
                let mut known = RingMatrix::zeros(ring, t, s);
                for q in 1..=n {
                    let p = n - q;
                    let a = f.f(p, (i + 1, j + q as i64)).mat_mul(&xh.d(q, (i, j)))?;
                    let b = yh.d(q, (i, j + p as i64)).mat_mul(&f.f(p, (i, j)))?;
                    known = known.try_add(&a.try_sub(&b)?)?;
                }
                let here = slot.get(&i).copied();
                let next = slot.get(&(i + 1)).copied();
                let (dy, dx) = (yh.d(0, (i, jn)), xh.d(0, (i, j)));
                sys.equation(s, t, here.into_iter().chain(next).collect(), move |v| {
                    let mut acc = known.clone();
                    if let Some(u) = next {
                        acc = acc.try_add(&v[u].mat_mul(&dx)?)?;
                    }
                    if let Some(u) = here {
                        acc = acc.try_sub(&dy.mat_mul(&v[u])?)?;
                    }
                    Ok(acc)
                });
            }
            if sys.num_equations() == 0 {
                continue;
            }
            let sol = sys.solve_or_obstruct("theta_extend_mor", n as i64, vec![j])?;
            for (&i, &u) in &slot {
                found.push(((n, i, j), sol[u].clone()));
            }
        }
        let comps: Vec<_> = f.components().iter().map(|(&k, m)| (k, m.clone())).chain(found).collect();
        f = GMorphism::new(xh.clone(), yh.clone(), comps)?;
    }
    Ok(f)
}

/// `Φ = Ξ ∘ Θ`.
pub fn phi(x: &DeltaComplex) -> Result<Complex<ScalarEta>> {
    totalize(&theta_extend(x)?)
}

pub fn phi_mor(alpha: &DeltaMap) -> Result<ChainMap<ScalarEta>> {
    let xh = theta_extend(alpha.source())?;
    let yh = theta_extend(alpha.target())?;
    totalize_mor(&theta_extend_mor(alpha, &xh, &yh)?)
}

/// Outcome of comparing the extension of a cone and of a shift with the
/// corresponding constructions on the extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCheck {
    /// `cone(Θ(α) η)` built as a cone of complexes equals the block formula.
    pub cone_blocks: bool,
    /// `cone(Θ(α) η)` extends the cone of `α`.
    pub cone_extends: bool,
    /// `Θ(X)[1](1)` equals its block formula and extends `X[1]`.
    pub shift_extends: bool,
}

impl TriangleCheck {
    pub fn holds(&self) -> bool {
        self.cone_blocks && self.cone_extends && self.shift_extends
    }
}

/// Builds `Θ(X)`, `Θ(Y)`, `Θ(α)` and compares `cone(Θ(α) η_{Θ(X)})` with the
/// cone of `α`, and `Θ(X)[1](1)` with `X[1]`.
pub fn theta_triangle_check(alpha: &DeltaMap) -> Result<TriangleCheck> {
    let (x, y) = (alpha.source(), alpha.target());
    let ring = x.ring();
    let g = Graded::new(ring);
    let xh = theta_extend(x)?;
    let yh = theta_extend(y)?;
    let f = theta_extend_mor(alpha, &xh, &yh)?;
    let cx = xh.to_complex()?;
    let fe = f.to_chain_map()?.compose(&g, &eta_map(&g, &cx))?;
    let generic = GSystem::from_complex(ring, &cone(&g, &fe)?.complex)?;

    let mut keys: Vec<Bidegree> =
        xh.ranks().keys().map(|&(i, j)| (i - 1, j - 1)).chain(yh.ranks().keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let dims = |(i, j): Bidegree| [xh.rank((i + 1, j + 1)), yh.rank((i, j))];
    let top = xh.max_n().max(yh.max_n()).max(f.max_n() + 1);
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &(i, j) in &keys {
        ranks.push(((i, j), dims((i, j)).iter().sum::<usize>()));
        for n in 0..=top {
            let m = RingMatrix::from_blocks(ring, &dims((i + 1, j + n as i64)), &dims((i, j)), |r, c| match (r, c) {
                (0, 0) => Some(xh.d(n, (i + 1, j + 1)).negate()),
                (1, 0) if n > 0 => Some(f.f(n - 1, (i + 1, j + 1))),
                (1, 1) => Some(yh.d(n, (i, j))),
                _ => None,
            })?;
            diffs.push(((n, i, j), m));
        }
    }
    let explicit = GSystem::new(ring, Convention::CgrA, ranks, diffs)?;
    let cone_blocks = generic == explicit;
    let cone_extends = match DeltaComplex::cone(alpha) {
        Ok(dc) => is_theta_extension(&generic, &dc, D1Sign::Alternating)?,
        Err(_) => false,
    };

    let shifted = GSystem::from_complex(ring, &cx.shift(&g, 1).twist(&g, 1))?;
    let explicit_shift = GSystem::new(
        ring,
        Convention::CgrA,
        xh.ranks().iter().map(|(&(i, j), &r)| ((i - 1, j - 1), r)),
        xh.diffs().iter().map(|(&(n, i, j), m)| ((n, i - 1, j - 1), m.negate())),
    )?;
    let shift_extends = shifted == explicit_shift && is_theta_extension(&shifted, &x.shift(), D1Sign::Alternating)?;
    Ok(TriangleCheck { cone_blocks, cone_extends, shift_extends })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CoeffRing;

    fn m(ring: CoeffRing, v: i64) -> RingMatrix {
        RingMatrix::from_i64(ring, 1, 1, &[v])
    }

    fn strip(ring: CoeffRing, width: i64) -> DeltaComplex {
        let ranks = (0..width).flat_map(|j| [((0, j), 1), ((1, j), 1)]);
        let d0 = (0..width).map(|j| ((0, j), m(ring, 1)));
        let d1 = (0..width - 1).flat_map(|j| [((0, j), m(ring, 1)), ((1, j), m(ring, 1))]);
        DeltaComplex::new(ring, ranks, d0, d1, None).unwrap()
    }

    #[test]
    fn single_column_is_reindexed() {
        let r = CoeffRing::PrimeField(5);
        let x = DeltaComplex::new(
            r,
            [((0, 3), 1), ((1, 3), 2)],
            [((0, 3), RingMatrix::from_i64(r, 2, 1, &[1, 2]))],
            [],
            None,
        )
        .unwrap();
        let g = theta_extend(&x).unwrap();
        assert_eq!(g.ranks().keys().copied().collect::<Vec<_>>(), vec![(3, 3), (4, 3)]);
        assert_eq!(g.diffs().len(), 1);
        assert!(is_theta_extension(&g, &x, D1Sign::Alternating).unwrap());
    }

    #[test]
    fn strict_square_needs_no_higher_maps() {
        // δ_0 = 0 and δ_1 δ_1 = 0
        let r = CoeffRing::IntegersMod(4);
        let x = DeltaComplex::new(r, (0..3).map(|j| ((0, j), 1)), [], [((0, 0), m(r, 2)), ((0, 1), m(r, 2))], None)
            .unwrap();
        let g = theta_extend(&x).unwrap();
        assert!(g.diffs().keys().all(|k| k.0 < 2));
        assert!(g.validate());
    }

    #[test]
    fn literal_sign_breaks_the_first_relation() {
        let r = CoeffRing::PrimeField(5);
        let x = strip(r, 2);
        assert!(theta_extend(&x).unwrap().validate());
        assert!(!theta_base(&x, D1Sign::Literal).unwrap().validate());
    }

    #[test]
    fn three_columns_extend_and_totalize() {
        let r = CoeffRing::PrimeField(5);
        let x = strip(r, 3);
        let g = theta_extend(&x).unwrap();
        assert!(is_theta_extension(&g, &x, D1Sign::Alternating).unwrap());
        let t = phi(&x).unwrap();
        assert!(t.validate(&plain(r)));
        assert_eq!(t, totalize(&g).unwrap());
    }

    #[test]
    fn two_columns_total_complex() {
        // δ_0 = 0, two columns: Φ is the plain total complex with signed δ_1
        let r = CoeffRing::IntegersMod(9);
        let x = DeltaComplex::new(
            r,
            [((0, 0), 1), ((0, 1), 2)],
            [],
            [((0, 0), RingMatrix::from_i64(r, 2, 1, &[4, 5]))],
            None,
        )
        .unwrap();
        let t = phi(&x).unwrap();
        let oracle = Complex::new(&plain(r), [(0, 1), (1, 2)], [(0, RingMatrix::from_i64(r, 2, 1, &[4, 5]))]).unwrap();
        assert_eq!(t, oracle);
    }

    #[test]
    fn identity_and_zero_maps() {
        let r = CoeffRing::PrimeField(5);
        let x = strip(r, 3);
        let xh = theta_extend(&x).unwrap();
        let id = theta_extend_mor(&DeltaMap::identity(&x), &xh, &xh).unwrap();
        assert_eq!(id, GMorphism::identity(&xh));
        let zero = theta_extend_mor(&DeltaMap::zero(&x, &x), &xh, &xh).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn triangle_identities_for_identity_and_zero() {
        let r = CoeffRing::PrimeField(5);
        let x = strip(r, 2).with_certificate().unwrap().unwrap();
        for alpha in [DeltaMap::identity(&x), DeltaMap::zero(&x, &x)] {
            let t = theta_triangle_check(&alpha).unwrap();
            assert!(t.holds(), "{t:?}");
        }
    }
}
