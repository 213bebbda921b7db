use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::delta::{plain, DeltaComplex, DeltaMap};
use super::gsystem::{Bidegree, Convention, GMorphism, GSystem};
use crate::base::{BaseCategory, Graded, GradedMorphism};
use crate::complex::{degrees, HomotopyCertificate};
use crate::equations::MorphismSystem;
use crate::error::{Error, Result};
use crate::linalg::{CoeffRing, RingMatrix};

type Family = BTreeMap<(usize, i64, i64), RingMatrix>;

/// A null-homotopy `{s_n}` of a morphism of systems, with
/// `s_n^{ij}: X^{ij} → Y^{i−1, j+n−1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullCertificate {
    pub s: Vec<((usize, i64, i64), RingMatrix)>,
}

struct Ctx<'a> {
    f: &'a GMorphism,
    s: Family,
}

impl Ctx<'_> {
    fn x(&self) -> &GSystem {
        self.f.source()
    }

    fn y(&self) -> &GSystem {
        self.f.target()
    }

    fn s(&self, n: usize, (i, j): Bidegree) -> RingMatrix {
        self.s.get(&(n, i, j)).cloned().unwrap_or_else(|| {
            RingMatrix::zeros(self.x().ring(), self.y().rank((i - 1, j + n as i64 - 1)), self.x().rank((i, j)))
        })
    }

    /// `s_0^{i+1,j} d_{X,0}^{ij} + d_{Y,0}^{i−1,j−1} s_0^{ij}`.
    fn seed(&self, (i, j): Bidegree) -> Result<RingMatrix> {
        let a = self.s(0, (i + 1, j)).mat_mul(&self.x().d(0, (i, j)))?;
        let b = self.y().d(0, (i - 1, j - 1)).mat_mul(&self.s(0, (i, j)))?;
        a.try_add(&b)
    }

    /// `Σ_{p+q=n+1} (s_p^{i+1,j+q} d_{X,q}^{ij} + d_{Y,p}^{i−1,j+q−1} s_q^{ij}) − f_n^{ij}`,
    /// skipping the terms with an index in `skip`.
    fn level(&self, n: usize, (i, j): Bidegree, skip: Option<usize>) -> Result<RingMatrix> {
        let mut acc = self.f.f(n, (i, j)).negate();
        for q in 0..=n + 1 {
            let p = n + 1 - q;
            if skip != Some(p) {
                acc = acc.try_add(&self.s(p, (i + 1, j + q as i64)).mat_mul(&self.x().d(q, (i, j)))?)?;
            }
            if skip != Some(q) {
                acc = acc.try_add(&self.y().d(p, (i - 1, j + q as i64 - 1)).mat_mul(&self.s(q, (i, j)))?)?;
            }
        }
        Ok(acc)
    }

    fn spots(&self) -> Vec<Bidegree> {
        self.x().ranks().keys().copied().collect()
    }

    fn holds(&self, top: usize) -> Result<bool> {
        for at in self.spots() {
            if !self.seed(at)?.is_zero() {
                return Ok(false);
            }
            for n in 0..=top {
                if !self.level(n, at, None)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn family(f: &GMorphism, s: impl IntoIterator<Item = ((usize, i64, i64), RingMatrix)>) -> Result<Family> {
    let (x, y) = (f.source(), f.target());
    let mut out = Family::new();
    for ((n, i, j), m) in s {
        if m.shape() != (y.rank((i - 1, j + n as i64 - 1)), x.rank((i, j))) {
            return Err(Error::dims(format!("s_{n} at ({i}, {j})")));
        }
        if !m.is_zero() {
            out.insert((n, i, j), m);
        }
    }
    Ok(out)
}

fn top_level(f: &GMorphism, s: &Family) -> usize {
    let smax = s.keys().map(|k| k.0).max().unwrap_or(0);
    let dmax = f.source().max_n().max(f.target().max_n());
    f.max_n().max(smax + dmax) + 1
}

fn require_cgra(f: &GMorphism) -> Result<()> {
    if f.source().convention() != Convention::CgrA || f.target().convention() != Convention::CgrA {
        return Err(Error::InvalidSystem("expected the CgrA convention".into()));
    }
    Ok(())
}

/// Checks the seed relation and every level relation.
pub fn check_null_certificate(f: &GMorphism, cert: &NullCertificate) -> Result<bool> {
    require_cgra(f)?;
    let s = match family(f, cert.s.iter().cloned()) {
        Ok(s) => s,
        Err(_) => return Ok(false),
    };
    let top = top_level(f, &s);
    Ctx { f, s }.holds(top)
}

/// Completes `s_0, s_1` (which must satisfy the seed relation and the
/// level-0 relation) to a null-homotopy of `f`, solving `s_{k+1}` from the
/// level-`k` relation for `k = 1, 2, …`.
///
/// An inconsistent level is reported as an obstruction naming `(k, j)`.
pub fn eta_null_complete(
    f: &GMorphism,
    s0: impl IntoIterator<Item = (Bidegree, RingMatrix)>,
    s1: impl IntoIterator<Item = (Bidegree, RingMatrix)>,
) -> Result<NullCertificate> {
    require_cgra(f)?;
    let seeds =
        s0.into_iter().map(|((i, j), m)| ((0, i, j), m)).chain(s1.into_iter().map(|((i, j), m)| ((1, i, j), m)));
    let mut ctx = Ctx { f, s: family(f, seeds)? };
    for at in ctx.spots() {
        if !ctx.seed(at)?.is_zero() || !ctx.level(0, at, None)?.is_zero() {
            return Err(Error::NotNormalized(format!("seed relations fail at {at:?}")));
        }
    }
    let ring = f.source().ring();
    let c = plain(ring);
    let (x, y) = (f.source().clone(), f.target().clone());
    if let (Some((xlo, xhi)), Some((_, yhi))) = (x.j_span(), y.j_span()) {
        let irange = degrees(x.i_span().map(|(lo, hi)| (lo, hi + 1)));
        for k in 1..=(yhi - xlo).max(0) as usize {
            let mut found = Vec::new();
            for j in xlo..=xhi {
                let jk = j + k as i64;
                let mut sys = MorphismSystem::new(&c);
                let mut slot = BTreeMap::new();
                for i in irange.clone() {
                    let (s, t) = (x.rank((i, j)), y.rank((i - 1, jk)));
                    if s > 0 && t > 0 {
                        slot.insert(i, sys.unknown(s, t));
                    }
                }
                for i in irange.clone() {
                    let (s, t) = (x.rank((i, j)), y.rank((i, jk)));
                    if s == 0 || t == 0 {
                        continue;
                    }
                    let known = ctx.level(k, (i, j), Some(k + 1))?;
                    let here = slot.get(&i).copied();
                    let next = slot.get(&(i + 1)).copied();
                    let (dy, dx) = (y.d(0, (i - 1, jk)), x.d(0, (i, j)));
                    sys.equation(s, t, here.into_iter().chain(next).collect(), move |v| {
                        let mut acc = known.clone();
                        if let Some(u) = here {
                            acc = acc.try_add(&dy.mat_mul(&v[u])?)?;
                        }
                        if let Some(u) = next {
                            acc = acc.try_add(&v[u].mat_mul(&dx)?)?;
                        }
                        Ok(acc)
                    });
                }
                if sys.num_equations() == 0 {
                    continue;
                }
                let sol = sys.solve_or_obstruct("eta_null_complete", k as i64, vec![j])?;
                for (&i, &u) in &slot {
                    found.push(((k + 1, i, j), sol[u].clone()));
                }
            }
            for (key, m) in found {
                if !m.is_zero() {
                    ctx.s.insert(key, m);
                }
            }
        }
    }
    let top = top_level(f, &ctx.s);
    if !ctx.holds(top)? {
        return Err(Error::InvalidSystem("completed null-homotopy fails a relation".into()));
    }
    Ok(NullCertificate { s: ctx.s.into_iter().collect() })
}

/// The same family read as an η-null-homotopy of `f` viewed as a chain map of
/// complexes of graded modules: `s^i: X^i(1) → Y^{i−1}` with component
/// `(n, j) = s_n^{i, j+1}`.
pub fn to_eta_certificate(f: &GMorphism, cert: &NullCertificate) -> Result<HomotopyCertificate<Graded>> {
    let g = Graded::new(f.source().ring());
    let (cx, cy) = (f.source().to_complex()?, f.target().to_complex()?);
    type Blocks = Vec<((usize, i64), RingMatrix)>;
    let mut by_i: BTreeMap<i64, Blocks> = BTreeMap::new();
    for ((n, i, j), m) in &cert.s {
        by_i.entry(*i).or_default().push(((*n, j - 1), m.clone()));
    }
    let mut s = BTreeMap::new();
    for (i, comps) in by_i {
        let src = g.shift_obj(&cx.obj(&g, i), 1);
        let m = GradedMorphism::new(g.ring, src, cy.obj(&g, i - 1), comps)?;
        s.insert(i, m);
    }
    Ok(HomotopyCertificate { eta: true, s })
}

/// Seeds for `Θ(α)` from a column null-homotopy `α = δ_1 s + s δ_1 + δ_0 k + k δ_0`,
/// where `s^{a,j}: X^{a,j} → Y^{a,j−1}` commutes with `δ_0` and
/// `k^{a,j}: X^{a,j} → Y^{a−1,j}`.
#[allow(clippy::type_complexity)]
pub fn seeds_from_column_homotopy(
    s: &BTreeMap<Bidegree, RingMatrix>,
    k: &BTreeMap<Bidegree, RingMatrix>,
) -> (Vec<(Bidegree, RingMatrix)>, Vec<(Bidegree, RingMatrix)>) {
    let s0 = s
        .iter()
        .map(|(&(a, j), m)| {
            let i = a + j;
            ((i, j), if (i + 1).rem_euclid(2) == 1 { m.negate() } else { m.clone() })
        })
        .collect();
    let s1 = k.iter().map(|(&(a, j), m)| ((a + j, j), m.clone())).collect();
    (s0, s1)
}

/// Whether `α = δ_1 s + s δ_1 + δ_0 k + k δ_0` with `s` commuting with `δ_0`.
pub fn is_column_null_homotopy(
    alpha: &DeltaMap,
    s: &BTreeMap<Bidegree, RingMatrix>,
    k: &BTreeMap<Bidegree, RingMatrix>,
) -> Result<bool> {
    let (x, y) = (alpha.source(), alpha.target());
    let ring = x.ring();
    let get = |fam: &BTreeMap<Bidegree, RingMatrix>, at: Bidegree, rows: usize| {
        fam.get(&at).cloned().unwrap_or_else(|| RingMatrix::zeros(ring, rows, x.rank(at)))
    };
    let sm = |(a, j): Bidegree| get(s, (a, j), y.rank((a, j - 1)));
    let km = |(a, j): Bidegree| get(k, (a, j), y.rank((a - 1, j)));
    for &(a, j) in x.ranks().keys() {
        let rhs = y
            .d1((a, j - 1))
            .mat_mul(&sm((a, j)))?
            .try_add(&sm((a, j + 1)).mat_mul(&x.d1((a, j)))?)?
            .try_add(&y.d0((a - 1, j)).mat_mul(&km((a, j)))?)?
            .try_add(&km((a + 1, j)).mat_mul(&x.d0((a, j)))?)?;
        if rhs != alpha.component((a, j)) {
            return Ok(false);
        }
        if sm((a + 1, j)).mat_mul(&x.d0((a, j)))? != y.d0((a, j - 1)).mat_mul(&sm((a, j)))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A morphism with `f_0 = 0` whose completion fails at level 1: `X` is a single
/// copy of the ring at `(0, 0)`, `Y` one at `(0, 1)`, and `f_1 = 1`.
pub fn engineered_obstruction(ring: CoeffRing) -> Result<GMorphism> {
    let x = GSystem::new(ring, Convention::CgrA, [((0, 0), 1)], [])?;
    let y = GSystem::new(ring, Convention::CgrA, [((0, 1), 1)], [])?;
    GMorphism::new(x, y, [((1, 0, 0), RingMatrix::identity(ring, 1))])
}

/// The column system `δ_0 = 0`, `δ_1 = 0` with the given ranks; convenience
/// for building small examples.
pub fn discrete(ring: CoeffRing, ranks: impl IntoIterator<Item = (Bidegree, usize)>) -> Result<DeltaComplex> {
    DeltaComplex::new(ring, ranks, [], [], None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::theta::{theta_extend, theta_extend_mor};
    use crate::frobenius::{check_eta_homotopy, eta_homotopic};
    use crate::obstruction::Obstruction;

    fn one(ring: CoeffRing, v: i64) -> RingMatrix {
        RingMatrix::from_i64(ring, 1, 1, &[v])
    }

    #[test]
    fn engineered_morphism_is_obstructed() {
        let r = CoeffRing::Integers;
        let f = engineered_obstruction(r).unwrap();
        assert!(f.validate());
        match eta_null_complete(&f, [], []) {
            Err(Error::Obstruction(o)) => {
                assert_eq!((o.stage.as_str(), o.level, o.index.clone()), ("eta_null_complete", 1, vec![0]));
                assert!(Obstruction::replay(&o).unwrap());
            }
            other => panic!("expected an obstruction, got {other:?}"),
        }
        let g = Graded::new(r);
        let m = f.to_chain_map().unwrap();
        let z = crate::complex::ChainMap::zero(m.source(), m.target());
        assert!(eta_homotopic(&g, &m, &z).unwrap().is_none());
    }

    #[test]
    fn identity_of_contractible_columns() {
        // X: two columns of F5 →1 F5 joined by δ_1 = 1; α = Id is δ_0 k + k δ_0 with k = 1
        let r = CoeffRing::PrimeField(5);
        let x = DeltaComplex::new(
            r,
            [((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)],
            [((0, 0), one(r, 1)), ((0, 1), one(r, 1))],
            [((0, 0), one(r, 1)), ((1, 0), one(r, 1))],
            None,
        )
        .unwrap();
        let alpha = DeltaMap::identity(&x);
        let k: BTreeMap<_, _> = [((1, 0), one(r, 1)), ((1, 1), one(r, 1))].into_iter().collect();
        let s = BTreeMap::new();
        assert!(is_column_null_homotopy(&alpha, &s, &k).unwrap());
        let xh = theta_extend(&x).unwrap();
        let f = theta_extend_mor(&alpha, &xh, &xh).unwrap();
        let (s0, s1) = seeds_from_column_homotopy(&s, &k);
        let cert = eta_null_complete(&f, s0, s1).unwrap();
        assert!(check_null_certificate(&f, &cert).unwrap());
        let g = Graded::new(r);
        let m = f.to_chain_map().unwrap();
        let z = crate::complex::ChainMap::zero(m.source(), m.target());
        let h = to_eta_certificate(&f, &cert).unwrap();
        assert!(check_eta_homotopy(&g, &m, &z, &h).unwrap());
    }

    #[test]
    fn bad_seeds_are_rejected() {
        let r = CoeffRing::PrimeField(3);
        let x = discrete(r, [((0, 0), 1)]).unwrap();
        let xh = theta_extend(&x).unwrap();
        let f = GMorphism::identity(&xh);
        assert!(matches!(eta_null_complete(&f, [], []), Err(Error::NotNormalized(_))));
    }
}
