use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{cone, degrees, hull, ChainMap, Complex};
use crate::base::BaseCategory;
use crate::equations::MorphismSystem;
use crate::error::{Error, Result};

/// A chainwise-split pair `X →i Y →p Z` with chosen splittings and its
/// homotopy invariant `h: Z[−1] → X`.
///
/// The splittings satisfy `r i = Id`, `p σ = Id`, `r σ = 0` and
/// `i r + σ p = Id`; under `(p, r): Y^n ≅ Z^n ⊕ X^n` the differential of `Y`
/// becomes `[[d_Z, 0], [h^{n+1}, d_X]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ExactPair<B: BaseCategory> {
    pub i: ChainMap<B>,
    pub p: ChainMap<B>,
    /// `r^n: Y^n → X^n`
    pub retraction: BTreeMap<i64, B::Mor>,
    /// `σ^n: Z^n → Y^n`
    pub section: BTreeMap<i64, B::Mor>,
    pub h: ChainMap<B>,
}

impl<B: BaseCategory> ExactPair<B> {
    pub fn x(&self) -> &Complex<B> {
        self.i.source()
    }

    pub fn y(&self) -> &Complex<B> {
        self.i.target()
    }

    pub fn z(&self) -> &Complex<B> {
        self.p.target()
    }

    pub fn r(&self, cat: &B, n: i64) -> B::Mor {
        self.retraction.get(&n).cloned().unwrap_or_else(|| cat.zero_mor(&self.y().obj(cat, n), &self.x().obj(cat, n)))
    }

    pub fn sigma(&self, cat: &B, n: i64) -> B::Mor {
        self.section.get(&n).cloned().unwrap_or_else(|| cat.zero_mor(&self.z().obj(cat, n), &self.y().obj(cat, n)))
    }

    /// Re-checks the splitting identities and the normal form of `d_Y` exactly.
    pub fn verify(&self, cat: &B) -> Result<bool> {
        let (x, y, z) = (self.x(), self.y(), self.z());
        for n in degrees(hull(hull(x.span(), y.span()), z.span())) {
            let (i, p, r, s) = (self.i.comp(cat, n), self.p.comp(cat, n), self.r(cat, n), self.sigma(cat, n));
            let ok = cat.compose(&r, &i)? == cat.identity(&x.obj(cat, n))
                && cat.compose(&p, &s)? == cat.identity(&z.obj(cat, n))
                && cat.is_zero_mor(&cat.compose(&r, &s)?)
                && cat.add(&cat.compose(&i, &r)?, &cat.compose(&s, &p)?)? == cat.identity(&y.obj(cat, n));
            if !ok {
                return Ok(false);
            }
            // d_Y σ^n = σ^{n+1} d_Z + i^{n+1} h^{n+1}
            let dys = cat.compose(&y.diff(cat, n), &s)?;
            let expect = cat.add(
                &cat.compose(&self.sigma(cat, n + 1), &z.diff(cat, n))?,
                &cat.compose(&self.i.comp(cat, n + 1), &self.h.comp(cat, n + 1))?,
            )?;
            if dys != expect {
                return Ok(false);
            }
        }
        Ok(self.h.validate(cat))
    }
}

fn solve_one<B: BaseCategory>(
    cat: &B,
    unknown: (B::Obj, B::Obj),
    eq: (B::Obj, B::Obj),
    eval: impl Fn(&B::Mor) -> Result<B::Mor>,
) -> Result<Option<B::Mor>> {
    let mut sys = MorphismSystem::new(cat);
    let u = sys.unknown(unknown.0, unknown.1);
    sys.equation(eq.0, eq.1, vec![u], move |v| eval(&v[u]));
    Ok(sys.solve()?.map(|mut v| v.swap_remove(u)))
}

/// Finds splittings degreewise and extracts the homotopy invariant.
pub fn normalize_exact_pair<B: BaseCategory>(cat: &B, i: &ChainMap<B>, p: &ChainMap<B>) -> Result<ExactPair<B>> {
    if i.target() != p.source() {
        return Err(Error::objects("i and p are not composable"));
    }
    let (x, y, z) = (i.source(), i.target(), p.target());
    let span = hull(hull(x.span(), y.span()), z.span());
    let mut retraction = BTreeMap::new();
    let mut section = BTreeMap::new();
    for n in degrees(span) {
        let (xn, yn, zn) = (x.obj(cat, n), y.obj(cat, n), z.obj(cat, n));
        let (in_, pn) = (i.comp(cat, n), p.comp(cat, n));
        if !cat.is_zero_mor(&cat.compose(&pn, &in_)?) {
            return Err(Error::NotExact { degree: n });
        }
        let id_x = cat.identity(&xn);
        let r = solve_one(cat, (yn.clone(), xn.clone()), (xn.clone(), xn.clone()), |r| {
            cat.sub(&cat.compose(r, &in_)?, &id_x)
        })?
        .ok_or(Error::NotChainwiseSplit { degree: n })?;
        let id_z = cat.identity(&zn);
        let s = solve_one(cat, (zn.clone(), yn.clone()), (zn.clone(), zn.clone()), |s| {
            cat.sub(&cat.compose(&pn, s)?, &id_z)
        })?
        .ok_or(Error::NotChainwiseSplit { degree: n })?;
        let s = cat.sub(&s, &cat.compose(&in_, &cat.compose(&r, &s)?)?)?;
        let sum = cat.add(&cat.compose(&in_, &r)?, &cat.compose(&s, &pn)?)?;
        if sum != cat.identity(&yn) {
            return Err(Error::NotExact { degree: n });
        }
        if !cat.is_zero_mor(&r) {
            retraction.insert(n, r);
        }
        if !cat.is_zero_mor(&s) {
            section.insert(n, s);
        }
    }
    let mut pair =
        ExactPair { i: i.clone(), p: p.clone(), retraction, section, h: ChainMap::zero(&z.shift(cat, -1), x) };
    let mut h = Vec::new();
    for n in degrees(span) {
        // h^{n+1} = r^{n+1} d_Y^n σ^n : Z^n → X^{n+1}
        let hn = cat.compose(&pair.r(cat, n + 1), &cat.compose(&y.diff(cat, n), &pair.sigma(cat, n))?)?;
        h.push((n + 1, hn));
    }
    pair.h = ChainMap::new(cat, z.shift(cat, -1), x.clone(), h)?;
    Ok(pair)
}

/// The standard pair `X → cone(h) → Z` of `h: Z[−1] → X` with its canonical
/// splitting `r = (0, 1)`, `σ = (1, 0)ᵗ`, so that the invariant is `h` itself.
pub fn standard_exact_pair<B: BaseCategory>(cat: &B, h: &ChainMap<B>) -> Result<ExactPair<B>> {
    let k = cone(cat, h)?;
    let x = h.target();
    let z = k.proj.target().clone();
    let mut retraction = BTreeMap::new();
    let mut section = BTreeMap::new();
    for n in degrees(k.complex.span()) {
        let parts = [z.obj(cat, n), x.obj(cat, n)];
        let (xn, zn) = ([x.obj(cat, n)], [z.obj(cat, n)]);
        let r = cat.block(&xn, &parts, &mut |_, b| (b == 1).then(|| cat.identity(&xn[0])))?;
        let s = cat.block(&parts, &zn, &mut |a, _| (a == 0).then(|| cat.identity(&zn[0])))?;
        if !cat.is_zero_mor(&r) {
            retraction.insert(n, r);
        }
        if !cat.is_zero_mor(&s) {
            section.insert(n, s);
        }
    }
    let h = h.retarget(cat, z.shift(cat, -1), x.clone())?;
    Ok(ExactPair { i: k.inj, p: k.proj, retraction, section, h })
}

/// Whether `(i, p)` is a degreewise split short exact sequence.
pub fn is_chainwise_split<B: BaseCategory>(cat: &B, i: &ChainMap<B>, p: &ChainMap<B>) -> Result<bool> {
    match normalize_exact_pair(cat, i, p) {
        Ok(_) => Ok(true),
        Err(Error::NotChainwiseSplit { .. } | Error::NotExact { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ScalarEta;
    use crate::linalg::{CoeffRing, RingMatrix};

    #[test]
    fn cone_pair_recovers_the_map() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let two = RingMatrix::from_i64(c.ring, 1, 1, &[2]);
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, two.clone())]).unwrap();
        let y = Complex::new(&c, [(0, 1), (1, 1)], [(0, RingMatrix::from_i64(c.ring, 1, 1, &[0]))]).unwrap();
        let f =
            ChainMap::new(&c, x.clone(), y.clone(), [(0, RingMatrix::from_i64(c.ring, 1, 1, &[0])), (1, two)]).unwrap();
        let k = cone(&c, &f).unwrap();
        let pair = normalize_exact_pair(&c, &k.inj, &k.proj).unwrap();
        assert!(pair.verify(&c).unwrap());
        assert_eq!(pair.h.components(), f.components());
        assert_eq!(pair.h.source(), &x);
    }

    #[test]
    fn split_pair_has_zero_invariant() {
        let c = ScalarEta::new(CoeffRing::Rationals, 0);
        let x = Complex::stalk(&c, 0, 2);
        let z = Complex::stalk(&c, 1, 1);
        let k = cone(&c, &ChainMap::zero(&z.shift(&c, -1), &x)).unwrap();
        let pair = normalize_exact_pair(&c, &k.inj, &k.proj).unwrap();
        assert!(pair.h.is_zero());
    }

    #[test]
    fn multiplication_by_two_does_not_split_over_z() {
        let c = ScalarEta::new(CoeffRing::Integers, 1);
        let x = Complex::stalk(&c, 0, 1);
        let z = Complex::stalk(&c, 0, 0);
        let i = ChainMap::new(&c, x.clone(), x.clone(), [(0, RingMatrix::from_i64(c.ring, 1, 1, &[2]))]).unwrap();
        let p = ChainMap::zero(&x, &z);
        assert!(matches!(normalize_exact_pair(&c, &i, &p), Err(Error::NotChainwiseSplit { degree: 0 })));
        assert!(!is_chainwise_split(&c, &i, &p).unwrap());
    }
}
