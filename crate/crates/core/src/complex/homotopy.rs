use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{degrees, ChainMap};
use crate::base::BaseCategory;
use crate::equations::MorphismSystem;
use crate::error::{Error, Result};

/// A family `s^n` witnessing a homotopy. For the classical relation
/// `s^n: X^n → Y^{n−1}`; for the η-relation `s^n: X^n(1) → Y^{n−1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HomotopyCertificate<B: BaseCategory> {
    pub eta: bool,
    pub s: BTreeMap<i64, B::Mor>,
}

impl<B: BaseCategory> HomotopyCertificate<B> {
    pub fn is_zero(&self) -> bool {
        self.s.is_empty()
    }
}

fn same_ends<B: BaseCategory>(f: &ChainMap<B>, g: &ChainMap<B>) -> Result<()> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::objects("maps have different endpoints"));
    }
    Ok(())
}

/// The system `f^n − g^n = s^{n+1} d_X^n + d_Y^{n−1} s^n` in the unknowns `s`,
/// together with the degree of each unknown.
pub fn homotopy_system<'c, B: BaseCategory>(
    cat: &'c B,
    f: &ChainMap<B>,
    g: &ChainMap<B>,
) -> Result<(MorphismSystem<'c, B>, Vec<i64>)> {
    same_ends(f, g)?;
    let (x, y) = (f.source(), f.target());
    let mut sys = MorphismSystem::new(cat);
    let mut slots: BTreeMap<i64, usize> = BTreeMap::new();
    let mut degs = Vec::new();
    let span = f.span().map(|(lo, hi)| (lo, hi + 1));
    for n in degrees(span) {
        let (xn, yp) = (x.obj(cat, n), y.obj(cat, n - 1));
        if cat.hom_dim(&xn, &yp) > 0 {
            slots.insert(n, sys.unknown(xn, yp));
            degs.push(n);
        }
    }
    for n in degrees(f.span()) {
        let (xn, yn) = (x.obj(cat, n), y.obj(cat, n));
        if cat.hom_dim(&xn, &yn) == 0 {
            continue;
        }
        let diff = cat.sub(&f.comp(cat, n), &g.comp(cat, n))?;
        let dx = x.diff(cat, n);
        let dy = y.diff(cat, n - 1);
        let next = slots.get(&(n + 1)).copied();
        let here = slots.get(&n).copied();
        let deps = next.into_iter().chain(here).collect();
        sys.equation(xn, yn, deps, move |v| {
            let mut acc = diff.clone();
            if let Some(u) = next {
                acc = cat.sub(&acc, &cat.compose(&v[u], &dx)?)?;
            }
            if let Some(u) = here {
                acc = cat.sub(&acc, &cat.compose(&dy, &v[u])?)?;
            }
            Ok(acc)
        });
    }
    Ok((sys, degs))
}

fn certificate<B: BaseCategory>(cat: &B, eta: bool, degs: &[i64], values: Vec<B::Mor>) -> HomotopyCertificate<B> {
    let s = degs.iter().copied().zip(values).filter(|(_, m)| !cat.is_zero_mor(m)).collect();
    HomotopyCertificate { eta, s }
}

/// A classical homotopy `f ≃ g`, if one exists.
pub fn homotopic<B: BaseCategory>(cat: &B, f: &ChainMap<B>, g: &ChainMap<B>) -> Result<Option<HomotopyCertificate<B>>> {
    if f == g {
        return Ok(Some(HomotopyCertificate { eta: false, s: BTreeMap::new() }));
    }
    let (sys, degs) = homotopy_system(cat, f, g)?;
    Ok(sys.solve()?.map(|v| certificate(cat, false, &degs, v)))
}

/// Re-checks a classical certificate against `f − g = s d + d s`.
pub fn check_homotopy<B: BaseCategory>(
    cat: &B,
    f: &ChainMap<B>,
    g: &ChainMap<B>,
    cert: &HomotopyCertificate<B>,
) -> Result<bool> {
    same_ends(f, g)?;
    if cert.eta {
        return Ok(false);
    }
    let (x, y) = (f.source(), f.target());
    let s = |n: i64| cert.s.get(&n).cloned().unwrap_or_else(|| cat.zero_mor(&x.obj(cat, n), &y.obj(cat, n - 1)));
    for (n, m) in &cert.s {
        if cat.source(m) != x.obj(cat, *n) || cat.target(m) != y.obj(cat, n - 1) {
            return Ok(false);
        }
    }
    let span = f.span().map(|(lo, hi)| (lo - 1, hi + 1));
    for n in degrees(span) {
        let lhs = cat.sub(&f.comp(cat, n), &g.comp(cat, n))?;
        let rhs = cat.add(&cat.compose(&s(n + 1), &x.diff(cat, n))?, &cat.compose(&y.diff(cat, n - 1), &s(n))?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ScalarEta;
    use crate::complex::Complex;
    use crate::linalg::{CoeffRing, RingMatrix};

    #[test]
    fn identity_of_two_is_not_null_homotopic_mod_four() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let two = RingMatrix::from_i64(c.ring, 1, 1, &[2]);
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, two)]).unwrap();
        let id = ChainMap::identity(&c, &x);
        let zero = ChainMap::zero(&x, &x);
        assert!(homotopic(&c, &id, &zero).unwrap().is_none());
        let (sys, _) = homotopy_system(&c, &id, &zero).unwrap();
        assert_eq!(sys.brute_force(8).unwrap(), Some(None));
        let refl = homotopic(&c, &id, &id).unwrap().unwrap();
        assert!(refl.is_zero());
        assert!(check_homotopy(&c, &id, &id, &refl).unwrap());
    }
}
