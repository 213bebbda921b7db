use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::base::BaseCategory;
use crate::complex::{
    chain_map_from_solution, chain_map_system, cone, degrees, eta_map, hull, normalize_exact_pair, standard_exact_pair,
    ChainMap, Cone, ExactPair,
};
use crate::error::Result;

/// A chainwise-split pair together with a representative `h̃ = η_X ∘ α` of
/// its homotopy invariant and an isomorphism onto the standard pair of `h̃`.
///
/// `h̃ = h + d_X t + t d_{Z[−1]}` where `h` is the invariant read off the
/// chosen splitting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EtaConflation<B: BaseCategory> {
    pub pair: ExactPair<B>,
    /// `α: Z[−1] → X(1)`
    pub alpha: ChainMap<B>,
    /// `t^n: Z^{n−1} → X^{n−1}`
    pub t: BTreeMap<i64, B::Mor>,
    /// `X → cone(η_X α) → Z`
    pub standard: Cone<B>,
    /// `Y → cone(η_X α)`, commuting with both legs.
    pub to_standard: ChainMap<B>,
    pub from_standard: ChainMap<B>,
}

impl<B: BaseCategory> EtaConflation<B> {
    fn t_at(&self, cat: &B, n: i64) -> B::Mor {
        let z1 = self.pair.z().shift(cat, -1);
        self.t.get(&n).cloned().unwrap_or_else(|| cat.zero_mor(&z1.obj(cat, n), &self.pair.x().obj(cat, n - 1)))
    }

    /// `η_X ∘ α`
    pub fn h_tilde(&self, cat: &B) -> Result<ChainMap<B>> {
        eta_map(cat, self.pair.x()).compose(cat, &self.alpha)
    }

    /// Re-checks every stored identity exactly.
    pub fn verify(&self, cat: &B) -> Result<bool> {
        if !self.pair.verify(cat)? || !self.alpha.validate(cat) {
            return Ok(false);
        }
        let x = self.pair.x();
        let z1 = self.pair.z().shift(cat, -1);
        let ht = self.h_tilde(cat)?;
        for n in degrees(hull(z1.span(), x.span()).map(|(a, b)| (a - 1, b + 1))) {
            let rhs = cat.add(
                &self.pair.h.comp(cat, n),
                &cat.add(
                    &cat.compose(&x.diff(cat, n - 1), &self.t_at(cat, n))?,
                    &cat.compose(&self.t_at(cat, n + 1), &z1.diff(cat, n))?,
                )?,
            )?;
            if ht.comp(cat, n) != rhs {
                return Ok(false);
            }
        }
        let y = self.pair.y();
        let s = &self.standard;
        let ok = self.to_standard.validate(cat)
            && self.from_standard.validate(cat)
            && self.to_standard.compose(cat, &self.from_standard)? == ChainMap::identity(cat, &s.complex)
            && self.from_standard.compose(cat, &self.to_standard)? == ChainMap::identity(cat, y)
            && self.to_standard.compose(cat, &self.pair.i)? == s.inj
            && s.proj.compose(cat, &self.to_standard)?.components() == self.pair.p.components();
        Ok(ok)
    }
}

fn assemble<B: BaseCategory>(
    cat: &B,
    pair: ExactPair<B>,
    alpha: ChainMap<B>,
    t: BTreeMap<i64, B::Mor>,
) -> Result<EtaConflation<B>> {
    let mut conf = EtaConflation {
        standard: cone(cat, &eta_map(cat, pair.x()).compose(cat, &alpha)?)?,
        to_standard: ChainMap::zero(pair.y(), pair.y()),
        from_standard: ChainMap::zero(pair.y(), pair.y()),
        pair,
        alpha,
        t,
    };
    let (x, y, z) = (conf.pair.x().clone(), conf.pair.y().clone(), conf.pair.z().clone());
    let mut to = Vec::new();
    let mut from = Vec::new();
    for n in degrees(conf.standard.complex.span()) {
        let parts = [z.obj(cat, n), x.obj(cat, n)];
        let yn = [y.obj(cat, n)];
        let (p, r, s, i) =
            (conf.pair.p.comp(cat, n), conf.pair.r(cat, n), conf.pair.sigma(cat, n), conf.pair.i.comp(cat, n));
        let t1 = conf.t_at(cat, n + 1);
        // [[1, 0], [−t, 1]] ∘ (p, r)ᵗ and its inverse (σ, i) ∘ [[1, 0], [t, 1]]
        let low = cat.sub(&r, &cat.compose(&t1, &p)?)?;
        to.push((n, cat.block(&parts, &yn, &mut |a, _| Some(if a == 0 { p.clone() } else { low.clone() }))?));
        let left = cat.add(&s, &cat.compose(&i, &t1)?)?;
        from.push((n, cat.block(&yn, &parts, &mut |_, b| Some(if b == 0 { left.clone() } else { i.clone() }))?));
    }
    conf.to_standard = ChainMap::raw(cat, y.clone(), conf.standard.complex.clone(), to)?;
    conf.from_standard = ChainMap::raw(cat, conf.standard.complex.clone(), y, from)?;
    Ok(conf)
}

/// Some chain map `α: Z[−1] → X(1)` with `η_X ∘ α = h`, from one joint solve.
pub fn factor_through_eta<B: BaseCategory>(cat: &B, h: &ChainMap<B>) -> Result<Option<ChainMap<B>>> {
    let src = h.source().clone();
    let x = h.target().clone();
    let x1 = x.twist(cat, 1);
    let (mut sys, slots) = chain_map_system(cat, &src, &x1);
    for n in degrees(hull(src.span(), x.span())) {
        let (a, b) = (src.obj(cat, n), x.obj(cat, n));
        if cat.hom_dim(&a, &b) == 0 {
            continue;
        }
        let eta = cat.eta(&x.obj(cat, n));
        let hn = h.comp(cat, n);
        let u = slots.get(&n).copied();
        sys.equation(a, b, u.into_iter().collect(), move |v| match u {
            Some(u) => cat.sub(&cat.compose(&eta, &v[u])?, &hn),
            None => Ok(cat.neg(&hn)),
        });
    }
    match sys.solve()? {
        Some(v) => Ok(Some(chain_map_from_solution(cat, &src, &x1, &slots, &v)?)),
        None => Ok(None),
    }
}

/// Decides whether some representative `h + d t + t d` of the homotopy
/// invariant factors through `η_X`, solving jointly for `α` and `t`.
///
/// Fails with `NotChainwiseSplit` (or `NotExact`) when `(i, p)` is not a
/// chainwise-split pair at all.
pub fn is_eta_conflation<B: BaseCategory>(
    cat: &B,
    i: &ChainMap<B>,
    p: &ChainMap<B>,
) -> Result<Option<EtaConflation<B>>> {
    let pair = normalize_exact_pair(cat, i, p)?;
    let x = pair.x().clone();
    let z1 = pair.z().shift(cat, -1);
    let x1 = x.twist(cat, 1);
    let (mut sys, alpha) = chain_map_system(cat, &z1, &x1);
    let span = hull(z1.span(), x.span()).map(|(a, b)| (a - 1, b + 1));
    let mut t = BTreeMap::new();
    for n in degrees(span) {
        let (a, b) = (z1.obj(cat, n), x.obj(cat, n - 1));
        if cat.hom_dim(&a, &b) > 0 {
            t.insert(n, sys.unknown(a, b));
        }
    }
    for n in degrees(span) {
        let (a, b) = (z1.obj(cat, n), x.obj(cat, n));
        if cat.hom_dim(&a, &b) == 0 {
            continue;
        }
        let eta = cat.eta(&b);
        let hn = pair.h.comp(cat, n);
        let (dx, dz) = (x.diff(cat, n - 1), z1.diff(cat, n));
        let (ua, ut, ut1) = (alpha.get(&n).copied(), t.get(&n).copied(), t.get(&(n + 1)).copied());
        let deps = ua.into_iter().chain(ut).chain(ut1).collect();
        // η α^n − h^n − d_X^{n−1} t^n − t^{n+1} d_{Z[−1]}^n = 0
        sys.equation(a, b, deps, move |v| {
            let mut acc = cat.neg(&hn);
            if let Some(u) = ua {
                acc = cat.add(&acc, &cat.compose(&eta, &v[u])?)?;
            }
            if let Some(u) = ut {
                acc = cat.sub(&acc, &cat.compose(&dx, &v[u])?)?;
            }
            if let Some(u) = ut1 {
                acc = cat.sub(&acc, &cat.compose(&v[u], &dz)?)?;
            }
            Ok(acc)
        });
    }
    let Some(values) = sys.solve()? else { return Ok(None) };
    let alpha_map = chain_map_from_solution(cat, &z1, &x1, &alpha, &values)?;
    let t_map = t.iter().map(|(&n, &u)| (n, values[u].clone())).filter(|(_, m)| !cat.is_zero_mor(m)).collect();
    Ok(Some(assemble(cat, pair, alpha_map, t_map)?))
}

/// The standard η-conflation `X → cone(η_X α) → Z` for `α: Z[−1] → X(1)`,
/// with the canonical splitting and `t = 0`.
pub fn standard_conflation<B: BaseCategory>(cat: &B, alpha: &ChainMap<B>) -> Result<EtaConflation<B>> {
    let x = alpha.target().twist(cat, -1);
    let f = eta_map(cat, &x).compose(cat, alpha)?;
    assemble(cat, standard_exact_pair(cat, &f)?, alpha.clone(), BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ScalarEta;
    use crate::complex::Complex;
    use crate::linalg::{CoeffRing, RingMatrix};

    fn m(c: &ScalarEta, v: i64) -> RingMatrix {
        RingMatrix::from_i64(c.ring, 1, 1, &[v])
    }

    #[test]
    fn factor_two_through_two_mod_four() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let s = Complex::stalk(&c, 0, 1);
        let h = ChainMap::new(&c, s.clone(), s.clone(), [(0, m(&c, 2))]).unwrap();
        let a = factor_through_eta(&c, &h).unwrap().unwrap();
        assert_eq!(a.comp(&c, 0).get(0, 0).num() % 2, 1);
        let one = ChainMap::identity(&c, &s);
        assert!(factor_through_eta(&c, &one).unwrap().is_none());
        let zero = ChainMap::zero(&s, &s);
        assert!(factor_through_eta(&c, &zero).unwrap().unwrap().is_zero());
    }

    #[test]
    fn cone_of_eta_composite_is_recognized() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, m(&c, 2))]).unwrap();
        let f = ChainMap::identity(&c, &x);
        let fe = f.compose(&c, &eta_map(&c, &x)).unwrap();
        let k = cone(&c, &fe).unwrap();
        let conf = is_eta_conflation(&c, &k.inj, &k.proj).unwrap().unwrap();
        assert!(conf.verify(&c).unwrap());
    }

    #[test]
    fn zero_eta_rejects_nonsplit_pair() {
        // over ℤ/4 with η = 0, the pair ℤ/4 → (ℤ/4 →1 ℤ/4) → ℤ/4 has h = 1, not null-homotopic
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 0);
        let x = Complex::stalk(&c, 1, 1);
        let z1 = Complex::stalk(&c, 1, 1);
        let h = ChainMap::new(&c, z1, x, [(1, m(&c, 1))]).unwrap();
        let k = cone(&c, &h).unwrap();
        assert!(is_eta_conflation(&c, &k.inj, &k.proj).unwrap().is_none());
        let split = cone(&c, &ChainMap::zero(h.source(), h.target())).unwrap();
        let conf = is_eta_conflation(&c, &split.inj, &split.proj).unwrap().unwrap();
        assert!(conf.verify(&c).unwrap());
    }
}
