//! Bounded complexes and chain maps over a base category.

mod cone;
mod exact_pair;
mod homotopy;
mod maps;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use cone::{cone, eta_on_cone, standard_pair, Cone};
pub use exact_pair::{is_chainwise_split, normalize_exact_pair, standard_exact_pair, ExactPair};
pub use homotopy::{check_homotopy, homotopic, homotopy_system, HomotopyCertificate};
pub use maps::{chain_map_from_solution, chain_map_system, extend_along, lift_through, random_chain_map};

use crate::base::BaseCategory;
use crate::error::{Error, Result};

/// A bounded complex `⋯ → X^n → X^{n+1} → ⋯`.
///
/// Only nonzero objects and nonzero differentials are stored, so two
/// complexes are equal exactly when `==` says so.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Complex<B: BaseCategory> {
    objects: BTreeMap<i64, B::Obj>,
    differentials: BTreeMap<i64, B::Mor>,
}

/// A family `f^n: X^n → Y^n`; `ChainMap::new` checks the commuting squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ChainMap<B: BaseCategory> {
    source: Complex<B>,
    target: Complex<B>,
    components: BTreeMap<i64, B::Mor>,
}

/// Smallest interval containing both supports, if either is nonempty.
pub fn hull(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
    }
}

/// Degrees `lo..=hi` of an optional span, empty when `None`.
pub fn degrees(span: Option<(i64, i64)>) -> std::ops::RangeInclusive<i64> {
    match span {
        Some((lo, hi)) => lo..=hi,
        #[allow(clippy::reversed_empty_ranges)]
        None => 1..=0,
    }
}

impl<B: BaseCategory> Default for Complex<B> {
    fn default() -> Self {
        Complex { objects: BTreeMap::new(), differentials: BTreeMap::new() }
    }
}

impl<B: BaseCategory> Complex<B> {
    /// Checks shapes and `d ∘ d = 0`.
    pub fn new(
        cat: &B,
        objects: impl IntoIterator<Item = (i64, B::Obj)>,
        differentials: impl IntoIterator<Item = (i64, B::Mor)>,
    ) -> Result<Self> {
        let c = Self::raw(cat, objects, differentials)?;
        if let Some(n) = c.first_defect(cat)? {
            return Err(Error::InvalidComplex(format!("d^{} ∘ d^{n} ≠ 0", n + 1)));
        }
        Ok(c)
    }

    /// Checks shapes only; `validate` decides `d ∘ d = 0`.
    pub fn raw(
        cat: &B,
        objects: impl IntoIterator<Item = (i64, B::Obj)>,
        differentials: impl IntoIterator<Item = (i64, B::Mor)>,
    ) -> Result<Self> {
        let mut objs = BTreeMap::new();
        for (n, x) in objects {
            if !cat.is_zero_obj(&x) {
                objs.insert(n, x);
            }
        }
        let mut c = Complex { objects: objs, differentials: BTreeMap::new() };
        for (n, d) in differentials {
            if cat.source(&d) != c.obj(cat, n) || cat.target(&d) != c.obj(cat, n + 1) {
                return Err(Error::InvalidComplex(format!("d^{n} has the wrong source or target")));
            }
            if !cat.is_zero_mor(&d) {
                c.differentials.insert(n, d);
            }
        }
        Ok(c)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// A single object in degree `n`.
    pub fn stalk(cat: &B, n: i64, x: B::Obj) -> Self {
        Self::raw(cat, [(n, x)], []).expect("stalk complex")
    }

    pub fn obj(&self, cat: &B, n: i64) -> B::Obj {
        self.objects.get(&n).cloned().unwrap_or_else(|| cat.zero_obj())
    }

    /// `d^n: X^n → X^{n+1}`.
    pub fn diff(&self, cat: &B, n: i64) -> B::Mor {
        match self.differentials.get(&n) {
            Some(d) => d.clone(),
            None => cat.zero_mor(&self.obj(cat, n), &self.obj(cat, n + 1)),
        }
    }

    pub fn objects(&self) -> &BTreeMap<i64, B::Obj> {
        &self.objects
    }

    pub fn differentials(&self) -> &BTreeMap<i64, B::Mor> {
        &self.differentials
    }

    pub fn is_zero(&self) -> bool {
        self.objects.is_empty()
    }

    /// `(min, max)` of the degrees holding a nonzero object.
    pub fn span(&self) -> Option<(i64, i64)> {
        let lo = *self.objects.keys().next()?;
        let hi = *self.objects.keys().next_back()?;
        Some((lo, hi))
    }

    fn first_defect(&self, cat: &B) -> Result<Option<i64>> {
        for &n in self.differentials.keys() {
            if let Some(next) = self.differentials.get(&(n + 1)) {
                if !cat.is_zero_mor(&cat.compose(next, &self.differentials[&n])?) {
                    return Ok(Some(n));
                }
            }
        }
        Ok(None)
    }

    /// `d^{n+1} ∘ d^n = 0` for all `n`.
    pub fn validate(&self, cat: &B) -> bool {
        matches!(self.first_defect(cat), Ok(None))
    }

    /// `X[k]` with `X[k]^n = X^{n+k}` and `d_{X[k]}^n = (−1)^k d_X^{n+k}`.
    pub fn shift(&self, cat: &B, k: i64) -> Self {
        let odd = k.rem_euclid(2) == 1;
        Complex {
            objects: self.objects.iter().map(|(&n, x)| (n - k, x.clone())).collect(),
            differentials: self
                .differentials
                .iter()
                .map(|(&n, d)| (n - k, if odd { cat.neg(d) } else { d.clone() }))
                .collect(),
        }
    }

    /// `X(k)`: the base automorphism applied degreewise.
    pub fn twist(&self, cat: &B, k: i64) -> Self {
        Complex {
            objects: self.objects.iter().map(|(&n, x)| (n, cat.shift_obj(x, k))).collect(),
            differentials: self.differentials.iter().map(|(&n, d)| (n, cat.shift_mor(d, k))).collect(),
        }
    }

    /// `X ⊕ Y` with block-diagonal differential.
    pub fn direct_sum(&self, cat: &B, other: &Self) -> Result<Self> {
        let span = hull(self.span(), other.span());
        let mut objs = Vec::new();
        let mut diffs = Vec::new();
        for n in degrees(span) {
            let parts = [self.obj(cat, n), other.obj(cat, n)];
            objs.push((n, cat.direct_sum(&parts)));
            let next = [self.obj(cat, n + 1), other.obj(cat, n + 1)];
            let (a, b) = (self.diff(cat, n), other.diff(cat, n));
            diffs.push((
                n,
                cat.block(&next, &parts, &mut |r, c| match (r, c) {
                    (0, 0) => Some(a.clone()),
                    (1, 1) => Some(b.clone()),
                    _ => None,
                })?,
            ));
        }
        Self::raw(cat, objs, diffs)
    }
}

impl<B: BaseCategory> ChainMap<B> {
    /// Checks shapes and the commuting squares `f^{n+1} d_X^n = d_Y^n f^n`.
    pub fn new(
        cat: &B,
        source: Complex<B>,
        target: Complex<B>,
        components: impl IntoIterator<Item = (i64, B::Mor)>,
    ) -> Result<Self> {
        let f = Self::raw(cat, source, target, components)?;
        if let Some(n) = f.first_defect(cat)? {
            return Err(Error::InvalidChainMap(format!("square at degree {n} does not commute")));
        }
        Ok(f)
    }

    /// Checks shapes only; `validate` decides the chain condition.
    pub fn raw(
        cat: &B,
        source: Complex<B>,
        target: Complex<B>,
        components: impl IntoIterator<Item = (i64, B::Mor)>,
    ) -> Result<Self> {
        let mut comps = BTreeMap::new();
        for (n, f) in components {
            if cat.source(&f) != source.obj(cat, n) || cat.target(&f) != target.obj(cat, n) {
                return Err(Error::InvalidChainMap(format!("component {n} has the wrong source or target")));
            }
            if !cat.is_zero_mor(&f) {
                comps.insert(n, f);
            }
        }
        Ok(ChainMap { source, target, components: comps })
    }

    pub fn zero(source: &Complex<B>, target: &Complex<B>) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn identity(cat: &B, x: &Complex<B>) -> Self {
        let comps = x.objects.iter().map(|(&n, o)| (n, cat.identity(o))).collect();
        ChainMap { source: x.clone(), target: x.clone(), components: comps }
    }

    pub fn source(&self) -> &Complex<B> {
        &self.source
    }

    pub fn target(&self) -> &Complex<B> {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, B::Mor> {
        &self.components
    }

    pub fn comp(&self, cat: &B, n: i64) -> B::Mor {
        match self.components.get(&n) {
            Some(f) => f.clone(),
            None => cat.zero_mor(&self.source.obj(cat, n), &self.target.obj(cat, n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Degrees where either end is nonzero.
    pub fn span(&self) -> Option<(i64, i64)> {
        hull(self.source.span(), self.target.span())
    }

    fn first_defect(&self, cat: &B) -> Result<Option<i64>> {
        let span = self.span().map(|(lo, hi)| (lo - 1, hi));
        for n in degrees(span) {
            let lhs = cat.compose(&self.comp(cat, n + 1), &self.source.diff(cat, n))?;
            let rhs = cat.compose(&self.target.diff(cat, n), &self.comp(cat, n))?;
            if lhs != rhs {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Both ends are complexes and every square commutes.
    pub fn validate(&self, cat: &B) -> bool {
        self.source.validate(cat) && self.target.validate(cat) && matches!(self.first_defect(cat), Ok(None))
    }

    /// `g ∘ self`.
    pub fn then(&self, cat: &B, g: &ChainMap<B>) -> Result<ChainMap<B>> {
        g.compose(cat, self)
    }

    /// `self ∘ f`.
    pub fn compose(&self, cat: &B, f: &ChainMap<B>) -> Result<ChainMap<B>> {
        if f.target != self.source {
            return Err(Error::objects("chain maps are not composable"));
        }
        let mut comps = Vec::new();
        for (&n, fn_) in &f.components {
            if let Some(gn) = self.components.get(&n) {
                comps.push((n, cat.compose(gn, fn_)?));
            }
        }
        Self::raw(cat, f.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, cat: &B, g: &ChainMap<B>) -> Result<ChainMap<B>> {
        if self.source != g.source || self.target != g.target {
            return Err(Error::objects("chain maps have different endpoints"));
        }
        let mut comps = Vec::new();
        for n in degrees(self.span()) {
            comps.push((n, cat.add(&self.comp(cat, n), &g.comp(cat, n))?));
        }
        Self::raw(cat, self.source.clone(), self.target.clone(), comps)
    }

    pub fn neg(&self, cat: &B) -> ChainMap<B> {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|(&n, f)| (n, cat.neg(f))).collect(),
        }
    }

    pub fn sub(&self, cat: &B, g: &ChainMap<B>) -> Result<ChainMap<B>> {
        self.add(cat, &g.neg(cat))
    }

    /// `f[k]`: components reindexed, no sign.
    pub fn shift(&self, cat: &B, k: i64) -> ChainMap<B> {
        ChainMap {
            source: self.source.shift(cat, k),
            target: self.target.shift(cat, k),
            components: self.components.iter().map(|(&n, f)| (n - k, f.clone())).collect(),
        }
    }

    /// `f(k)`.
    pub fn twist(&self, cat: &B, k: i64) -> ChainMap<B> {
        ChainMap {
            source: self.source.twist(cat, k),
            target: self.target.twist(cat, k),
            components: self.components.iter().map(|(&n, f)| (n, cat.shift_mor(f, k))).collect(),
        }
    }

    /// Same components, new endpoints (which must have the same objects).
    pub fn retarget(&self, cat: &B, source: Complex<B>, target: Complex<B>) -> Result<ChainMap<B>> {
        Self::raw(cat, source, target, self.components.clone())
    }
}

/// `η_X: X(1) → X` as a chain map.
pub fn eta_map<B: BaseCategory>(cat: &B, x: &Complex<B>) -> ChainMap<B> {
    let comps: Vec<_> = x.objects.iter().map(|(&n, o)| (n, cat.eta(o))).collect();
    ChainMap::raw(cat, x.twist(cat, 1), x.clone(), comps).expect("η has the right shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Graded, GradedObject, ScalarEta};
    use crate::linalg::{CoeffRing, RingMatrix};

    fn z4() -> ScalarEta {
        ScalarEta::new(CoeffRing::IntegersMod(4), 2)
    }

    fn m(v: i64) -> RingMatrix {
        RingMatrix::from_i64(CoeffRing::IntegersMod(4), 1, 1, &[v])
    }

    #[test]
    fn two_squared_is_zero_mod_four() {
        let c = z4();
        let x = Complex::new(&c, [(0, 1), (1, 1), (2, 1)], [(0, m(2)), (1, m(2))]).unwrap();
        assert!(x.validate(&c));
        let bad = Complex::raw(&c, [(0, 1), (1, 1), (2, 1)], [(0, m(1)), (1, m(1))]).unwrap();
        assert!(!bad.validate(&c));
        assert!(Complex::new(&c, [(0, 1), (1, 1), (2, 1)], [(0, m(1)), (1, m(1))]).is_err());
        assert!(Complex::<ScalarEta>::zero().validate(&c));
    }

    #[test]
    fn shift_negates_and_reindexes() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, m(2))]).unwrap();
        let s = x.shift(&c, 1);
        assert_eq!(s.diff(&c, -1), m(2));
        assert_eq!(s.obj(&c, -1), 1);
        assert_eq!(s.shift(&c, -1), x);
        let y = Complex::new(&c, [(0, 1), (1, 1)], [(0, m(1))]).unwrap();
        assert_eq!(y.shift(&c, 1).diff(&c, -1), m(3));
        assert_eq!(Complex::<ScalarEta>::zero().shift(&c, 3), Complex::zero());
    }

    #[test]
    fn twist_commutes_with_shift() {
        let g = Graded::new(CoeffRing::Integers);
        let x0 = GradedObject::new([(0, 1), (1, 1)]);
        let x1 = GradedObject::stalk(2, 1);
        let d = crate::base::GradedMorphism::new(
            g.ring,
            x0.clone(),
            x1.clone(),
            [((1, 1), RingMatrix::from_i64(g.ring, 1, 1, &[3])), ((2, 0), RingMatrix::from_i64(g.ring, 1, 1, &[-1]))],
        )
        .unwrap();
        let x = Complex::new(&g, [(0, x0), (1, x1)], [(0, d)]).unwrap();
        assert_eq!(x.shift(&g, 1).twist(&g, 1), x.twist(&g, 1).shift(&g, 1));
        assert_eq!(x.twist(&g, 0), x);
        let sc = ScalarEta::new(CoeffRing::Integers, 5);
        let y = Complex::new(&sc, [(0, 2)], []).unwrap();
        assert_eq!(y.twist(&sc, 1), y);
    }

    #[test]
    fn chain_map_checks_squares() {
        let c = z4();
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, m(2))]).unwrap();
        assert!(ChainMap::new(&c, x.clone(), x.clone(), [(0, m(1)), (1, m(1))]).is_ok());
        let bad = ChainMap::raw(&c, x.clone(), x.clone(), [(0, m(1))]).unwrap();
        assert!(!bad.validate(&c));
        let id = ChainMap::identity(&c, &x);
        assert_eq!(id.compose(&c, &id).unwrap(), id);
        assert!(id.sub(&c, &id).unwrap().is_zero());
    }
}
