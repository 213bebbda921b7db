use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BaseCategory;
use crate::error::{Error, Result};
use crate::linalg::{CoeffRing, RingMatrix, Scalar};

/// Finitely supported ℤ-graded free modules and degree-raising maps.
///
/// A morphism `f: X → Y` is a family `f_n^j: X^j → Y^{j+n}` with `n ≥ 0`,
/// composed by convolution. `(X(k))^j = X^{j+k}` and `η_X: X(1) → X` is the
/// identity `X^{j+1} → X^{j+1}` placed in component `n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graded {
    pub ring: CoeffRing,
}

impl Graded {
    pub fn new(ring: CoeffRing) -> Self {
        Graded { ring }
    }
}

/// Ranks by degree; zero ranks are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedObject {
    ranks: BTreeMap<i64, usize>,
}

impl GradedObject {
    pub fn new(ranks: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut out = BTreeMap::new();
        for (j, r) in ranks {
            *out.entry(j).or_insert(0) += r;
        }
        out.retain(|_, r| *r > 0);
        GradedObject { ranks: out }
    }

    /// Rank `r` concentrated in degree `j`.
    pub fn stalk(j: i64, r: usize) -> Self {
        Self::new([(j, r)])
    }

    pub fn rank(&self, j: i64) -> usize {
        self.ranks.get(&j).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranks.keys().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism {
    source: GradedObject,
    target: GradedObject,
    components: BTreeMap<(usize, i64), RingMatrix>,
}

impl GradedMorphism {
    /// Components keyed by `(n, j)`; each must be `rank Y^{j+n} x rank X^j`.
    /// Zero components are dropped.
    pub fn new(
        ring: CoeffRing,
        source: GradedObject,
        target: GradedObject,
        components: impl IntoIterator<Item = ((usize, i64), RingMatrix)>,
    ) -> Result<Self> {
        let mut out: BTreeMap<(usize, i64), RingMatrix> = BTreeMap::new();
        for ((n, j), m) in components {
            if m.ring() != ring {
                return Err(Error::RingMismatch { left: ring.to_string(), right: m.ring().to_string() });
            }
            let want = (target.rank(j + n as i64), source.rank(j));
            if m.shape() != want {
                return Err(Error::dims(format!(
                    "component ({n},{j}) is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            match out.remove(&(n, j)) {
                Some(prev) => {
                    out.insert((n, j), prev.try_add(&m)?);
                }
                None => {
                    out.insert((n, j), m);
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(GradedMorphism { source, target, components: out })
    }

    pub fn source(&self) -> &GradedObject {
        &self.source
    }

    pub fn target(&self) -> &GradedObject {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<(usize, i64), RingMatrix> {
        &self.components
    }

    /// `f_n^j`, or `None` when it is zero.
    pub fn component(&self, n: usize, j: i64) -> Option<&RingMatrix> {
        self.components.get(&(n, j))
    }

    /// Largest `n` with a nonzero component.
    pub fn max_degree(&self) -> Option<usize> {
        self.components.keys().map(|k| k.0).max()
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    n: usize,
    j: i64,
    matrix: RingMatrix,
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    source: GradedObject,
    target: GradedObject,
    components: Vec<ComponentRepr>,
}

impl Serialize for GradedMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|(&(n, j), m)| ComponentRepr { n, j, matrix: m.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MorphismRepr::deserialize(d)?;
        let ring = match repr.components.first() {
            Some(c) => c.matrix.ring(),
            None => {
                return Ok(GradedMorphism { source: repr.source, target: repr.target, components: BTreeMap::new() })
            }
        };
        GradedMorphism::new(ring, repr.source, repr.target, repr.components.into_iter().map(|c| ((c.n, c.j), c.matrix)))
            .map_err(serde::de::Error::custom)
    }
}

impl Graded {
    fn unchecked(
        &self,
        source: GradedObject,
        target: GradedObject,
        comps: BTreeMap<(usize, i64), RingMatrix>,
    ) -> GradedMorphism {
        let mut components = comps;
        components.retain(|_, m| !m.is_zero());
        GradedMorphism { source, target, components }
    }

    /// Basis slots of `Hom(x, y)` in `(n, j)` order.
    fn slots(&self, x: &GradedObject, y: &GradedObject) -> Vec<(usize, i64, usize, usize)> {
        let mut out = Vec::new();
        for (&j, &cx) in x.ranks() {
            for (&i, &cy) in y.ranks() {
                if i >= j {
                    out.push(((i - j) as usize, j, cy, cx));
                }
            }
        }
        out.sort_by_key(|s| (s.0, s.1));
        out
    }
}

impl BaseCategory for Graded {
    type Obj = GradedObject;
    type Mor = GradedMorphism;

    fn ring(&self) -> CoeffRing {
        self.ring
    }

    fn zero_obj(&self) -> GradedObject {
        GradedObject::default()
    }

    fn is_zero_obj(&self, x: &GradedObject) -> bool {
        x.is_zero()
    }

    fn direct_sum(&self, parts: &[GradedObject]) -> GradedObject {
        GradedObject::new(parts.iter().flat_map(|p| p.ranks.iter().map(|(&j, &r)| (j, r))))
    }

    fn source(&self, f: &GradedMorphism) -> GradedObject {
        f.source.clone()
    }

    fn target(&self, f: &GradedMorphism) -> GradedObject {
        f.target.clone()
    }

    fn compose(&self, g: &GradedMorphism, f: &GradedMorphism) -> Result<GradedMorphism> {
        if f.target != g.source {
            return Err(Error::objects(format!("cannot compose: {:?} vs {:?}", f.target, g.source)));
        }
        let mut out: BTreeMap<(usize, i64), RingMatrix> = BTreeMap::new();
        for (&(k, j), fk) in &f.components {
            let mid = j + k as i64;
            for (&(m, jj), gm) in &g.components {
                if jj != mid {
                    continue;
                }
                let term = gm.mat_mul(fk)?;
                let key = (k + m, j);
                let sum = match out.remove(&key) {
                    Some(prev) => prev.try_add(&term)?,
                    None => term,
                };
                out.insert(key, sum);
            }
        }
        Ok(self.unchecked(f.source.clone(), g.target.clone(), out))
    }

    fn add(&self, f: &GradedMorphism, g: &GradedMorphism) -> Result<GradedMorphism> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::objects("cannot add morphisms between different objects"));
        }
        let mut out = f.components.clone();
        for (k, m) in &g.components {
            let sum = match out.remove(k) {
                Some(prev) => prev.try_add(m)?,
                None => m.clone(),
            };
            out.insert(*k, sum);
        }
        Ok(self.unchecked(f.source.clone(), f.target.clone(), out))
    }

    fn neg(&self, f: &GradedMorphism) -> GradedMorphism {
        let comps = f.components.iter().map(|(k, m)| (*k, m.negate())).collect();
        self.unchecked(f.source.clone(), f.target.clone(), comps)
    }

    fn scale(&self, f: &GradedMorphism, s: Scalar) -> GradedMorphism {
        let comps = f.components.iter().map(|(k, m)| (*k, m.scale(s))).collect();
        self.unchecked(f.source.clone(), f.target.clone(), comps)
    }

    fn zero_mor(&self, x: &GradedObject, y: &GradedObject) -> GradedMorphism {
        GradedMorphism { source: x.clone(), target: y.clone(), components: BTreeMap::new() }
    }

    fn identity(&self, x: &GradedObject) -> GradedMorphism {
        let comps = x.ranks.iter().map(|(&j, &r)| ((0, j), RingMatrix::identity(self.ring, r))).collect();
        self.unchecked(x.clone(), x.clone(), comps)
    }

    fn is_zero_mor(&self, f: &GradedMorphism) -> bool {
        f.components.is_empty()
    }

    fn shift_obj(&self, x: &GradedObject, k: i64) -> GradedObject {
        GradedObject { ranks: x.ranks.iter().map(|(&j, &r)| (j - k, r)).collect() }
    }

    fn shift_mor(&self, f: &GradedMorphism, k: i64) -> GradedMorphism {
        GradedMorphism {
            source: self.shift_obj(&f.source, k),
            target: self.shift_obj(&f.target, k),
            components: f.components.iter().map(|(&(n, j), m)| ((n, j - k), m.clone())).collect(),
        }
    }

    fn eta(&self, x: &GradedObject) -> GradedMorphism {
        let comps = x.ranks.iter().map(|(&d, &r)| ((1, d - 1), RingMatrix::identity(self.ring, r))).collect();
        self.unchecked(self.shift_obj(x, 1), x.clone(), comps)
    }

    fn block(
        &self,
        rows: &[GradedObject],
        cols: &[GradedObject],
        entry: &mut dyn FnMut(usize, usize) -> Option<GradedMorphism>,
    ) -> Result<GradedMorphism> {
        let source = self.direct_sum(cols);
        let target = self.direct_sum(rows);
        let mut entries: Vec<Vec<Option<GradedMorphism>>> = Vec::with_capacity(rows.len());
        let mut keys = std::collections::BTreeSet::new();
        for (a, ra) in rows.iter().enumerate() {
            let mut row = Vec::with_capacity(cols.len());
            for (b, cb) in cols.iter().enumerate() {
                let e = entry(a, b);
                if let Some(e) = &e {
                    if &e.source != cb || &e.target != ra {
                        return Err(Error::objects(format!("block ({a},{b}) has the wrong source or target")));
                    }
                    keys.extend(e.components.keys().copied());
                }
                row.push(e);
            }
            entries.push(row);
        }
        let mut out = BTreeMap::new();
        for (n, j) in keys {
            let rd: Vec<usize> = rows.iter().map(|r| r.rank(j + n as i64)).collect();
            let cd: Vec<usize> = cols.iter().map(|c| c.rank(j)).collect();
            let m = RingMatrix::from_blocks(self.ring, &rd, &cd, |a, b| {
                entries[a][b].as_ref().and_then(|e| e.component(n, j).cloned())
            })?;
            out.insert((n, j), m);
        }
        Ok(self.unchecked(source, target, out))
    }

    fn block_entry(
        &self,
        f: &GradedMorphism,
        rows: &[GradedObject],
        cols: &[GradedObject],
        a: usize,
        b: usize,
    ) -> GradedMorphism {
        let mut out = BTreeMap::new();
        for (&(n, j), m) in &f.components {
            let rd: Vec<usize> = rows.iter().map(|r| r.rank(j + n as i64)).collect();
            let cd: Vec<usize> = cols.iter().map(|c| c.rank(j)).collect();
            out.insert((n, j), m.block(&rd, &cd, a, b));
        }
        self.unchecked(cols[b].clone(), rows[a].clone(), out)
    }

    fn hom_dim(&self, x: &GradedObject, y: &GradedObject) -> usize {
        self.slots(x, y).iter().map(|s| s.2 * s.3).sum()
    }

    fn flatten(&self, f: &GradedMorphism) -> Vec<Scalar> {
        let mut out = Vec::new();
        for (n, j, r, c) in self.slots(&f.source, &f.target) {
            match f.component(n, j) {
                Some(m) => out.extend_from_slice(m.entries()),
                None => out.extend(std::iter::repeat_n(Scalar::ZERO, r * c)),
            }
        }
        out
    }

    fn unflatten(&self, x: &GradedObject, y: &GradedObject, coords: &[Scalar]) -> GradedMorphism {
        let mut out = BTreeMap::new();
        let mut pos = 0;
        for (n, j, r, c) in self.slots(x, y) {
            let m =
                RingMatrix::new(self.ring, r, c, coords[pos..pos + r * c].to_vec()).unwrap_or_else(|e| panic!("{e}"));
            pos += r * c;
            out.insert((n, j), m);
        }
        assert_eq!(pos, coords.len(), "coordinate vector has the wrong length");
        self.unchecked(x.clone(), y.clone(), out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_graded_morphism;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_by_one(ring: CoeffRing, v: i64) -> RingMatrix {
        RingMatrix::from_i64(ring, 1, 1, &[v])
    }

    #[test]
    fn convolution_example() {
        // X = Y = Z = ℤ in degrees 0 and 1; f = {f_0 = 2, f_1 = 3}, g = {g_0 = 5, g_1 = 7}.
        let z = CoeffRing::Integers;
        let c = Graded::new(z);
        let x = GradedObject::new([(0, 1), (1, 1)]);
        let f = GradedMorphism::new(
            z,
            x.clone(),
            x.clone(),
            [((0, 0), one_by_one(z, 2)), ((0, 1), one_by_one(z, 2)), ((1, 0), one_by_one(z, 3))],
        )
        .unwrap();
        let g = GradedMorphism::new(
            z,
            x.clone(),
            x.clone(),
            [((0, 0), one_by_one(z, 5)), ((0, 1), one_by_one(z, 5)), ((1, 0), one_by_one(z, 7))],
        )
        .unwrap();
        let gf = c.compose(&g, &f).unwrap();
        assert_eq!(gf.component(0, 0), Some(&one_by_one(z, 10)));
        // (gf)_1^0 = g_0^1 f_1^0 + g_1^0 f_0^0 = 5*3 + 7*2
        assert_eq!(gf.component(1, 0), Some(&one_by_one(z, 29)));
    }

    #[test]
    fn modular_sum_wraps() {
        let r = CoeffRing::IntegersMod(4);
        let c = Graded::new(r);
        let x = GradedObject::stalk(0, 1);
        let f = GradedMorphism::new(r, x.clone(), x.clone(), [((0, 0), one_by_one(r, 3))]).unwrap();
        let g = GradedMorphism::new(r, x.clone(), x.clone(), [((0, 0), one_by_one(r, 2))]).unwrap();
        assert_eq!(c.add(&f, &g).unwrap().component(0, 0), Some(&one_by_one(r, 1)));
        assert!(c.is_zero_mor(&c.add(&f, &c.neg(&f)).unwrap()));
    }

    #[test]
    fn eta_lands_in_degree_one() {
        let c = Graded::new(CoeffRing::Rationals);
        let x = GradedObject::new([(0, 2), (3, 1)]);
        let e = c.eta(&x);
        assert_eq!(e.source(), &GradedObject::new([(-1, 2), (2, 1)]));
        assert_eq!(e.component(1, -1), Some(&RingMatrix::identity(c.ring, 2)));
        assert_eq!(e.component(1, 2), Some(&RingMatrix::identity(c.ring, 1)));
        assert!(c.check_eta_coherence(&x));
        assert!(c.check_eta_coherence(&c.zero_obj()));
    }

    #[test]
    fn composition_rejects_mismatch() {
        let c = Graded::new(CoeffRing::Integers);
        let f = c.identity(&GradedObject::stalk(0, 1));
        let g = c.identity(&GradedObject::stalk(1, 1));
        assert!(matches!(c.compose(&g, &f), Err(Error::ObjectMismatch(_))));
    }

    #[test]
    fn serde_round_trip() {
        let r = CoeffRing::IntegersMod(6);
        let c = Graded::new(r);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_graded_morphism(&c, &mut rng, 3, 2);
        let text = serde_json::to_string(&f).unwrap();
        let back: GradedMorphism = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }

    fn rings() -> [CoeffRing; 4] {
        [CoeffRing::Integers, CoeffRing::IntegersMod(4), CoeffRing::PrimeField(5), CoeffRing::Rationals]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn category_laws(seed in 0u64..u64::MAX, ri in 0usize..4) {
            let c = Graded::new(rings()[ri]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_graded_morphism(&c, &mut rng, 3, 2);
            let y = f.target().clone();
            let g = crate::gen::random_graded_morphism_from(&c, &mut rng, &y, 2);
            let z = g.target().clone();
            let h = crate::gen::random_graded_morphism_from(&c, &mut rng, &z, 2);
            let lhs = c.compose(&h, &c.compose(&g, &f).unwrap()).unwrap();
            let rhs = c.compose(&c.compose(&h, &g).unwrap(), &f).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(c.compose(&c.identity(&y), &f).unwrap(), f.clone());
            prop_assert_eq!(c.compose(&f, &c.identity(f.source())).unwrap(), f.clone());
            prop_assert!(c.check_eta_naturality(&f).unwrap());
            prop_assert!(c.check_eta_coherence(f.source()));
            // (k) is an automorphism
            prop_assert_eq!(c.shift_mor(&c.shift_mor(&f, 2), -2), f.clone());
            let fg = c.compose(&g, &f).unwrap();
            prop_assert_eq!(c.shift_mor(&fg, 1), c.compose(&c.shift_mor(&g, 1), &c.shift_mor(&f, 1)).unwrap());
            // flatten/unflatten
            let coords = c.flatten(&f);
            prop_assert_eq!(coords.len(), c.hom_dim(f.source(), &y));
            prop_assert_eq!(c.unflatten(f.source(), &y, &coords), f.clone());
        }

        #[test]
        fn blocks_round_trip(seed in 0u64..u64::MAX, ri in 0usize..4) {
            let c = Graded::new(rings()[ri]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_graded_morphism(&c, &mut rng, 2, 2);
            let g = random_graded_morphism(&c, &mut rng, 2, 2);
            let rows = [f.target().clone(), g.target().clone()];
            let cols = [f.source().clone(), g.source().clone()];
            let m = c.block(&rows, &cols, &mut |a, b| match (a, b) {
                (0, 0) => Some(f.clone()),
                (1, 1) => Some(g.clone()),
                _ => None,
            }).unwrap();
            prop_assert_eq!(c.block_entry(&m, &rows, &cols, 0, 0), f.clone());
            prop_assert_eq!(c.block_entry(&m, &rows, &cols, 1, 1), g.clone());
            prop_assert!(c.is_zero_mor(&c.block_entry(&m, &rows, &cols, 0, 1)));
        }
    }
}
