use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gsystem::Bidegree;
use crate::base::ScalarEta;
use crate::complex::{homotopic, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::linalg::{CoeffRing, RingMatrix};

/// Free modules with `η = 0`; the category totalizations land in.
pub fn plain(ring: CoeffRing) -> ScalarEta {
    ScalarEta::new(ring, 0)
}

pub type Family = BTreeMap<Bidegree, RingMatrix>;

/// A complex of complexes up to homotopy: columns `(X^{•,j}, δ_0)` and maps
/// `δ_1: X^{•,j} → X^{•,j+1}` with `δ_1 δ_0 = δ_0 δ_1` and `δ_1 δ_1` null-homotopic.
///
/// `δ_0: (a, j) → (a+1, j)`, `δ_1: (a, j) → (a, j+1)`. The optional
/// certificate `h: (a, j) → (a−1, j+2)` satisfies `δ_1 δ_1 = δ_0 h + h δ_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    ring: CoeffRing,
    ranks: BTreeMap<Bidegree, usize>,
    delta0: Family,
    delta1: Family,
    certificate: Option<Family>,
}

fn insert_checked(
    out: &mut Family,
    ring: CoeffRing,
    at: Bidegree,
    m: RingMatrix,
    rows: usize,
    cols: usize,
) -> Result<()> {
    if m.ring() != ring {
        return Err(Error::RingMismatch { left: ring.to_string(), right: m.ring().to_string() });
    }
    if m.shape() != (rows, cols) {
        return Err(Error::dims(format!("map at {at:?} is {}x{}, expected {rows}x{cols}", m.rows(), m.cols())));
    }
    if !m.is_zero() {
        out.insert(at, m);
    }
    Ok(())
}

impl DeltaComplex {
    /// Checks shapes only.
    pub fn new(
        ring: CoeffRing,
        ranks: impl IntoIterator<Item = (Bidegree, usize)>,
        delta0: impl IntoIterator<Item = (Bidegree, RingMatrix)>,
        delta1: impl IntoIterator<Item = (Bidegree, RingMatrix)>,
        certificate: Option<Vec<(Bidegree, RingMatrix)>>,
    ) -> Result<Self> {
        let mut x = DeltaComplex {
            ring,
            ranks: ranks.into_iter().filter(|&(_, r)| r > 0).collect(),
            delta0: BTreeMap::new(),
            delta1: BTreeMap::new(),
            certificate: None,
        };
        let mut d0 = BTreeMap::new();
        for ((a, j), m) in delta0 {
            insert_checked(&mut d0, ring, (a, j), m, x.rank((a + 1, j)), x.rank((a, j)))?;
        }
        let mut d1 = BTreeMap::new();
        for ((a, j), m) in delta1 {
            insert_checked(&mut d1, ring, (a, j), m, x.rank((a, j + 1)), x.rank((a, j)))?;
        }
        x.delta0 = d0;
        x.delta1 = d1;
        if let Some(c) = certificate {
            let mut h = BTreeMap::new();
            for ((a, j), m) in c {
                insert_checked(&mut h, ring, (a, j), m, x.rank((a - 1, j + 2)), x.rank((a, j)))?;
            }
            x.certificate = Some(h);
        }
        Ok(x)
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rank(&self, at: Bidegree) -> usize {
        self.ranks.get(&at).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<Bidegree, usize> {
        &self.ranks
    }

    fn get(&self, fam: &Family, at: Bidegree, to: Bidegree) -> RingMatrix {
        fam.get(&at).cloned().unwrap_or_else(|| RingMatrix::zeros(self.ring, self.rank(to), self.rank(at)))
    }

    pub fn d0(&self, (a, j): Bidegree) -> RingMatrix {
        self.get(&self.delta0, (a, j), (a + 1, j))
    }

    pub fn d1(&self, (a, j): Bidegree) -> RingMatrix {
        self.get(&self.delta1, (a, j), (a, j + 1))
    }

    pub fn delta0(&self) -> &Family {
        &self.delta0
    }

    pub fn delta1(&self) -> &Family {
        &self.delta1
    }

    pub fn certificate(&self) -> Option<&Family> {
        self.certificate.as_ref()
    }

    /// `h` at `(a, j)`; zero without a certificate.
    pub fn h(&self, (a, j): Bidegree) -> RingMatrix {
        match &self.certificate {
            Some(c) => self.get(c, (a, j), (a - 1, j + 2)),
            None => RingMatrix::zeros(self.ring, self.rank((a - 1, j + 2)), self.rank((a, j))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn j_span(&self) -> Option<(i64, i64)> {
        Some((self.ranks.keys().map(|k| k.1).min()?, self.ranks.keys().map(|k| k.1).max()?))
    }

    pub fn a_span(&self) -> Option<(i64, i64)> {
        Some((self.ranks.keys().map(|k| k.0).min()?, self.ranks.keys().map(|k| k.0).max()?))
    }

    /// The column `(X^{•,j}, δ_0)`.
    pub fn column(&self, j: i64) -> Result<Complex<ScalarEta>> {
        let c = plain(self.ring);
        let objs = self.ranks.iter().filter(|(k, _)| k.1 == j).map(|(&(a, _), &r)| (a, r));
        let diffs = self.delta0.iter().filter(|(k, _)| k.1 == j).map(|(&(a, _), m)| (a, m.clone()));
        Complex::raw(&c, objs, diffs)
    }

    /// `δ_1 δ_1: X^{•,j} → X^{•,j+2}` as a map of columns.
    pub fn square(&self, j: i64) -> Result<ChainMap<ScalarEta>> {
        let c = plain(self.ring);
        let (src, dst) = (self.column(j)?, self.column(j + 2)?);
        let mut comps = Vec::new();
        if let Some((lo, hi)) = self.a_span() {
            for a in lo..=hi {
                comps.push((a, self.d1((a, j + 1)).mat_mul(&self.d1((a, j)))?));
            }
        }
        ChainMap::raw(&c, src, dst, comps)
    }

    /// `δ_0 δ_0 = 0` and `δ_1 δ_0 = δ_0 δ_1`, exactly.
    pub fn commutes(&self) -> Result<bool> {
        for &(a, j) in self.ranks.keys() {
            if !self.d0((a + 1, j)).mat_mul(&self.d0((a, j)))?.is_zero() {
                return Ok(false);
            }
            if self.d1((a + 1, j)).mat_mul(&self.d0((a, j)))? != self.d0((a, j + 1)).mat_mul(&self.d1((a, j)))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the stored certificate satisfies `δ_1 δ_1 = δ_0 h + h δ_0`.
    pub fn check_certificate(&self) -> Result<bool> {
        if self.certificate.is_none() {
            return Ok(false);
        }
        for &(a, j) in self.ranks.keys() {
            let lhs = self.d1((a, j + 1)).mat_mul(&self.d1((a, j)))?;
            let rhs = self
                .d0((a - 1, j + 2))
                .mat_mul(&self.h((a, j)))?
                .try_add(&self.h((a + 1, j)).mat_mul(&self.d0((a, j)))?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A certificate found by solving, one column at a time.
    pub fn solve_certificate(&self) -> Result<Option<Family>> {
        let c = plain(self.ring);
        let mut out = BTreeMap::new();
        let Some((lo, hi)) = self.j_span() else { return Ok(Some(out)) };
        for j in lo..=hi {
            let sq = self.square(j)?;
            let zero = ChainMap::zero(sq.source(), sq.target());
            let Some(cert) = homotopic(&c, &sq, &zero)? else { return Ok(None) };
            for (a, m) in cert.s {
                out.insert((a, j), m);
            }
        }
        Ok(Some(out))
    }

    /// The same data with a certificate, solving for one if none is stored.
    pub fn with_certificate(&self) -> Result<Option<Self>> {
        if self.certificate.is_some() {
            return Ok(Some(self.clone()));
        }
        Ok(self.solve_certificate()?.map(|h| DeltaComplex { certificate: Some(h), ..self.clone() }))
    }

    pub fn validate(&self) -> Result<bool> {
        if !self.commutes()? {
            return Ok(false);
        }
        if self.certificate.is_some() {
            return self.check_certificate();
        }
        Ok(self.solve_certificate()?.is_some())
    }

    /// `X[1]`: `X[1]^{a,j} = X^{a,j+1}` with `−δ_0`, `δ_1` and `−h`.
    pub fn shift(&self) -> Self {
        let move_j = |fam: &Family, neg: bool| -> Family {
            fam.iter().map(|(&(a, j), m)| ((a, j - 1), if neg { m.negate() } else { m.clone() })).collect()
        };
        DeltaComplex {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(&(a, j), &r)| ((a, j - 1), r)).collect(),
            delta0: move_j(&self.delta0, true),
            delta1: move_j(&self.delta1, false),
            certificate: self.certificate.as_ref().map(|h| move_j(h, true)),
        }
    }

    /// `cone(α)^{a,j} = X^{a,j+1} ⊕ Y^{a,j}` with
    /// `δ_0 = diag(−δ_0^X, δ_0^Y)` and `δ_1 = [[δ_1^X, 0], [(−1)^{a+j} α, δ_1^Y]]`.
    /// Requires `α` to commute with `δ_0` and `δ_1` exactly.
    pub fn cone(alpha: &DeltaMap) -> Result<Self> {
        if !alpha.commutes_with_d0()? || !alpha.commutes_with_d1()? {
            return Err(Error::InvalidChainMap("the cone needs a map commuting with both differentials".into()));
        }
        let (x, y) = (&alpha.source, &alpha.target);
        let ring = x.ring;
        let mut keys: Vec<Bidegree> = x.ranks.keys().map(|&(a, j)| (a, j - 1)).chain(y.ranks.keys().copied()).collect();
        keys.sort();
        keys.dedup();
        let dims = |(a, j): Bidegree| [x.rank((a, j + 1)), y.rank((a, j))];
        let sign = |a: i64, j: i64| if (a + j).rem_euclid(2) == 0 { 1 } else { -1 };
        let mut ranks = Vec::new();
        let mut d0 = Vec::new();
        let mut d1 = Vec::new();
        let mut h = Vec::new();
        for &(a, j) in &keys {
            ranks.push(((a, j), dims((a, j)).iter().sum()));
            let m0 = RingMatrix::from_blocks(ring, &dims((a + 1, j)), &dims((a, j)), |r, c| match (r, c) {
                (0, 0) => Some(x.d0((a, j + 1)).negate()),
                (1, 1) => Some(y.d0((a, j))),
                _ => None,
            })?;
            let al = alpha.component((a, j + 1));
            let m1 = RingMatrix::from_blocks(ring, &dims((a, j + 1)), &dims((a, j)), |r, c| match (r, c) {
                (0, 0) => Some(x.d1((a, j + 1))),
                (1, 0) => Some(if sign(a, j) == 1 { al.clone() } else { al.negate() }),
                (1, 1) => Some(y.d1((a, j))),
                _ => None,
            })?;
            d0.push(((a, j), m0));
            d1.push(((a, j), m1));
            if x.certificate.is_some() && y.certificate.is_some() {
                h.push((
                    (a, j),
                    RingMatrix::from_blocks(ring, &dims((a - 1, j + 2)), &dims((a, j)), |r, c| match (r, c) {
                        (0, 0) => Some(x.h((a, j + 1)).negate()),
                        (1, 1) => Some(y.h((a, j))),
                        _ => None,
                    })?,
                ));
            }
        }
        let cert = (x.certificate.is_some() && y.certificate.is_some()).then_some(h);
        DeltaComplex::new(ring, ranks, d0, d1, cert)
    }
}

/// A map `α^{a,j}: X^{a,j} → Y^{a,j}` of delta complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap {
    source: DeltaComplex,
    target: DeltaComplex,
    components: Family,
}

impl DeltaMap {
    pub fn new(
        source: DeltaComplex,
        target: DeltaComplex,
        components: impl IntoIterator<Item = (Bidegree, RingMatrix)>,
    ) -> Result<Self> {
        let ring = source.ring;
        let mut comps = BTreeMap::new();
        for (at, m) in components {
            insert_checked(&mut comps, ring, at, m, target.rank(at), source.rank(at))?;
        }
        Ok(DeltaMap { source, target, components: comps })
    }

    pub fn identity(x: &DeltaComplex) -> Self {
        let comps = x.ranks.iter().map(|(&k, &r)| (k, RingMatrix::identity(x.ring, r))).collect();
        DeltaMap { source: x.clone(), target: x.clone(), components: comps }
    }

    pub fn zero(x: &DeltaComplex, y: &DeltaComplex) -> Self {
        DeltaMap { source: x.clone(), target: y.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &DeltaComplex {
        &self.source
    }

    pub fn target(&self) -> &DeltaComplex {
        &self.target
    }

    pub fn components(&self) -> &Family {
        &self.components
    }

    pub fn component(&self, at: Bidegree) -> RingMatrix {
        self.components
            .get(&at)
            .cloned()
            .unwrap_or_else(|| RingMatrix::zeros(self.source.ring, self.target.rank(at), self.source.rank(at)))
    }

    pub fn commutes_with_d0(&self) -> Result<bool> {
        for &(a, j) in self.source.ranks.keys() {
            let l = self.component((a + 1, j)).mat_mul(&self.source.d0((a, j)))?;
            let r = self.target.d0((a, j)).mat_mul(&self.component((a, j)))?;
            if l != r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn commutes_with_d1(&self) -> Result<bool> {
        for &(a, j) in self.source.ranks.keys() {
            let l = self.component((a, j + 1)).mat_mul(&self.source.d1((a, j)))?;
            let r = self.target.d1((a, j)).mat_mul(&self.component((a, j)))?;
            if l != r {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    a: i64,
    j: i64,
    matrix: RingMatrix,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    a: i64,
    j: i64,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct DeltaRepr {
    ring: CoeffRing,
    ranks: Vec<RankEntry>,
    delta0: Vec<Entry>,
    delta1: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<Entry>>,
}

fn entries(f: &Family) -> Vec<Entry> {
    f.iter().map(|(&(a, j), m)| Entry { a, j, matrix: m.clone() }).collect()
}

fn family(v: Vec<Entry>) -> impl Iterator<Item = (Bidegree, RingMatrix)> {
    v.into_iter().map(|e| ((e.a, e.j), e.matrix))
}

impl Serialize for DeltaComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DeltaRepr {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(&(a, j), &rank)| RankEntry { a, j, rank }).collect(),
            delta0: entries(&self.delta0),
            delta1: entries(&self.delta1),
            certificate: self.certificate.as_ref().map(entries),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeltaComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DeltaRepr::deserialize(d)?;
        DeltaComplex::new(
            r.ring,
            r.ranks.into_iter().map(|e| ((e.a, e.j), e.rank)),
            family(r.delta0),
            family(r.delta1),
            r.certificate.map(|c| family(c).collect()),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct DeltaMapRepr {
    source: DeltaComplex,
    target: DeltaComplex,
    components: Vec<Entry>,
}

impl Serialize for DeltaMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DeltaMapRepr { source: self.source.clone(), target: self.target.clone(), components: entries(&self.components) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeltaMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DeltaMapRepr::deserialize(d)?;
        DeltaMap::new(r.source, r.target, family(r.components)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ring: CoeffRing, v: i64) -> RingMatrix {
        RingMatrix::from_i64(ring, 1, 1, &[v])
    }

    /// Three columns of `F_5 →1 F_5`, `δ_1 = 1` between them.
    fn strip(ring: CoeffRing) -> DeltaComplex {
        let ranks = (0..3).flat_map(|j| [((0, j), 1), ((1, j), 1)]);
        let d0 = (0..3).map(|j| ((0, j), m(ring, 1)));
        let d1 = (0..2).flat_map(|j| [((0, j), m(ring, 1)), ((1, j), m(ring, 1))]);
        DeltaComplex::new(ring, ranks, d0, d1, None).unwrap()
    }

    #[test]
    fn contractible_columns_have_certificates() {
        let r = CoeffRing::PrimeField(5);
        let x = strip(r);
        assert!(x.commutes().unwrap());
        let x = x.with_certificate().unwrap().unwrap();
        assert!(x.check_certificate().unwrap());
        assert!(x.validate().unwrap());
        assert!(x.shift().check_certificate().unwrap());
    }

    #[test]
    fn square_without_homotopy_is_rejected() {
        // stalk columns: δ_1 δ_1 = 1 is not null-homotopic
        let r = CoeffRing::PrimeField(5);
        let x = DeltaComplex::new(r, (0..3).map(|j| ((0, j), 1)), [], (0..2).map(|j| ((0, j), m(r, 1))), None).unwrap();
        assert!(x.commutes().unwrap());
        assert!(!x.validate().unwrap());
    }

    #[test]
    fn cone_of_identity_is_valid() {
        let r = CoeffRing::PrimeField(5);
        let x = strip(r).with_certificate().unwrap().unwrap();
        let c = DeltaComplex::cone(&DeltaMap::identity(&x)).unwrap();
        assert!(c.commutes().unwrap());
        assert!(c.check_certificate().unwrap());
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<DeltaComplex>(&s).unwrap(), c);
    }
}
