use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::base::{Graded, GradedMorphism, GradedObject};
use crate::complex::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::linalg::{CoeffRing, RingMatrix};

/// A position `(i, j)` in a bigraded object.
pub type Bidegree = (i64, i64);

/// Where the higher maps of a system point.
///
/// * `CgrA`: `d_n: (i, j) → (i+1, j+n)` and `f_n: (i, j) → (i, j+n)`.
/// * `GA`: `d_n: (i, j) → (i+1−n, j+n)` and `f_n: (i, j) → (i−n, j+n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    #[serde(rename = "cgra")]
    CgrA,
    #[serde(rename = "ga")]
    GA,
}

impl Convention {
    pub fn diff_target(self, n: usize, (i, j): Bidegree) -> Bidegree {
        let n = n as i64;
        match self {
            Convention::CgrA => (i + 1, j + n),
            Convention::GA => (i + 1 - n, j + n),
        }
    }

    pub fn map_target(self, n: usize, (i, j): Bidegree) -> Bidegree {
        let n = n as i64;
        match self {
            Convention::CgrA => (i, j + n),
            Convention::GA => (i - n, j + n),
        }
    }
}

/// A bigraded free module with higher differentials `d_n`, `n ≥ 0`, subject
/// to `Σ_{p+q=n} d_p d_q = 0` for every `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSystem {
    ring: CoeffRing,
    convention: Convention,
    ranks: BTreeMap<Bidegree, usize>,
    diffs: BTreeMap<(usize, i64, i64), RingMatrix>,
}

fn check_shape(m: &RingMatrix, ring: CoeffRing, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.ring() != ring {
        return Err(Error::RingMismatch { left: ring.to_string(), right: m.ring().to_string() });
    }
    if m.shape() != (rows, cols) {
        return Err(Error::dims(format!("{what} is {}x{}, expected {rows}x{cols}", m.rows(), m.cols())));
    }
    Ok(())
}

impl GSystem {
    /// Checks shapes only; `validate` decides the relations.
    pub fn new(
        ring: CoeffRing,
        convention: Convention,
        ranks: impl IntoIterator<Item = (Bidegree, usize)>,
        diffs: impl IntoIterator<Item = ((usize, i64, i64), RingMatrix)>,
    ) -> Result<Self> {
        let ranks: BTreeMap<Bidegree, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let mut out = GSystem { ring, convention, ranks, diffs: BTreeMap::new() };
        for ((n, i, j), m) in diffs {
            let t = convention.diff_target(n, (i, j));
            check_shape(&m, ring, out.rank(t), out.rank((i, j)), &format!("d_{n} at ({i},{j})"))?;
            if !m.is_zero() {
                out.diffs.insert((n, i, j), m);
            }
        }
        Ok(out)
    }

    pub fn zero(ring: CoeffRing, convention: Convention) -> Self {
        GSystem { ring, convention, ranks: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn rank(&self, at: Bidegree) -> usize {
        self.ranks.get(&at).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<Bidegree, usize> {
        &self.ranks
    }

    pub fn diffs(&self) -> &BTreeMap<(usize, i64, i64), RingMatrix> {
        &self.diffs
    }

    /// `d_n` at `(i, j)`, zero when not stored.
    pub fn d(&self, n: usize, (i, j): Bidegree) -> RingMatrix {
        match self.diffs.get(&(n, i, j)) {
            Some(m) => m.clone(),
            None => RingMatrix::zeros(self.ring, self.rank(self.convention.diff_target(n, (i, j))), self.rank((i, j))),
        }
    }

    pub fn max_n(&self) -> usize {
        self.diffs.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// First `(n, i, j)` where `Σ_{p+q=n} d_p d_q ≠ 0`.
    pub fn first_defect(&self) -> Result<Option<(usize, i64, i64)>> {
        for n in 0..=2 * self.max_n() {
            for &at in self.ranks.keys() {
                let mut acc: Option<RingMatrix> = None;
                for q in 0..=n {
                    let t = self.convention.diff_target(q, at);
                    let term = self.d(n - q, t).mat_mul(&self.d(q, at))?;
                    acc = Some(match acc {
                        Some(a) => a.try_add(&term)?,
                        None => term,
                    });
                }
                if acc.is_some_and(|a| !a.is_zero()) {
                    return Ok(Some((n, at.0, at.1)));
                }
            }
        }
        Ok(None)
    }

    pub fn validate(&self) -> bool {
        matches!(self.first_defect(), Ok(None))
    }

    /// Range of occupied `j`.
    pub fn j_span(&self) -> Option<(i64, i64)> {
        let lo = self.ranks.keys().map(|k| k.1).min()?;
        let hi = self.ranks.keys().map(|k| k.1).max()?;
        Some((lo, hi))
    }

    /// Range of occupied `i`.
    pub fn i_span(&self) -> Option<(i64, i64)> {
        let lo = self.ranks.keys().map(|k| k.0).min()?;
        let hi = self.ranks.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    /// The complex over graded modules with `X^i = ⊕_j X^{ij}` and
    /// `(d^i)_n^j = d_n^{ij}`. Requires the `CgrA` convention.
    pub fn to_complex(&self) -> Result<Complex<Graded>> {
        self.require(Convention::CgrA)?;
        let cat = Graded::new(self.ring);
        let Some((lo, hi)) = self.i_span() else { return Ok(Complex::zero()) };
        let row =
            |i: i64| GradedObject::new(self.ranks.range((i, i64::MIN)..=(i, i64::MAX)).map(|(&(_, j), &r)| (j, r)));
        let objs: Vec<(i64, GradedObject)> = (lo..=hi).map(|i| (i, row(i))).collect();
        let mut diffs = Vec::new();
        for i in lo..hi {
            let comps = self.diffs.iter().filter(|(k, _)| k.1 == i).map(|(&(n, _, j), m)| ((n, j), m.clone()));
            diffs.push((i, GradedMorphism::new(self.ring, row(i), row(i + 1), comps)?));
        }
        Complex::raw(&cat, objs, diffs)
    }

    pub fn from_complex(ring: CoeffRing, c: &Complex<Graded>) -> Result<Self> {
        let ranks = c.objects().iter().flat_map(|(&i, x)| x.ranks().iter().map(move |(&j, &r)| ((i, j), r)));
        let diffs = c
            .differentials()
            .iter()
            .flat_map(|(&i, d)| d.components().iter().map(move |(&(n, j), m)| ((n, i, j), m.clone())));
        GSystem::new(ring, Convention::CgrA, ranks, diffs)
    }

    fn require(&self, c: Convention) -> Result<()> {
        if self.convention != c {
            return Err(Error::InvalidSystem(format!("expected convention {c:?}, found {:?}", self.convention)));
        }
        Ok(())
    }

    fn reindexed(&self, to: Convention, f: impl Fn(Bidegree) -> Bidegree) -> Self {
        GSystem {
            ring: self.ring,
            convention: to,
            ranks: self.ranks.iter().map(|(&k, &r)| (f(k), r)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|(&(n, i, j), m)| {
                    let (a, b) = f((i, j));
                    ((n, a, b), m.clone())
                })
                .collect(),
        }
    }
}

/// `Ψ`: `(i, j)` in the `GA` indexing moves to `(i+j, j)`.
pub fn psi(x: &GSystem) -> Result<GSystem> {
    x.require(Convention::GA)?;
    Ok(x.reindexed(Convention::CgrA, |(i, j)| (i + j, j)))
}

/// `Ψ⁻¹`: `(i, j)` in the `CgrA` indexing moves to `(i−j, j)`.
pub fn psi_inv(x: &GSystem) -> Result<GSystem> {
    x.require(Convention::CgrA)?;
    Ok(x.reindexed(Convention::GA, |(i, j)| (i - j, j)))
}

/// A family `f_n` between two systems of the same convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMorphism {
    source: GSystem,
    target: GSystem,
    components: BTreeMap<(usize, i64, i64), RingMatrix>,
}

impl GMorphism {
    /// Checks shapes only; `validate` decides the relations.
    pub fn new(
        source: GSystem,
        target: GSystem,
        components: impl IntoIterator<Item = ((usize, i64, i64), RingMatrix)>,
    ) -> Result<Self> {
        if source.convention != target.convention || source.ring != target.ring {
            return Err(Error::objects("systems differ in ring or convention"));
        }
        let mut comps = BTreeMap::new();
        for ((n, i, j), m) in components {
            let t = source.convention.map_target(n, (i, j));
            check_shape(&m, source.ring, target.rank(t), source.rank((i, j)), &format!("f_{n} at ({i},{j})"))?;
            if !m.is_zero() {
                comps.insert((n, i, j), m);
            }
        }
        Ok(GMorphism { source, target, components: comps })
    }

    pub fn identity(x: &GSystem) -> Self {
        let comps = x.ranks.iter().map(|(&(i, j), &r)| ((0, i, j), RingMatrix::identity(x.ring, r))).collect();
        GMorphism { source: x.clone(), target: x.clone(), components: comps }
    }

    pub fn zero(x: &GSystem, y: &GSystem) -> Self {
        GMorphism { source: x.clone(), target: y.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &GSystem {
        &self.source
    }

    pub fn target(&self) -> &GSystem {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<(usize, i64, i64), RingMatrix> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `f_n` at `(i, j)`, zero when not stored.
    pub fn f(&self, n: usize, (i, j): Bidegree) -> RingMatrix {
        match self.components.get(&(n, i, j)) {
            Some(m) => m.clone(),
            None => RingMatrix::zeros(
                self.source.ring,
                self.target.rank(self.source.convention.map_target(n, (i, j))),
                self.source.rank((i, j)),
            ),
        }
    }

    pub fn max_n(&self) -> usize {
        self.components.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// First `(n, i, j)` where `Σ_{p+q=n} f_p d_{X,q} ≠ Σ_{p+q=n} d_{Y,q} f_p`.
    pub fn first_defect(&self) -> Result<Option<(usize, i64, i64)>> {
        let conv = self.source.convention;
        let top = self.max_n() + self.source.max_n().max(self.target.max_n());
        for n in 0..=top {
            for &at in self.source.ranks.keys() {
                let mut lhs: Option<RingMatrix> = None;
                for q in 0..=n {
                    let p = n - q;
                    let a = self.f(p, conv.diff_target(q, at)).mat_mul(&self.source.d(q, at))?;
                    let b = self.target.d(q, conv.map_target(p, at)).mat_mul(&self.f(p, at))?;
                    let t = a.try_sub(&b)?;
                    lhs = Some(match lhs {
                        Some(l) => l.try_add(&t)?,
                        None => t,
                    });
                }
                if lhs.is_some_and(|l| !l.is_zero()) {
                    return Ok(Some((n, at.0, at.1)));
                }
            }
        }
        Ok(None)
    }

    pub fn validate(&self) -> bool {
        matches!(self.first_defect(), Ok(None))
    }

    /// `(g f)_n = Σ_{p+q=n} g_p f_q`.
    pub fn then(&self, g: &GMorphism) -> Result<GMorphism> {
        if self.target != g.source {
            return Err(Error::objects("morphisms are not composable"));
        }
        let conv = self.source.convention;
        let mut out: BTreeMap<(usize, i64, i64), RingMatrix> = BTreeMap::new();
        for (&(q, i, j), fq) in &self.components {
            let mid = conv.map_target(q, (i, j));
            for (&(p, a, b), gp) in &g.components {
                if (a, b) != mid {
                    continue;
                }
                let term = gp.mat_mul(fq)?;
                let key = (p + q, i, j);
                let sum = match out.remove(&key) {
                    Some(prev) => prev.try_add(&term)?,
                    None => term,
                };
                out.insert(key, sum);
            }
        }
        GMorphism::new(self.source.clone(), g.target.clone(), out)
    }

    pub fn to_chain_map(&self) -> Result<ChainMap<Graded>> {
        let cat = Graded::new(self.source.ring);
        let (x, y) = (self.source.to_complex()?, self.target.to_complex()?);
        let mut comps = Vec::new();
        for i in crate::complex::degrees(crate::complex::hull(x.span(), y.span())) {
            let c = self.components.iter().filter(|(k, _)| k.1 == i).map(|(&(n, _, j), m)| ((n, j), m.clone()));
            comps.push((i, GradedMorphism::new(self.source.ring, x.obj(&cat, i), y.obj(&cat, i), c)?));
        }
        ChainMap::raw(&cat, x, y, comps)
    }

    pub fn from_chain_map(ring: CoeffRing, f: &ChainMap<Graded>) -> Result<Self> {
        let comps = f
            .components()
            .iter()
            .flat_map(|(&i, m)| m.components().iter().map(move |(&(n, j), a)| ((n, i, j), a.clone())));
        GMorphism::new(GSystem::from_complex(ring, f.source())?, GSystem::from_complex(ring, f.target())?, comps)
    }

    fn reindexed(&self, to: Convention, f: impl Fn(Bidegree) -> Bidegree + Copy) -> Self {
        GMorphism {
            source: self.source.reindexed(to, f),
            target: self.target.reindexed(to, f),
            components: self
                .components
                .iter()
                .map(|(&(n, i, j), m)| {
                    let (a, b) = f((i, j));
                    ((n, a, b), m.clone())
                })
                .collect(),
        }
    }
}

pub fn psi_mor(f: &GMorphism) -> Result<GMorphism> {
    f.source.require(Convention::GA)?;
    Ok(f.reindexed(Convention::CgrA, |(i, j)| (i + j, j)))
}

pub fn psi_inv_mor(f: &GMorphism) -> Result<GMorphism> {
    f.source.require(Convention::CgrA)?;
    Ok(f.reindexed(Convention::GA, |(i, j)| (i - j, j)))
}

#[derive(Serialize, Deserialize)]
struct RankRepr {
    i: i64,
    j: i64,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct EntryRepr {
    pub n: usize,
    pub i: i64,
    pub j: i64,
    pub matrix: RingMatrix,
}

#[derive(Serialize, Deserialize)]
struct GSystemRepr {
    ring: CoeffRing,
    convention: Convention,
    ranks: Vec<RankRepr>,
    diffs: Vec<EntryRepr>,
}

impl Serialize for GSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GSystemRepr {
            ring: self.ring,
            convention: self.convention,
            ranks: self.ranks.iter().map(|(&(i, j), &rank)| RankRepr { i, j, rank }).collect(),
            diffs: self.diffs.iter().map(|(&(n, i, j), m)| EntryRepr { n, i, j, matrix: m.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GSystemRepr::deserialize(d)?;
        GSystem::new(
            r.ring,
            r.convention,
            r.ranks.into_iter().map(|x| ((x.i, x.j), x.rank)),
            r.diffs.into_iter().map(|e| ((e.n, e.i, e.j), e.matrix)),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct GMorphismRepr {
    source: GSystem,
    target: GSystem,
    components: Vec<EntryRepr>,
}

impl Serialize for GMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GMorphismRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(&(n, i, j), m)| EntryRepr { n, i, j, matrix: m.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GMorphismRepr::deserialize(d)?;
        GMorphism::new(r.source, r.target, r.components.into_iter().map(|e| ((e.n, e.i, e.j), e.matrix)))
            .map_err(serde::de::Error::custom)
    }
}
