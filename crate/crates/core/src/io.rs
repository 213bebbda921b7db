//! Instance files: a versioned JSON envelope around one instance.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::base::{BaseCategory, Graded, ScalarEta};
use crate::bridge::{DeltaComplex, DeltaMap, GMorphism, GSystem};
use crate::complex::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::linalg::{CoeffRing, Scalar};

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Complex,
    ChainMap,
    /// Two parallel maps `f, g: X → Y`.
    ChainMapPair,
    /// A composable pair `i: X → Y`, `p: Y → Z`.
    ExactPair,
    Gsystem,
    Gmorphism,
    DeltaComplex,
    DeltaMap,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::ChainMap => "chain-map",
            Kind::ChainMapPair => "chain-map-pair",
            Kind::ExactPair => "exact-pair",
            Kind::Gsystem => "gsystem",
            Kind::Gmorphism => "gmorphism",
            Kind::DeltaComplex => "delta-complex",
            Kind::DeltaMap => "delta-map",
        }
    }
}

/// The base category of a complex-valued payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Category {
    ScalarEta { r: Scalar },
    Graded,
}

/// Base categories that can be named in an instance file.
pub trait Named: BaseCategory {
    fn category(&self) -> Category;
}

impl Named for ScalarEta {
    fn category(&self) -> Category {
        Category::ScalarEta { r: self.r }
    }
}

impl Named for Graded {
    fn category(&self) -> Category {
        Category::Graded
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MapPair<B: BaseCategory> {
    pub first: ChainMap<B>,
    pub second: ChainMap<B>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub ring: CoeffRing,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    pub payload: Value,
}

impl InstanceFile {
    fn build(ring: CoeffRing, kind: Kind, category: Option<Category>, payload: impl Serialize) -> Result<Self> {
        Ok(InstanceFile { version: VERSION, ring, kind, category, payload: serde_json::to_value(payload)? })
    }

    pub fn complex<B: Named>(cat: &B, x: &Complex<B>) -> Result<Self> {
        Self::build(cat.ring(), Kind::Complex, Some(cat.category()), x)
    }

    pub fn chain_map<B: Named>(cat: &B, f: &ChainMap<B>) -> Result<Self> {
        Self::build(cat.ring(), Kind::ChainMap, Some(cat.category()), f)
    }

    pub fn map_pair<B: Named>(cat: &B, f: &ChainMap<B>, g: &ChainMap<B>) -> Result<Self> {
        let pair = MapPair { first: f.clone(), second: g.clone() };
        Self::build(cat.ring(), Kind::ChainMapPair, Some(cat.category()), pair)
    }

    pub fn exact_pair<B: Named>(cat: &B, i: &ChainMap<B>, p: &ChainMap<B>) -> Result<Self> {
        let pair = MapPair { first: i.clone(), second: p.clone() };
        Self::build(cat.ring(), Kind::ExactPair, Some(cat.category()), pair)
    }

    pub fn gsystem(x: &GSystem) -> Result<Self> {
        Self::build(x.ring(), Kind::Gsystem, None, x)
    }

    pub fn gmorphism(f: &GMorphism) -> Result<Self> {
        Self::build(f.source().ring(), Kind::Gmorphism, None, f)
    }

    pub fn delta_complex(x: &DeltaComplex) -> Result<Self> {
        Self::build(x.ring(), Kind::DeltaComplex, None, x)
    }

    pub fn delta_map(a: &DeltaMap) -> Result<Self> {
        Self::build(a.source().ring(), Kind::DeltaMap, None, a)
    }

    /// Parses and checks the version tag.
    pub fn parse(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text)?;
        if f.version != VERSION {
            return Err(Error::Parse(format!("unsupported instance version {}", f.version)));
        }
        Ok(f)
    }

    /// Pretty-printed JSON with a trailing newline. Parsing this output and
    /// printing again gives the same bytes.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn decode<T: DeserializeOwned>(&self) -> Result<T> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }

    /// The scalar-η category named in the file, checked against the ring.
    pub fn scalar_category(&self) -> Result<Option<ScalarEta>> {
        match &self.category {
            Some(Category::ScalarEta { r }) => {
                let c: ScalarEta = serde_json::from_value(serde_json::json!({ "ring": self.ring, "r": r }))?;
                Ok(Some(c))
            }
            _ => Ok(None),
        }
    }

    pub fn require(&self, kind: Kind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Parse(format!("expected a {} instance, found {}", kind.name(), self.kind.name())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_complex, random_delta, Columns, Shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn files_round_trip_byte_identically() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let x = random_complex(&c, &mut rng, 4, 3).unwrap();
        let d =
            random_delta(CoeffRing::Integers, &mut rng, Shape { len: 3, max_rank: 2 }, 2, Columns::Arbitrary).unwrap();
        for file in [InstanceFile::complex(&c, &x).unwrap(), InstanceFile::delta_complex(&d).unwrap()] {
            let text = file.to_json().unwrap();
            let back = InstanceFile::parse(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_json().unwrap(), text);
        }
        let back = InstanceFile::parse(&InstanceFile::complex(&c, &x).unwrap().to_json().unwrap()).unwrap();
        assert_eq!(back.scalar_category().unwrap(), Some(c));
        assert_eq!(back.decode::<Complex<ScalarEta>>().unwrap(), x);
    }

    #[test]
    fn version_and_kind_are_checked() {
        let f = InstanceFile::gsystem(&GSystem::zero(CoeffRing::Rationals, crate::bridge::Convention::GA)).unwrap();
        let mut v: Value = serde_json::from_str(&f.to_json().unwrap()).unwrap();
        v["version"] = 7.into();
        assert!(matches!(InstanceFile::parse(&v.to_string()), Err(Error::Parse(_))));
        assert!(f.require(Kind::Complex).is_err());
        assert!(InstanceFile::parse("{").is_err());
    }
}
