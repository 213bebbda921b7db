//! Additive base categories carrying an automorphism `(1)` and a natural
//! transformation `η: (1) → Id` with `η_{X(1)} = η_X(1)`.

mod graded;
mod power;
mod scalar;

use std::fmt::Debug;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use graded::{Graded, GradedMorphism, GradedObject};
pub use power::EtaPower;
pub use scalar::ScalarEta;

use crate::error::Result;
use crate::linalg::{CoeffRing, Scalar};

/// Objects and morphisms of a base category are plain values; every
/// operation goes through the category so instances can carry parameters
/// (the ring, the scalar `r`, a power `m`).
pub trait BaseCategory: Clone + Debug + PartialEq + Send + Sync {
    type Obj: Clone + PartialEq + Debug + Send + Sync + Serialize + DeserializeOwned;
    type Mor: Clone + PartialEq + Debug + Send + Sync + Serialize + DeserializeOwned;

    fn ring(&self) -> CoeffRing;

    fn zero_obj(&self) -> Self::Obj;
    fn is_zero_obj(&self, x: &Self::Obj) -> bool;
    /// Ordered biproduct; block morphisms below index summands in this order.
    fn direct_sum(&self, parts: &[Self::Obj]) -> Self::Obj;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;

    /// `g ∘ f`
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn neg(&self, f: &Self::Mor) -> Self::Mor;
    fn scale(&self, f: &Self::Mor, s: Scalar) -> Self::Mor;
    fn zero_mor(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Mor;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    fn is_zero_mor(&self, f: &Self::Mor) -> bool;

    /// The functor `(k)`.
    fn shift_obj(&self, x: &Self::Obj, k: i64) -> Self::Obj;
    fn shift_mor(&self, f: &Self::Mor, k: i64) -> Self::Mor;
    /// `η_X: X(1) → X`.
    fn eta(&self, x: &Self::Obj) -> Self::Mor;

    /// Morphism `⊕ cols → ⊕ rows` whose `(a, b)` entry is `entry(a, b)`
    /// (zero when `None`).
    fn block(
        &self,
        rows: &[Self::Obj],
        cols: &[Self::Obj],
        entry: &mut dyn FnMut(usize, usize) -> Option<Self::Mor>,
    ) -> Result<Self::Mor>;
    /// Entry `(a, b)` of a morphism `⊕ cols → ⊕ rows`.
    fn block_entry(&self, f: &Self::Mor, rows: &[Self::Obj], cols: &[Self::Obj], a: usize, b: usize) -> Self::Mor;

    /// Rank of `Hom(x, y)` as a free module, and coordinates in its standard basis.
    fn hom_dim(&self, x: &Self::Obj, y: &Self::Obj) -> usize;
    fn flatten(&self, f: &Self::Mor) -> Vec<Scalar>;
    fn unflatten(&self, x: &Self::Obj, y: &Self::Obj, coords: &[Scalar]) -> Self::Mor;

    fn sub(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        self.add(f, &self.neg(g))
    }

    /// Sum of a nonempty-or-typed list; `zero` fixes the hom-set.
    fn sum(&self, x: &Self::Obj, y: &Self::Obj, terms: &[Self::Mor]) -> Result<Self::Mor> {
        terms.iter().try_fold(self.zero_mor(x, y), |acc, t| self.add(&acc, t))
    }

    /// Standard basis morphism `k` of `Hom(x, y)`.
    fn basis_mor(&self, x: &Self::Obj, y: &Self::Obj, k: usize) -> Self::Mor {
        let mut coords = vec![Scalar::ZERO; self.hom_dim(x, y)];
        coords[k] = self.ring().one();
        self.unflatten(x, y, &coords)
    }

    /// `η_{X(1)} = η_X(1)`, checked exactly.
    fn check_eta_coherence(&self, x: &Self::Obj) -> bool {
        self.eta(&self.shift_obj(x, 1)) == self.shift_mor(&self.eta(x), 1)
    }

    /// `η_Y ∘ f(1) = f ∘ η_X`, checked exactly.
    fn check_eta_naturality(&self, f: &Self::Mor) -> Result<bool> {
        let x = self.source(f);
        let y = self.target(f);
        let lhs = self.compose(&self.eta(&y), &self.shift_mor(f, 1))?;
        let rhs = self.compose(f, &self.eta(&x))?;
        Ok(lhs == rhs)
    }
}
