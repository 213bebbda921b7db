use serde::{Deserialize, Serialize};

use super::BaseCategory;
use crate::error::Result;
use crate::linalg::{CoeffRing, Scalar};

/// The same category with automorphism `(m)` and transformation
/// `η^m = η_X ∘ η_{X(1)} ∘ ⋯ ∘ η_{X(m-1)}: X(m) → X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaPower<B> {
    pub inner: B,
    pub m: u32,
}

impl<B: BaseCategory> EtaPower<B> {
    /// `m` must be at least 1.
    pub fn new(inner: B, m: u32) -> Self {
        assert!(m >= 1, "power must be positive");
        EtaPower { inner, m }
    }
}

impl<B: BaseCategory> BaseCategory for EtaPower<B> {
    type Obj = B::Obj;
    type Mor = B::Mor;

    fn ring(&self) -> CoeffRing {
        self.inner.ring()
    }

    fn zero_obj(&self) -> B::Obj {
        self.inner.zero_obj()
    }

    fn is_zero_obj(&self, x: &B::Obj) -> bool {
        self.inner.is_zero_obj(x)
    }

    fn direct_sum(&self, parts: &[B::Obj]) -> B::Obj {
        self.inner.direct_sum(parts)
    }

    fn source(&self, f: &B::Mor) -> B::Obj {
        self.inner.source(f)
    }

    fn target(&self, f: &B::Mor) -> B::Obj {
        self.inner.target(f)
    }

    fn compose(&self, g: &B::Mor, f: &B::Mor) -> Result<B::Mor> {
        self.inner.compose(g, f)
    }

    fn add(&self, f: &B::Mor, g: &B::Mor) -> Result<B::Mor> {
        self.inner.add(f, g)
    }

    fn neg(&self, f: &B::Mor) -> B::Mor {
        self.inner.neg(f)
    }

    fn scale(&self, f: &B::Mor, s: Scalar) -> B::Mor {
        self.inner.scale(f, s)
    }

    fn zero_mor(&self, x: &B::Obj, y: &B::Obj) -> B::Mor {
        self.inner.zero_mor(x, y)
    }

    fn identity(&self, x: &B::Obj) -> B::Mor {
        self.inner.identity(x)
    }

    fn is_zero_mor(&self, f: &B::Mor) -> bool {
        self.inner.is_zero_mor(f)
    }

    fn shift_obj(&self, x: &B::Obj, k: i64) -> B::Obj {
        self.inner.shift_obj(x, k * self.m as i64)
    }

    fn shift_mor(&self, f: &B::Mor, k: i64) -> B::Mor {
        self.inner.shift_mor(f, k * self.m as i64)
    }

    fn eta(&self, x: &B::Obj) -> B::Mor {
        let mut acc = self.inner.eta(x);
        for i in 1..self.m as i64 {
            let step = self.inner.eta(&self.inner.shift_obj(x, i));
            acc = self.inner.compose(&acc, &step).expect("η chain composes");
        }
        acc
    }

    fn block(
        &self,
        rows: &[B::Obj],
        cols: &[B::Obj],
        entry: &mut dyn FnMut(usize, usize) -> Option<B::Mor>,
    ) -> Result<B::Mor> {
        self.inner.block(rows, cols, entry)
    }

    fn block_entry(&self, f: &B::Mor, rows: &[B::Obj], cols: &[B::Obj], a: usize, b: usize) -> B::Mor {
        self.inner.block_entry(f, rows, cols, a, b)
    }

    fn hom_dim(&self, x: &B::Obj, y: &B::Obj) -> usize {
        self.inner.hom_dim(x, y)
    }

    fn flatten(&self, f: &B::Mor) -> Vec<Scalar> {
        self.inner.flatten(f)
    }

    fn unflatten(&self, x: &B::Obj, y: &B::Obj, coords: &[Scalar]) -> B::Mor {
        self.inner.unflatten(x, y, coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Graded, GradedObject, ScalarEta};
    use crate::linalg::RingMatrix;

    #[test]
    fn scalar_power_is_r_to_the_m() {
        let c = EtaPower::new(ScalarEta::new(CoeffRing::Integers, 3), 4);
        assert_eq!(c.eta(&1), RingMatrix::from_i64(CoeffRing::Integers, 1, 1, &[81]));
        assert!(c.check_eta_coherence(&2));
    }

    #[test]
    fn graded_power_lands_in_degree_m() {
        let g = Graded::new(CoeffRing::PrimeField(3));
        let c = EtaPower::new(g, 3);
        let x = GradedObject::new([(0, 1), (2, 2)]);
        let e = c.eta(&x);
        assert_eq!(e.components().len(), 2);
        assert_eq!(e.component(3, -3), Some(&RingMatrix::identity(g.ring, 1)));
        assert_eq!(e.component(3, -1), Some(&RingMatrix::identity(g.ring, 2)));
        assert_eq!(e.source(), &g.shift_obj(&x, 3));
        assert!(c.check_eta_coherence(&x));
    }
}
