use serde::{Deserialize, Serialize};

use super::BaseCategory;
use crate::error::{Error, Result};
use crate::linalg::{CoeffRing, RingMatrix, Scalar};

/// Free modules of finite rank with `(1) = Id` and `η = r · Id`.
///
/// Objects are ranks; a morphism `m → n` is an `n x m` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScalarEtaRepr")]
pub struct ScalarEta {
    pub ring: CoeffRing,
    pub r: Scalar,
}

impl ScalarEta {
    pub fn new(ring: CoeffRing, r: i64) -> Self {
        ScalarEta { ring, r: ring.from_i64(r) }
    }
}

#[derive(Deserialize)]
struct ScalarEtaRepr {
    ring: CoeffRing,
    r: Scalar,
}

impl TryFrom<ScalarEtaRepr> for ScalarEta {
    type Error = Error;

    fn try_from(v: ScalarEtaRepr) -> Result<Self> {
        if v.r.den() != 1 && v.ring != CoeffRing::Rationals {
            return Err(Error::InvalidScalar(v.r.to_string()));
        }
        Ok(ScalarEta { ring: v.ring, r: v.ring.canon(v.r) })
    }
}

impl BaseCategory for ScalarEta {
    type Obj = usize;
    type Mor = RingMatrix;

    fn ring(&self) -> CoeffRing {
        self.ring
    }

    fn zero_obj(&self) -> usize {
        0
    }

    fn is_zero_obj(&self, x: &usize) -> bool {
        *x == 0
    }

    fn direct_sum(&self, parts: &[usize]) -> usize {
        parts.iter().sum()
    }

    fn source(&self, f: &RingMatrix) -> usize {
        f.cols()
    }

    fn target(&self, f: &RingMatrix) -> usize {
        f.rows()
    }

    fn compose(&self, g: &RingMatrix, f: &RingMatrix) -> Result<RingMatrix> {
        g.mat_mul(f)
    }

    fn add(&self, f: &RingMatrix, g: &RingMatrix) -> Result<RingMatrix> {
        f.try_add(g)
    }

    fn neg(&self, f: &RingMatrix) -> RingMatrix {
        f.negate()
    }

    fn scale(&self, f: &RingMatrix, s: Scalar) -> RingMatrix {
        f.scale(s)
    }

    fn zero_mor(&self, x: &usize, y: &usize) -> RingMatrix {
        RingMatrix::zeros(self.ring, *y, *x)
    }

    fn identity(&self, x: &usize) -> RingMatrix {
        RingMatrix::identity(self.ring, *x)
    }

    fn is_zero_mor(&self, f: &RingMatrix) -> bool {
        f.is_zero()
    }

    fn shift_obj(&self, x: &usize, _k: i64) -> usize {
        *x
    }

    fn shift_mor(&self, f: &RingMatrix, _k: i64) -> RingMatrix {
        f.clone()
    }

    fn eta(&self, x: &usize) -> RingMatrix {
        RingMatrix::scalar(self.ring, *x, self.r)
    }

    fn block(
        &self,
        rows: &[usize],
        cols: &[usize],
        entry: &mut dyn FnMut(usize, usize) -> Option<RingMatrix>,
    ) -> Result<RingMatrix> {
        RingMatrix::from_blocks(self.ring, rows, cols, entry)
    }

    fn block_entry(&self, f: &RingMatrix, rows: &[usize], cols: &[usize], a: usize, b: usize) -> RingMatrix {
        f.block(rows, cols, a, b)
    }

    fn hom_dim(&self, x: &usize, y: &usize) -> usize {
        x * y
    }

    fn flatten(&self, f: &RingMatrix) -> Vec<Scalar> {
        f.entries().to_vec()
    }

    fn unflatten(&self, x: &usize, y: &usize, coords: &[Scalar]) -> RingMatrix {
        RingMatrix::new(self.ring, *y, *x, coords.to_vec()).unwrap_or_else(|e| panic!("{e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_is_r_times_identity() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        assert_eq!(c.eta(&1), RingMatrix::from_i64(c.ring, 1, 1, &[2]));
        assert_eq!(c.eta(&0), c.zero_mor(&0, &0));
        assert_eq!(c.shift_obj(&3, 1), 3);
        assert!(c.check_eta_coherence(&2));
        assert!(c.check_eta_coherence(&0));
    }

    #[test]
    fn additive_laws() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let f = RingMatrix::from_i64(c.ring, 1, 1, &[3]);
        let g = RingMatrix::from_i64(c.ring, 1, 1, &[2]);
        assert_eq!(c.add(&f, &g).unwrap(), RingMatrix::from_i64(c.ring, 1, 1, &[1]));
        assert!(c.is_zero_mor(&c.add(&f, &c.neg(&f)).unwrap()));
        assert_eq!(c.add(&f, &c.zero_mor(&1, &1)).unwrap(), f);
        assert!(c.check_eta_naturality(&f).unwrap());
    }
}
