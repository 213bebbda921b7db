use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::{CoeffRing, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`CoeffRing`]. Entries are always canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

fn check_ring(a: CoeffRing, b: CoeffRing) -> Result<()> {
    if a != b {
        return Err(Error::RingMismatch { left: a.to_string(), right: b.to_string() });
    }
    Ok(())
}

impl RingMatrix {
    /// Builds a matrix from row-major entries, canonicalizing each one.
    pub fn new(ring: CoeffRing, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::dims(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if ring != CoeffRing::Rationals {
            if let Some(e) = entries.iter().find(|e| e.den() != 1) {
                return Err(Error::InvalidScalar(format!("{e} is not an element of {ring}")));
            }
        }
        let entries = entries.into_iter().map(|e| ring.canon(e)).collect();
        Ok(RingMatrix { ring, rows, cols, entries })
    }

    /// Convenience constructor from integer entries. Panics on a size mismatch.
    pub fn from_i64(ring: CoeffRing, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count");
        let entries = entries.iter().map(|&e| ring.from_i64(e)).collect();
        RingMatrix { ring, rows, cols, entries }
    }

    pub fn zeros(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        RingMatrix { ring, rows, cols, entries: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        Self::scalar(ring, n, ring.one())
    }

    /// `s · Id_n`.
    pub fn scalar(ring: CoeffRing, n: usize, s: Scalar) -> Self {
        let s = ring.canon(s);
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = s;
        }
        m
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = self.ring.canon(v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.ring, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        check_ring(self.ring, other.ring)?;
        if self.shape() != other.shape() {
            return Err(Error::dims(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let r = self.ring;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| r.add(a, b)).collect();
        Ok(self.with_entries(entries))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        let r = self.ring;
        self.with_entries(self.entries.iter().map(|&a| r.neg(a)).collect())
    }

    pub fn scale(&self, s: Scalar) -> Self {
        let r = self.ring;
        let s = r.canon(s);
        self.with_entries(self.entries.iter().map(|&a| r.mul(s, a)).collect())
    }

    fn with_entries(&self, entries: Vec<Scalar>) -> Self {
        RingMatrix { ring: self.ring, rows: self.rows, cols: self.cols, entries }
    }

    /// Exact product `self · other`.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        check_ring(self.ring, other.ring)?;
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![Scalar::ZERO; n * m];
        match ring.modulus() {
            // Accumulate in i128 and reduce once per entry.
            Some(md) => {
                let mut acc = vec![0i128; m];
                for i in 0..n {
                    acc.iter_mut().for_each(|a| *a = 0);
                    for t in 0..k {
                        let a = self.entries[i * k + t].num() as i128;
                        if a == 0 {
                            continue;
                        }
                        let row = &other.entries[t * m..(t + 1) * m];
                        for (j, b) in row.iter().enumerate() {
                            acc[j] += a * b.num() as i128;
                        }
                    }
                    for j in 0..m {
                        out[i * m + j] = Scalar::int((acc[j] % md as i128) as i64);
                    }
                }
            }
            None => {
                for i in 0..n {
                    for t in 0..k {
                        let a = self.entries[i * k + t];
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let b = other.entries[t * m + j];
                            if !b.is_zero() {
                                out[i * m + j] = ring.add(out[i * m + j], ring.mul(a, b));
                            }
                        }
                    }
                }
            }
        }
        Ok(RingMatrix { ring, rows: n, cols: m, entries: out })
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols, "submatrix bounds");
        let mut entries = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for r in r0..r1 {
            entries.extend_from_slice(&self.entries[r * self.cols + c0..r * self.cols + c1]);
        }
        RingMatrix { ring: self.ring, rows: r1 - r0, cols: c1 - c0, entries }
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &RingMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block bounds");
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.entries[dst..dst + block.cols].copy_from_slice(&block.entries[r * block.cols..(r + 1) * block.cols]);
        }
    }

    /// Assembles a block matrix. `row_dims[a] x col_dims[b]` is the shape of
    /// block `(a, b)`; missing blocks are zero.
    pub fn from_blocks(
        ring: CoeffRing,
        row_dims: &[usize],
        col_dims: &[usize],
        mut block: impl FnMut(usize, usize) -> Option<RingMatrix>,
    ) -> Result<Self> {
        let rows = row_dims.iter().sum();
        let cols = col_dims.iter().sum();
        let mut m = Self::zeros(ring, rows, cols);
        let mut r0 = 0;
        for (a, &rd) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (b, &cd) in col_dims.iter().enumerate() {
                if let Some(blk) = block(a, b) {
                    check_ring(ring, blk.ring)?;
                    if blk.shape() != (rd, cd) {
                        return Err(Error::dims(format!(
                            "block ({a},{b}) is {}x{}, expected {rd}x{cd}",
                            blk.rows, blk.cols
                        )));
                    }
                    m.set_block(r0, c0, &blk);
                }
                c0 += cd;
            }
            r0 += rd;
        }
        Ok(m)
    }

    /// Block `(a, b)` of a matrix partitioned by `row_dims` and `col_dims`.
    pub fn block(&self, row_dims: &[usize], col_dims: &[usize], a: usize, b: usize) -> Self {
        let r0: usize = row_dims[..a].iter().sum();
        let c0: usize = col_dims[..b].iter().sum();
        self.submatrix(r0, r0 + row_dims[a], c0, c0 + col_dims[b])
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        check_ring(self.ring, other.ring)?;
        Self::from_blocks(self.ring, &[self.rows, other.rows], &[self.cols, other.cols], |a, b| match (a, b) {
            (0, 0) => Some(self.clone()),
            (1, 1) => Some(other.clone()),
            _ => None,
        })
    }

    /// Single column holding `v`.
    pub fn column(ring: CoeffRing, v: Vec<Scalar>) -> Result<Self> {
        let n = v.len();
        Self::new(ring, n, 1, v)
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMatrix<{}>{}x{}[", self.ring, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait<&RingMatrix> for &RingMatrix {
            type Output = RingMatrix;
            fn $method(self, rhs: &RingMatrix) -> RingMatrix {
                self.$call(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<RingMatrix> for RingMatrix {
            type Output = RingMatrix;
            fn $method(self, rhs: RingMatrix) -> RingMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, mat_mul);

impl Neg for &RingMatrix {
    type Output = RingMatrix;
    fn neg(self) -> RingMatrix {
        self.negate()
    }
}

impl Neg for RingMatrix {
    type Output = RingMatrix;
    fn neg(self) -> RingMatrix {
        self.negate()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for RingMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let entries =
            repr.entries.iter().map(|e| e.parse::<Scalar>()).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        RingMatrix::new(repr.ring, repr.rows, repr.cols, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: CoeffRing = CoeffRing::Integers;

    #[test]
    fn identity_is_neutral() {
        let m = RingMatrix::from_i64(Z, 2, 3, &[1, -2, 3, 4, 5, 6]);
        assert_eq!(RingMatrix::identity(Z, 2).mat_mul(&m).unwrap(), m);
        assert_eq!(m.mat_mul(&RingMatrix::identity(Z, 3)).unwrap(), m);
    }

    #[test]
    fn two_times_two_is_zero_mod_four() {
        let r = CoeffRing::IntegersMod(4);
        let two = RingMatrix::from_i64(r, 1, 1, &[2]);
        assert_eq!(&two * &two, RingMatrix::zeros(r, 1, 1));
    }

    #[test]
    fn product_by_hand() {
        // [[1,2],[0,1]] [[1,0],[3,1]] = [[1+6, 2], [3, 1]]
        let a = RingMatrix::from_i64(Z, 2, 2, &[1, 2, 0, 1]);
        let b = RingMatrix::from_i64(Z, 2, 2, &[1, 0, 3, 1]);
        assert_eq!(a * b, RingMatrix::from_i64(Z, 2, 2, &[7, 2, 3, 1]));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = RingMatrix::zeros(Z, 2, 3);
        assert!(matches!(a.mat_mul(&a), Err(Error::DimensionMismatch(_))));
        let b = RingMatrix::zeros(CoeffRing::IntegersMod(4), 3, 1);
        assert!(matches!(a.mat_mul(&b), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn blocks_round_trip() {
        let a = RingMatrix::from_i64(Z, 1, 2, &[1, 2]);
        let b = RingMatrix::from_i64(Z, 2, 1, &[3, 4]);
        let m = RingMatrix::from_blocks(Z, &[1, 2], &[2, 1], |i, j| match (i, j) {
            (0, 0) => Some(a.clone()),
            (1, 1) => Some(b.clone()),
            _ => None,
        })
        .unwrap();
        assert_eq!(m.block(&[1, 2], &[2, 1], 0, 0), a);
        assert_eq!(m.block(&[1, 2], &[2, 1], 1, 1), b);
        assert!(m.block(&[1, 2], &[2, 1], 1, 0).is_zero());
        assert_eq!(m, a.direct_sum(&b).unwrap());
    }

    #[test]
    fn json_is_exact() {
        let q = CoeffRing::Rationals;
        let m = RingMatrix::new(q, 1, 2, vec![Scalar::frac(-1, 2), Scalar::int(3)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"ring":"Q","rows":1,"cols":2,"entries":["-1/2","3"]}"#);
        assert_eq!(serde_json::from_str::<RingMatrix>(&s).unwrap(), m);
        let bad = r#"{"ring":"Z","rows":1,"cols":1,"entries":["1/2"]}"#;
        assert!(serde_json::from_str::<RingMatrix>(bad).is_err());
        let wrapped = r#"{"ring":"Z/4","rows":1,"cols":1,"entries":["-1"]}"#;
        let w: RingMatrix = serde_json::from_str(wrapped).unwrap();
        assert_eq!(w.get(0, 0), Scalar::int(3));
    }
}
