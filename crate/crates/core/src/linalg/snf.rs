//! Smith normal form over the integers.
//!
//! The elimination runs on arbitrary-precision integers so intermediate
//! growth never overflows; results are converted back to `i64` at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::RingMatrix;
use super::ring::{CoeffRing, Scalar};
use crate::error::{Error, Result};

pub(crate) type BigMat = Vec<Vec<BigInt>>;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: RingMatrix,
    pub d: RingMatrix,
    pub v: RingMatrix,
}

pub(crate) struct BigSmith {
    pub u: BigMat,
    pub d: BigMat,
    pub v: BigMat,
    pub rank: usize,
}

fn big_identity(n: usize) -> BigMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn transpose(m: &BigMat, rows: usize, cols: usize) -> BigMat {
    (0..cols).map(|c| (0..rows).map(|r| m[r][c].clone()).collect()).collect()
}

/// `(row_x, row_y) <- (p·row_x + q·row_y, r·row_x + s·row_y)`
fn mix_rows(m: &mut BigMat, x: usize, y: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
    let (a, b) = (m[x].clone(), m[y].clone());
    m[x] = a.iter().zip(&b).map(|(u, v)| p * u + q * v).collect();
    m[y] = a.iter().zip(&b).map(|(u, v)| r * u + s * v).collect();
}

/// `row_dst -= k · row_src`
fn sub_row(m: &mut BigMat, dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row) {
        *d -= k * s;
    }
}

fn negate_row(m: &mut BigMat, r: usize) {
    for x in m[r].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Quotient rounded to nearest, so remainders satisfy `|r| <= |b| / 2`.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    // Floor division leaves `r` with the sign of `b`, so `r - b` is the
    // other candidate remainder.
    let (q, r) = a.div_mod_floor(b);
    if r.abs() * 2 > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Row-style Hermite form in place: echelon with positive pivots and the
/// entries above each pivot reduced. Row operations are mirrored into `u`.
fn hermite_rows(d: &mut BigMat, u: &mut BigMat, cols: usize) {
    let rows = d.len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if d[i][c].is_zero() {
                continue;
            }
            let (a, b) = (d[r][c].clone(), d[i][c].clone());
            if !a.is_zero() && b.is_multiple_of(&a) {
                let q = &b / &a;
                sub_row(d, i, r, &q);
                sub_row(u, i, r, &q);
                continue;
            }
            let e = a.extended_gcd(&b);
            let (p, q, rr, s) = (e.x, e.y, -(&b / &e.gcd), &a / &e.gcd);
            mix_rows(d, r, i, &p, &q, &rr, &s);
            mix_rows(u, r, i, &p, &q, &rr, &s);
        }
        if d[r][c].is_zero() {
            continue;
        }
        if d[r][c].is_negative() {
            negate_row(d, r);
            negate_row(u, r);
        }
        for i in 0..r {
            let q = nearest_quotient(&d[i][c], &d[r][c]);
            sub_row(d, i, r, &q);
            sub_row(u, i, r, &q);
        }
        r += 1;
    }
}

fn is_diagonal(d: &BigMat) -> bool {
    d.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

/// Smith form of an integer matrix given as rows of big integers.
///
/// Alternates row and column Hermite reductions until the matrix is
/// diagonal, then repairs the divisibility chain with 2x2 gcd/lcm moves.
/// The reductions keep intermediate entries bounded by minors of `a`.
pub(crate) fn smith_big(a: &BigMat, rows: usize, cols: usize) -> BigSmith {
    let mut d = a.clone();
    let mut u = big_identity(rows);
    let mut vt = big_identity(cols);
    loop {
        hermite_rows(&mut d, &mut u, cols);
        if is_diagonal(&d) {
            break;
        }
        let mut dt = transpose(&d, rows, cols);
        hermite_rows(&mut dt, &mut vt, rows);
        d = transpose(&dt, cols, rows);
        if is_diagonal(&d) {
            break;
        }
    }
    let n = rows.min(cols);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (d[i][i].clone(), d[j][j].clone());
                if a.is_zero() && !b.is_zero() {
                    d[i][i] = b;
                    d[j][j] = a;
                    u.swap(i, j);
                    vt.swap(i, j);
                    changed = true;
                } else if !a.is_zero() && !b.is_multiple_of(&a) {
                    // U2 = [[s, t], [-b/g, a/g]], V2 = [[1, -t b/g], [1, s a/g]]
                    // send diag(a, b) to diag(g, ab/g).
                    let e = a.extended_gcd(&b);
                    let g = e.gcd;
                    mix_rows(&mut u, i, j, &e.x, &e.y, &-(&b / &g), &(&a / &g));
                    let (c10, c11) = (-(&e.y * &b / &g), &e.x * &a / &g);
                    mix_rows(&mut vt, i, j, &BigInt::one(), &BigInt::one(), &c10, &c11);
                    d[j][j] = &a * &b / &g;
                    d[i][i] = g;
                    changed = true;
                }
            }
        }
    }
    let rank = (0..n).take_while(|&i| !d[i][i].is_zero()).count();
    let v = transpose(&vt, cols, cols);
    BigSmith { u, d, v, rank }
}

fn dot(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| BigRational::from_integer(x.clone()) * y).sum()
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut w: Vec<BigRational> = b.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for prev in &out {
            let nn: BigRational = prev.iter().map(|x| x * x).sum();
            if nn.is_zero() {
                continue;
            }
            let mu = dot(b, prev) / nn;
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= &mu * pi;
            }
        }
        out.push(w);
    }
    out
}

fn round(q: &BigRational) -> BigInt {
    (q + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// LLL reduction (delta = 3/4) of a small integer basis.
fn lll(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let norm = |v: &[BigRational]| -> BigRational { v.iter().map(|x| x * x).sum() };
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let gs = gram_schmidt(&basis);
            let nn = norm(&gs[j]);
            let q = round(&(dot(&basis[k], &gs[j]) / nn));
            if !q.is_zero() {
                sub_row(&mut basis, k, j, &q);
            }
        }
        let gs = gram_schmidt(&basis);
        let mu = dot(&basis[k], &gs[k - 1]) / norm(&gs[k - 1]);
        if norm(&gs[k]) >= (&delta - &mu * &mu) * norm(&gs[k - 1]) {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

/// Shrinks the transforms without changing `U·A·V = D`: the rows of `U`
/// past the rank span the left kernel of `A`, so they may be LLL-reduced
/// and subtracted from the other rows; likewise for the columns of `V`.
fn shrink(rows_of: &mut BigMat, rank: usize) {
    if rows_of.len() <= rank {
        return;
    }
    let kernel = lll(rows_of.split_off(rank));
    let gs = gram_schmidt(&kernel);
    for row in rows_of.iter_mut() {
        for i in (0..kernel.len()).rev() {
            let nn: BigRational = gs[i].iter().map(|x| x * x).sum();
            let q = round(&(dot(row, &gs[i]) / nn));
            if !q.is_zero() {
                for (x, k) in row.iter_mut().zip(&kernel[i]) {
                    *x -= &q * k;
                }
            }
        }
    }
    rows_of.extend(kernel);
}

pub(crate) fn to_big(a: &RingMatrix) -> BigMat {
    (0..a.rows()).map(|r| (0..a.cols()).map(|c| BigInt::from(a.get(r, c).num())).collect()).collect()
}

pub(crate) fn from_big(m: &BigMat, rows: usize, cols: usize) -> Result<RingMatrix> {
    let mut entries = Vec::with_capacity(rows * cols);
    for row in m {
        for x in row {
            let v = x.to_i64().ok_or_else(|| Error::Overflow(format!("{x} does not fit in i64")))?;
            entries.push(Scalar::int(v));
        }
    }
    RingMatrix::new(CoeffRing::Integers, rows, cols, entries)
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &RingMatrix) -> Result<SmithForm> {
    if a.ring() != CoeffRing::Integers {
        return Err(Error::UnsupportedRing { op: "smith_normal_form", ring: a.ring().to_string() });
    }
    let (r, c) = a.shape();
    let mut s = smith_big(&to_big(a), r, c);
    shrink(&mut s.u, s.rank);
    let mut vt = transpose(&s.v, c, c);
    shrink(&mut vt, s.rank);
    s.v = transpose(&vt, c, c);
    Ok(SmithForm { u: from_big(&s.u, r, r)?, d: from_big(&s.d, r, c)?, v: from_big(&s.v, c, c)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Z: CoeffRing = CoeffRing::Integers;

    fn det(m: &RingMatrix) -> BigInt {
        // Laplace expansion; test matrices are tiny.
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|c| {
                let minor: Vec<i64> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
                    .map(|(r, cc)| m.get(r, cc).num())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                BigInt::from(sign * m.get(0, c).num()) * det(&RingMatrix::from_i64(Z, n - 1, n - 1, &minor))
            })
            .sum()
    }

    /// Product computed in i128 so the check cannot overflow.
    fn wide_mul(a: &RingMatrix, b: &RingMatrix) -> Vec<Vec<i128>> {
        (0..a.rows())
            .map(|r| {
                (0..b.cols())
                    .map(|c| (0..a.cols()).map(|k| a.get(r, k).num() as i128 * b.get(k, c).num() as i128).sum())
                    .collect()
            })
            .collect()
    }

    fn reconstructs(s: &SmithForm, a: &RingMatrix) -> bool {
        let ua = wide_mul(&s.u, a);
        let d = &s.d;
        (0..d.rows()).all(|r| {
            (0..d.cols()).all(|c| {
                let v: i128 = (0..a.cols()).map(|k| ua[r][k] * s.v.get(k, c).num() as i128).sum();
                v == d.get(r, c).num() as i128
            })
        })
    }

    fn check(a: &RingMatrix) -> SmithForm {
        let s = smith_normal_form(a).unwrap();
        assert!(reconstructs(&s, a));
        assert_eq!(det(&s.u).abs(), BigInt::one());
        assert_eq!(det(&s.v).abs(), BigInt::one());
        let diag: Vec<i64> = (0..a.rows().min(a.cols())).map(|i| s.d.get(i, i).num()).collect();
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                if r != c {
                    assert!(s.d.get(r, c).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && w[1] >= 0);
            assert!(if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 }, "{diag:?}");
        }
        s
    }

    #[test]
    fn zero_matrix() {
        assert!(check(&RingMatrix::zeros(Z, 2, 3)).d.is_zero());
    }

    #[test]
    fn single_entry() {
        let s = check(&RingMatrix::from_i64(Z, 1, 1, &[2]));
        assert_eq!(s.d, RingMatrix::from_i64(Z, 1, 1, &[2]));
    }

    #[test]
    fn two_by_two() {
        // gcd of entries is 2 and |det| = 8, so D = diag(2, 4).
        let s = check(&RingMatrix::from_i64(Z, 2, 2, &[2, 4, 6, 8]));
        assert_eq!(s.d, RingMatrix::from_i64(Z, 2, 2, &[2, 0, 0, 4]));
    }

    #[test]
    fn rejects_other_rings() {
        let a = RingMatrix::zeros(CoeffRing::IntegersMod(4), 1, 1);
        assert!(matches!(smith_normal_form(&a), Err(Error::UnsupportedRing { .. })));
    }

    proptest! {
        #[test]
        fn reconstruction(r in 0usize..=6, c in 0usize..=6, seed in prop::collection::vec(-20i64..=20, 36)) {
            let a = RingMatrix::from_i64(Z, r, c, &seed[..r * c]);
            check(&a);
        }
    }
}
