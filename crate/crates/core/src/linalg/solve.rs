//! Exact solving of `A x = b`.
//!
//! * `Z`: Smith form over big integers.
//! * `Z/m`, `F_p`: diagonalization by unimodular row and column operations
//!   on residues. Over a field every pivot is a unit and this is plain
//!   Gaussian elimination with full pivoting.
//! * `Q`: Gauss-Jordan elimination over big rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore};

use super::matrix::RingMatrix;
use super::ring::{CoeffRing, Scalar};
use super::snf::{smith_big, to_big};
use crate::error::{Error, Result};

/// Returns one solution of `coeffs · x = rhs` (a single column), or `None`
/// when the system is inconsistent over the ring. A zero right-hand side
/// always yields the zero solution.
pub fn solve_linear_system(coeffs: &RingMatrix, rhs: &RingMatrix) -> Result<Option<RingMatrix>> {
    solve_with(coeffs, rhs, None)
}

/// Like [`solve_linear_system`] but adds a uniformly drawn element of the
/// solution module's kernel part (bounded to `[-2, 2]` per free coordinate
/// over `Z` and `Q`). Used by generators that need "some random solution".
pub fn sample_solution(coeffs: &RingMatrix, rhs: &RingMatrix, rng: &mut dyn RngCore) -> Result<Option<RingMatrix>> {
    solve_with(coeffs, rhs, Some(rng))
}

fn check(coeffs: &RingMatrix, rhs: &RingMatrix) -> Result<()> {
    if coeffs.ring() != rhs.ring() {
        return Err(Error::RingMismatch { left: coeffs.ring().to_string(), right: rhs.ring().to_string() });
    }
    if rhs.cols() != 1 || rhs.rows() != coeffs.rows() {
        return Err(Error::dims(format!(
            "system has {} equations but right-hand side is {}x{}",
            coeffs.rows(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    Ok(())
}

fn solve_with(coeffs: &RingMatrix, rhs: &RingMatrix, rng: Option<&mut dyn RngCore>) -> Result<Option<RingMatrix>> {
    check(coeffs, rhs)?;
    let ring = coeffs.ring();
    if rng.is_none() && rhs.is_zero() {
        return Ok(Some(RingMatrix::zeros(ring, coeffs.cols(), 1)));
    }
    // Assembled systems are mostly empty rows and untouched unknowns; drop
    // them before eliminating.
    let (r, c) = coeffs.shape();
    let live_rows: Vec<usize> = (0..r).filter(|&i| (0..c).any(|j| !coeffs.get(i, j).is_zero())).collect();
    if (0..r).any(|i| !rhs.get(i, 0).is_zero() && !live_rows.contains(&i)) {
        return Ok(None);
    }
    let live_cols: Vec<usize> = (0..c).filter(|&j| live_rows.iter().any(|&i| !coeffs.get(i, j).is_zero())).collect();
    let mut sub = RingMatrix::zeros(ring, live_rows.len(), live_cols.len());
    let mut sub_rhs = RingMatrix::zeros(ring, live_rows.len(), 1);
    for (a, &i) in live_rows.iter().enumerate() {
        for (b, &j) in live_cols.iter().enumerate() {
            sub.set(a, b, coeffs.get(i, j));
        }
        sub_rhs.set(a, 0, rhs.get(i, 0));
    }
    let mut rng = rng;
    let x = match ring {
        CoeffRing::Integers => solve_integers(&sub, &sub_rhs, &mut rng)?,
        CoeffRing::IntegersMod(m) | CoeffRing::PrimeField(m) => solve_modular(&sub, &sub_rhs, m, &mut rng),
        CoeffRing::Rationals => solve_rationals(&sub, &sub_rhs, &mut rng)?,
    };
    let Some(v) = x else { return Ok(None) };
    let mut full = vec![Scalar::ZERO; c];
    for (b, &j) in live_cols.iter().enumerate() {
        full[j] = v[b];
    }
    if let Some(rg) = rng.as_mut() {
        for j in (0..c).filter(|j| !live_cols.contains(j)) {
            full[j] = match ring.modulus() {
                Some(m) => Scalar::int(rg.gen_range(0..m)),
                None => Scalar::int(rg.gen_range(-2..=2)),
            };
        }
    }
    let x = RingMatrix::column(ring, full)?;
    debug_assert_eq!(&coeffs.mat_mul(&x)?, rhs);
    Ok(Some(x))
}

fn small(rng: &mut Option<&mut dyn RngCore>) -> i64 {
    rng.as_mut().map_or(0, |r| r.gen_range(-2..=2))
}

fn solve_integers(a: &RingMatrix, b: &RingMatrix, rng: &mut Option<&mut dyn RngCore>) -> Result<Option<Vec<Scalar>>> {
    let (r, c) = a.shape();
    let s = smith_big(&to_big(a), r, c);
    let bb: Vec<BigInt> = (0..r).map(|i| BigInt::from(b.get(i, 0).num())).collect();
    let ub: Vec<BigInt> = s.u.iter().map(|row| row.iter().zip(&bb).map(|(x, y)| x * y).sum()).collect();
    let mut y = vec![BigInt::zero(); c];
    for k in 0..r {
        if k < s.rank {
            let (q, rem) = ub[k].div_rem(&s.d[k][k]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[k] = q;
        } else if !ub[k].is_zero() {
            return Ok(None);
        }
    }
    for yk in y.iter_mut().skip(s.rank) {
        *yk = BigInt::from(small(rng));
    }
    let mut x = Vec::with_capacity(c);
    for row in &s.v {
        let v: BigInt = row.iter().zip(&y).map(|(p, q)| p * q).sum();
        let v = v.to_i64().ok_or_else(|| Error::Overflow(format!("solution entry {v}")))?;
        x.push(Scalar::int(v));
    }
    Ok(Some(x))
}

fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Diagonalizes `a` modulo `m` in place, applying the row operations to `b`
/// and recording the column operations in `v`. Returns the diagonal length.
fn diagonalize_mod(a: &mut [Vec<i64>], b: &mut [i64], v: &mut [Vec<i64>], m: i64) -> usize {
    let rows = a.len();
    let cols = v.len();
    let red = |x: i128| x.rem_euclid(m as i128) as i64;
    // row_x <- p·row_x + q·row_y ; row_y <- r·row_x + s·row_y  (old values)
    let row_op = |a: &mut [Vec<i64>], b: &mut [i64], x: usize, y: usize, p: i64, q: i64, r: i64, s: i64| {
        for col in 0..a[x].len() {
            let (u, w) = (a[x][col] as i128, a[y][col] as i128);
            a[x][col] = red(p as i128 * u + q as i128 * w);
            a[y][col] = red(r as i128 * u + s as i128 * w);
        }
        let (u, w) = (b[x] as i128, b[y] as i128);
        b[x] = red(p as i128 * u + q as i128 * w);
        b[y] = red(r as i128 * u + s as i128 * w);
    };
    let col_op = |a: &mut [Vec<i64>], v: &mut [Vec<i64>], x: usize, y: usize, p: i64, q: i64, r: i64, s: i64| {
        for mat in [a, v] {
            for row in mat.iter_mut() {
                let (u, w) = (row[x] as i128, row[y] as i128);
                row[x] = red(p as i128 * u + q as i128 * w);
                row[y] = red(r as i128 * u + s as i128 * w);
            }
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot generating the largest ideal: least gcd with m.
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 {
                    let g = a[i][j].gcd(&m);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        for mat in [&mut *a, &mut *v] {
            for row in mat.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            if let Some(inv) = inv_mod(a[t][t], m) {
                // Unit pivot: scale its row to 1 so elimination is exact.
                row_op(a, b, t, t, inv, 0, inv, 0);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                let (p, w) = (a[t][t], a[i][t]);
                if w == 0 {
                    continue;
                }
                if w % p == 0 {
                    row_op(a, b, t, i, 1, 0, -(w / p), 1);
                } else {
                    let e = p.extended_gcd(&w);
                    row_op(a, b, t, i, e.x, e.y, -(w / e.gcd), p / e.gcd);
                }
            }
            for j in t + 1..cols {
                let (p, w) = (a[t][t], a[t][j]);
                if w == 0 {
                    continue;
                }
                if w % p == 0 {
                    col_op(a, v, t, j, 1, 0, -(w / p), 1);
                } else {
                    let e = p.extended_gcd(&w);
                    col_op(a, v, t, j, e.x, e.y, -(w / e.gcd), p / e.gcd);
                    dirty = true;
                }
            }
            if !dirty || (t + 1..rows).all(|i| a[i][t] == 0) {
                break;
            }
        }
        t += 1;
    }
    t
}

fn solve_modular(a: &RingMatrix, b: &RingMatrix, m: i64, rng: &mut Option<&mut dyn RngCore>) -> Option<Vec<Scalar>> {
    let (r, c) = a.shape();
    let mut am: Vec<Vec<i64>> = (0..r).map(|i| (0..c).map(|j| a.get(i, j).num()).collect()).collect();
    let mut bm: Vec<i64> = (0..r).map(|i| b.get(i, 0).num()).collect();
    let mut v: Vec<Vec<i64>> = (0..c).map(|i| (0..c).map(|j| i64::from(i == j)).collect()).collect();
    let t = diagonalize_mod(&mut am, &mut bm, &mut v, m);
    let mut y = vec![0i64; c];
    for k in 0..r {
        if k < t {
            // d y = rhs (mod m): solvable iff g = gcd(d, m) divides rhs.
            let d = am[k][k];
            let g = d.gcd(&m);
            if bm[k] % g != 0 {
                return None;
            }
            let mg = m / g;
            let inv = inv_mod((d / g).rem_euclid(mg), mg).unwrap_or(0);
            let y0 = if mg == 1 { 0 } else { ((bm[k] / g) as i128 * inv as i128).rem_euclid(mg as i128) as i64 };
            let shift = rng.as_mut().map_or(0, |rg| rg.gen_range(0..g));
            y[k] = (y0 + mg * shift) % m;
        } else if bm[k] != 0 {
            return None;
        }
    }
    for yk in y.iter_mut().skip(t) {
        *yk = rng.as_mut().map_or(0, |rg| rg.gen_range(0..m));
    }
    Some(
        v.iter()
            .map(|row| {
                let s: i128 = row.iter().zip(&y).map(|(&p, &q)| p as i128 * q as i128).sum();
                Scalar::int(s.rem_euclid(m as i128) as i64)
            })
            .collect(),
    )
}

fn solve_rationals(a: &RingMatrix, b: &RingMatrix, rng: &mut Option<&mut dyn RngCore>) -> Result<Option<Vec<Scalar>>> {
    let (r, c) = a.shape();
    let q = |s: Scalar| BigRational::new(BigInt::from(s.num()), BigInt::from(s.den()));
    let mut m: Vec<Vec<BigRational>> =
        (0..r).map(|i| (0..c).map(|j| q(a.get(i, j))).chain([q(b.get(i, 0))]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..r {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=c {
                    let sub = &f * &m[row][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == r {
            break;
        }
    }
    if (row..r).any(|i| !m[i][c].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); c];
    let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
    for &j in &free {
        x[j] = BigRational::from_integer(BigInt::from(small(rng)));
    }
    for (i, &pc) in pivots.iter().enumerate() {
        let mut val = m[i][c].clone();
        for &j in &free {
            val -= &m[i][j] * &x[j];
        }
        x[pc] = val;
    }
    x.into_iter()
        .map(|v| {
            let n = v.numer().to_i64();
            let d = v.denom().to_i64();
            match (n, d) {
                (Some(n), Some(d)) => Ok(Scalar::frac(n, d)),
                _ => Err(Error::Overflow(format!("solution entry {v}"))),
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert_eq, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sys(ring: CoeffRing, r: usize, c: usize, a: &[i64], b: &[i64]) -> (RingMatrix, RingMatrix) {
        (RingMatrix::from_i64(ring, r, c, a), RingMatrix::from_i64(ring, r, 1, b))
    }

    #[test]
    fn integer_examples() {
        let z = CoeffRing::Integers;
        let (a, b) = sys(z, 1, 1, &[2], &[4]);
        assert_eq!(solve_linear_system(&a, &b).unwrap(), Some(RingMatrix::from_i64(z, 1, 1, &[2])));
        let (a, b) = sys(z, 1, 1, &[2], &[3]);
        assert_eq!(solve_linear_system(&a, &b).unwrap(), None);
    }

    #[test]
    fn two_x_equals_two_mod_four() {
        let r = CoeffRing::IntegersMod(4);
        let (a, b) = sys(r, 1, 1, &[2], &[2]);
        let oracle: Vec<i64> = (0..4).filter(|x| 2 * x % 4 == 2).collect();
        assert_eq!(oracle, vec![1, 3]);
        let x = solve_linear_system(&a, &b).unwrap().unwrap();
        assert!(oracle.contains(&x.get(0, 0).num()));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..64 {
            let x = sample_solution(&a, &b, &mut rng).unwrap().unwrap();
            seen.insert(x.get(0, 0).num());
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), oracle);
    }

    #[test]
    fn rational_system() {
        let q = CoeffRing::Rationals;
        let (a, b) = sys(q, 2, 2, &[2, 1, 1, 3], &[1, 0]);
        let x = solve_linear_system(&a, &b).unwrap().unwrap();
        assert_eq!(x.get(0, 0), Scalar::frac(3, 5));
        assert_eq!(x.get(1, 0), Scalar::frac(-1, 5));
        let (a, b) = sys(q, 2, 1, &[1, 2], &[1, 1]);
        assert_eq!(solve_linear_system(&a, &b).unwrap(), None);
    }

    #[test]
    fn mismatch_errors() {
        let z = CoeffRing::Integers;
        let a = RingMatrix::zeros(z, 2, 2);
        assert!(solve_linear_system(&a, &RingMatrix::zeros(z, 3, 1)).is_err());
        let b = RingMatrix::zeros(CoeffRing::IntegersMod(4), 2, 1);
        assert!(solve_linear_system(&a, &b).is_err());
    }

    /// Enumerates every vector in `(Z/m)^c`.
    fn brute_force_solvable(a: &RingMatrix, b: &RingMatrix, m: i64) -> bool {
        let c = a.cols();
        let total = (m as u64).pow(c as u32);
        (0..total).any(|mut code| {
            let x: Vec<i64> = (0..c)
                .map(|_| {
                    let d = (code % m as u64) as i64;
                    code /= m as u64;
                    d
                })
                .collect();
            let xm = RingMatrix::from_i64(a.ring(), c, 1, &x);
            &a.mat_mul(&xm).unwrap() == b
        })
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(
            m in 2i64..=9,
            r in 1usize..=3,
            c in 1usize..=3,
            a in prop::collection::vec(0i64..9, 9),
            b in prop::collection::vec(0i64..9, 3),
        ) {
            let ring = CoeffRing::IntegersMod(m);
            let (a, b) = sys(ring, r, c, &a[..r * c], &b[..r]);
            let got = solve_linear_system(&a, &b).unwrap();
            prop_assert_eq!(got.is_some(), brute_force_solvable(&a, &b, m));
            if let Some(x) = got {
                prop_assert_eq!(a.mat_mul(&x).unwrap(), b);
            }
        }

        #[test]
        fn integer_solutions_check(
            r in 1usize..=4,
            c in 1usize..=4,
            a in prop::collection::vec(-6i64..=6, 16),
            x in prop::collection::vec(-6i64..=6, 4),
        ) {
            let z = CoeffRing::Integers;
            let am = RingMatrix::from_i64(z, r, c, &a[..r * c]);
            let b = &am * &RingMatrix::from_i64(z, c, 1, &x[..c]);
            let got = solve_linear_system(&am, &b).unwrap().unwrap();
            prop_assert_eq!(&am * &got, b);
        }

        #[test]
        fn samples_are_solutions(seed in 0u64..1000, m in 2i64..=9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = CoeffRing::IntegersMod(m);
            let entries: Vec<i64> = (0..12).map(|_| rng.gen_range(0..m)).collect();
            let a = RingMatrix::from_i64(ring, 3, 4, &entries);
            let x0: Vec<i64> = (0..4).map(|_| rng.gen_range(0..m)).collect();
            let b = &a * &RingMatrix::from_i64(ring, 4, 1, &x0);
            let x = sample_solution(&a, &b, &mut rng).unwrap().unwrap();
            prop_assert_eq!(&a * &x, b);
        }
    }
}
