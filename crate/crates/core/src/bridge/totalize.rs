use std::collections::BTreeMap;

use super::delta::plain;
use super::gsystem::{GMorphism, GSystem};
use crate::base::{Graded, GradedMorphism, GradedObject, ScalarEta};
use crate::complex::{cone, degrees, ChainMap, Complex};
use crate::error::Result;
use crate::fault::{active, Mutant};
use crate::frobenius::cone_eta;
use crate::linalg::{CoeffRing, RingMatrix, Scalar};

/// `Ξ(X) = ⊕_j X^j`, summands in increasing `j`.
pub fn xi_obj(x: &GradedObject) -> usize {
    x.total_rank()
}

/// The lower-triangular block matrix with block `(j', j) = f_{j'−j}^j`.
pub fn xi_mor(ring: CoeffRing, f: &GradedMorphism) -> Result<RingMatrix> {
    let rows: Vec<(i64, usize)> = f.target().ranks().iter().map(|(&j, &r)| (j, r)).collect();
    let cols: Vec<(i64, usize)> = f.source().ranks().iter().map(|(&j, &r)| (j, r)).collect();
    let rd: Vec<usize> = rows.iter().map(|x| x.1).collect();
    let cd: Vec<usize> = cols.iter().map(|x| x.1).collect();
    RingMatrix::from_blocks(ring, &rd, &cd, |a, b| {
        let (jt, js) = (rows[a].0, cols[b].0);
        if jt < js {
            return None;
        }
        let n = (jt - js) as usize;
        let m = f.component(n, js)?;
        Some(if active(Mutant::XiSign) && n % 2 == 1 { m.negate() } else { m.clone() })
    })
}

/// `Ξ` applied degreewise to a complex of graded modules.
pub fn totalize_complex(g: &Graded, x: &Complex<Graded>) -> Result<Complex<ScalarEta>> {
    let c = plain(g.ring);
    let objs = x.objects().iter().map(|(&n, o)| (n, xi_obj(o)));
    let diffs: Result<Vec<_>> = x.differentials().iter().map(|(&n, d)| Ok((n, xi_mor(g.ring, d)?))).collect();
    Complex::raw(&c, objs, diffs?)
}

pub fn totalize_map(g: &Graded, f: &ChainMap<Graded>) -> Result<ChainMap<ScalarEta>> {
    let c = plain(g.ring);
    let comps: Result<Vec<_>> = f.components().iter().map(|(&n, m)| Ok((n, xi_mor(g.ring, m)?))).collect();
    ChainMap::raw(&c, totalize_complex(g, f.source())?, totalize_complex(g, f.target())?, comps?)
}

/// `Ξ` of a system in the `CgrA` convention.
pub fn totalize(x: &GSystem) -> Result<Complex<ScalarEta>> {
    totalize_complex(&Graded::new(x.ring()), &x.to_complex()?)
}

pub fn totalize_mor(f: &GMorphism) -> Result<ChainMap<ScalarEta>> {
    totalize_map(&Graded::new(f.source().ring()), &f.to_chain_map()?)
}

/// Offsets of each degree's summand inside `Ξ(x)`.
fn offsets(x: &GradedObject, base: usize) -> BTreeMap<i64, usize> {
    let mut acc = base;
    x.ranks()
        .iter()
        .map(|(&j, &r)| {
            let o = acc;
            acc += r;
            (j, o)
        })
        .collect()
}

/// The reordering `Ξ(cone(η_V)) → cone(Id_{Ξ(V)})`.
///
/// Degree `n` of the source interleaves `V^{n+1, j+1}` and `V^{n, j}` for each
/// `j`; the target lists all of `Ξ(V^{n+1})` before `Ξ(V^n)`. The result is
/// validated as a chain map, so it is an isomorphism of complexes.
pub fn cone_eta_reordering(g: &Graded, v: &Complex<Graded>) -> Result<ChainMap<ScalarEta>> {
    let c = plain(g.ring);
    let src = totalize_complex(g, &cone_eta(g, v)?.complex)?;
    let xv = totalize_complex(g, v)?;
    let dst = cone(&c, &ChainMap::identity(&c, &xv))?.complex;
    let mut comps = Vec::new();
    for n in degrees(src.span()) {
        let (hi, lo) = (v.obj(g, n + 1), v.obj(g, n));
        let a = offsets(&hi, 0);
        let b = offsets(&lo, xi_obj(&hi));
        let size = xi_obj(&hi) + xi_obj(&lo);
        let mut p = RingMatrix::zeros(g.ring, size, size);
        let mut pos = 0;
        let mut js: Vec<i64> = hi.ranks().keys().map(|j| j - 1).chain(lo.ranks().keys().copied()).collect();
        js.sort();
        js.dedup();
        for j in js {
            for k in 0..hi.rank(j + 1) {
                p.set(a[&(j + 1)] + k, pos, Scalar::ONE);
                pos += 1;
            }
            for k in 0..lo.rank(j) {
                p.set(b[&j] + k, pos, Scalar::ONE);
                pos += 1;
            }
        }
        comps.push((n, p));
    }
    ChainMap::new(&c, src, dst, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseCategory;
    use crate::gen::random_graded_morphism;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_degree_block_matrix() {
        let r = CoeffRing::Integers;
        let x = GradedObject::new([(0, 1), (1, 1)]);
        let one = |v| RingMatrix::from_i64(r, 1, 1, &[v]);
        let f = GradedMorphism::new(r, x.clone(), x.clone(), [((0, 0), one(2)), ((0, 1), one(5)), ((1, 0), one(3))])
            .unwrap();
        assert_eq!(xi_mor(r, &f).unwrap(), RingMatrix::from_i64(r, 2, 2, &[2, 0, 3, 5]));
    }

    #[test]
    fn eta_and_identity_go_to_identity() {
        let g = Graded::new(CoeffRing::IntegersMod(4));
        let x = GradedObject::new([(-1, 2), (0, 1), (2, 1)]);
        assert!(xi_mor(g.ring, &g.identity(&x)).unwrap().is_identity());
        assert!(xi_mor(g.ring, &g.eta(&x)).unwrap().is_identity());
    }

    #[test]
    fn composition_is_preserved() {
        let g = Graded::new(CoeffRing::IntegersMod(9));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let f = random_graded_morphism(&g, &mut rng, 3, 2);
            let h = crate::gen::random_graded_morphism_from(&g, &mut rng, f.target(), 2);
            let lhs = xi_mor(g.ring, &g.compose(&h, &f).unwrap()).unwrap();
            let rhs = xi_mor(g.ring, &h).unwrap().mat_mul(&xi_mor(g.ring, &f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cone_of_eta_reorders_to_cone_of_identity() {
        let g = Graded::new(CoeffRing::PrimeField(5));
        let v =
            Complex::new(&g, [(0, GradedObject::new([(0, 1), (1, 2)])), (1, GradedObject::stalk(1, 1))], []).unwrap();
        let p = cone_eta_reordering(&g, &v).unwrap();
        assert!(p.validate(&plain(g.ring)));
    }
}
