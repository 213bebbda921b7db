//! Worked instances: fixed small cases with hand-checked answers and
//! seeded batches checked against an independent route.

use etafrob::bridge::{
    check_null_certificate, eta_null_complete, phi, phi_mor, theta_extend, theta_extend_mor, theta_triangle_check,
    totalize, totalize_mor, Convention, DeltaComplex, GMorphism, GSystem,
};
use etafrob::complex::{cone, eta_map, eta_on_cone, homotopic, random_chain_map};
use etafrob::frobenius::{
    cone_eta, conflation_tower, conflation_tower_check, env_inflation, eta_homotopic, injective_extend,
    is_eta_conflation, projective_lift, stable_equal, standard_conflation,
};
use etafrob::gen::{random_complex, random_delta, random_delta_map, random_graded_object, Columns, Shape};
use etafrob::{BaseCategory, ChainMap, CoeffRing, Complex, EtaPower, Graded, RingMatrix, ScalarEta};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Z4: CoeffRing = CoeffRing::IntegersMod(4);
const F5: CoeffRing = CoeffRing::PrimeField(5);

fn m1(ring: CoeffRing, v: i64) -> RingMatrix {
    RingMatrix::from_i64(ring, 1, 1, &[v])
}

#[test]
fn eta_is_coherent_on_random_graded_objects() {
    let g = Graded::new(CoeffRing::Integers);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let x = random_graded_object(&mut rng, 4, 3);
        assert!(g.check_eta_coherence(&x));
    }
    assert!(g.check_eta_coherence(&g.zero_obj()));
    assert!(ScalarEta::new(Z4, 2).check_eta_coherence(&3));
}

#[test]
fn eta_commutes_with_cones_of_random_graded_maps() {
    let g = Graded::new(Z4);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let x = random_complex(&g, &mut rng, 3, 2).unwrap();
        let y = random_complex(&g, &mut rng, 3, 2).unwrap();
        let f = random_chain_map(&g, &x, &y, &mut rng).unwrap();
        assert!(eta_on_cone(&g, &f).unwrap());
        assert!(eta_on_cone(&g, &ChainMap::zero(&x, &y)).unwrap());
    }
}

/// `ℤ/4 → ℤ/4` in degrees 0, 1 with `d = 0`: `η · Id = 2` is not of the form
/// `s d + d s = 0`, so `Id` and `0` differ stably; adding a map that factors
/// through `cone(η_V)` does not change the stable class.
#[test]
fn stable_equality_on_small_cases() {
    let c = ScalarEta::new(Z4, 2);
    let stalks = Complex::new(&c, [(0, 1), (1, 1)], [(0, m1(Z4, 0))]).unwrap();
    let id = ChainMap::identity(&c, &stalks);
    assert!(stable_equal(&c, &id, &id).unwrap());
    assert!(!stable_equal(&c, &id, &ChainMap::zero(&stalks, &stalks)).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let x = random_complex(&c, &mut rng, 3, 2).unwrap();
        let y = random_complex(&c, &mut rng, 3, 2).unwrap();
        let v = random_complex(&c, &mut rng, 3, 2).unwrap();
        let ce = cone_eta(&c, &v).unwrap().complex;
        let f = random_chain_map(&c, &x, &y, &mut rng).unwrap();
        let a = random_chain_map(&c, &x, &ce, &mut rng).unwrap();
        let b = random_chain_map(&c, &ce, &y, &mut rng).unwrap();
        let g = f.add(&c, &b.compose(&c, &a).unwrap()).unwrap();
        assert!(stable_equal(&c, &f, &g).unwrap());
    }
}

/// Conflations for `η²` are conflations for `η`.
#[test]
fn eta_square_conflations_are_eta_conflations() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in 0..100 {
        let ring = [Z4, CoeffRing::IntegersMod(8), CoeffRing::Integers][t % 3];
        let c = ScalarEta::new(ring, 2);
        let c2 = EtaPower::new(c, 2);
        let x = random_complex(&c2, &mut rng, 3, 2).unwrap();
        let z = random_complex(&c2, &mut rng, 3, 2).unwrap();
        let alpha = random_chain_map(&c2, &z.shift(&c2, -1), &x.twist(&c2, 1), &mut rng).unwrap();
        let conf = standard_conflation(&c2, &alpha).unwrap();
        let down = |f: &ChainMap<EtaPower<ScalarEta>>| {
            let back = |k: &Complex<EtaPower<ScalarEta>>| {
                Complex::new(&c, k.objects().clone(), k.differentials().clone()).unwrap()
            };
            ChainMap::new(&c, back(f.source()), back(f.target()), f.components().clone()).unwrap()
        };
        let (i, p) = (down(&conf.pair.i), down(&conf.pair.p));
        assert_eq!(conflation_tower(&c, &i, &p, 2).unwrap(), vec![true, true]);
        assert!(conflation_tower_check(&c, &i, &p, 3).unwrap());
    }
}

#[test]
fn lifts_and_extensions_over_z4() {
    let c = ScalarEta::new(Z4, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let v = random_complex(&c, &mut rng, 3, 2).unwrap();
        let x = random_complex(&c, &mut rng, 3, 2).unwrap();
        let z = random_complex(&c, &mut rng, 3, 2).unwrap();
        let alpha = random_chain_map(&c, &z.shift(&c, -1), &x, &mut rng).unwrap();
        let conf = standard_conflation(&c, &alpha).unwrap();
        let ce = cone_eta(&c, &v).unwrap().complex;

        let g = random_chain_map(&c, &ce, conf.pair.z(), &mut rng).unwrap();
        let lift = projective_lift(&c, &v, &g, &conf).unwrap();
        assert!(lift.validate(&c));
        assert_eq!(conf.pair.p.compose(&c, &lift).unwrap(), g);

        let h = random_chain_map(&c, conf.pair.x(), &ce, &mut rng).unwrap();
        let ext = injective_extend(&c, &v, &h, &conf).unwrap();
        assert!(ext.validate(&c));
        assert_eq!(ext.compose(&c, &conf.pair.i).unwrap(), h);
    }
}

#[test]
fn envelopes_of_random_complexes_are_recognized() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..100 {
        let c = ScalarEta::new([Z4, F5, CoeffRing::Integers][t % 3], (t % 4) as i64);
        let x = random_complex(&c, &mut rng, 4, 3).unwrap();
        let env = env_inflation(&c, &x).unwrap();
        assert!(is_eta_conflation(&c, &env.pair.i, &env.pair.p).unwrap().is_some());
    }
}

/// `cone(η_X)` for `X = ℤ/4 →[2] ℤ/4` is η-contractible.
#[test]
fn cone_of_eta_is_eta_contractible() {
    let c = ScalarEta::new(Z4, 2);
    let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, m1(Z4, 2))]).unwrap();
    let ce = cone(&c, &eta_map(&c, &x)).unwrap().complex;
    let id = ChainMap::identity(&c, &ce);
    assert!(eta_homotopic(&c, &id, &ChainMap::zero(&ce, &ce)).unwrap().is_some());
}

#[test]
fn theta_extensions_over_f5() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shape = Shape { len: 3, max_rank: 2 };
    for _ in 0..30 {
        let x = random_delta(F5, &mut rng, shape, 2, Columns::DegreeZero).unwrap();
        let y = random_delta(F5, &mut rng, shape, 2, Columns::DegreeZero).unwrap();
        let (xh, yh) = (theta_extend(&x).unwrap(), theta_extend(&y).unwrap());
        assert!(xh.validate() && yh.validate());
        let alpha = random_delta_map(&mut rng, &x, &y).unwrap();
        let f = theta_extend_mor(&alpha, &xh, &yh).unwrap();
        assert!(f.validate());
        assert!(theta_triangle_check(&alpha).unwrap().holds());
    }
}

/// `Φ(cone α)` is isomorphic to the totalized cone of `Θ(α) η`: the two are
/// Θ-extensions of the same data, compared by extending the identity.
#[test]
fn phi_of_a_cone_matches_the_cone_of_phi() {
    let g = Graded::new(F5);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shape = Shape { len: 3, max_rank: 2 };
    for _ in 0..20 {
        let x = random_delta(F5, &mut rng, shape, 2, Columns::DegreeZero).unwrap();
        let y = random_delta(F5, &mut rng, shape, 2, Columns::DegreeZero).unwrap();
        let alpha = random_delta_map(&mut rng, &x, &y).unwrap();
        let f = theta_extend_mor(&alpha, &theta_extend(&x).unwrap(), &theta_extend(&y).unwrap()).unwrap();
        let cx = f.source().to_complex().unwrap();
        let fe = f.to_chain_map().unwrap().compose(&g, &eta_map(&g, &cx)).unwrap();
        let other = GSystem::from_complex(F5, &cone(&g, &fe).unwrap().complex).unwrap();

        let dc = DeltaComplex::cone(&alpha).unwrap();
        let own = theta_extend(&dc).unwrap();
        assert_eq!(phi(&dc).unwrap(), totalize(&own).unwrap());
        let id = etafrob::bridge::DeltaMap::identity(&dc);
        let u = totalize_mor(&theta_extend_mor(&id, &own, &other).unwrap()).unwrap();
        let v = totalize_mor(&theta_extend_mor(&id, &other, &own).unwrap()).unwrap();
        let c = etafrob::bridge::plain(F5);
        assert!(u.validate(&c) && v.validate(&c));
        assert!(homotopic(&c, &u.then(&c, &v).unwrap(), &ChainMap::identity(&c, u.source())).unwrap().is_some());
        assert!(homotopic(&c, &v.then(&c, &u).unwrap(), &ChainMap::identity(&c, v.source())).unwrap().is_some());
    }
}

#[test]
fn phi_of_the_identity_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = random_delta(Z4, &mut rng, Shape { len: 3, max_rank: 2 }, 3, Columns::DegreeZero).unwrap();
    let id = etafrob::bridge::DeltaMap::identity(&x);
    let t = phi_mor(&id).unwrap();
    assert_eq!(t, ChainMap::identity(&etafrob::bridge::plain(Z4), &phi(&x).unwrap()));
}

#[test]
fn zero_map_has_zero_null_homotopy() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let x = random_delta(F5, &mut rng, Shape { len: 3, max_rank: 2 }, 2, Columns::Arbitrary).unwrap();
    let y = random_delta(F5, &mut rng, Shape { len: 3, max_rank: 2 }, 2, Columns::Arbitrary).unwrap();
    let (Ok(xh), Ok(yh)) = (theta_extend(&x), theta_extend(&y)) else { return };
    let f = GMorphism::zero(&xh, &yh);
    let cert = eta_null_complete(&f, [], []).unwrap();
    assert!(cert.s.iter().all(|(_, m)| m.is_zero()));
    assert!(check_null_certificate(&f, &cert).unwrap());
}

/// `X` a stalk at `(0,0)`, `Y` the contractible column `ℤ →1 ℤ` at `j = 1`,
/// `f_0 = 0`, `f_1 = 1`. The completion solves `d s_2 = ±f_1` at the first
/// step, so `s_2 = ±1` and nothing else is needed.
#[test]
fn one_step_completion() {
    let r = CoeffRing::Integers;
    let x = GSystem::new(r, Convention::CgrA, [((0, 0), 1)], []).unwrap();
    let y = GSystem::new(r, Convention::CgrA, [((-1, 1), 1), ((0, 1), 1)], [((0, -1, 1), m1(r, 1))]).unwrap();
    let f = GMorphism::new(x, y, [((1, 0, 0), m1(r, 1))]).unwrap();
    assert!(f.validate());
    let cert = eta_null_complete(&f, [], []).unwrap();
    assert!(check_null_certificate(&f, &cert).unwrap());
    let nonzero: Vec<_> = cert.s.iter().filter(|(_, m)| !m.is_zero()).collect();
    assert_eq!(nonzero.len(), 1);
    let ((n, i, j), m) = nonzero[0];
    assert_eq!((*n, *i, *j), (2, 0, 0));
    assert!(m.get(0, 0) == r.one() || m.get(0, 0) == r.neg(r.one()));
}
