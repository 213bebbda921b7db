//! Deterministic inputs for the kernel benchmarks.

use etafrob::bridge::DeltaComplex;
use etafrob::gen::{random_delta, random_eta_conflation, random_matrix, Columns, Shape};
use etafrob::{ChainMap, CoeffRing, RingMatrix, ScalarEta};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn square(ring: CoeffRing, n: usize, seed: u64) -> RingMatrix {
    random_matrix(ring, n, n, &mut rng(seed))
}

pub fn eta_pair(c: &ScalarEta, len: usize, rank: usize, seed: u64) -> (ChainMap<ScalarEta>, ChainMap<ScalarEta>) {
    random_eta_conflation(c, &mut rng(seed), Shape { len, max_rank: rank }).expect("generated pair")
}

pub fn delta(ring: CoeffRing, len: usize, width: usize, seed: u64) -> DeltaComplex {
    random_delta(ring, &mut rng(seed), Shape { len, max_rank: 2 }, width, Columns::DegreeZero)
        .expect("generated delta complex")
}
