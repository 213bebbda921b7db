use std::collections::BTreeMap;

use rand::RngCore;

use super::{degrees, hull, ChainMap, Complex};
use crate::base::BaseCategory;
use crate::equations::MorphismSystem;
use crate::error::Result;

/// Unknowns `φ^n: A^n → B^n` constrained to form a chain map. Returns the
/// system and the unknown index of each degree; callers may add equations.
pub fn chain_map_system<'c, B: BaseCategory>(
    cat: &'c B,
    a: &Complex<B>,
    b: &Complex<B>,
) -> (MorphismSystem<'c, B>, BTreeMap<i64, usize>) {
    let mut sys = MorphismSystem::new(cat);
    let mut slots = BTreeMap::new();
    let span = hull(a.span(), b.span());
    for n in degrees(span) {
        let (an, bn) = (a.obj(cat, n), b.obj(cat, n));
        if cat.hom_dim(&an, &bn) > 0 {
            slots.insert(n, sys.unknown(an, bn));
        }
    }
    for n in degrees(span.map(|(lo, hi)| (lo - 1, hi))) {
        let (an, bn1) = (a.obj(cat, n), b.obj(cat, n + 1));
        if cat.hom_dim(&an, &bn1) == 0 {
            continue;
        }
        let here = slots.get(&n).copied();
        let next = slots.get(&(n + 1)).copied();
        if here.is_none() && next.is_none() {
            continue;
        }
        let (da, db) = (a.diff(cat, n), b.diff(cat, n));
        let zero = cat.zero_mor(&an, &bn1);
        sys.equation(an, bn1, here.into_iter().chain(next).collect(), move |v| {
            let mut acc = zero.clone();
            if let Some(u) = next {
                acc = cat.add(&acc, &cat.compose(&v[u], &da)?)?;
            }
            if let Some(u) = here {
                acc = cat.sub(&acc, &cat.compose(&db, &v[u])?)?;
            }
            Ok(acc)
        });
    }
    (sys, slots)
}

/// Assembles a solution of `chain_map_system` into a chain map.
pub fn chain_map_from_solution<B: BaseCategory>(
    cat: &B,
    a: &Complex<B>,
    b: &Complex<B>,
    slots: &BTreeMap<i64, usize>,
    values: &[B::Mor],
) -> Result<ChainMap<B>> {
    ChainMap::raw(cat, a.clone(), b.clone(), slots.iter().map(|(&n, &u)| (n, values[u].clone())))
}

/// A uniformly random chain map over a finite ring (a random small one
/// otherwise), drawn from the solution space of the chain conditions.
pub fn random_chain_map<B: BaseCategory>(
    cat: &B,
    a: &Complex<B>,
    b: &Complex<B>,
    rng: &mut dyn RngCore,
) -> Result<ChainMap<B>> {
    let (sys, slots) = chain_map_system(cat, a, b);
    let values = sys.sample(rng)?.expect("the zero map is always a solution");
    chain_map_from_solution(cat, a, b, &slots, &values)
}

/// Some chain map `L: A → Y` with `p ∘ L = g`, if one exists.
pub fn lift_through<B: BaseCategory>(cat: &B, p: &ChainMap<B>, g: &ChainMap<B>) -> Result<Option<ChainMap<B>>> {
    let a = g.source();
    let y = p.source();
    let (mut sys, slots) = chain_map_system(cat, a, y);
    for n in degrees(hull(a.span(), g.target().span())) {
        let (an, zn) = (a.obj(cat, n), g.target().obj(cat, n));
        if cat.hom_dim(&an, &zn) == 0 {
            continue;
        }
        let (pn, gn) = (p.comp(cat, n), g.comp(cat, n));
        let u = slots.get(&n).copied();
        sys.equation(an, zn, u.into_iter().collect(), move |v| match u {
            Some(u) => cat.sub(&cat.compose(&pn, &v[u])?, &gn),
            None => Ok(cat.neg(&gn)),
        });
    }
    match sys.solve()? {
        Some(v) => Ok(Some(chain_map_from_solution(cat, a, y, &slots, &v)?)),
        None => Ok(None),
    }
}

/// Some chain map `E: Y → C` with `E ∘ i = g`, if one exists.
pub fn extend_along<B: BaseCategory>(cat: &B, i: &ChainMap<B>, g: &ChainMap<B>) -> Result<Option<ChainMap<B>>> {
    let y = i.target();
    let c = g.target();
    let (mut sys, slots) = chain_map_system(cat, y, c);
    for n in degrees(hull(i.source().span(), c.span())) {
        let (xn, cn) = (i.source().obj(cat, n), c.obj(cat, n));
        if cat.hom_dim(&xn, &cn) == 0 {
            continue;
        }
        let (in_, gn) = (i.comp(cat, n), g.comp(cat, n));
        let u = slots.get(&n).copied();
        sys.equation(xn, cn, u.into_iter().collect(), move |v| match u {
            Some(u) => cat.sub(&cat.compose(&v[u], &in_)?, &gn),
            None => Ok(cat.neg(&gn)),
        });
    }
    match sys.solve()? {
        Some(v) => Ok(Some(chain_map_from_solution(cat, y, c, &slots, &v)?)),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ScalarEta;
    use crate::linalg::{CoeffRing, RingMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_chain_maps_commute() {
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let two = RingMatrix::from_i64(c.ring, 1, 1, &[2]);
        let x = Complex::new(&c, [(0, 1), (1, 1)], [(0, two.clone())]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..40 {
            let f = random_chain_map(&c, &x, &x, &mut rng).unwrap();
            assert!(f.validate(&c));
            seen.insert(format!("{:?}", f.components()));
        }
        // chain endomorphisms of ℤ/4 →2 ℤ/4: (a, b) with 2a = 2b, 8 of them
        assert_eq!(seen.len(), 8);
    }
}
