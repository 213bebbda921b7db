//! Affine systems whose unknowns are base morphisms.
//!
//! Each equation is an affine map `F(u) ∈ Hom(a, b)` of the unknowns and the
//! system asks for `F(u) = 0` in every equation. Coefficients are read off by
//! probing `F` at the zero assignment and at each basis morphism, so the
//! assembly never needs to know how `F` was written.

use rand::RngCore;

use crate::base::BaseCategory;
use crate::error::{Error, Result};
use crate::linalg::{sample_solution, solve_linear_system, RingMatrix, Scalar};
use crate::obstruction::Obstruction;

type Eval<'c, B> = Box<dyn Fn(&[<B as BaseCategory>::Mor]) -> Result<<B as BaseCategory>::Mor> + 'c>;

struct Equation<'c, B: BaseCategory> {
    source: B::Obj,
    target: B::Obj,
    deps: Vec<usize>,
    eval: Eval<'c, B>,
}

pub struct MorphismSystem<'c, B: BaseCategory> {
    cat: &'c B,
    unknowns: Vec<(B::Obj, B::Obj)>,
    equations: Vec<Equation<'c, B>>,
}

impl<'c, B: BaseCategory> MorphismSystem<'c, B> {
    pub fn new(cat: &'c B) -> Self {
        MorphismSystem { cat, unknowns: Vec::new(), equations: Vec::new() }
    }

    /// Registers an unknown morphism `x → y` and returns its index.
    pub fn unknown(&mut self, x: B::Obj, y: B::Obj) -> usize {
        self.unknowns.push((x, y));
        self.unknowns.len() - 1
    }

    /// Adds `eval(u) = 0` in `Hom(a, b)`; `eval` may only read the unknowns in `deps`.
    pub fn equation(
        &mut self,
        a: B::Obj,
        b: B::Obj,
        deps: Vec<usize>,
        eval: impl Fn(&[B::Mor]) -> Result<B::Mor> + 'c,
    ) {
        self.equations.push(Equation { source: a, target: b, deps, eval: Box::new(eval) });
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    /// Total number of scalar unknowns.
    pub fn num_coords(&self) -> usize {
        self.unknowns.iter().map(|(x, y)| self.cat.hom_dim(x, y)).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.unknowns.len() + 1);
        let mut acc = 0;
        out.push(0);
        for (x, y) in &self.unknowns {
            acc += self.cat.hom_dim(x, y);
            out.push(acc);
        }
        out
    }

    pub fn zero_assignment(&self) -> Vec<B::Mor> {
        self.unknowns.iter().map(|(x, y)| self.cat.zero_mor(x, y)).collect()
    }

    fn evaluate(&self, eq: &Equation<'c, B>, values: &[B::Mor]) -> Result<B::Mor> {
        let v = (eq.eval)(values)?;
        if self.cat.source(&v) != eq.source || self.cat.target(&v) != eq.target {
            return Err(Error::InvalidSystem("equation evaluated outside its hom-set".into()));
        }
        Ok(v)
    }

    /// Coefficient matrix and right-hand side of the scalar system `A x = b`.
    pub fn assemble(&self) -> Result<(RingMatrix, RingMatrix)> {
        let ring = self.cat.ring();
        let offsets = self.offsets();
        let cols = *offsets.last().unwrap_or(&0);
        let rows: usize = self.equations.iter().map(|e| self.cat.hom_dim(&e.source, &e.target)).sum();
        let mut a = RingMatrix::zeros(ring, rows, cols);
        let mut b = RingMatrix::zeros(ring, rows, 1);
        let mut values = self.zero_assignment();
        let mut r0 = 0;
        for eq in &self.equations {
            let base = self.cat.flatten(&self.evaluate(eq, &values)?);
            for (r, v) in base.iter().enumerate() {
                b.set(r0 + r, 0, ring.neg(*v));
            }
            for &u in &eq.deps {
                let (x, y) = self.unknowns[u].clone();
                for k in 0..self.cat.hom_dim(&x, &y) {
                    values[u] = self.cat.basis_mor(&x, &y, k);
                    let probe = self.cat.flatten(&self.evaluate(eq, &values)?);
                    for (r, (p, z)) in probe.iter().zip(&base).enumerate() {
                        let c = ring.sub(*p, *z);
                        if !c.is_zero() {
                            a.set(r0 + r, offsets[u] + k, ring.add(a.get(r0 + r, offsets[u] + k), c));
                        }
                    }
                }
                values[u] = self.cat.zero_mor(&x, &y);
            }
            r0 += base.len();
        }
        Ok((a, b))
    }

    fn split(&self, x: &RingMatrix) -> Vec<B::Mor> {
        let offsets = self.offsets();
        self.unknowns
            .iter()
            .enumerate()
            .map(|(u, (s, t))| {
                let coords: Vec<Scalar> = (offsets[u]..offsets[u + 1]).map(|i| x.get(i, 0)).collect();
                self.cat.unflatten(s, t, &coords)
            })
            .collect()
    }

    /// Some assignment satisfying every equation, or `None`.
    pub fn solve(&self) -> Result<Option<Vec<B::Mor>>> {
        let (a, b) = self.assemble()?;
        Ok(solve_linear_system(&a, &b)?.map(|x| self.split(&x)))
    }

    /// A random solution (a particular solution plus a random kernel element).
    pub fn sample(&self, rng: &mut dyn RngCore) -> Result<Option<Vec<B::Mor>>> {
        let (a, b) = self.assemble()?;
        Ok(sample_solution(&a, &b, rng)?.map(|x| self.split(&x)))
    }

    /// Solves, or explains the failure with a replayable obstruction.
    pub fn solve_or_obstruct(&self, stage: &str, level: i64, index: Vec<i64>) -> Result<Vec<B::Mor>> {
        let (a, b) = self.assemble()?;
        match solve_linear_system(&a, &b)? {
            Some(x) => Ok(self.split(&x)),
            None => Err(Obstruction::new(stage, level, index, a, b).into()),
        }
    }

    /// Evaluates every equation directly.
    pub fn is_solution(&self, values: &[B::Mor]) -> Result<bool> {
        for eq in &self.equations {
            if !self.cat.is_zero_mor(&self.evaluate(eq, values)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exhaustive search over a finite ring; `None` if there are more than
    /// `max_coords` scalar unknowns or the ring is infinite.
    pub fn brute_force(&self, max_coords: usize) -> Result<Option<Option<Vec<B::Mor>>>> {
        let ring = self.cat.ring();
        let Some(m) = ring.modulus() else { return Ok(None) };
        let n = self.num_coords();
        if n > max_coords {
            return Ok(None);
        }
        let mut coords = vec![0i64; n];
        loop {
            let x = RingMatrix::new(ring, n, 1, coords.iter().map(|&c| Scalar::int(c)).collect())?;
            let values = self.split(&x);
            if self.is_solution(&values)? {
                return Ok(Some(Some(values)));
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(Some(None));
                }
                coords[i] += 1;
                if coords[i] < m {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ScalarEta;
    use crate::linalg::CoeffRing;

    #[test]
    fn solves_scalar_equation() {
        // 2·u = 2 over Z/4
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let two = RingMatrix::from_i64(c.ring, 1, 1, &[2]);
        let mut sys = MorphismSystem::new(&c);
        let u = sys.unknown(1, 1);
        let t = two.clone();
        sys.equation(1, 1, vec![u], move |v| v[u].mat_mul(&t)?.try_sub(&t));
        let sol = sys.solve().unwrap().unwrap();
        assert!(sys.is_solution(&sol).unwrap());
        assert_eq!(sol[u].get(0, 0).num() % 2, 1);
        assert!(sys.brute_force(4).unwrap().unwrap().is_some());
    }

    #[test]
    fn reports_obstruction() {
        // 2·u = 1 over Z/4
        let c = ScalarEta::new(CoeffRing::IntegersMod(4), 2);
        let two = RingMatrix::from_i64(c.ring, 1, 1, &[2]);
        let mut sys = MorphismSystem::new(&c);
        let u = sys.unknown(1, 1);
        sys.equation(1, 1, vec![u], move |v| {
            v[u].mat_mul(&two)?.try_sub(&RingMatrix::identity(CoeffRing::IntegersMod(4), 1))
        });
        assert!(sys.solve().unwrap().is_none());
        assert_eq!(sys.brute_force(4).unwrap(), Some(None));
        match sys.solve_or_obstruct("test", 0, vec![1]) {
            Err(Error::Obstruction(o)) => assert!(o.replay().unwrap()),
            other => panic!("expected obstruction, got {other:?}"),
        }
    }
}
