use super::conflation::{standard_conflation, EtaConflation};
use super::lifts::{cone_eta, env_inflation, injective_extend};
use crate::base::BaseCategory;
use crate::complex::{degrees, eta_map, extend_along, ChainMap, Complex};
use crate::error::{Error, Result};

/// `X →f Y →(0 1)ᵗ cone(f η_X) →(1 0) X(1)[1]`.
#[derive(Clone, Debug)]
pub struct Triangle<B: BaseCategory> {
    pub f: ChainMap<B>,
    /// The pair `Y → cone(f η_X) → X(1)[1]` with witness `α = f(1)`.
    pub conflation: EtaConflation<B>,
}

impl<B: BaseCategory> Triangle<B> {
    pub fn third(&self) -> &Complex<B> {
        self.conflation.pair.y()
    }

    pub fn connecting(&self) -> &ChainMap<B> {
        &self.conflation.pair.p
    }
}

pub fn standard_triangle<B: BaseCategory>(cat: &B, f: &ChainMap<B>) -> Result<Triangle<B>> {
    let conflation = standard_conflation(cat, &f.twist(cat, 1))?;
    let expect = f.compose(cat, &eta_map(cat, f.source()))?;
    if conflation.h_tilde(cat)?.components() != expect.components() {
        return Err(Error::NotNormalized("η is not natural on this map".into()));
    }
    Ok(Triangle { f: f.clone(), conflation })
}

/// `X(1)[1]`, the translation of the stable category.
pub fn suspension<B: BaseCategory>(cat: &B, x: &Complex<B>) -> Complex<B> {
    x.shift(cat, 1).twist(cat, 1)
}

/// The map induced on cokernels by an extension `E: cone(η_X) → cone(η_Y)`
/// of `X →f Y → cone(η_Y)`.
fn induced<B: BaseCategory>(cat: &B, f: &ChainMap<B>, ext: &ChainMap<B>) -> Result<ChainMap<B>> {
    let (x, y) = (f.source(), f.target());
    let env_x = env_inflation(cat, x)?;
    let env_y = env_inflation(cat, y)?;
    let mut comps = Vec::new();
    for n in degrees(ext.span()) {
        let m = cat.compose(&env_y.pair.p.comp(cat, n), &cat.compose(&ext.comp(cat, n), &env_x.pair.sigma(cat, n))?)?;
        comps.push((n, m));
    }
    let sx = env_x.pair.z().clone();
    let sy = env_y.pair.z().clone();
    let s = ChainMap::raw(cat, sx, sy, comps)?;
    if !s.validate(cat) || s.compose(cat, &env_x.pair.p)? != env_y.pair.p.compose(cat, ext)? {
        return Err(Error::NotNormalized("extension does not descend to the cokernels".into()));
    }
    Ok(s)
}

/// `S(f): X(1)[1] → Y(1)[1]` from the explicit injective extension of
/// `X → Y → cone(η_Y)` along the envelope of `X`.
pub fn suspend_map<B: BaseCategory>(cat: &B, f: &ChainMap<B>) -> Result<ChainMap<B>> {
    let (x, y) = (f.source(), f.target());
    let ext = injective_extend(cat, y, &cone_eta(cat, y)?.inj.compose(cat, f)?, &env_inflation(cat, x)?)?;
    induced(cat, f, &ext)
}

/// `S(f)` from an extension found by the solver, perturbed by
/// `ψ ∘ (1 0)` for a chain map `ψ: X(1)[1] → cone(η_Y)` when one is given.
pub fn suspend_map_via<B: BaseCategory>(cat: &B, f: &ChainMap<B>, psi: Option<&ChainMap<B>>) -> Result<ChainMap<B>> {
    let (x, y) = (f.source(), f.target());
    let env_x = env_inflation(cat, x)?;
    let g = cone_eta(cat, y)?.inj.compose(cat, f)?;
    let mut ext = extend_along(cat, &env_x.pair.i, &g)?
        .ok_or_else(|| Error::NotNormalized("cone(η_Y) failed to be injective".into()))?;
    if let Some(psi) = psi {
        ext = ext.add(cat, &psi.compose(cat, &env_x.pair.p)?)?;
    }
    induced(cat, f, &ext)
}
