use crate::algebra::{CyclicPoly, DiffPoly, Family};
use crate::context::Context;
use crate::error::{Error, Result};

use super::evolution::{evolutionary, VectorCharacteristic};
use super::normal_form::{normal_form, Functional};
use super::operator::{adjoint, apply, linearize};

/// Variational covector `p = Σ_j p^j · d_C a^j`, normalized with the
/// variation pushed to the right end of each component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector {
    pub components: Vec<DiffPoly>,
}

impl Covector {
    pub fn new(components: Vec<DiffPoly>) -> Self {
        Covector { components }
    }
}

/// Coupling `⟨p, φ⟩ = Σ_j [p^j · φ^j]` in the horizontal cohomology.
pub fn couple(ctx: &Context, p: &Covector, phi: &VectorCharacteristic) -> Result<Functional> {
    if phi.target != Family::A {
        return Err(Error::WrongFamily("covectors couple with a-characteristics"));
    }
    ctx.check_components(p.components.len())?;
    ctx.check_components(phi.components.len())?;
    Ok(couple_raw(ctx, &p.components, &phi.components))
}

pub(crate) fn couple_raw(ctx: &Context, p: &[DiffPoly], phi: &[DiffPoly]) -> Functional {
    let mut acc = CyclicPoly::zero();
    for (pj, fj) in p.iter().zip(phi) {
        acc += &ctx.close(&pj.concat(fj));
    }
    normal_form(ctx, &acc)
}

/// Induced covector velocity `ṗ = ∂_φ(p) + ℓ_φ^†(p)` for the flow `ȧ = φ`.
pub fn lift_covector_velocity(ctx: &Context, phi: &VectorCharacteristic, p: &Covector) -> Result<Covector> {
    if phi.target != Family::A {
        return Err(Error::WrongFamily("the covector lift needs an a-characteristic"));
    }
    ctx.check_components(p.components.len())?;
    let l_adj = adjoint(ctx, &linearize(ctx, &phi.components)?)?;
    let transported = apply(ctx, &l_adj, &[p.components.clone()])?;
    let mut out = Vec::with_capacity(p.components.len());
    for (pj, tj) in p.components.iter().zip(transported) {
        let mut v = evolutionary(ctx, phi, pj)?;
        v += &tj;
        out.push(v);
    }
    Ok(Covector::new(out))
}
