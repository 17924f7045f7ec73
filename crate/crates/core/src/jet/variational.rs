use crate::algebra::{CyclicPoly, DiffPoly, Family, Word};
use crate::context::Context;
use crate::error::{Error, Result};

use super::derivative::d_sigma_raw;

/// Which end of the necklace the cut variation is moved to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Slot at the right end: `d/dε F = Σ_j ⟨δF/δq^j · α^j⟩`.
    Right,
    /// Slot at the left end: `d/dε F = Σ_j ⟨α^j · δF/δq^j⟩`.
    Left,
}

/// Cyclic Euler operator `δF/δq^j`.
///
/// For every occurrence `w = u·q^j_σ·v` the necklace is cut at that
/// letter, the remaining open word `v·u` is read off with its rotation
/// sign, and the derivatives are thrown off the slot: `(-1)^{|σ|} D^σ(v·u)`.
pub fn variational_derivative(
    ctx: &Context,
    f: &CyclicPoly,
    family: Family,
    generator: usize,
    side: Side,
) -> Result<DiffPoly> {
    if !matches!(family, Family::A | Family::B) {
        return Err(Error::WrongFamily("variational derivatives are taken along a or b"));
    }
    if generator >= ctx.gens() {
        return Err(Error::GeneratorOutOfRange { index: generator + 1, gens: ctx.gens() });
    }
    Ok(ctx.canon(euler_raw(f, family, generator as u8, side)))
}

pub(crate) fn euler_raw(f: &CyclicPoly, family: Family, generator: u8, side: Side) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (w, c) in f.terms() {
        let letters = w.letters();
        for (i, l) in letters.iter().enumerate() {
            if l.family != family || l.generator != generator {
                continue;
            }
            let u = &letters[..i];
            let v = &letters[i + 1..];
            let pu = crate::algebra::slice_parity(u, crate::algebra::Parity::Even).is_odd();
            let pv = crate::algebra::slice_parity(v, crate::algebra::Parity::Even).is_odd();
            let pq = l.parity().is_odd();
            let rotation_odd = match side {
                Side::Right => (pu ^ pq) && pv,
                Side::Left => pu && (pq ^ pv),
            };
            let negate = rotation_odd ^ l.sigma.is_odd_order();
            let mut rest = Vec::with_capacity(letters.len() - 1);
            rest.extend_from_slice(v);
            rest.extend_from_slice(u);
            let d = d_sigma_raw(&DiffPoly::word(Word::new(rest)), &l.sigma);
            let coef = if negate { -c.clone() } else { c.clone() };
            for (t, ct) in d.terms() {
                out.add_term(t.clone(), ct * &coef);
            }
        }
    }
    out
}

/// Right variational derivatives for every generator of a family.
pub fn euler_all(ctx: &Context, f: &CyclicPoly, family: Family, side: Side) -> Result<Vec<DiffPoly>> {
    (0..ctx.gens())
        .map(|j| variational_derivative(ctx, f, family, j, side))
        .collect()
}
