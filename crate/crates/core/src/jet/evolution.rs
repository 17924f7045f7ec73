use std::collections::HashMap;

use crate::algebra::{DiffPoly, Family, MultiIndex, Word};
use crate::context::Context;
use crate::error::{Error, Result};

use super::derivative::d_sigma_raw;

/// Characteristic `φ` of an evolutionary derivation `∂^{(q)}_φ`, one
/// component per generator of the target family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorCharacteristic {
    pub target: Family,
    pub components: Vec<DiffPoly>,
}

impl VectorCharacteristic {
    pub fn new(target: Family, components: Vec<DiffPoly>) -> Self {
        VectorCharacteristic { target, components }
    }

    /// Characteristic acting on the even `a` letters.
    pub fn on_a(components: Vec<DiffPoly>) -> Self {
        Self::new(Family::A, components)
    }

    pub fn on_b(components: Vec<DiffPoly>) -> Self {
        Self::new(Family::B, components)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(DiffPoly::is_zero)
    }
}

/// Graded derivation replacing `a^j_σ ↦ D^σ φ_a^j` and `b^j_σ ↦ D^σ φ_b^j`,
/// acting from the left. Passing a prefix `u` costs
/// `(-1)^{(|t|+|q|)·|u|}` for each inserted monomial `t` replacing letter `q`.
pub(crate) fn substitute_derivation(
    on_a: Option<&[DiffPoly]>,
    on_b: Option<&[DiffPoly]>,
    p: &DiffPoly,
) -> DiffPoly {
    let mut cache: HashMap<(Family, u8, MultiIndex), DiffPoly> = HashMap::new();
    let mut out = DiffPoly::zero();
    for (w, c) in p.terms() {
        let letters = w.letters();
        let mut prefix_odd = false;
        for (i, l) in letters.iter().enumerate() {
            let part = match l.family {
                Family::A => on_a,
                Family::B => on_b,
                _ => None,
            };
            if let Some(part) = part {
                let image = cache
                    .entry((l.family, l.generator, l.sigma))
                    .or_insert_with(|| d_sigma_raw(&part[l.generator as usize], &l.sigma));
                for (t, ct) in image.terms() {
                    let mut v = Vec::with_capacity(letters.len() + t.len());
                    v.extend_from_slice(&letters[..i]);
                    v.extend_from_slice(t.letters());
                    v.extend_from_slice(&letters[i + 1..]);
                    let shift_odd = t.parity().is_odd() ^ l.parity().is_odd();
                    let coef = c * ct;
                    if shift_odd && prefix_odd {
                        out.add_term(Word::new(v), -coef);
                    } else {
                        out.add_term(Word::new(v), coef);
                    }
                }
            }
            prefix_odd ^= l.parity().is_odd();
        }
    }
    out
}

/// Evolutionary derivation `∂^{(q)}_φ(p) = Σ_σ D^σ(φ) · ∂/∂q_σ`.
///
/// Characteristics on `a` must be free of `b` letters: fields on the
/// cotangent superspace are only built through
/// [`odd_field`](crate::multivector::odd_field).
pub fn evolutionary(ctx: &Context, phi: &VectorCharacteristic, p: &DiffPoly) -> Result<DiffPoly> {
    ctx.check_components(phi.components.len())?;
    match phi.target {
        Family::A => {
            if phi.components.iter().any(|c| c.b_degrees().iter().any(|&d| d > 0)) {
                return Err(Error::WrongFamily(
                    "an a-characteristic depending on b must go through odd_field",
                ));
            }
            Ok(ctx.canon(substitute_derivation(Some(&phi.components), None, p)))
        }
        Family::B => Ok(ctx.canon(substitute_derivation(None, Some(&phi.components), p))),
        _ => Err(Error::WrongFamily("evolutionary fields act on the a or b family")),
    }
}
