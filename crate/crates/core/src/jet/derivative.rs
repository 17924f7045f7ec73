use crate::algebra::{DiffPoly, MultiIndex, Word};
use crate::context::Context;
use crate::error::{Error, Result};

/// `D_dir` applied to one word by the Leibniz rule (zero-based direction).
pub(crate) fn d_word(w: &Word, dir: usize) -> DiffPoly {
    let letters = w.letters();
    let mut out = DiffPoly::zero();
    for i in 0..letters.len() {
        let mut v = letters.to_vec();
        v[i] = v[i].with_sigma(v[i].sigma.incremented(dir));
        out.add_term(Word::new(v), num_traits::One::one());
    }
    out
}

pub(crate) fn d_raw(p: &DiffPoly, dir: usize) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (w, c) in p.terms() {
        for (w2, c2) in d_word(w, dir).terms() {
            out.add_term(w2.clone(), c * c2);
        }
    }
    out
}

/// `D^σ p` with no canonicalization.
pub(crate) fn d_sigma_raw(p: &DiffPoly, sigma: &MultiIndex) -> DiffPoly {
    let mut out = p.clone();
    for dir in sigma.directions() {
        out = d_raw(&out, dir);
    }
    out
}

/// Total derivative `D_i`, with `i` one-based (`1 ≤ i ≤ n`).
///
/// Coefficients carry no explicit `x`, so only the jet part of
/// `∂/∂x^i + Σ q_{σ+1_i} ∂/∂q_σ` contributes.
pub fn total_derivative(ctx: &Context, p: &DiffPoly, i: usize) -> Result<DiffPoly> {
    if i == 0 || i > ctx.base_dim() {
        return Err(Error::BaseIndexOutOfRange { index: i, base_dim: ctx.base_dim() });
    }
    Ok(ctx.canon(d_raw(p, i - 1)))
}

/// `D^σ p`.
pub fn total_derivative_multi(ctx: &Context, p: &DiffPoly, sigma: &MultiIndex) -> DiffPoly {
    ctx.canon(d_sigma_raw(p, sigma))
}
