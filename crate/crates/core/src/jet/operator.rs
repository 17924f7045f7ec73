use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use crate::algebra::{commutative_sort_graded, DiffPoly, Family, Letter, MultiIndex, Parity, Word, Q};
use crate::context::Context;
use crate::error::{Error, Result};

use super::derivative::d_sigma_raw;
use super::evolution::VectorCharacteristic;

/// Noncommutative (multi)linear matrix operator in total derivatives.
///
/// Row `i` is a sum of template words: ordinary letters interleaved with
/// exactly one [`Family::Slot`] letter per argument. A slot letter
/// `Slot(s)` with generator `g` and multi-index `σ` stands for
/// `D^σ(arg_s^g)`, so a linear term reads `c · L · D^σ(p^g) · R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    arity: usize,
    arg_parity: Parity,
    rows: Vec<DiffPoly>,
}

pub(crate) fn slot_letter(arg: usize, generator: usize, sigma: MultiIndex) -> Letter {
    Letter::new(Family::Slot(arg as u8), generator as u8, sigma)
}

impl DiffOperator {
    /// Builds an operator from template rows, checking that every term
    /// uses each argument exactly once.
    pub fn from_rows(ctx: &Context, arity: usize, arg_parity: Parity, rows: Vec<DiffPoly>) -> Result<Self> {
        ctx.check_components(rows.len())?;
        for row in &rows {
            for (w, _) in row.terms() {
                let mut seen = vec![false; arity];
                for l in w.letters() {
                    if let Family::Slot(s) = l.family {
                        let s = s as usize;
                        if s >= arity || seen[s] || l.generator as usize >= ctx.gens() {
                            return Err(Error::MalformedTemplate);
                        }
                        seen[s] = true;
                    }
                }
                if seen.iter().any(|&x| !x) {
                    return Err(Error::MalformedTemplate);
                }
            }
        }
        Ok(Self::canonical(ctx, arity, arg_parity, rows))
    }

    fn canonical(ctx: &Context, arity: usize, arg_parity: Parity, rows: Vec<DiffPoly>) -> Self {
        let rows = if ctx.is_commutative() {
            rows.iter().map(|r| r.map_words(arg_parity, commutative_sort_graded)).collect()
        } else {
            rows
        };
        DiffOperator { arity, arg_parity, rows }
    }

    /// Diagonal operator `D^σ` acting on every component.
    pub fn diagonal_derivative(ctx: &Context, sigma: MultiIndex) -> Self {
        let rows = (0..ctx.gens())
            .map(|g| DiffPoly::letter(slot_letter(0, g, sigma)))
            .collect();
        Self::canonical(ctx, 1, Parity::Even, rows)
    }

    pub fn zero(ctx: &Context, arity: usize, arg_parity: Parity) -> Self {
        DiffOperator { arity, arg_parity, rows: vec![DiffPoly::zero(); ctx.gens()] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn arg_parity(&self) -> Parity {
        self.arg_parity
    }

    pub fn rows(&self) -> &[DiffPoly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(DiffPoly::is_zero)
    }

    /// Highest `|σ|` over all slot letters.
    pub fn order(&self) -> u32 {
        self.rows
            .iter()
            .flat_map(|r| r.terms())
            .flat_map(|(w, _)| w.letters().iter().filter(|l| l.is_slot()).map(|l| l.sigma.order()))
            .max()
            .unwrap_or(0)
    }

    /// Same templates regarded as acting on arguments of parity `p`.
    pub fn with_arg_parity(&self, ctx: &Context, p: Parity) -> Self {
        Self::canonical(ctx, self.arity, p, self.rows.clone())
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        assert_eq!(self.arity, other.arity);
        DiffOperator {
            arity: self.arity,
            arg_parity: self.arg_parity,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> DiffOperator {
        DiffOperator {
            arity: self.arity,
            arg_parity: self.arg_parity,
            rows: self.rows.iter().map(|r| r.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> DiffOperator {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            if row.is_zero() {
                write!(f, "0")?;
            }
            for (j, (w, c)) in row.terms().enumerate() {
                if j > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "({c}) {w}")?;
            }
        }
        Ok(())
    }
}

/// Substitutes the arguments into every template.
pub fn apply(ctx: &Context, op: &DiffOperator, args: &[Vec<DiffPoly>]) -> Result<Vec<DiffPoly>> {
    if args.len() != op.arity {
        return Err(Error::ArityMismatch { expected: op.arity, found: args.len() });
    }
    for a in args {
        ctx.check_components(a.len())?;
    }
    let mut cache: HashMap<(u8, u8, MultiIndex), DiffPoly> = HashMap::new();
    let mut out = Vec::with_capacity(op.rows.len());
    for row in &op.rows {
        let mut acc_row = DiffPoly::zero();
        for (t, c) in row.terms() {
            let mut acc = DiffPoly::constant(c.clone());
            let mut pending: Vec<Letter> = Vec::new();
            for l in t.letters() {
                if let Family::Slot(s) = l.family {
                    if !pending.is_empty() {
                        acc = acc.right_mul_word(&Word::new(std::mem::take(&mut pending)));
                    }
                    let img = cache
                        .entry((s, l.generator, l.sigma))
                        .or_insert_with(|| d_sigma_raw(&args[s as usize][l.generator as usize], &l.sigma));
                    acc = acc.concat(img);
                } else {
                    pending.push(*l);
                }
            }
            if !pending.is_empty() {
                acc = acc.right_mul_word(&Word::new(pending));
            }
            acc_row += &acc;
        }
        out.push(ctx.canon(acc_row));
    }
    Ok(out)
}

/// [`apply`] for a linear operator, returning an `a`-characteristic.
pub fn apply_operator(ctx: &Context, op: &DiffOperator, arg: &[DiffPoly]) -> Result<VectorCharacteristic> {
    Ok(VectorCharacteristic::on_a(apply(ctx, op, &[arg.to_vec()])?))
}

/// Linearization `ℓ_φ(α) = d/dε φ[a + εα]`: every occurrence of `a^j_σ`
/// becomes the slot `D^σ(α^j)`.
pub fn linearize(ctx: &Context, phi: &[DiffPoly]) -> Result<DiffOperator> {
    ctx.check_components(phi.len())?;
    let mut rows = vec![DiffPoly::zero(); phi.len()];
    for (i, comp) in phi.iter().enumerate() {
        for (w, c) in comp.terms() {
            for (k, l) in w.letters().iter().enumerate() {
                if l.family != Family::A {
                    continue;
                }
                let mut v = w.letters().to_vec();
                v[k] = slot_letter(0, l.generator as usize, l.sigma);
                rows[i].add_term(Word::new(v), c.clone());
            }
        }
    }
    Ok(DiffOperator::canonical(ctx, 1, Parity::Even, rows))
}

/// Moves argument 0 to the front of the closed word
/// `⟨lead · T(args)⟩`, integrates its derivatives away, and re-reads the
/// rest as an operator in the remaining arguments followed by `lead`.
fn transport(ctx: &Context, op: &DiffOperator, parity: Parity, extract_negative: bool) -> DiffOperator {
    let last = op.arity - 1;
    let mut rows = vec![DiffPoly::zero(); op.rows.len()];
    for (i, row) in op.rows.iter().enumerate() {
        for (t, c) in row.terms() {
            let letters = t.letters();
            let pos = letters
                .iter()
                .position(|l| l.family == Family::Slot(0))
                .expect("validated template");
            let slot = letters[pos];
            let prefix = &letters[..pos];
            let suffix = &letters[pos + 1..];
            let px = parity.is_odd() ^ crate::algebra::slice_parity(prefix, parity).is_odd();
            let py = parity.is_odd() ^ crate::algebra::slice_parity(suffix, parity).is_odd();
            let negate = (px && py) ^ extract_negative ^ slot.sigma.is_odd_order();
            let renumber = |l: &Letter| match l.family {
                Family::Slot(s) => Letter::new(Family::Slot(s - 1), l.generator, l.sigma),
                _ => *l,
            };
            let mut rest: Vec<Letter> = suffix.iter().map(renumber).collect();
            rest.push(slot_letter(last, i, MultiIndex::ZERO));
            rest.extend(prefix.iter().map(renumber));
            let d = d_sigma_raw(&DiffPoly::word(Word::new(rest)), &slot.sigma);
            let coef = if negate { -c.clone() } else { c.clone() };
            let target = &mut rows[slot.generator as usize];
            for (w, k) in d.terms() {
                target.add_term(w.clone(), k * &coef);
            }
        }
    }
    DiffOperator::canonical(ctx, op.arity, parity, rows)
}

/// Adjoint `A^†` of a linear operator on even covectors:
/// `⟨p₁, A p₂⟩ = ⟨p₂, A^† p₁⟩` in the horizontal cohomology.
pub fn adjoint(ctx: &Context, op: &DiffOperator) -> Result<DiffOperator> {
    if op.arity != 1 {
        return Err(Error::NotLinear(op.arity));
    }
    let even = if op.arg_parity == Parity::Even { op.clone() } else { op.with_arg_parity(ctx, Parity::Even) };
    Ok(transport(ctx, &even, Parity::Even, false))
}

/// Cyclic adjoint `A^†_↻` of a `(k-1)`-ary operator on odd arguments:
/// `⟨b₁, A(b₂,…,b_k)⟩ = (-1)^{k-1} ⟨b₂, A^†_↻(b₃,…,b_k,b₁)⟩`.
pub fn cyclic_multilinear_adjoint(ctx: &Context, op: &DiffOperator) -> Result<DiffOperator> {
    if op.arity == 0 {
        return Err(Error::ZeroArity);
    }
    let odd = if op.arg_parity == Parity::Odd { op.clone() } else { op.with_arg_parity(ctx, Parity::Odd) };
    // k - 1 = arity
    Ok(transport(ctx, &odd, Parity::Odd, op.arity % 2 == 1))
}

/// Argument vector `(q^1, …, q^m)` of plain letters of one family.
pub fn letter_args(ctx: &Context, family: Family) -> Vec<DiffPoly> {
    (0..ctx.gens())
        .map(|g| DiffPoly::letter(Letter::plain(family, g as u8)))
        .collect()
}
