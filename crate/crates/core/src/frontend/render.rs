use num_traits::{One, Signed};

use crate::algebra::{CyclicPoly, DiffPoly, Family, Letter, Word, Q};
use crate::context::Context;
use crate::jet::DiffOperator;

/// Default slot names: `p` for one argument, else `p, q, r, …`.
pub fn default_slot_names(arity: usize) -> Vec<String> {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    (0..arity)
        .map(|i| NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("slot{}", i + 1)))
        .collect()
}

pub fn render_letter(ctx: &Context, l: &Letter, slots: &[String]) -> String {
    let m = ctx.gens();
    let mut s = match l.family {
        Family::A | Family::B => {
            let head = if l.family == Family::A { "a" } else { "b" };
            if m == 1 {
                head.to_string()
            } else {
                format!("{head}{}", l.generator + 1)
            }
        }
        Family::Aux(k) => component(format!("p{}", k + 1), l, m),
        Family::Slot(k) => component(slots.get(k as usize).cloned().unwrap_or_else(|| format!("slot{}", k + 1)), l, m),
    };
    let n = ctx.base_dim();
    if n == 1 {
        let k = l.sigma.get(0);
        if k > 0 {
            s.push_str(&format!("_{k}"));
        }
    } else if !l.sigma.is_zero() {
        let parts: Vec<String> = l.sigma.entries(n).iter().map(|k| k.to_string()).collect();
        s.push_str(&format!("^({})", parts.join(",")));
    }
    s
}

fn component(name: String, l: &Letter, m: usize) -> String {
    if m == 1 {
        name
    } else {
        format!("{name}[{}]", l.generator + 1)
    }
}

fn render_word(ctx: &Context, w: &Word, slots: &[String]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.letters().iter().map(|l| render_letter(ctx, l, slots)).collect::<Vec<_>>().join("*")
}

fn render_terms<'a>(terms: impl Iterator<Item = (String, bool, &'a Q)>) -> String {
    let mut out = String::new();
    for (i, (body, is_unit, c)) in terms.enumerate() {
        let magnitude = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if is_unit {
            out.push_str(&magnitude.to_string());
        } else if i == 0 && c.is_negative() {
            // keep "-1 w" unambiguous at the head
            out.push_str(&format!("{magnitude} {body}"));
        } else if magnitude.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{magnitude} {body}"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// `3 a*a_1 - b*b`; zero renders as `0`, the unit word as `1`.
pub fn render_poly(ctx: &Context, p: &DiffPoly) -> String {
    render_poly_with(ctx, p, &[])
}

pub fn render_poly_with(ctx: &Context, p: &DiffPoly, slots: &[String]) -> String {
    render_terms(p.terms().map(|(w, c)| (render_word(ctx, w, slots), w.is_empty(), c)))
}

/// `tr(a*a_1) - 2 tr(b*b_2)`.
pub fn render_cyclic(ctx: &Context, c: &CyclicPoly) -> String {
    render_terms(c.terms().map(|(w, k)| (format!("tr({})", render_word(ctx, w, &[])), false, k)))
}

/// Component list joined by `; `.
pub fn render_vector(ctx: &Context, v: &[DiffPoly]) -> String {
    v.iter().map(|p| render_poly(ctx, p)).collect::<Vec<_>>().join("; ")
}

/// Operator rows with the given slot names.
pub fn render_operator(ctx: &Context, op: &DiffOperator, slots: &[String]) -> String {
    op.rows().iter().map(|r| render_poly_with(ctx, r, slots)).collect::<Vec<_>>().join("; ")
}
