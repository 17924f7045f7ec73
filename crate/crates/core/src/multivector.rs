//! Variational multivectors, their evaluation on covectors, the
//! noncommutative variational Schouten bracket, and the odd evolutionary
//! fields `Q^ξ = [[ξ, ·]]`.

use num_traits::One;

use crate::algebra::{CyclicPoly, DiffPoly, Family, Letter, Parity, Word, Q};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::jet::{
    apply, couple_raw, d_sigma_raw, euler_raw, letter_args, normal_form, slot_letter, substitute_derivation,
    Covector, DiffOperator, Functional, Side,
};

/// A class in the horizontal cohomology whose density is `k`-linear in the
/// odd letters, optionally carrying an operator `A` with
/// `ξ = ⟨b, A(b,…,b)⟩ / k!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector {
    degree: usize,
    body: Functional,
    operator: Option<DiffOperator>,
}

impl Multivector {
    pub fn zero(degree: usize) -> Self {
        Multivector { degree, body: Functional::zero(), operator: None }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn body(&self) -> &Functional {
        &self.body
    }

    pub fn operator(&self) -> Option<&DiffOperator> {
        self.operator.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Same class with a different recorded degree; used for the zero class.
    fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn scale(&self, ctx: &Context, c: &Q) -> Multivector {
        Multivector {
            degree: self.degree,
            body: normal_form(ctx, &self.body.scale(c)),
            operator: self.operator.as_ref().map(|o| o.scale(c)),
        }
    }

    /// Sum of two multivectors of the same degree.
    pub fn add(&self, ctx: &Context, other: &Multivector) -> Result<Multivector> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::MixedDegree(vec![self.degree, other.degree]));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let operator = match (&self.operator, &other.operator) {
            (Some(a), Some(b)) if a.arity() == b.arity() => Some(a.add(b)),
            _ => None,
        };
        Ok(Multivector { degree, body: normal_form(ctx, &(self.body.as_cyclic() + other.body.as_cyclic())), operator })
    }
}

/// Reads a density as a multivector; its degree is the common number of
/// odd letters per term.
pub fn multivector_from_density(ctx: &Context, c: &CyclicPoly) -> Result<Multivector> {
    let degrees = c.b_degrees();
    if degrees.len() > 1 {
        return Err(Error::MixedDegree(degrees));
    }
    let degree = degrees.first().copied().unwrap_or(0);
    Ok(Multivector { degree, body: normal_form(ctx, c), operator: None })
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * Q::from_integer((i as i64).into()))
}

/// `⟨b, A(b,…,b)⟩ / k!` in normal form.
pub fn expand_operator(ctx: &Context, k: usize, op: &DiffOperator) -> Result<Functional> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if op.arity() != k - 1 {
        return Err(Error::ArityMismatch { expected: k - 1, found: op.arity() });
    }
    let bs = letter_args(ctx, Family::B);
    let args = vec![bs.clone(); k - 1];
    let image = apply(ctx, op, &args)?;
    let mut acc = CyclicPoly::zero();
    for (bj, aj) in bs.iter().zip(&image) {
        acc += &ctx.close(&bj.concat(aj));
    }
    Ok(normal_form(ctx, &acc.scale(&(Q::one() / factorial(k)))))
}

/// Multivector from an operator normalization.
pub fn multivector_from_operator(ctx: &Context, k: usize, op: &DiffOperator) -> Result<Multivector> {
    let body = expand_operator(ctx, k, op)?;
    let op = op.with_arg_parity(ctx, Parity::Odd);
    Ok(Multivector { degree: k, body, operator: Some(op) })
}

/// Operator `A` of arity `k-1` with `ξ = ⟨b, A(b,…,b)⟩ / k!`.
///
/// Each necklace is rotated so its first odd letter leads, the derivatives
/// on that letter are integrated away, and the remaining odd letters become
/// the argument slots in order of appearance.
pub fn normalize_to_operator(ctx: &Context, xi: &Multivector) -> Result<(usize, DiffOperator)> {
    let k = xi.degree;
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if let Some(op) = &xi.operator {
        return Ok((k, op.clone()));
    }
    let kfact = factorial(k);
    let mut rows = vec![DiffPoly::zero(); ctx.gens()];
    for (w, c) in xi.body.terms() {
        let letters = w.letters();
        let t = letters
            .iter()
            .position(|l| l.family == Family::B)
            .expect("homogeneous degree k >= 1");
        let lead = letters[t];
        let px = crate::algebra::slice_parity(&letters[..t], Parity::Even).is_odd();
        let py = crate::algebra::slice_parity(&letters[t..], Parity::Even).is_odd();
        let negate = (px && py) ^ lead.sigma.is_odd_order();
        let mut rest = Vec::with_capacity(letters.len() - 1);
        rest.extend_from_slice(&letters[t + 1..]);
        rest.extend_from_slice(&letters[..t]);
        let d = d_sigma_raw(&DiffPoly::word(Word::new(rest)), &lead.sigma);
        let coef = if negate { -(c * &kfact) } else { c * &kfact };
        for (m, km) in d.terms() {
            let mut slot = 0usize;
            let template: Vec<Letter> = m
                .letters()
                .iter()
                .map(|l| {
                    if l.family == Family::B {
                        let s = slot_letter(slot, l.generator as usize, l.sigma);
                        slot += 1;
                        s
                    } else {
                        *l
                    }
                })
                .collect();
            rows[lead.generator as usize].add_term(Word::new(template), km * &coef);
        }
    }
    Ok((k, DiffOperator::from_rows(ctx, k - 1, Parity::Odd, rows)?))
}

/// Signed permutations of `0..k`.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; k];
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, bool)>) {
        if cur.len() == k {
            let mut inversions = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if cur[i] > cur[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((cur.clone(), inversions % 2 == 1));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut cur, &mut used, &mut out);
    out
}

/// `ξ(p₁,…,p_k) = Σ_{s∈S_k} (-1)^s ⟨p_{s(1)}, A(p_{s(2)},…,p_{s(k)})⟩ / k!`.
///
/// Arguments are shuffled; the slots of the cyclic word stay put.
pub fn evaluate(ctx: &Context, xi: &Multivector, ps: &[Covector]) -> Result<Functional> {
    if ps.len() != xi.degree {
        return Err(Error::ArityMismatch { expected: xi.degree, found: ps.len() });
    }
    for p in ps {
        ctx.check_components(p.components.len())?;
    }
    if xi.degree == 0 {
        return Ok(xi.body.clone());
    }
    let (k, op) = normalize_to_operator(ctx, xi)?;
    let mut acc = CyclicPoly::zero();
    for (perm, odd) in signed_permutations(k) {
        let args: Vec<Vec<DiffPoly>> = perm[1..].iter().map(|&i| ps[i].components.clone()).collect();
        let image = apply(ctx, &op, &args)?;
        let term = couple_raw(ctx, &ps[perm[0]].components, &image);
        if odd {
            acc -= term.as_cyclic();
        } else {
            acc += term.as_cyclic();
        }
    }
    Ok(normal_form(ctx, &acc.scale(&(Q::one() / factorial(k)))))
}

/// Variational Schouten bracket
/// `[[ξ, η]] = Σ_j ⟨→δξ/δa^j · ←δη/δb^j⟩ − ⟨→δξ/δb^j · ←δη/δa^j⟩`.
///
/// The cut ends of the two necklaces are coupled and the loose strings
/// joined into one necklace; the result is brought to normal form.
pub fn schouten(ctx: &Context, xi: &Multivector, eta: &Multivector) -> Multivector {
    let degree = (xi.degree + eta.degree).saturating_sub(1);
    let mut acc = CyclicPoly::zero();
    for j in 0..ctx.gens() as u8 {
        let ra = euler_raw(xi.body.as_cyclic(), Family::A, j, Side::Right);
        let lb = euler_raw(eta.body.as_cyclic(), Family::B, j, Side::Left);
        if !ra.is_zero() && !lb.is_zero() {
            acc += &ctx.close(&ra.concat(&lb));
        }
        let rb = euler_raw(xi.body.as_cyclic(), Family::B, j, Side::Right);
        let la = euler_raw(eta.body.as_cyclic(), Family::A, j, Side::Left);
        if !rb.is_zero() && !la.is_zero() {
            acc -= &ctx.close(&rb.concat(&la));
        }
    }
    Multivector { degree, body: normal_form(ctx, &acc), operator: None }.with_degree(degree)
}

/// Evolutionary superfield `∂^{(a)}_{φ_a} + ∂^{(b)}_{φ_b}` of a definite
/// parity, acting from the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddField {
    pub parity: Parity,
    pub on_a: Vec<DiffPoly>,
    pub on_b: Vec<DiffPoly>,
}

impl OddField {
    /// Action on an open polynomial.
    pub fn apply_poly(&self, ctx: &Context, p: &DiffPoly) -> DiffPoly {
        ctx.canon(substitute_derivation(Some(&self.on_a), Some(&self.on_b), p))
    }

    /// Action on a density, returned in normal form.
    pub fn apply_functional(&self, ctx: &Context, f: &CyclicPoly) -> Functional {
        let image = substitute_derivation(Some(&self.on_a), Some(&self.on_b), &f.to_open());
        normal_form(ctx, &ctx.close(&image))
    }

    pub fn is_zero(&self) -> bool {
        self.on_a.iter().chain(&self.on_b).all(DiffPoly::is_zero)
    }
}

/// `Q^ξ = −∂^{(a)}_{→δξ/δb} + ∂^{(b)}_{→δξ/δa}`, so that `Q^ξ(η) = [[ξ, η]]`.
pub fn odd_field(ctx: &Context, xi: &Multivector) -> OddField {
    let body = xi.body.as_cyclic();
    let on_a = (0..ctx.gens() as u8)
        .map(|j| ctx.canon(-&euler_raw(body, Family::B, j, Side::Right)))
        .collect();
    let on_b = (0..ctx.gens() as u8)
        .map(|j| ctx.canon(euler_raw(body, Family::A, j, Side::Right)))
        .collect();
    // |Q^ξ| = k - 1 (mod 2)
    OddField { parity: Parity::from_odd(xi.degree % 2 == 0), on_a, on_b }
}

/// Graded commutator `[Q₁, Q₂] = Q₁Q₂ − (-1)^{|Q₁||Q₂|} Q₂Q₁`, computed on
/// the characteristics.
pub fn commutator(ctx: &Context, q1: &OddField, q2: &OddField) -> OddField {
    let both_odd = q1.parity.is_odd() && q2.parity.is_odd();
    let combine = |x: &[DiffPoly], y: &[DiffPoly]| -> Vec<DiffPoly> {
        x.iter()
            .zip(y)
            .map(|(c1, c2)| {
                let first = q1.apply_poly(ctx, c2);
                let second = q2.apply_poly(ctx, c1);
                if both_odd {
                    &first + &second
                } else {
                    &first - &second
                }
            })
            .collect()
    };
    OddField {
        parity: q1.parity.plus(q2.parity),
        on_a: combine(&q1.on_a, &q2.on_a),
        on_b: combine(&q1.on_b, &q2.on_b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, MultiIndex};
    use crate::jet::{adjoint, evolutionary, linearize, VectorCharacteristic};

    fn a(k: u8) -> DiffPoly {
        DiffPoly::letter(Letter::a(0, k))
    }
    fn b(k: u8) -> DiffPoly {
        DiffPoly::letter(Letter::b(0, k))
    }
    fn pow(p: &DiffPoly, n: usize) -> DiffPoly {
        (0..n).fold(DiffPoly::one(), |acc, _| acc.concat(p))
    }
    fn mv(ctx: &Context, p: &DiffPoly) -> Multivector {
        multivector_from_density(ctx, &ctx.close(p)).unwrap()
    }

    #[test]
    fn degrees_from_density() {
        let ctx = Context::cyclic(1);
        assert_eq!(mv(&ctx, &pow(&a(0), 2)).degree(), 0);
        assert_eq!(mv(&ctx, &(&b(0) * &a(1))).degree(), 1);
        assert_eq!(mv(&ctx, &(&b(0) * &b(1))).degree(), 2);
        let mixed = ctx.close(&(&b(0) + &(&b(0) * &b(1))));
        assert!(matches!(multivector_from_density(&ctx, &mixed), Err(Error::MixedDegree(_))));
    }

    #[test]
    fn one_vector_bracket_example() {
        let ctx = Context::cyclic(1);
        let xi = mv(&ctx, &(&b(0) * &pow(&a(0), 2)));
        let eta = mv(&ctx, &(&b(0) * &pow(&a(0), 3)));
        let got = schouten(&ctx, &xi, &eta);
        let expected = normal_form(&ctx, &ctx.close(&(&b(0) * &pow(&a(0), 4))).scale(&q(-1)));
        assert_eq!(got.body(), &expected);
        assert_eq!(got.degree(), 1);
    }

    #[test]
    fn zero_vectors_bracket_to_zero() {
        let ctx = Context::cyclic(1);
        let got = schouten(&ctx, &mv(&ctx, &pow(&a(0), 2)), &mv(&ctx, &pow(&a(0), 3)));
        assert!(got.is_zero());
    }

    #[test]
    fn normalize_b_bx() {
        let ctx = Context::cyclic(1);
        let xi = mv(&ctx, &(&b(0) * &b(1)));
        let (k, op) = normalize_to_operator(&ctx, &xi).unwrap();
        assert_eq!(k, 2);
        // ⟨b·b_x⟩ = ⟨b, A b⟩/2 with A = 2·D
        let expected = DiffOperator::diagonal_derivative(&ctx, MultiIndex::along_first(1))
            .scale(&q(2))
            .with_arg_parity(&ctx, Parity::Odd);
        assert_eq!(op, expected);
        assert_eq!(&expand_operator(&ctx, 2, &op).unwrap(), xi.body());
        let rotated = mv(&ctx, &(&b(1) * &b(0)));
        let (_, op2) = normalize_to_operator(&ctx, &rotated).unwrap();
        assert_eq!(op2, op.neg());
    }

    #[test]
    fn normalize_one_vector_gives_constant_operator() {
        let ctx = Context::cyclic(1);
        let xi = mv(&ctx, &(&(&b(0) * &a(0)) * &a(2)));
        let (k, op) = normalize_to_operator(&ctx, &xi).unwrap();
        assert_eq!(k, 1);
        assert_eq!(op.arity(), 0);
        assert_eq!(op.rows()[0], &a(0) * &a(2));
        assert!(matches!(normalize_to_operator(&ctx, &mv(&ctx, &a(0))), Err(Error::ZeroDegree)));
    }

    #[test]
    fn evaluate_examples() {
        let ctx = Context::cyclic(1);
        let pi = multivector_from_operator(&ctx, 2, &DiffOperator::diagonal_derivative(&ctx, MultiIndex::along_first(1))).unwrap();
        let pa = Covector::new(vec![a(0)]);
        assert!(evaluate(&ctx, &pi, &[pa.clone(), pa.clone()]).unwrap().is_zero());
        let got = evaluate(&ctx, &pi, &[pa, Covector::new(vec![a(1)])]).unwrap();
        let expected = normal_form(&ctx, &ctx.close(&(&a(1) * &a(1))).scale(&q(-1)));
        assert_eq!(got, expected);
        let phi = &a(0) * &a(1);
        let xi = mv(&ctx, &(&b(0) * &phi));
        let got = evaluate(&ctx, &xi, &[Covector::new(vec![DiffPoly::one()])]).unwrap();
        assert_eq!(got, normal_form(&ctx, &ctx.close(&phi)));
        assert!(evaluate(&ctx, &xi, &[]).is_err());
    }

    #[test]
    fn odd_field_of_bivector_matches_closed_formula() {
        let ctx = Context::cyclic(1);
        // A(p) = a·p_x + (p·a)_x is skew-adjoint
        let slot = |k: u8| DiffPoly::letter(slot_letter(0, 0, MultiIndex::along_first(k)));
        let row = &(&(&a(0) * &slot(1)) + &(&slot(1) * &a(0))) + &(&slot(0) * &a(1));
        let op = DiffOperator::from_rows(&ctx, 1, Parity::Even, vec![row]).unwrap();
        assert_eq!(adjoint(&ctx, &op).unwrap(), op.neg());
        let pi = multivector_from_operator(&ctx, 2, &op).unwrap();
        let field = odd_field(&ctx, &pi);
        let ab = apply(&ctx, &op, &[vec![b(0)]]).unwrap();
        assert_eq!(field.on_a, ab);
        // b-part: -½ ℓ^†_↻(b) with the cyclic adjoint reporting (-1)^{k-1} = -1,
        // i.e. ½ times the graded transport ⟨b, ℓ(α)⟩ = ⟨α, ℓ^†(b)⟩.
        let l = linearize(&ctx, &ab).unwrap();
        let mut graded = DiffPoly::zero();
        for (t, c) in l.rows()[0].terms() {
            let letters = t.letters();
            let pos = letters.iter().position(|x| x.is_slot()).unwrap();
            let (pre, suf) = (&letters[..pos], &letters[pos + 1..]);
            let sigma = letters[pos].sigma;
            let odd_pre = !crate::algebra::slice_parity(pre, Parity::Even).is_odd();
            let odd_suf = crate::algebra::slice_parity(suf, Parity::Even).is_odd();
            let negate = (odd_pre && odd_suf) ^ sigma.is_odd_order();
            let mut rest = suf.to_vec();
            rest.push(Letter::b(0, 0));
            rest.extend_from_slice(pre);
            let d = d_sigma_raw(&DiffPoly::word(Word::new(rest)), &sigma);
            graded += &d.scale(&if negate { -c.clone() } else { c.clone() });
        }
        assert_eq!(field.on_b[0], graded.scale(&q_half()));
    }

    fn q_half() -> Q {
        crate::algebra::q_frac(1, 2)
    }

    #[test]
    fn field_of_zero_vector() {
        let ctx = Context::cyclic(1);
        let field = odd_field(&ctx, &mv(&ctx, &pow(&a(0), 2)));
        assert!(field.on_a[0].is_zero());
        assert_eq!(field.on_b[0], a(0).scale(&q(2)));
        assert!(field.parity.is_odd());
    }

    #[test]
    fn field_of_one_vector_acts_as_bracket() {
        let ctx = Context::cyclic(1);
        let phi = &a(0) * &a(1);
        let xi = mv(&ctx, &(&b(0) * &phi));
        let field = odd_field(&ctx, &xi);
        // Q^{⟨b,φ⟩} moves a by -φ
        assert_eq!(field.on_a[0], -&phi);
        let psi = pow(&a(0), 2);
        let eta = mv(&ctx, &(&b(0) * &psi));
        let via_field = field.apply_functional(&ctx, eta.body());
        assert_eq!(&via_field, schouten(&ctx, &xi, &eta).body());
        // and agrees with the commutator of the evolutionary flows
        let d12 = evolutionary(&ctx, &VectorCharacteristic::on_a(vec![phi.clone()]), &psi).unwrap();
        let d21 = evolutionary(&ctx, &VectorCharacteristic::on_a(vec![psi.clone()]), &phi).unwrap();
        let oracle = normal_form(&ctx, &ctx.close(&(&b(0) * &(&d21 - &d12))));
        assert_eq!(via_field, oracle);
    }

    #[test]
    fn commutator_of_translations_vanishes() {
        let ctx = Context::cyclic(1);
        let q1 = odd_field(&ctx, &mv(&ctx, &(&b(0) * &a(1))));
        let q2 = odd_field(&ctx, &mv(&ctx, &(&b(0) * &a(2))));
        assert!(commutator(&ctx, &q1, &q2).is_zero());
    }

    #[test]
    fn self_commutator_of_odd_field_is_twice_square() {
        let ctx = Context::cyclic(1);
        let pi = mv(&ctx, &(&(&b(0) * &a(0)) * &b(1)));
        let qf = odd_field(&ctx, &pi);
        assert!(qf.parity.is_odd());
        let qq = commutator(&ctx, &qf, &qf);
        let probe = mv(&ctx, &(&(&b(0) * &a(0)) * &a(1)));
        let lhs = qq.apply_functional(&ctx, probe.body());
        let once = qf.apply_functional(&ctx, probe.body());
        let twice = qf.apply_functional(&ctx, once.as_cyclic());
        assert_eq!(lhs, normal_form(&ctx, &twice.scale(&q(2))));
    }

    #[test]
    fn signed_permutation_count() {
        let p = signed_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().filter(|(_, o)| *o).count(), 3);
    }
}
