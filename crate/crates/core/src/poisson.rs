//! Poisson brackets of skew-adjoint operators and the two decision routes
//! for the Hamiltonian property: the master equation `[[π, π]] = 0` and
//! involutivity of the image of `A`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;

use crate::algebra::{q_frac, CyclicPoly, DiffPoly, Family, Letter, Mode, MultiIndex, Parity, Word, Q};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::jet::{
    adjoint, apply, couple_raw, euler_all, evolutionary, letter_args, multiset_permutations, normal_form,
    sigma_distributions, DiffOperator, Functional, GradeKey, Side, VectorCharacteristic,
};
use crate::multivector::{multivector_from_operator, schouten, signed_permutations, Multivector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Master,
    Involutive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Hamiltonian,
    NotHamiltonian,
    /// No witness within the ansatz, and the ansatz was smaller than the commutator's order.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonVerdict {
    pub outcome: Outcome,
    pub route: Route,
    /// `[[π, π]]` on the master route; zero on the involutive route.
    pub residual: Multivector,
    /// Involutive route: `c = ∂_{A p₁}(A p₂) − ∂_{A p₂}(A p₁)`.
    pub commutator: Option<Vec<DiffPoly>>,
    /// Involutive route: some `q` with `A(q) = c`, when found.
    pub witness: Option<Vec<DiffPoly>>,
}

impl PoissonVerdict {
    pub fn hamiltonian(&self) -> bool {
        self.outcome == Outcome::Hamiltonian
    }
}

fn require_skew(ctx: &Context, op: &DiffOperator) -> Result<()> {
    if op.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: op.arity() });
    }
    let defect = adjoint(ctx, op)?.add(op);
    if defect.is_zero() {
        Ok(())
    } else {
        Err(Error::NotSkewAdjoint { defect: Box::new(defect) })
    }
}

fn require_even(f: &CyclicPoly) -> Result<()> {
    let d = f.b_degrees();
    if d.iter().any(|&k| k != 0) {
        return Err(Error::NonzeroBDegree(d));
    }
    Ok(())
}

fn gradient(ctx: &Context, h: &CyclicPoly) -> Result<Vec<DiffPoly>> {
    require_even(h)?;
    euler_all(ctx, h, Family::A, Side::Right)
}

/// `π = ½⟨b, A(b)⟩` of a skew-adjoint operator.
pub fn bivector_of(ctx: &Context, op: &DiffOperator) -> Result<Multivector> {
    require_skew(ctx, op)?;
    multivector_from_operator(ctx, 2, op)
}

/// `{H₁, H₂}_A = ⟨δH₁/δa, A(δH₂/δa)⟩`.
pub fn poisson_bracket(ctx: &Context, h1: &CyclicPoly, h2: &CyclicPoly, op: &DiffOperator) -> Result<Functional> {
    require_skew(ctx, op)?;
    let g1 = gradient(ctx, h1)?;
    let g2 = gradient(ctx, h2)?;
    let image = apply(ctx, op, &[g2])?;
    Ok(couple_raw(ctx, &g1, &image))
}

/// `φ = A(δH/δa)`.
pub fn hamiltonian_flow(ctx: &Context, op: &DiffOperator, h: &CyclicPoly) -> Result<VectorCharacteristic> {
    require_skew(ctx, op)?;
    let g = gradient(ctx, h)?;
    Ok(VectorCharacteristic::on_a(apply(ctx, op, &[g])?))
}

/// `Σ_{s∈S₃} (-1)^s ∂_{A δH_{s(3)}} (½ ⟨δH_{s(1)}, A δH_{s(2)}⟩)`, which equals the
/// cyclic sum `Σ_↻ {{H₁, H₂}_A, H₃}_A`.
pub fn jacobiator(
    ctx: &Context,
    h1: &CyclicPoly,
    h2: &CyclicPoly,
    h3: &CyclicPoly,
    op: &DiffOperator,
) -> Result<Functional> {
    require_skew(ctx, op)?;
    let hs = [h1, h2, h3];
    let grads: Vec<Vec<DiffPoly>> = hs.iter().map(|h| gradient(ctx, h)).collect::<Result<_>>()?;
    let flows: Vec<Vec<DiffPoly>> = grads
        .iter()
        .map(|g| apply(ctx, op, &[g.clone()]))
        .collect::<Result<_>>()?;
    let half = q_frac(1, 2);
    let mut acc = CyclicPoly::zero();
    for (perm, odd) in signed_permutations(3) {
        let inner = couple_raw(ctx, &grads[perm[0]], &flows[perm[1]]);
        let moved = evolutionary(ctx, &VectorCharacteristic::on_a(flows[perm[2]].clone()), &inner.to_open())?;
        let term = ctx.close(&moved).scale(&half);
        if odd {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    Ok(normal_form(ctx, &acc))
}

/// Master-equation route: `[[π, π]] = 0`.
pub fn check_master(ctx: &Context, op: &DiffOperator) -> Result<PoissonVerdict> {
    let pi = bivector_of(ctx, op)?;
    let residual = schouten(ctx, &pi, &pi);
    Ok(PoissonVerdict {
        outcome: if residual.is_zero() { Outcome::Hamiltonian } else { Outcome::NotHamiltonian },
        route: Route::Master,
        residual,
        commutator: None,
        witness: None,
    })
}

/// Frozen covector letters `p₁`, `p₂`.
fn aux_args(ctx: &Context, which: u8) -> Vec<DiffPoly> {
    letter_args(ctx, Family::Aux(which))
}

/// `∂_{A p₁}(A p₂) − ∂_{A p₂}(A p₁)` with `p₁, p₂` inert under evolution.
pub fn image_commutator(ctx: &Context, op: &DiffOperator) -> Result<Vec<DiffPoly>> {
    let ap1 = apply(ctx, op, &[aux_args(ctx, 0)])?;
    let ap2 = apply(ctx, op, &[aux_args(ctx, 1)])?;
    let f1 = VectorCharacteristic::on_a(ap1.clone());
    let f2 = VectorCharacteristic::on_a(ap2.clone());
    ap1.iter()
        .zip(&ap2)
        .map(|(x1, x2)| Ok(&evolutionary(ctx, &f1, x2)? - &evolutionary(ctx, &f2, x1)?))
        .collect()
}

/// Involutivity route: decide `c ∈ im A` by an exact linear solve over the
/// differential expressions `q` bilinear in `p₁, p₂` of total order at most
/// `order_bound` (default: order of `c` plus two).
pub fn check_involutive(ctx: &Context, op: &DiffOperator, order_bound: Option<u32>) -> Result<PoissonVerdict> {
    require_skew(ctx, op)?;
    let c = image_commutator(ctx, op)?;
    let c_order = c.iter().map(DiffPoly::max_order).max().unwrap_or(0);
    let bound = order_bound.unwrap_or(c_order + 2);
    let witness = solve_in_image(ctx, op, &c, bound)?;
    let outcome = match &witness {
        Some(_) => Outcome::Hamiltonian,
        None if bound < c_order => Outcome::Inconclusive,
        None => Outcome::NotHamiltonian,
    };
    Ok(PoissonVerdict {
        outcome,
        route: Route::Involutive,
        residual: Multivector::zero(3),
        commutator: Some(c),
        witness,
    })
}

/// One term of a row template: its coefficient letters and the slot it carries.
struct TemplateTerm {
    row: usize,
    kinds: Vec<(Family, u8)>,
    /// Derivatives on the coefficient letters plus the slot's `σ`.
    shift: MultiIndex,
    slot_generator: usize,
}

/// Grade of one component of `q` or of `A(q)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cell {
    component: usize,
    grade: GradeKey,
}

fn remove_kinds(from: &[(Family, u8)], sub: &[(Family, u8)]) -> Option<Vec<(Family, u8)>> {
    let mut rest = from.to_vec();
    for k in sub {
        let i = rest.iter().position(|x| x == k)?;
        rest.remove(i);
    }
    Some(rest)
}

fn merge_kinds(a: &[(Family, u8)], b: &[(Family, u8)]) -> Vec<(Family, u8)> {
    let mut v: Vec<(Family, u8)> = a.iter().chain(b).copied().collect();
    v.sort();
    v
}

/// Solves `A(q) = c` over the homogeneous cells reachable from the grades of `c`.
fn solve_in_image(ctx: &Context, op: &DiffOperator, c: &[DiffPoly], bound: u32) -> Result<Option<Vec<DiffPoly>>> {
    if c.iter().all(DiffPoly::is_zero) {
        return Ok(Some(vec![DiffPoly::zero(); ctx.gens()]));
    }
    let mut terms = Vec::new();
    for (row, poly) in op.rows().iter().enumerate() {
        for (w, _) in poly.terms() {
            let mut kinds = Vec::new();
            let mut shift = MultiIndex::ZERO;
            let mut slot_generator = 0;
            for l in w.letters() {
                shift = shift.add(&l.sigma);
                if l.is_slot() {
                    slot_generator = l.generator as usize;
                } else {
                    kinds.push(l.kind());
                }
            }
            kinds.sort();
            terms.push(TemplateTerm { row, kinds, shift, slot_generator });
        }
    }
    let max_len = c
        .iter()
        .flat_map(|p| p.terms().map(|(w, _)| w.len()))
        .max()
        .unwrap_or(0);

    // close the set of unknown cells under "shares an image cell"
    let mut unknown_cells: BTreeSet<Cell> = BTreeSet::new();
    let mut seen_images: BTreeSet<Cell> = BTreeSet::new();
    let mut queue: VecDeque<Cell> = VecDeque::new();
    for (i, p) in c.iter().enumerate() {
        for (w, _) in p.terms() {
            let cell = Cell { component: i, grade: GradeKey::of(w) };
            if seen_images.insert(cell.clone()) {
                queue.push_back(cell);
            }
        }
    }
    while let Some(img) = queue.pop_front() {
        for t in terms.iter().filter(|t| t.row == img.component) {
            let Some(kinds) = remove_kinds(&img.grade.kinds, &t.kinds) else { continue };
            let Some(order) = img.grade.order.checked_sub(&t.shift) else { continue };
            if order.order() > bound || kinds.len() + 1 > max_len {
                continue;
            }
            let cell = Cell { component: t.slot_generator, grade: GradeKey { kinds, order } };
            if !unknown_cells.insert(cell.clone()) {
                continue;
            }
            for t2 in terms.iter().filter(|t2| t2.slot_generator == cell.component) {
                let next = Cell {
                    component: t2.row,
                    grade: GradeKey { kinds: merge_kinds(&cell.grade.kinds, &t2.kinds), order: cell.grade.order.add(&t2.shift) },
                };
                if seen_images.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }

    let mut unknowns: Vec<(usize, Word)> = Vec::new();
    for cell in &unknown_cells {
        for w in open_words(ctx, &cell.grade) {
            unknowns.push((cell.component, w));
        }
    }
    let mut columns: BTreeMap<(usize, Word), BTreeMap<usize, Q>> = BTreeMap::new();
    for (u, (g, w)) in unknowns.iter().enumerate() {
        let mut arg = vec![DiffPoly::zero(); ctx.gens()];
        arg[*g] = DiffPoly::word(w.clone());
        let image = apply(ctx, op, &[arg])?;
        for (i, p) in image.iter().enumerate() {
            for (iw, k) in p.terms() {
                columns.entry((i, iw.clone())).or_default().insert(u, k.clone());
            }
        }
    }
    let mut equations = Vec::new();
    for (i, p) in c.iter().enumerate() {
        for (w, k) in p.terms() {
            match columns.remove(&(i, w.clone())) {
                Some(row) => equations.push((row, k.clone())),
                None => return Ok(None),
            }
        }
    }
    equations.extend(columns.into_values().map(|row| (row, Q::zero())));
    let Some(x) = crate::linalg::solve(&equations, unknowns.len()) else {
        return Ok(None);
    };
    let mut q = vec![DiffPoly::zero(); ctx.gens()];
    for ((g, w), v) in unknowns.into_iter().zip(x) {
        if !v.is_zero() {
            q[g].add_term(w, v);
        }
    }
    Ok(Some(q))
}

/// Distinct open words of a grade, canonical in commutative mode.
fn open_words(ctx: &Context, grade: &GradeKey) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let dists = sigma_distributions(grade.kinds.len(), &grade.order, ctx.base_dim());
    let mut emit = |arr: &[(Family, u8)]| {
        for d in &dists {
            let w = Word::new(arr.iter().zip(d).map(|(&(f, g), s)| Letter::new(f, g, *s)).collect());
            let canon = ctx.canon(DiffPoly::word(w));
            if let Some((cw, _)) = canon.terms().next() {
                out.insert(cw.clone());
            };
        }
    };
    match ctx.mode() {
        Mode::Commutative => emit(&grade.kinds),
        Mode::Cyclic => multiset_permutations(&grade.kinds, &mut |arr| emit(arr)),
    }
    out
}

/// Skew-adjoint part `(A − A^†)/2`, for building examples from arbitrary operators.
pub fn skew_part(ctx: &Context, op: &DiffOperator) -> Result<DiffOperator> {
    let adj = adjoint(ctx, op)?;
    Ok(op.add(&adj.neg()).scale(&q_frac(1, 2)))
}

/// The operator `p ↦ Σ coeff·p` from an arity-1 template list, even arguments.
pub fn operator_from_rows(ctx: &Context, rows: Vec<DiffPoly>) -> Result<DiffOperator> {
    DiffOperator::from_rows(ctx, 1, Parity::Even, rows)
}
