use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Deref;
use std::sync::Arc;

use crate::algebra::{canonical_closed, CyclicPoly, DiffPoly, Family, Letter, Mode, MultiIndex, Sign, Word, Q};
use crate::context::Context;
use crate::linalg::{Echelon, SparseRow};

use super::derivative::d_raw;

/// A density class modulo the image of the total derivatives, stored as
/// its canonical representative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Functional(CyclicPoly);

impl Functional {
    pub fn zero() -> Self {
        Functional(CyclicPoly::zero())
    }

    pub fn as_cyclic(&self) -> &CyclicPoly {
        &self.0
    }

    pub fn into_cyclic(self) -> CyclicPoly {
        self.0
    }
}

impl Deref for Functional {
    type Target = CyclicPoly;
    fn deref(&self) -> &CyclicPoly {
        &self.0
    }
}

/// Homogeneous component: multiset of letter kinds plus the total
/// derivative order along each base direction. `D_i` maps a grade to the
/// grade with order `+1_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradeKey {
    pub kinds: Vec<(Family, u8)>,
    pub order: MultiIndex,
}

impl GradeKey {
    pub fn of(w: &Word) -> Self {
        let mut kinds: Vec<(Family, u8)> = w.letters().iter().map(Letter::kind).collect();
        kinds.sort();
        let order = w
            .letters()
            .iter()
            .fold(MultiIndex::ZERO, |acc, l| acc.add(&l.sigma));
        GradeKey { kinds, order }
    }
}

/// Canonical representative of `c` modulo `im D_1 + … + im D_n`.
///
/// Each grade is handled separately: the exact subspace is spanned by
/// `D_i` of every closed word one order lower along `i`, row-reduced with
/// pivots on the least word; the input is then reduced against those pivots.
pub fn normal_form(ctx: &Context, c: &CyclicPoly) -> Functional {
    let mut grades: BTreeMap<GradeKey, SparseRow<Word>> = BTreeMap::new();
    for (w, k) in c.terms() {
        grades.entry(GradeKey::of(w)).or_default().insert(w.clone(), k.clone());
    }
    let mut out = CyclicPoly::zero();
    for (key, mut row) in grades {
        if !key.order.is_zero() {
            exact_space(ctx, &key).reduce(&mut row);
        }
        for (w, k) in row {
            out.add_canonical(w, k);
        }
    }
    Functional(out)
}

/// `true` iff `c` is a sum of total derivatives.
pub fn is_exact(ctx: &Context, c: &CyclicPoly) -> bool {
    normal_form(ctx, c).is_zero()
}

fn exact_space(ctx: &Context, key: &GradeKey) -> Arc<Echelon<Word>> {
    if let Some(e) = ctx.cached_exact(key) {
        return e;
    }
    let mut ech = Echelon::new();
    for dir in 0..ctx.base_dim() {
        if key.order.get(dir) == 0 {
            continue;
        }
        let mut lower = key.order;
        let mut unit = MultiIndex::ZERO;
        unit = unit.incremented(dir);
        lower = lower.checked_sub(&unit).expect("positive order");
        for neck in enumerate_closed_words(ctx.mode(), &key.kinds, &lower, ctx.base_dim()) {
            let d = d_raw(&DiffPoly::word(neck), dir);
            let mut row: HashMap<Word, Q> = HashMap::new();
            for (w, k) in d.terms() {
                let (cw, s) = canonical_closed(ctx.mode(), w);
                let k = match s {
                    Sign::Zero => continue,
                    Sign::Plus => k.clone(),
                    Sign::Minus => -k.clone(),
                };
                *row.entry(cw).or_insert_with(|| Q::from_integer(0.into())) += k;
            }
            let row: SparseRow<Word> = row.into_iter().filter(|(_, k)| !num_traits::Zero::is_zero(k)).collect();
            ech.insert(row);
        }
    }
    ctx.store_exact(key.clone(), Arc::new(ech))
}

/// All nonvanishing canonical closed words of the given grade.
pub(crate) fn enumerate_closed_words(
    mode: Mode,
    kinds: &[(Family, u8)],
    order: &MultiIndex,
    base_dim: usize,
) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let arrangements: Vec<Vec<(Family, u8)>> = match mode {
        Mode::Commutative => vec![kinds.to_vec()],
        Mode::Cyclic => {
            // every necklace has a rotation starting with the least kind
            let mut perms = Vec::new();
            if let Some((&first, rest)) = kinds.split_first() {
                multiset_permutations(rest, &mut |p| {
                    let mut v = Vec::with_capacity(kinds.len());
                    v.push(first);
                    v.extend_from_slice(p);
                    perms.push(v);
                });
            } else {
                perms.push(Vec::new());
            }
            perms
        }
    };
    let distributions = sigma_distributions(kinds.len(), order, base_dim);
    for arr in &arrangements {
        for dist in &distributions {
            let w = Word::new(
                arr.iter()
                    .zip(dist)
                    .map(|(&(f, g), s)| Letter::new(f, g, *s))
                    .collect(),
            );
            let (cw, s) = canonical_closed(mode, &w);
            if s != Sign::Zero {
                out.insert(cw);
            }
        }
    }
    out
}

/// Distinct permutations of a sorted multiset.
pub(crate) fn multiset_permutations<T: Clone + Ord>(items: &[T], f: &mut dyn FnMut(&[T])) {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut distinct: Vec<(T, usize)> = Vec::new();
    for x in sorted {
        match distinct.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => distinct.push((x, 1)),
        }
    }
    let mut cur = Vec::with_capacity(items.len());
    fn rec<T: Clone>(distinct: &mut [(T, usize)], cur: &mut Vec<T>, total: usize, f: &mut dyn FnMut(&[T])) {
        if cur.len() == total {
            f(cur);
            return;
        }
        for i in 0..distinct.len() {
            if distinct[i].1 == 0 {
                continue;
            }
            distinct[i].1 -= 1;
            cur.push(distinct[i].0.clone());
            rec(distinct, cur, total, f);
            cur.pop();
            distinct[i].1 += 1;
        }
    }
    rec(&mut distinct, &mut cur, items.len(), f);
}

/// All ways to split `order` over `len` positions.
pub(crate) fn sigma_distributions(len: usize, order: &MultiIndex, base_dim: usize) -> Vec<Vec<MultiIndex>> {
    let mut out = vec![vec![MultiIndex::ZERO; len]];
    if len == 0 {
        return if order.is_zero() { out } else { Vec::new() };
    }
    for dir in 0..base_dim {
        let total = order.get(dir);
        let mut next = Vec::new();
        for base in &out {
            compositions(total, len, &mut |parts| {
                let mut v = base.clone();
                for (slot, &k) in v.iter_mut().zip(parts) {
                    for _ in 0..k {
                        *slot = slot.incremented(dir);
                    }
                }
                next.push(v);
            });
        }
        out = next;
    }
    out
}

/// Weak compositions of `total` into `parts` nonnegative summands.
pub(crate) fn compositions(total: u8, parts: usize, f: &mut dyn FnMut(&[u8])) {
    fn rec(remaining: u8, parts: usize, cur: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
        if cur.len() + 1 == parts {
            cur.push(remaining);
            f(cur);
            cur.pop();
            return;
        }
        for k in 0..=remaining {
            cur.push(k);
            rec(remaining - k, parts, cur, f);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    let mut cur = Vec::with_capacity(parts);
    rec(total, parts, &mut cur, f);
}
