//! Sparse exact row reduction over the rationals.

use std::collections::BTreeMap;
use std::ops::Bound;

use num_traits::{One, Zero};

use crate::algebra::Q;

/// Sparse row with sorted keys.
pub type SparseRow<K> = BTreeMap<K, Q>;

fn axpy<K: Ord + Clone>(row: &mut SparseRow<K>, c: &Q, other: &SparseRow<K>) {
    for (k, v) in other {
        let delta = c * v;
        match row.get_mut(k) {
            Some(x) => {
                *x += delta;
                if x.is_zero() {
                    row.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    row.insert(k.clone(), delta);
                }
            }
        }
    }
}

/// Row-echelon basis in which each row's pivot is its least key, with
/// pivot coefficient 1.
///
/// Reducing a vector against it eliminates every pivot coordinate; the
/// result is the unique representative supported on non-pivot keys.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, SparseRow<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    /// Adds a row to the span. Returns `false` if it was already dependent.
    pub fn insert(&mut self, mut row: SparseRow<K>) -> bool {
        loop {
            let Some((k, c)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                return false;
            };
            match self.pivots.get(&k) {
                Some(p) => axpy(&mut row, &-c, p),
                None => {
                    let inv = Q::one() / c;
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(k, row);
                    return true;
                }
            }
        }
    }

    /// Eliminates every pivot coordinate of `v` in increasing key order.
    pub fn reduce(&self, v: &mut SparseRow<K>) {
        if self.pivots.is_empty() {
            return;
        }
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => v.range::<K, (Bound<&K>, Bound<&K>)>((Bound::Unbounded, Bound::Unbounded)),
                    Some(c) => v.range::<K, (Bound<&K>, Bound<&K>)>((Bound::Excluded(c), Bound::Unbounded)),
                };
                let mut found = None;
                for (k, c) in range {
                    if self.pivots.contains_key(k) {
                        found = Some((k.clone(), c.clone()));
                        break;
                    }
                }
                found
            };
            match next {
                None => return,
                Some((k, c)) => {
                    let p = &self.pivots[&k];
                    axpy(v, &-c, p);
                    cursor = Some(k);
                }
            }
        }
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (&K, &SparseRow<K>)> {
        self.pivots.iter()
    }
}

/// Column index reserved for the right-hand side in [`solve`].
const RHS: usize = usize::MAX;

/// Solves the sparse system `Σ_j row[j]·x_j = rhs` exactly.
///
/// Free unknowns are set to zero. Returns `None` when inconsistent.
pub fn solve(equations: &[(SparseRow<usize>, Q)], unknowns: usize) -> Option<Vec<Q>> {
    let mut ech: Echelon<usize> = Echelon::new();
    for (row, rhs) in equations {
        let mut r = row.clone();
        if !rhs.is_zero() {
            r.insert(RHS, rhs.clone());
        }
        ech.insert(r);
    }
    if ech.is_pivot(&RHS) {
        return None;
    }
    let mut x = vec![Q::zero(); unknowns];
    let rows: Vec<_> = ech.pivot_rows().collect();
    for (p, row) in rows.into_iter().rev() {
        let mut val = row.get(&RHS).cloned().unwrap_or_else(Q::zero);
        for (k, c) in row.range((Bound::Excluded(*p), Bound::Excluded(RHS))) {
            val -= c * &x[*k];
        }
        x[*p] = val;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn row(entries: &[(usize, i64)]) -> SparseRow<usize> {
        entries.iter().map(|&(k, v)| (k, q(v))).collect()
    }

    #[test]
    fn reduce_is_canonical() {
        let mut e = Echelon::new();
        e.insert(row(&[(0, 1), (2, 1)]));
        e.insert(row(&[(1, 2), (2, 2)]));
        let mut v = row(&[(0, 3), (1, 1)]);
        e.reduce(&mut v);
        // 3·e0 + e1 ≡ -3·e2 - e2
        assert_eq!(v, row(&[(2, -4)]));
        assert!(!e.insert(row(&[(0, 1), (1, 1), (2, 2)])));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let eqs = vec![(row(&[(0, 1), (1, 1)]), q(3)), (row(&[(0, 1), (1, -1)]), q(1))];
        let x = solve(&eqs, 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let eqs = vec![(row(&[(0, 1)]), q(1)), (row(&[(0, 2)]), q(3))];
        assert!(solve(&eqs, 1).is_none());
    }
}
