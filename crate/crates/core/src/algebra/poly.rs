use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::letter::{Letter, Parity};
use super::word::{canonical_rotation_graded, commutative_sort_graded, Sign, Word};

/// Exact rational coefficient.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// How closed words are identified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Graded-cyclic words (traces in a free associative algebra).
    #[default]
    Cyclic,
    /// Graded-commutative monomials.
    Commutative,
}

/// Parity homogeneity of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    Even,
    Odd,
    Mixed,
}

fn insert_term(terms: &mut BTreeMap<Word, Q>, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Noncommutative differential polynomial: a finite sum of open words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Word, Q>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn monomial(w: Word, c: Q) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, Q::one())
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(Word::single(l))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Q)>>(it: I) -> Self {
        let mut p = DiffPoly::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        insert_term(&mut self.terms, w, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    /// Bilinear concatenation of words.
    pub fn concat(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_term(u.concat(v), cu * cv);
            }
        }
        out
    }

    /// Multiplies every word on the left by `w`.
    pub fn left_mul_word(&self, w: &Word) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(u, c)| (w.concat(u), c.clone())).collect(),
        }
    }

    pub fn right_mul_word(&self, w: &Word) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(u, c)| (u.concat(w), c.clone())).collect(),
        }
    }

    pub fn parity_class(&self) -> ParityClass {
        let mut even = false;
        let mut odd = false;
        for w in self.terms.keys() {
            if w.parity().is_odd() {
                odd = true;
            } else {
                even = true;
            }
        }
        match (even, odd) {
            (_, false) => ParityClass::Even,
            (false, true) => ParityClass::Odd,
            (true, true) => ParityClass::Mixed,
        }
    }

    /// Odd-letter counts of the terms, ascending and deduplicated.
    pub fn b_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| w.odd_count()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Maximal total derivative order over the terms.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|w| w.total_order()).max().unwrap_or(0)
    }

    /// Sorts every word into graded-commutative normal form.
    pub fn project_commutative(&self) -> DiffPoly {
        self.map_words(Parity::Even, commutative_sort_graded)
    }

    pub(crate) fn map_words<F>(&self, slot_parity: Parity, f: F) -> DiffPoly
    where
        F: Fn(&Word, Parity) -> (Word, Sign),
    {
        let mut out = DiffPoly::zero();
        for (w, c) in &self.terms {
            let (w2, s) = f(w, slot_parity);
            match s {
                Sign::Zero => {}
                Sign::Plus => out.add_term(w2, c.clone()),
                Sign::Minus => out.add_term(w2, -c.clone()),
            }
        }
        out
    }
}

impl From<Letter> for DiffPoly {
    fn from(l: Letter) -> Self {
        DiffPoly::letter(l)
    }
}

impl<'a> AddAssign<&'a DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &'a DiffPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &'a DiffPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &'a DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &'a DiffPoly) -> DiffPoly {
        self.concat(rhs)
    }
}

/// Canonical closed word in the given mode, with its sign.
pub fn canonical_closed(mode: Mode, w: &Word) -> (Word, Sign) {
    match mode {
        Mode::Cyclic => canonical_rotation_graded(w, Parity::Even),
        Mode::Commutative => commutative_sort_graded(w, Parity::Even),
    }
}

/// Formal sum of closed words (necklaces, or commutative monomials in
/// commutative mode), keyed by canonical representative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CyclicPoly {
    terms: BTreeMap<Word, Q>,
}

impl CyclicPoly {
    pub fn zero() -> Self {
        CyclicPoly::default()
    }

    /// Adds `c·⟨w⟩` after canonicalizing `w`.
    pub fn add_closed(&mut self, mode: Mode, w: &Word, c: Q) {
        let (cw, s) = canonical_closed(mode, w);
        match s {
            Sign::Zero => {}
            Sign::Plus => insert_term(&mut self.terms, cw, c),
            Sign::Minus => insert_term(&mut self.terms, cw, -c),
        }
    }

    pub fn closed_word(mode: Mode, w: &Word) -> Self {
        let mut c = CyclicPoly::zero();
        c.add_closed(mode, w, Q::one());
        c
    }

    /// Adds a term whose word is already canonical.
    pub(crate) fn add_canonical(&mut self, w: Word, c: Q) {
        insert_term(&mut self.terms, w, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> CyclicPoly {
        if c.is_zero() {
            return CyclicPoly::zero();
        }
        CyclicPoly {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    pub fn b_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| w.odd_count()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Re-canonicalizes every term in `mode`; used to project cyclic values
    /// onto commutative ones.
    pub fn recanonicalize(&self, mode: Mode) -> CyclicPoly {
        let mut out = CyclicPoly::zero();
        for (w, c) in &self.terms {
            out.add_closed(mode, w, c.clone());
        }
        out
    }

    /// The sum of the representative words as an open polynomial.
    pub fn to_open(&self) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }
}

impl<'a> AddAssign<&'a CyclicPoly> for CyclicPoly {
    fn add_assign(&mut self, rhs: &'a CyclicPoly) {
        for (w, c) in &rhs.terms {
            insert_term(&mut self.terms, w.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a CyclicPoly> for CyclicPoly {
    fn sub_assign(&mut self, rhs: &'a CyclicPoly) {
        for (w, c) in &rhs.terms {
            insert_term(&mut self.terms, w.clone(), -c.clone());
        }
    }
}

impl<'a> Add<&'a CyclicPoly> for &'a CyclicPoly {
    type Output = CyclicPoly;
    fn add(self, rhs: &'a CyclicPoly) -> CyclicPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a CyclicPoly> for &'a CyclicPoly {
    type Output = CyclicPoly;
    fn sub(self, rhs: &'a CyclicPoly) -> CyclicPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &CyclicPoly {
    type Output = CyclicPoly;
    fn neg(self) -> CyclicPoly {
        self.scale(&-Q::one())
    }
}

/// Closes every open word into a necklace: the linear extension of
/// canonical rotation (or sorting, in commutative mode).
pub fn close(mode: Mode, p: &DiffPoly) -> CyclicPoly {
    let mut out = CyclicPoly::zero();
    for (w, c) in p.terms() {
        out.add_closed(mode, w, c.clone());
    }
    out
}
