//! Seeded generators and independent oracles.
//!
//! `bruteforce_bracket` recomputes the Schouten bracket pair by pair:
//! each matched occurrence is walked to the cut by single-letter rotations
//! with the sign of every step recorded, then derivatives are thrown off by
//! an explicit Leibniz expansion. It shares no code with the Euler-operator
//! route beyond necklace canonicalization.

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CyclicPoly, DiffPoly, Family, Letter, Mode, MultiIndex, Parity, Word, Q};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::jet::{normal_form, slot_letter, DiffOperator, Functional};
use crate::multivector::{multivector_from_density, schouten, Multivector};

/// Sampling bounds. Identical specs yield identical streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub max_len: usize,
    pub max_order: u8,
    pub max_b_degree: usize,
    /// Forces every term to carry exactly this many odd letters.
    pub b_degree: Option<usize>,
    pub gens: usize,
    pub base_dim: usize,
    pub commutative: bool,
    pub max_terms: usize,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            max_len: 3,
            max_order: 2,
            max_b_degree: 2,
            b_degree: None,
            gens: 1,
            base_dim: 1,
            commutative: false,
            max_terms: 3,
        }
    }
}

impl GenSpec {
    pub fn context(&self) -> Context {
        let mode = if self.commutative { Mode::Commutative } else { Mode::Cyclic };
        Context::new(self.gens, self.base_dim, mode).expect("GenSpec bounds are valid")
    }
}

pub struct Sampler {
    spec: GenSpec,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(spec: GenSpec) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(spec.seed);
        Sampler { spec, rng }
    }

    pub fn spec(&self) -> &GenSpec {
        &self.spec
    }

    pub fn context(&self) -> Context {
        self.spec.context()
    }

    fn sigma(&mut self, max_order: u8) -> MultiIndex {
        let order = self.rng.gen_range(0..=max_order);
        let mut m = MultiIndex::ZERO;
        for _ in 0..order {
            m = m.incremented(self.rng.gen_range(0..self.spec.base_dim));
        }
        m
    }

    pub fn letter(&mut self, family: Family) -> Letter {
        let g = self.rng.gen_range(0..self.spec.gens) as u8;
        let s = self.sigma(self.spec.max_order);
        Letter::new(family, g, s)
    }

    /// Small nonzero rational, mostly integers.
    pub fn coefficient(&mut self) -> Q {
        let mut n: i64 = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            n = -n;
        }
        let d: i64 = if self.rng.gen_bool(0.2) { 2 } else { 1 };
        Q::new(n.into(), d.into())
    }

    /// Word of length `len` with exactly `odd` letters from `B`.
    pub fn word(&mut self, len: usize, odd: usize) -> Word {
        let mut families: Vec<Family> = (0..len).map(|i| if i < odd { Family::B } else { Family::A }).collect();
        families.shuffle(&mut self.rng);
        Word::new(families.into_iter().map(|f| self.letter(f)).collect())
    }

    fn b_count(&mut self, len: usize) -> usize {
        match self.spec.b_degree {
            Some(k) => k,
            None => self.rng.gen_range(0..=self.spec.max_b_degree.min(len)),
        }
    }

    /// Open polynomial within the configured length and order bounds.
    pub fn poly(&mut self) -> DiffPoly {
        let n = self.rng.gen_range(1..=self.spec.max_terms);
        let mut p = DiffPoly::zero();
        for _ in 0..n {
            let len = self.rng.gen_range(1..=self.spec.max_len);
            let odd = self.b_count(len);
            let w = self.word(len.max(odd), odd);
            let c = self.coefficient();
            p.add_term(w, c);
        }
        self.context().canon(p)
    }

    /// Open polynomial without odd letters, possibly containing the unit word.
    pub fn even_poly(&mut self) -> DiffPoly {
        let n = self.rng.gen_range(1..=self.spec.max_terms);
        let mut p = DiffPoly::zero();
        for _ in 0..n {
            let len = self.rng.gen_range(0..=self.spec.max_len);
            let w = self.word(len, 0);
            let c = self.coefficient();
            p.add_term(w, c);
        }
        self.context().canon(p)
    }

    pub fn density(&mut self) -> CyclicPoly {
        let p = self.poly();
        self.context().close(&p)
    }

    /// Density of exact odd degree `k`.
    pub fn density_of_degree(&mut self, k: usize) -> CyclicPoly {
        let saved = self.spec.b_degree.replace(k);
        let saved_len = self.spec.max_len;
        self.spec.max_len = saved_len.max(k.max(1));
        let d = self.density();
        self.spec.b_degree = saved;
        self.spec.max_len = saved_len;
        d
    }

    /// Multivector of degree `k` in normal form (possibly zero).
    pub fn multivector(&mut self, k: usize) -> Multivector {
        let ctx = self.context();
        let d = self.density_of_degree(k);
        multivector_from_density(&ctx, &d).expect("homogeneous by construction")
    }

    /// `m` even components.
    pub fn vector(&mut self) -> Vec<DiffPoly> {
        (0..self.spec.gens).map(|_| self.even_poly()).collect()
    }

    /// Arity-one operator with even arguments and templates of order at most `max_order`.
    pub fn operator(&mut self) -> DiffOperator {
        let ctx = self.context();
        let m = self.spec.gens;
        let mut rows = vec![DiffPoly::zero(); m];
        for row in rows.iter_mut() {
            let n = self.rng.gen_range(1..=self.spec.max_terms);
            for _ in 0..n {
                let len = self.rng.gen_range(0..self.spec.max_len.max(1));
                let mut letters = self.word(len, 0).into_letters();
                let pos = self.rng.gen_range(0..=letters.len());
                let g = self.rng.gen_range(0..m);
                let s = self.sigma(self.spec.max_order);
                letters.insert(pos, slot_letter(0, g, s));
                let c = self.coefficient();
                row.add_term(Word::new(letters), c);
            }
        }
        DiffOperator::from_rows(&ctx, 1, Parity::Even, rows).expect("well-formed template")
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One density drawn from `spec`.
pub fn random_density(spec: &GenSpec) -> CyclicPoly {
    Sampler::new(spec.clone()).density()
}

/// Reordering into graded-commutative normal form.
pub trait CommutativeProjection {
    fn commutative_projection(&self) -> Self;
}

impl CommutativeProjection for DiffPoly {
    fn commutative_projection(&self) -> Self {
        self.project_commutative()
    }
}

impl CommutativeProjection for CyclicPoly {
    fn commutative_projection(&self) -> Self {
        self.recanonicalize(Mode::Commutative)
    }
}

impl CommutativeProjection for Vec<DiffPoly> {
    fn commutative_projection(&self) -> Self {
        self.iter().map(DiffPoly::project_commutative).collect()
    }
}

pub fn commutative_projection<T: CommutativeProjection>(x: &T) -> T {
    x.commutative_projection()
}

/// Projects a value living in a cyclic context into the commutative
/// context and reduces it there.
pub fn project_functional(commutative: &Context, f: &CyclicPoly) -> Functional {
    normal_form(commutative, &f.commutative_projection())
}

/// Largest pairing count `bruteforce_bracket` accepts.
pub const BRUTEFORCE_LIMIT: usize = 250_000;

/// Rotate the front letter to the back: `x·v → v·x` with `(-1)^{|x||v|}`.
fn rotate_once(letters: &mut Vec<Letter>, negative: &mut bool) {
    let first = letters.remove(0);
    let rest_odd = letters.iter().filter(|l| l.parity().is_odd()).count() % 2 == 1;
    if first.parity().is_odd() && rest_odd {
        *negative = !*negative;
    }
    letters.push(first);
}

/// Leibniz expansion of `D^σ` on a word.
fn leibniz(w: &[Letter], sigma: &MultiIndex, base_dim: usize) -> Vec<(Vec<Letter>, Q)> {
    let mut cur: Vec<(Vec<Letter>, Q)> = vec![(w.to_vec(), Q::one())];
    for dir in 0..base_dim {
        for _ in 0..sigma.get(dir) {
            let mut next = Vec::new();
            for (word, c) in &cur {
                for i in 0..word.len() {
                    let mut v = word.clone();
                    v[i] = v[i].with_sigma(v[i].sigma.incremented(dir));
                    next.push((v, c.clone()));
                }
            }
            cur = next;
        }
    }
    cur
}

/// Necklace `w` with occurrence `i` moved to the end by single rotations;
/// returns the open remainder and whether the walk was odd.
fn cut_to_back(w: &Word, i: usize) -> (Vec<Letter>, bool) {
    let mut letters = w.letters().to_vec();
    let mut negative = false;
    for _ in 0..=i {
        rotate_once(&mut letters, &mut negative);
    }
    // occurrence now sits at index len-1
    letters.pop();
    (letters, negative)
}

/// Occurrence `j` moved to the front by single rotations.
fn cut_to_front(w: &Word, j: usize) -> (Vec<Letter>, bool) {
    let mut letters = w.letters().to_vec();
    let mut negative = false;
    for _ in 0..j {
        rotate_once(&mut letters, &mut negative);
    }
    letters.remove(0);
    (letters, negative)
}

/// Schouten bracket by enumeration of every matched pair of occurrences.
pub fn bruteforce_bracket(ctx: &Context, xi: &Multivector, eta: &Multivector) -> Result<Multivector> {
    bruteforce_bracket_bounded(ctx, xi, eta, BRUTEFORCE_LIMIT)
}

/// [`bruteforce_bracket`] with an explicit bound on the occurrence pairs.
pub fn bruteforce_bracket_bounded(ctx: &Context, xi: &Multivector, eta: &Multivector, limit: usize) -> Result<Multivector> {
    let size: usize = xi
        .body()
        .terms()
        .map(|(w, _)| w.len())
        .sum::<usize>()
        * eta.body().terms().map(|(w, _)| w.len()).sum::<usize>();
    if size > limit {
        return Err(Error::SizeBound(format!("{size} occurrence pairs exceed {limit}")));
    }
    let n = ctx.base_dim();
    let mut acc = CyclicPoly::zero();
    for (w1, c1) in xi.body().terms() {
        for (i, x) in w1.letters().iter().enumerate() {
            for (w2, c2) in eta.body().terms() {
                for (j, y) in w2.letters().iter().enumerate() {
                    if x.generator != y.generator {
                        continue;
                    }
                    let minus = match (x.family, y.family) {
                        (Family::A, Family::B) => false,
                        (Family::B, Family::A) => true,
                        _ => continue,
                    };
                    let (r, neg_r) = cut_to_back(w1, i);
                    let (l, neg_l) = cut_to_front(w2, j);
                    let sign = minus ^ neg_r ^ neg_l ^ x.sigma.is_odd_order() ^ y.sigma.is_odd_order();
                    let base = c1 * c2;
                    for (rw, rc) in leibniz(&r, &x.sigma, n) {
                        for (lw, lc) in leibniz(&l, &y.sigma, n) {
                            let mut word = rw.clone();
                            word.extend_from_slice(&lw);
                            let k = &base * &rc * &lc;
                            let k = if sign { -k } else { k };
                            acc.add_closed(ctx.mode(), &Word::new(word), k);
                        }
                    }
                }
            }
        }
    }
    let degree = (xi.degree() + eta.degree()).saturating_sub(1);
    let body = normal_form(ctx, &acc);
    let out = multivector_from_density(ctx, &body)?;
    Ok(if out.is_zero() { Multivector::zero(degree) } else { out })
}

/// Outcome of [`selftest`].
#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Randomized cross-checks of the bracket against the oracle and of the
/// basic identities, on `cases` seeded pairs.
pub fn selftest(seed: u64, cases: usize) -> SelftestReport {
    let mut report = SelftestReport { cases, failures: Vec::new() };
    let mut sampler = Sampler::new(GenSpec { seed, max_len: 3, max_order: 2, max_terms: 2, ..GenSpec::default() });
    let ctx = sampler.context();
    for case in 0..cases {
        let k = sampler.rng().gen_range(0..=2);
        let l = sampler.rng().gen_range(0..=2);
        let xi = sampler.multivector(k);
        let eta = sampler.multivector(l);
        let fast = schouten(&ctx, &xi, &eta);
        match bruteforce_bracket(&ctx, &xi, &eta) {
            Ok(slow) if slow.body() == fast.body() => {}
            Ok(_) => report.failures.push(format!("case {case}: bracket disagrees with oracle")),
            Err(e) => report.failures.push(format!("case {case}: {e}")),
        }
        let back = schouten(&ctx, &eta, &xi);
        let odd = (k + 1) % 2 == 1 && (l + 1) % 2 == 1;
        let expected = if odd { back.body().clone() } else { normal_form(&ctx, &back.body().scale(&-Q::one())) };
        if fast.body() != &expected {
            report.failures.push(format!("case {case}: skew-symmetry fails"));
        }
        let d = ctx.close(&crate::jet::total_derivative(&ctx, &xi.body().to_open(), 1).expect("n >= 1"));
        if !normal_form(&ctx, &d).is_zero() {
            report.failures.push(format!("case {case}: total derivative not exact"));
        }
    }
    report
}
