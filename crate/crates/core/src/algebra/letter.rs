use std::cmp::Ordering;
use std::fmt;

/// Largest supported number of base variables `x^1..x^n`.
pub const MAX_BASE_DIM: usize = 4;

/// Derivative multi-index: entry `i` counts the derivatives taken along `x^(i+1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex([u8; MAX_BASE_DIM]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; MAX_BASE_DIM]);

    /// Pure derivative of order `k` along the first base direction.
    pub fn along_first(k: u8) -> Self {
        let mut m = Self::ZERO;
        m.0[0] = k;
        m
    }

    /// Builds a multi-index from at most [`MAX_BASE_DIM`] entries.
    pub fn from_slice(entries: &[u8]) -> Option<Self> {
        if entries.len() > MAX_BASE_DIM {
            return None;
        }
        let mut m = Self::ZERO;
        m.0[..entries.len()].copy_from_slice(entries);
        Some(m)
    }

    /// The first `n` entries.
    pub fn entries(&self, n: usize) -> &[u8] {
        &self.0[..n.min(MAX_BASE_DIM)]
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    /// Total order `|σ|`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|&k| k as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// `σ + 1_i`.
    pub fn incremented(mut self, i: usize) -> Self {
        self.0[i] = self.0[i].checked_add(1).expect("derivative order overflow");
        self
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Self::ZERO;
        for i in 0..MAX_BASE_DIM {
            out.0[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(out)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut out = Self::ZERO;
        for i in 0..MAX_BASE_DIM {
            out.0[i] = self.0[i] + other.0[i];
        }
        out
    }

    /// `(-1)^{|σ|}` as a boolean "negate" flag.
    pub fn is_odd_order(&self) -> bool {
        self.order() % 2 == 1
    }

    /// Expands `D^σ` into the sequence of base directions to differentiate along.
    pub fn directions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize))
    }
}

/// Grading by parity; `Odd` letters anticommute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn flip(self) -> Self {
        Self::from_odd(!self.is_odd())
    }

    pub fn plus(self, other: Parity) -> Parity {
        Self::from_odd(self.is_odd() ^ other.is_odd())
    }
}

/// Letter families.
///
/// `A` are the even jet coordinates, `B` their parity-reversed odd partners.
/// `Aux(s)` are extra even formal generators that no evolutionary field
/// touches (used as frozen covector letters). `Slot(s)` marks argument `s` of
/// a differential operator template; its parity is supplied by the operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    B,
    A,
    Aux(u8),
    Slot(u8),
}

impl Family {
    /// Intrinsic parity; slots report `Even` here and are re-graded by their operator.
    pub fn parity(self) -> Parity {
        match self {
            Family::B => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

/// One jet symbol `q^j_σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub family: Family,
    /// Zero-based generator index `j - 1`.
    pub generator: u8,
    pub sigma: MultiIndex,
}

impl Letter {
    pub fn new(family: Family, generator: u8, sigma: MultiIndex) -> Self {
        Letter { family, generator, sigma }
    }

    /// Underived letter of the given family.
    pub fn plain(family: Family, generator: u8) -> Self {
        Self::new(family, generator, MultiIndex::ZERO)
    }

    pub fn a(generator: u8, order: u8) -> Self {
        Self::new(Family::A, generator, MultiIndex::along_first(order))
    }

    pub fn b(generator: u8, order: u8) -> Self {
        Self::new(Family::B, generator, MultiIndex::along_first(order))
    }

    pub fn parity(&self) -> Parity {
        self.family.parity()
    }

    /// Parity with operator slots graded as `slot_parity`.
    pub fn parity_with(&self, slot_parity: Parity) -> Parity {
        match self.family {
            Family::Slot(_) => slot_parity,
            f => f.parity(),
        }
    }

    pub fn is_slot(&self) -> bool {
        matches!(self.family, Family::Slot(_))
    }

    pub fn with_sigma(mut self, sigma: MultiIndex) -> Self {
        self.sigma = sigma;
        self
    }

    /// The letter's `(family, generator)` pair, forgetting derivatives.
    pub fn kind(&self) -> (Family, u8) {
        (self.family, self.generator)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.family, self.generator, self.sigma.order(), self.sigma).cmp(&(
            other.family,
            other.generator,
            other.sigma.order(),
            other.sigma,
        ))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::A => "a".to_string(),
            Family::B => "b".to_string(),
            Family::Aux(s) => format!("p{}", s + 1),
            Family::Slot(s) => format!("#{}", s + 1),
        };
        write!(f, "{}{}", name, self.generator + 1)?;
        if !self.sigma.is_zero() {
            write!(f, "^{:?}", self.sigma.entries(MAX_BASE_DIM))?;
        }
        Ok(())
    }
}
