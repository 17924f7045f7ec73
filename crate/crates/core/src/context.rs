use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::algebra::{close, CyclicPoly, DiffPoly, Mode, MAX_BASE_DIM};
use crate::error::{Error, Result};
use crate::jet::normal_form::GradeKey;
use crate::linalg::Echelon;
use crate::algebra::Word;

/// Session configuration: number of generators `m`, base dimension `n`,
/// and whether the target algebra is treated as graded-commutative.
///
/// Also memoizes the row-reduced exact subspaces used by normal forms;
/// the memo never changes an observable result.
pub struct Context {
    gens: usize,
    base_dim: usize,
    mode: Mode,
    exact_cache: RwLock<HashMap<GradeKey, Arc<Echelon<Word>>>>,
}

impl Context {
    pub fn new(gens: usize, base_dim: usize, mode: Mode) -> Result<Self> {
        if gens == 0 || gens > 255 {
            return Err(Error::GeneratorOutOfRange { index: gens, gens: 255 });
        }
        if base_dim == 0 || base_dim > MAX_BASE_DIM {
            return Err(Error::BaseIndexOutOfRange { index: base_dim, base_dim: MAX_BASE_DIM });
        }
        Ok(Context {
            gens,
            base_dim,
            mode,
            exact_cache: RwLock::new(HashMap::new()),
        })
    }

    /// Cyclic mode, one base variable.
    pub fn cyclic(gens: usize) -> Self {
        Self::new(gens, 1, Mode::Cyclic).expect("valid generator count")
    }

    /// Commutative mode, one base variable.
    pub fn commutative(gens: usize) -> Self {
        Self::new(gens, 1, Mode::Commutative).expect("valid generator count")
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_commutative(&self) -> bool {
        self.mode == Mode::Commutative
    }

    /// Same `m` and `n` in the other mode, with a fresh memo.
    pub fn with_mode(&self, mode: Mode) -> Context {
        Context::new(self.gens, self.base_dim, mode).expect("already validated")
    }

    /// Canonical form of an open polynomial: identity in cyclic mode,
    /// graded-commutative sorting in commutative mode.
    pub fn canon(&self, p: DiffPoly) -> DiffPoly {
        match self.mode {
            Mode::Cyclic => p,
            Mode::Commutative => p.project_commutative(),
        }
    }

    pub fn close(&self, p: &DiffPoly) -> CyclicPoly {
        close(self.mode, p)
    }

    pub(crate) fn check_components(&self, found: usize) -> Result<()> {
        if found != self.gens {
            return Err(Error::ComponentMismatch { expected: self.gens, found });
        }
        Ok(())
    }

    pub(crate) fn cached_exact(&self, key: &GradeKey) -> Option<Arc<Echelon<Word>>> {
        self.exact_cache.read().expect("cache lock").get(key).cloned()
    }

    pub(crate) fn store_exact(&self, key: GradeKey, e: Arc<Echelon<Word>>) -> Arc<Echelon<Word>> {
        let mut guard = self.exact_cache.write().expect("cache lock");
        guard.entry(key).or_insert(e).clone()
    }
}

impl Clone for Context {
    fn clone(&self) -> Self {
        Context::new(self.gens, self.base_dim, self.mode).expect("already validated")
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("gens", &self.gens)
            .field("base_dim", &self.base_dim)
            .field("mode", &self.mode)
            .finish()
    }
}
