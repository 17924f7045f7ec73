//! Letters, open words, necklaces and their exact-coefficient sums.

mod letter;
mod poly;
mod word;

pub use letter::{Family, Letter, MultiIndex, Parity, MAX_BASE_DIM};
pub use poly::{canonical_closed, close, q, q_frac, CyclicPoly, DiffPoly, Mode, ParityClass, Q};
pub use word::{canonical_rotation, commutative_sort, Sign, Word};

pub(crate) use word::{commutative_sort_graded, slice_parity};
