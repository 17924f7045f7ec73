//! Exact calculus of variational multivectors over noncommutative jet spaces.
//!
//! Layers, bottom up:
//!
//! - [`algebra`]: letters, words, necklaces, rational coefficients.
//! - [`jet`]: total derivatives, Euler operators, normal forms, operators.
//! - [`multivector`]: multivectors, the Schouten bracket, odd fields.
//! - [`poisson`]: Hamiltonian checks and Poisson brackets.
//! - [`frontend`]: text and JSON formats and the `ncvar` command.
//! - [`testkit`]: seeded generators, projections, a brute-force bracket.
//!
//! ```
//! use ncvar_core::frontend::{parse_operator};
//! use ncvar_core::poisson::check_master;
//! use ncvar_core::Context;
//!
//! let ctx = Context::cyclic(1);
//! let op = parse_operator(&ctx, "p_3", &["p"]).unwrap();
//! assert!(check_master(&ctx, &op).unwrap().hamiltonian());
//! ```

pub mod algebra;
pub mod context;
pub mod error;
pub mod frontend;
pub mod jet;
pub(crate) mod linalg;
pub mod multivector;
pub mod poisson;
pub mod testkit;

pub use context::Context;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/words.md")]
    pub struct Words;
    #[doc = include_str!("../../../book/src/jets.md")]
    pub struct Jets;
    #[doc = include_str!("../../../book/src/multivectors.md")]
    pub struct Multivectors;
    #[doc = include_str!("../../../book/src/hamiltonian.md")]
    pub struct Hamiltonian;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
