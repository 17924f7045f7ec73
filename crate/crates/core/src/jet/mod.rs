//! Calculus on the noncommutative jet space: total derivatives,
//! evolutionary derivations, cyclic Euler operators, horizontal-cohomology
//! normal forms, couplings, operators and their adjoints.

mod covector;
mod derivative;
mod evolution;
pub(crate) mod normal_form;
mod operator;
mod variational;

pub use covector::{couple, lift_covector_velocity, Covector};
pub use derivative::{total_derivative, total_derivative_multi};
pub use evolution::{evolutionary, VectorCharacteristic};
pub use normal_form::{is_exact, normal_form, Functional, GradeKey};
pub use operator::{
    adjoint, apply, apply_operator, cyclic_multilinear_adjoint, letter_args, linearize, DiffOperator,
};
pub use variational::{euler_all, variational_derivative, Side};

pub(crate) use covector::couple_raw;
pub(crate) use derivative::d_sigma_raw;
pub(crate) use evolution::substitute_derivation;
pub(crate) use normal_form::{multiset_permutations, sigma_distributions};
pub(crate) use operator::slot_letter;
pub(crate) use variational::euler_raw;
