//! Root-space decomposition relative to a Cartan subalgebra, SU(2)-rotation
//! descent into its orthogonal complement, and what follows from it: bracket
//! factorizations with a regular first factor, the span property of an
//! orthogonal pair, and a sampling check of the convexity theorem.

mod goto;
mod kostant;
mod roots;
mod walk;

pub use goto::{
    goto_factorize, one_and_half_span, span_report, witness_orthogonality, GotoSolver, GotoWitness,
    Strategy,
};
pub use kostant::{haar_special_unitary, kostant_projection_check, KostantReport};
pub use roots::{root_space_decomposition, Root, RootBasis, RootRelations};
pub use walk::{
    descend_to_complement, descend_to_complement_with, su2_reduce_step, DescentStep, DescentTrace,
};
