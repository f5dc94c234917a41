//! Exact-arithmetic hyperplane multiarrangements.
//!
//! The crate builds multiarrangements over Q or a cyclotomic field,
//! computes intersection lattices, localizations, deletions and Euler
//! restrictions, certifies freeness of the logarithmic derivation module
//! through an exact graded-kernel oracle with a determinant certificate,
//! and searches for, verifies, and descends inductive and recursive
//! freeness chains. All arithmetic is exact; there is no floating point.

pub mod arrangement;
pub mod catalog;
pub mod chains;
pub mod derivation;
pub mod document;
pub mod error;
pub mod euler;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod poly;

pub use arrangement::{Hyperplane, LinearForm, Multiarrangement};
pub use chains::{
    addition_deletion_infer, descend_chain, hereditary_inductive_check, inductive_search,
    product_class_check, recursive_search, verify_chain, Chain, ChainKind, ChainStep,
    ChainVerification, FreenessClass, ProductCheckOutcome, SearchStatus, SearchVerdict, StepOp,
    TripleMember, DEFAULT_BUDGET,
};
pub use derivation::{
    annihilator_basis, concentrated_basis, derivation_space, exponent_dominance,
    exponents_oracle, saito_scalar, Derivation, ExponentMultiset, FreenessCertificate,
    NotFreeWitness, OracleCache, Verdict,
};
pub use error::{Error, Result};
pub use euler::{
    deletion, euler_multiplicity, iterated_restriction, restriction_with_euler, triple,
    triple_localization_check, ziegler_multiplicity, Triple,
};
pub use field::{cyclotomic_minimal_polynomial, Ctx, FieldContext, FieldElement, Rational};
pub use lattice::{flat_from_forms, flat_from_vectors, intersection_lattice, swap_check, Flat, Lattice};
pub use poly::{Monomial, Polynomial};
