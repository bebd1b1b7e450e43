//! Finite strict 2-categories with machine-checked higher structure.
//!
//! Everything here is a finite table: objects, 1-cells, 2-cells, and the
//! composition operations are dense arrays, so every axiom of every structure
//! can be checked by exhausting its instances. On top of the raw 2-category
//! layer the crate builds lax functors, oplax transformations, and
//! modifications ([`functors`]), distributive laws between one-parameter
//! families of lax functors ([`distlaw`]), the collation of such a law into a
//! lax functor out of a product 2-category ([`collation`]), the curried view
//! of a law as a lax functor into a fragment of a functor 2-category
//! ([`currying`]), and the reverse direction that recovers a law from a
//! suitably invertible collated functor ([`converse`]).
//!
//! Validators never panic on bad data. A structure that is the wrong shape
//! (table lengths, out-of-range indices) is rejected with
//! [`core2::CheckError::Structural`]; everything else produces a
//! [`core2::ValidationReport`] whose failing entries carry a lexicographically
//! least witness. All scans are budgeted: work is counted before or while it
//! happens and a [`core2::CheckError::BudgetExceeded`] is returned instead of
//! running past the configured limit.

pub mod collation;
pub mod converse;
pub mod core2;
pub mod currying;
pub mod distlaw;
pub mod functors;
pub mod instances;
