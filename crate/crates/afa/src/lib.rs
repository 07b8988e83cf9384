//! Decision procedures for almost free algebras: quotients of a ground term
//! algebra by finitely many ground-term equations.
//!
//! Given a finite signature Σ and a finite set Γ of ground-term equations,
//! the quotient F_Γ of the ground term algebra by the congruence generated
//! by Γ supports a surprising amount of decidable structure. This crate
//! implements:
//!
//! - the word problem F_Γ ⊨ s = t by congruence closure ([`congruence`]);
//! - canonical representatives of congruence classes ([`canonical`]);
//! - exact class cardinalities, the intrinsic-infinity test, the finiteness
//!   test and the isomorphism test ([`counting`]);
//! - the finite partial algebra B induced by Γ and its free extension F(B),
//!   in which every ground term evaluates ([`free_extension`]);
//! - quantifier elimination for F(B) expanded with tester predicates, and a
//!   sentence decision procedure ([`qe`]);
//! - a brute-force rewriting oracle used as independent ground truth in the
//!   test suites ([`oracle`]).
//!
//! The `afa` binary exposes all of it on problem files; see [`problem`] for
//! the file format.

#[doc(hidden)]
pub mod book;
pub mod canonical;
pub mod congruence;
pub mod counting;
pub mod error;
pub mod formula;
pub mod free_extension;
pub mod oracle;
pub mod problem;
pub mod qe;
pub mod term;

pub use error::{Error, Result};
pub use term::{EquationSet, Signature, Term};
