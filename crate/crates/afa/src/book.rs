//! Keeps the guide honest: each chapter of `book/` is included here as
//! module documentation, so every Rust snippet in the book compiles and
//! runs under `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/terms.md")]
pub mod terms {}

#[doc = include_str!("../../../book/src/word-problem.md")]
pub mod word_problem {}

#[doc = include_str!("../../../book/src/canonical-representatives.md")]
pub mod canonical_representatives {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/free-extension.md")]
pub mod free_extension {}

#[doc = include_str!("../../../book/src/quantifier-elimination.md")]
pub mod quantifier_elimination {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
