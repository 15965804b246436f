//! Runs the guide's code samples as doctests.
//!
//! mdbook renders `book/` but cannot compile its Rust snippets against this
//! crate, so every chapter is also pulled in here as a doc comment and
//! `cargo test --doc` does the checking. One module per chapter keeps test
//! failures traceable to a file. Keep this list in sync with
//! `book/src/SUMMARY.md`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/corpus.md")]
pub mod corpus {}

#[doc = include_str!("../../../book/src/topic-model.md")]
pub mod topic_model {}

#[doc = include_str!("../../../book/src/coherence.md")]
pub mod coherence {}

#[doc = include_str!("../../../book/src/distances.md")]
pub mod distances {}

#[doc = include_str!("../../../book/src/networks.md")]
pub mod networks {}

#[doc = include_str!("../../../book/src/trends.md")]
pub mod trends {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
