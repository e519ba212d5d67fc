//! The guide in `book/` is plain mdbook. mdbook cannot link snippets against
//! a workspace crate, so each chapter is included here as a module doc and
//! `cargo test` runs its code blocks as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/forcing.md")]
pub mod forcing {}
#[doc = include_str!("../../../book/src/stepping.md")]
pub mod stepping {}
#[doc = include_str!("../../../book/src/diagnostics.md")]
pub mod diagnostics {}
#[doc = include_str!("../../../book/src/config.md")]
pub mod config {}
#[doc = include_str!("../../../book/src/run_directory.md")]
pub mod run_directory {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
