//! The guide's chapters as doc-tests. mdbook cannot link against workspace
//! crates, so each chapter is pulled in here and `cargo test` runs its code
//! blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/smith.md")]
pub mod smith {}

#[doc = include_str!("../../../book/src/pencils.md")]
pub mod pencils {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/identifiability.md")]
pub mod identifiability {}

#[doc = include_str!("../../../book/src/distance.md")]
pub mod distance {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
