//! Compiles every chapter of the book as documentation so that
//! `cargo test --doc` runs its code blocks against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}
#[doc = include_str!("../../../book/src/functors.md")]
pub mod functors {}
#[doc = include_str!("../../../book/src/bar-oracle.md")]
pub mod bar_oracle {}
#[doc = include_str!("../../../book/src/towers.md")]
pub mod towers {}
#[doc = include_str!("../../../book/src/comparison.md")]
pub mod comparison {}
#[doc = include_str!("../../../book/src/construction.md")]
pub mod construction {}
#[doc = include_str!("../../../book/src/cotorsion.md")]
pub mod cotorsion {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
