//! The user guide, compiled as doc-tests.
//!
//! mdBook cannot execute its code blocks against the crate, so every
//! chapter is also included here as module documentation; `cargo test`
//! then builds and runs each snippet, keeping the book in sync with the
//! library. One module per chapter so a failing snippet names its source
//! file.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/grids.md")]
pub mod grids {}

#[doc = include_str!("../../../book/src/ground_state.md")]
pub mod ground_state {}

#[doc = include_str!("../../../book/src/rescaling.md")]
pub mod rescaling {}

#[doc = include_str!("../../../book/src/fitting.md")]
pub mod fitting {}

#[doc = include_str!("../../../book/src/reduced.md")]
pub mod reduced {}

#[doc = include_str!("../../../book/src/spectral.md")]
pub mod spectral {}
