//! The guide under `book/` cannot run its own listings, so every chapter is
//! pulled in here as module documentation and `cargo test --doc` runs them.
//! One module per chapter keeps failures traceable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/characteristic.md")]
pub mod characteristic {}
#[doc = include_str!("../../../book/src/zero-delay.md")]
pub mod zero_delay {}
#[doc = include_str!("../../../book/src/crossings.md")]
pub mod crossings {}
#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}
#[doc = include_str!("../../../book/src/plane.md")]
pub mod plane {}
#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
