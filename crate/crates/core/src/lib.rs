//! Stability analysis for the two-term fractional delay equation
//!
//! ```text
//! D^α x(t) + c·D^{2α} x(t) = a·x(t) + b·x(t − τ),   0 < α < 1
//! ```
//!
//! ```
//! use fdde::{classify, BehaviorLabel, SystemParams};
//!
//! let p = SystemParams::new(0.45, 2.35, -1.0, -0.3)?;
//! let behavior = classify(&p);
//! assert_eq!(behavior.label, BehaviorLabel::Is);
//! # Ok::<(), fdde::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfn;
pub mod classifier;
pub mod crossings;
pub mod error;
pub mod format;
pub mod integrator;
pub mod nondelayed;
pub mod oracle;
pub mod region;
pub mod verify;

pub use charfn::{char_fn, char_fn_derivative, p_of_lambda, principal_power, Complex, SystemParams};
pub use classifier::{classify, stability_at, BehaviorLabel, DelayBehavior, PointStability, Verdict};
pub use error::{Error, Result};
