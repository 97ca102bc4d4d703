//! Robust Gray codes for the binary symmetric channel.
//!
//! A robust Gray code maps integers `1..=m` to binary words so that
//! consecutive integers differ in one bit, and a noisy word still decodes to
//! an integer close to the original. [`rgc::CodeLayout`] is the coded Gray
//! code: codewords of a staircase linear code visited in Gray order, with a
//! buffered backup of the bits each step rewrites. [`baselines`] holds two
//! earlier constructions behind the same [`RobustGrayScheme`] trait.

pub mod baselines;
pub mod bits;
pub mod channel;
pub mod cli;
pub mod codes;
pub mod error;
pub mod gray;
pub mod rgc;
pub mod scheme;
pub mod tape;

pub use bits::BitWord;
pub use error::{Error, Result};
pub use rgc::CodeLayout;
pub use scheme::{build_scheme, CodeParams, RobustGrayScheme, SchemeKind};
