//! Profiles, their orderings, the multi-profile poset and the recursive
//! degree bounds built on it.

pub mod binom;
pub mod bounds;
pub mod cache;
pub mod cli;
pub mod error;
pub mod fano;
pub mod multiprofile;
pub mod oracle;
pub mod order;
pub mod poset;
pub mod profile;
mod serde_big;

pub use error::{Error, ParseError, Result};
pub use multiprofile::{parse_multiprofile, MultiProfile};
pub use profile::{parse_profile, PrimePower, Profile};
