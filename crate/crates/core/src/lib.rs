//! Exact combinatorics behind derived mod-p Satake morphisms.
//!
//! The crate works with split root data realized on `Z^d`, and computes Weyl
//! group and parabolic coset data, Kostant-type decompositions of nilradical
//! cohomology, central-character orthogonality checks, and the graded targets
//! built from them. A brute-force Chevalley–Eilenberg computation over `F_p`
//! ([`oracle`]) cross-checks the decompositions.

pub mod checkers;
pub mod cohomology;
pub mod error;
pub mod intlin;
pub mod job;
pub mod levi;
pub mod oracle;
pub mod root_datum;
pub mod weights;
pub mod weyl;

pub use error::{Error, Result};
pub use root_datum::{CartanType, Family, Preset, RootDatum};
pub use weights::{ModPCharacter, UnderlineWeight};
