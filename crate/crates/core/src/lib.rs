//! Finite involutive non-degenerate set-theoretic solutions of the
//! Yang-Baxter equation, their congruences and quotients, the left braces
//! attached to them, and isomorph-free enumeration.
//!
//! Points are `0..n` internally. Permutations print in 1-based cycle notation.

#![allow(clippy::needless_range_loop)]

pub mod brace;
pub mod census;
pub mod families;
pub mod partition;
pub mod perm;
pub mod quotients;
pub mod solution;

pub use brace::LeftBrace;
pub use perm::{Perm, PermGroup};
pub use quotients::Congruence;
pub use solution::{Solution, SolutionReport};
