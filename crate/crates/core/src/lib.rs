//! Exact-arithmetic toolkit for ramification invariants on annuli: the
//! rank-two value group, Gauss valuations of Laurent data, piecewise-linear
//! conductor calculus, higher-ramification characters, break decompositions
//! over ℤ/ℓⁿ, and Newton break functions of break profiles.

pub mod breakdec;
pub mod checks;
pub mod conductor;
pub mod laurent;
pub mod plfun;
pub mod ramify;
pub mod sampling;
pub mod valgroup;

pub use valgroup::{GammaVal, Rat};
