//! Exact solver for finite normal-form games with integer payoffs whose Nash
//! equilibria are irrational: finds one solution numerically, reconstructs its
//! minimal polynomials, expands it to all conjugate solutions, and decides
//! class membership through Groebner elimination and rational-root analysis.

pub mod algebraic;
pub mod dyadic;
pub mod factor;
pub mod fixtures;
pub mod game;
pub mod groebner;
pub mod lll;
pub mod multipoly;
pub mod newton;
pub mod pipeline;
pub mod unipoly;

pub use dyadic::Dyadic;
pub use unipoly::{IsolatingInterval, UniPoly};
