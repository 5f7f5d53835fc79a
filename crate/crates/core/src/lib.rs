//! Exact computation with walls and geodesics in the Davis/Salvetti complexes
//! of graph products of cyclic groups of order 2 or ∞.

pub mod catalog;
pub mod divergence;
pub mod cayley;
pub mod error;
pub mod group;
pub mod presentation;
pub mod rays;
pub mod walls;
pub mod word;

pub use error::{Error, Result};
pub use group::{Group, GroupElement, Limits};
pub use presentation::{parse_presentation, Generator, Order, PresentationGraph};
pub use word::{Letter, Word};
