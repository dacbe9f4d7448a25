//! Omega-pushdown automata with transition-based parity acceptance.
//!
//! The crate covers the automaton model and its text format, lasso membership and
//! emptiness via saturation and summaries, resolvers (Moore machines, pushdown
//! transducers), products with deterministic parity automata, Gale-Stewart games
//! with pushdown winning conditions and strategy synthesis, and a fixture zoo.

pub mod analysis;
pub mod closure;
pub mod games;
pub mod pda;
pub mod resolvers;
pub mod text;
pub mod zoo;

pub use pda::{Configuration, LassoWord, OmegaPda, PdaBuilder, RunPrefix, Sym, Transition, BOTTOM};
