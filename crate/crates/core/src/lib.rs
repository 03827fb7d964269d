//! Exact-arithmetic analysis of two-letter S-adic substitution systems.
//!
//! The crate is organised bottom-up: [`word`] and [`matrix`] hold the
//! substitution algebra, [`directive`] the sequences `(σ_n)` and their
//! checkable hypotheses, and the remaining modules the language, spectral,
//! coincidence, Rauzy-fractal and Lyapunov computations built on top.

pub mod error;
pub mod matrix;
pub mod quadratic;
pub mod word;
pub mod directive;
pub mod spectral;
pub mod language;
pub mod price;
pub mod coincidence;
pub mod rauzy;
pub mod lyapunov;
pub mod config;
pub mod pipeline;

pub use error::{Error, Result};
pub use word::{Letter, Substitution, Word};
pub use matrix::{Mat2, Vec2};
pub use directive::DirectiveSequence;
