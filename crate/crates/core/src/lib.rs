//! Gradual semantics for weighted assumption-based argumentation.
//!
//! The pipeline parses an ABA framework ([`aba`]), instantiates it either as
//! a bipolar set-argumentation framework over assumptions or as a bipolar
//! argumentation framework over arguments ([`instantiation`]), and iterates
//! a modular kernel ([`kernels`], [`engine`]) until the strengths settle.

pub mod aba;
pub mod engine;
pub mod generator;
pub mod harness;
pub mod instantiation;
pub mod kernels;
pub mod order;
