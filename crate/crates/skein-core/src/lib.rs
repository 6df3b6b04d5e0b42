//! A symbolic skein-calculus engine.
//!
//! Evaluates the Kauffman bracket state function and the two-parameter
//! SU(3) state function on framed tangle diagrams in a marked disk, by
//! confluent and terminal rewriting over exact Laurent polynomials.

pub mod basis;
pub mod diagram;
pub mod kauffman;
pub mod moves;
pub mod ring;
pub mod samples;
pub mod spider;
pub mod state;
