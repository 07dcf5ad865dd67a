//! Streams, local cellular-automaton rules, transducers, and a reducibility
//! checker.
//!
//! The crate is organized around three layers:
//!
//! * infinite-stream plumbing ([`stream`], [`catalog`]): lazy memoized
//!   streams over finite alphabets, plus a registry of named examples;
//! * machinery that maps streams to streams ([`ca`], [`fst`], [`codec`],
//!   [`variants`]): sliding-window local rules, finite-state transducers,
//!   a block code that moves rules across alphabets, and two rule variants
//!   (phase-cycling rule tuples and rules producing finite words);
//! * analysis ([`reducer`], [`orbit`]): inference and refutation of
//!   local-rule reductions between streams, and space-time diagram
//!   rendering.
//!
//! The `streamlab` binary exposes all of it behind a small expression
//! language; the companion `streamlab-ffi` crate wraps the same core in a
//! C ABI.

pub mod ca;
pub mod catalog;
pub mod codec;
pub mod error;
pub mod expr;
pub mod fst;
pub mod orbit;
pub mod reducer;
pub mod stream;
pub mod variants;

pub use error::{Error, Result};
