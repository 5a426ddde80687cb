//! Termination and public-computability analysis for logically constrained
//! simply-typed term rewriting systems, based on static dependency pairs.
//!
//! The crate is `no_std` and needs only `alloc`. Constraint solving goes
//! through the [`solver::SmtBackend`] trait; a process-backed implementation
//! lives in the `lcstrs` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod kernel;
pub mod theory;
pub mod solver;
pub mod trs;
pub mod access;
pub mod sdp;
pub mod processors;

#[cfg(test)]
#[allow(dead_code)]
mod fixtures;
