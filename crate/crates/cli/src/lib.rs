//! Input format, SMT process backend, proof rendering and the `lcstrs`
//! command line.

pub mod cli;
pub mod diag;
pub mod driver;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod render;
pub mod smt;

pub use diag::{Diagnostic, InputError, Pos};
pub use parser::{parse, parse_extension, InputFile};
