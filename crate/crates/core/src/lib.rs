//! Certificate-producing split linear programming for binary linear codes.
//!
//! The crate is `no_std` (with `alloc`): every operation is a pure function
//! of its inputs. File formats, timing and the command line live in the
//! `splitlp-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod enumerator;
pub mod extend;
pub mod gf2;
pub mod groups;
pub mod interp;
pub mod lpcert;
pub mod model;
pub mod rules;
