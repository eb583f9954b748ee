//! Machinery for deciding whether a quasi-symmetric 2-(37,9,8) design with
//! block intersections 1 and 3 can live inside an extremal doubly even
//! self-dual [40,20,8] binary code.
//!
//! The crate is organized bottom-up:
//!
//! * [`gf2`] — bit-packed vectors, matrices, elimination, span enumeration
//! * [`codes`] — linear codes, duals, weight distributions, extremal bound
//! * [`construct`] — seed codes, self-dual embedding, neighbor sampling
//! * [`designs`] — 2-design arithmetic, intersection numbers, bordered codes
//! * [`obstruction`] — dual-distance bounds, triple filtering, counting checks
//! * [`search`] — candidate blocks, pair graphs, the two-stage clique search
//! * [`cli`] / [`report`] — command entry points and JSON-lines reports

pub mod codes;
pub mod construct;
pub mod designs;
pub mod error;
pub mod gf2;
pub mod cli;
pub mod obstruction;
pub mod report;
pub mod search;

pub use error::{Error, Result};
