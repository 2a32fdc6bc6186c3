//! Exact algebra for the elementary symplectic Witt group, the group V(R) of
//! skew-form triples and the generalized Vaserstein symbol.

pub mod complete;
pub mod elem;
pub mod error;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod projmod;
pub mod ring;
pub mod sample;
pub mod symbol;
pub mod witt;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use ring::{bezout_witness, ring_parse, Elem, Ring, RingSpec};
