//! Exact commutative-algebra engine for embedded points and flat families:
//! polynomial arithmetic, Gröbner bases, Hilbert functions, local
//! criteria, finite-length structures, one-parameter families and
//! tangent-space dimensions.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod expr;
pub mod families;
pub mod field;
pub mod gb;
pub mod graded;
pub mod hilbert;
pub mod linalg;
pub mod localgeom;
pub mod poly;
pub mod ring;
pub mod sample;
pub mod structures;
pub mod tangent;

pub use error::Error;
pub use field::{CoefficientField, Coeff};
pub use gb::Ideal;
pub use poly::Polynomial;
pub use ring::{Monomial, MonomialOrder, Ring, RingRef};
