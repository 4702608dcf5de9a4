//! Exact finite-temperature thermodynamics of CSS stabilizer Hamiltonians.
//!
//! The crate is `no_std` (with `alloc`). It covers GF(2) linear algebra, Pauli
//! operators, hypercubic cell complexes on tori, concrete model builders, the
//! constraint-kernel weight enumerators that determine the partition function,
//! the partition function itself, and the checks that compare these against
//! classical Ising expansions.
//!
//! IO, threading, the dense-diagonalization oracle and the command line live
//! in the `stabtherm` companion crate.

#![no_std]

extern crate alloc;

pub mod complex;
pub mod duality;
pub mod enumerate;
pub mod error;
pub mod gf2;
pub mod math;
pub mod models;
pub mod pauli;
pub mod thermo;

pub use complex::HypercubicComplex;
pub use enumerate::{ConstraintKernel, Side, WeightEnumerator};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use models::{CssModel, IsingModel};
pub use pauli::PauliOp;
