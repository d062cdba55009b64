//! Convex cocompact and finite-volume questions for Coxeter polytopes in
//! real projective space.
//!
//! The crate is `no_std` with `alloc`. Every algorithm runs either over exact
//! rationals ([`scalar::Rational`]) or over `f64` with an explicit tolerance.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cartan;
pub mod corpus;
pub mod coxeter;
pub mod decision;
pub mod eigen;
pub mod geometry;
pub mod hilbert;
pub mod limit_set;
pub mod lp;
pub mod matrix;
pub mod polytope;
pub mod scalar;
pub mod vinberg;
pub mod volume;

pub use cartan::{CartanError, CartanMatrix, MatrixType, Order, TypeTag};
pub use coxeter::{CoxeterMatrix, GroupClass, GroupKind};
pub use matrix::Matrix;
pub use polytope::{AnyPolytope, CoxeterPolytope, FaceDescriptor, FaceKind, PolytopeError};
pub use scalar::{Mode, Rational, Scalar};
