//! Multiplicity structure and deflation of isolated singular roots of
//! polynomial systems.
//!
//! Given a polynomial system and an approximate isolated root, this crate
//! computes the local dual space (Macaulay's dialytic construction), the
//! multiplicity and nil-index, and an orthogonal primal-dual basis pair.
//! On top of that structure it builds two exact deflations — a first-order
//! one from polynomial kernel forms of the Jacobian, and a parametric one
//! from multiplication matrices of the local quotient algebra — and a Newton
//! layer that refines the root together with the dual-basis coefficients.
//!
//! Arithmetic is generic over two coefficient domains: exact rationals
//! (`num_rational::BigRational`) and complex doubles (`Complex64`).
//! Constructions that are exact for rational inputs stay exact end to end;
//! numeric decisions (ranks, null spaces) always happen in complex floating
//! point.

pub mod poly;
pub mod linalg;
pub mod dual;
pub mod deflate;
pub mod mult;
pub mod refine;
pub mod oracle;
pub mod systems;

pub use poly::{Coeff, DualElement, Expo, MPoly, Rat};
