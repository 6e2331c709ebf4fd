//! Koszulity of finite graded category algebras.
//!
//! The central computation is the reduced cohomology of factorization spaces:
//! a category algebra is Koszul exactly when, for every non-identity morphism
//! `p`, the factorization space of `p` has cohomology only in degree
//! `length(p) - 2`.

pub mod category;
pub mod factorization;
pub mod fixtures;
pub mod homology;
pub mod io;
pub mod koszul;
pub mod poset;
pub mod rs;
pub mod toric;
