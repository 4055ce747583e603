//! Universal residual polynomials for multisingularities of functions on
//! curves, their specialization to the versal unfoldings of `A_n` and
//! `I_{k,l}`, degrees of the Lyashko-Looijenga map on primitive strata, and
//! a permutation-factorization oracle for the resulting double Hurwitz
//! numbers.

pub mod error;
pub mod exactring;
pub mod partitions;
pub mod permoracle;
pub mod unfolding;
pub mod universal;
pub mod verify;

pub use error::{Error, Result};
