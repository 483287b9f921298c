//! Constructive universal Fourier series: Fejer blocks, spectral block
//! scheduling, truncated universal series with tail certificates, divergence
//! covers, and exact ternary Cantor-set geometry.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod builder;
pub mod cantor;
pub mod cli;
pub mod dense;
pub mod divergence;
pub mod error;
pub mod fejer;
pub mod phase;
pub mod rational;
pub mod schedule;
pub mod trigpoly;
pub mod universality;

pub use error::{Error, Result};
pub use num_complex::Complex64;
