#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleman;
pub mod carleman_fourier;
pub mod casestudy;
pub mod experiments;
pub mod error;
pub mod numerics;
pub mod trigpoly;

pub use error::{Error, ErrorKind, Result};
