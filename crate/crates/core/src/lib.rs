//! Zolotarev numbers, Zolotarev's extremal rational functions and the
//! singular value bounds they imply for matrices with displacement structure
//! (Pick, Cauchy, Löwner, Krylov, real Vandermonde and positive definite
//! Hankel), together with the dense linear algebra used to check those
//! bounds against computed spectra.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adi;
pub mod bounds;
pub mod elliptic;
pub mod error;
pub mod matrices;
pub mod numerics;
pub mod spectra;
pub mod zolotarev;

pub use error::{Result, ZoloError};
