#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controls;
pub mod certify;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lo;
pub mod randkit;
pub mod sdo;
pub mod soco;

pub use controls::{GenControls, Scaling};
pub use error::{Error, Result};
