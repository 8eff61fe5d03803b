#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod fwcore;
pub mod hedging;
pub mod lp;
pub mod milp;
pub mod model;
pub mod num;
pub mod oracle;

pub use error::{Error, SubproblemFailure};
