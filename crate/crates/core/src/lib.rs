#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod halfspace;
pub mod materials;
pub mod quadrature;
pub mod quantities;
pub mod response;
pub mod spectrum;
pub mod thermal;

pub use error::{Error, Result};
