//! Exact-arithmetic workbench for simplicial fans and cobordisms in `N + Z`.

pub mod error;
pub mod fan;
pub mod linalg;
pub mod report;
pub mod support;
pub mod cobordism;
pub mod collapse;
pub mod midray;
pub mod counterexample;
pub mod doc;
pub mod cli;

pub use error::{Error, Result};
