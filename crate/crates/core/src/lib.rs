//! Stylometric detection of machine-generated text: a fixed 68-feature
//! vector per document, a random forest and a small 1-D convnet over it.

pub mod convnet;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod rng;
pub mod text;

pub use error::{Error, Result};
