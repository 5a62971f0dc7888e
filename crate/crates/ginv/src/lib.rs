//! Tensor generalized inverses under the Einstein product.

pub mod characterizations;
pub mod cli;
pub mod error;
pub mod inverse;
pub mod io;
pub mod kernels;
pub mod problems;
pub mod solve;
pub mod tensor;

pub use error::{GinvError, Result};
pub use tensor::{DenseTensor, TensorShape};
