//! Exact arithmetic for thin families of binary cubic forms `a x³ + b x²y + c xy² + d y³`
//! with `a` and `d` fixed.

pub mod arith;
pub mod averages;
pub mod error;
pub mod forms;
pub mod fp;
pub mod lattice;
pub mod local;
pub mod orbits;
pub mod poly;
pub mod sampler;

pub use arith::Q;
pub use error::{Error, Result};
pub use forms::{BinaryCubicForm, HeightKind, LatticeClass, QFPair, TernaryQuadraticForm};
