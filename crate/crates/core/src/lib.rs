pub mod arith;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod numeric;
pub mod field;
pub mod ideal;
pub mod prime;
pub mod residue;
pub mod ring;
pub mod group;
pub mod classgroup;
pub mod picard;
pub mod ray;
pub mod normform;
pub mod input;
pub mod pipeline;

pub use error::{Error, Result};
