//! Executable checks, one function per registered property.

pub mod invariance;
pub mod operators;
pub mod paired;
pub mod transposed;
