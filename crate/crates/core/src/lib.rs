//! Kernels of paired operators `aP⁺ + bP⁻` and transposed paired operators
//! `P⁺a + P⁻b` on L² of the unit circle, for rational symbols.
//!
//! Symbols are handled exactly as rational functions; truncated matrices of
//! the operators serve as an independent numerical oracle.

pub mod error;
pub mod factor;
pub mod kernels;
pub mod operators;
pub mod properties;
pub mod symbol;
pub mod tol;

pub use error::{Error, Result};
pub use factor::{inner_outer, poly_roots, wiener_hopf, winding_index, InnerOuterPair, Location, Root, RootSet, WHFactorization};
pub use num_complex::Complex64;
pub use symbol::{
    fourier_coefficient, inner_product, membership, parse_symbol, riesz_project, symbol_to_value, LaurentPoly, RationalSymbol, Side, SpaceTag,
};
pub use kernels::{
    kernel_oracle, model_space_basis, nontrivial_s, nontrivial_sigma, paired_kernel, toeplitz_kernel, transposed_kernel, Decision, KernelBasis,
    KernelStatus, SymbolPair,
};
pub use properties::{run_property, run_suite, sample_symbol, Config, PropertyReport, SamplerProfile, SuiteReport};
pub use tol::Tolerances;
