//! Kernels of Toeplitz, paired and transposed paired operators.

pub mod basis;
pub mod construction;
pub mod exact;
pub mod oracle;

pub use basis::{
    l2_norm, member_s, member_sigma, paired_residual, transposed_residual, Decision, KernelBasis, KernelStatus, Nontriviality, SymbolPair,
    WitnessCheck,
};
pub use construction::{j_map, partition_of_unity, symbols_from_function};
pub use exact::{
    kernels_equal_s, model_space_basis, nontrivial_s, nontrivial_sigma, paired_kernel, sigma_inclusion, toeplitz_kernel, transposed_kernel,
    Inclusion,
};
pub use oracle::{kernel_oracle, oracle_angle, OracleReport};
