//! Operator expressions, exact application, truncated matrices and numerical linear algebra.

pub mod apply;
pub mod expr;
pub mod norm;
pub mod svd;
pub mod truncate;

pub use apply::{apply_exact, apply_node};
pub use expr::{build, parse_operator, Ast, Node, OperatorExpression, Space};
pub use norm::{
    adjoint_residual, monomial_probe_pairs, monomial_probes, numerical_rank, numerical_rank_scaled, operator_norm, rank_from_sigma, sup_norm,
    NormEstimate, RankReport,
};
pub use svd::{max_principal_sine, orthonormal_columns, singular_values, svd, Svd};
pub use truncate::{input_window, truncate, truncate_window, TruncationMatrix};
