//! Roots, inner–outer and Wiener–Hopf factorizations.

pub mod inner_outer;
pub mod roots;
pub mod wiener_hopf;

pub use inner_outer::{inner_outer, InnerOuterPair};
pub use roots::{poly_roots, poly_roots_with, Location, Root, RootSet};
pub use wiener_hopf::{wiener_hopf, winding_index, WHFactorization};
