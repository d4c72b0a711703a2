//! Laurent polynomials, rational functions on the circle, projections and membership.

pub mod json;
pub mod laurent;
pub mod membership;
pub mod partial;
pub mod rational;

pub use json::{parse_symbol, symbol_from_value, symbol_to_value, SymbolJson};
pub use laurent::LaurentPoly;
pub use membership::{membership, membership_with, SpaceTag};
pub use partial::{fourier_coefficient, inner_product, norm_sq, riesz_project, riesz_split, FourierSeries, Side};
pub use rational::{probe_points, RationalSymbol, Zpk};
