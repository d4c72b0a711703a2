//! Randomized checks of the structural results on paired and transposed paired operators.

pub mod checks;
pub mod common;
pub mod config;
pub mod registry;
pub mod runner;
pub mod sampler;

pub use config::Config;
pub use registry::{lookup, registry, PropertySpec};
pub use runner::{all_property_ids, run_property, run_suite, Failure, PropertyReport, SuiteReport, Trial};
pub use sampler::{sample_symbol, sample_with, satisfies, ClassConstraint, SamplerProfile};
