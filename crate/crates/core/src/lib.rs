//! Ideal convergence on finite topological spaces.

pub mod config;
pub mod convergence;
pub mod error;
pub mod ideals;
pub mod indexsets;
pub mod points;
pub mod report;
pub mod seqspace;
pub mod topology;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/index-sets.md")]
    mod index_sets {}
    #[doc = include_str!("../../../book/src/ideals.md")]
    mod ideals {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/convergence.md")]
    mod convergence {}
    #[doc = include_str!("../../../book/src/sequential.md")]
    mod sequential {}
    #[doc = include_str!("../../../book/src/cluster-points.md")]
    mod cluster_points {}
    #[doc = include_str!("../../../book/src/configs-and-reports.md")]
    mod configs_and_reports {}
}
