//! Exact solutions of the integrable n-vortex equations built from rational
//! maps, their lift to Cartan geometry on circle bundles, and numerical
//! certification of the identities they satisfy.

pub mod campaign;
pub mod cartan;
pub mod config;
pub mod dirac;
pub mod error;
pub mod geometry;
pub mod jets;
pub mod lift;
pub mod quadrature;
pub mod rational;
pub mod report;
pub mod roots;
pub mod vortex;

pub use campaign::{run_case, sample_fields};
pub use config::{CaseConfig, CheckKind};
pub use error::{Error, Result};
pub use geometry::{GeometryMode, SurfaceSpec};
pub use jets::{CPoint, Jet2, C64};
pub use rational::{Poly, RationalMap};
pub use report::Report;
