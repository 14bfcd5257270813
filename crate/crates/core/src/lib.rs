//! Terminal-area arrival management: route geometry, wind and traffic
//! models, landing-order policies, trajectory selection, an online
//! scheduler, fuel accounting and a Monte Carlo harness.
//!
//! Geometry, wind and fuel are generic over [`Real`]; the scheduling layers
//! work in `f64`. Aliases for both precisions live at the crate root.

// `!(x > y)` is used on purpose so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fuel;
pub mod geometry;
pub mod harness;
pub mod online;
pub mod oracle;
pub mod real;
pub mod sequencing;
pub mod traffic;
pub mod trajopt;
pub mod wind;

pub use error::{Error, Result};
pub use real::Real;

pub type Point = geometry::Point2<f64>;
pub type Layout = geometry::ApproachLayout<f64>;
pub type Geometry = geometry::PathGeometry<f64>;
pub type Speeds = geometry::SegmentSpeeds<f64>;
pub type Wind = wind::WindContext<f64>;
pub type Coefficients = fuel::FuelCoefficients<f64>;

pub type Point32 = geometry::Point2<f32>;
pub type Layout32 = geometry::ApproachLayout<f32>;
pub type Geometry32 = geometry::PathGeometry<f32>;
pub type Speeds32 = geometry::SegmentSpeeds<f32>;
pub type Wind32 = wind::WindContext<f32>;
pub type Coefficients32 = fuel::FuelCoefficients<f32>;
