//! Deterministic multirate simulator of an electrohydraulic servo-actuator
//! with valve dead-zone, driven by an adaptive fuzzy tracking controller.
//!
//! The numerical core is generic over the scalar type ([`Real`]: `f32` or
//! `f64`); the `*64` aliases below name the `f64` instantiations used by the
//! configuration loader, the CSV writer and the CLI.

pub mod config;
pub mod controller;
pub mod csv;
pub mod error;
pub mod fuzzy;
pub mod plant;
pub mod scalar;
pub mod sim;
pub mod summary;

pub use controller::{ControllerParams, Measurement, ModelCoefficients, ReferencePoint, TrackingError};
pub use error::{Error, Result};
pub use fuzzy::FuzzyEstimator;
pub use plant::{PlantParams, PlantState};
pub use scalar::Real;
pub use sim::{run, Metrics, Row, Scenario, SimResult, Sinusoid, SupplyMode};

pub type PlantParams64 = PlantParams<f64>;
pub type PlantState64 = PlantState<f64>;
pub type ControllerParams64 = ControllerParams<f64>;
pub type FuzzyEstimator64 = FuzzyEstimator<f64>;
pub type Scenario64 = Scenario<f64>;
pub type SimResult64 = SimResult<f64>;
pub type Row64 = Row<f64>;

pub type PlantParams32 = PlantParams<f32>;
pub type ControllerParams32 = ControllerParams<f32>;
pub type FuzzyEstimator32 = FuzzyEstimator<f32>;
pub type Scenario32 = Scenario<f32>;
pub type SimResult32 = SimResult<f32>;
