//! Capture-via-GPS-spoofing simulator for a group of UAVs.
//!
//! * [`kinematics`]: straight-line motion under the max-force controller.
//! * [`attacker`]: the covert spoofer's optimal imposed location.
//! * [`defense`]: cooperative localization that detects and undoes spoofing.
//! * [`game`]: the per-step Stackelberg game between operator and spoofer.
//! * [`metrics`]: route deviation and capture outcomes.
//! * [`harness`]: scenario files, parameter sweeps, CSV/JSON output.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix it to `f64`, which is what the harness uses.

pub mod attacker;
pub mod defense;
mod error;
pub mod game;
pub mod harness;
pub mod kinematics;
pub mod metrics;
mod scalar;
mod vec2;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use vec2::Vec2;

pub use attacker::{ImposedLocation, SpoofCase, SpoofConstraint, SpoofGeometry, TravelAxis};
pub use defense::{Fix, GroupReading, LocalizationVerdict};
pub use game::{DefenderPolicy, EpisodeRecord, GameState, StepDecision, UavState};
pub use kinematics::MotionParams;
pub use metrics::{CaptureReport, DeviationSeries};

pub type Vec2f = Vec2<f64>;
pub type MotionParamsF = MotionParams<f64>;
pub type SpoofConstraintF = SpoofConstraint<f64>;
pub type SpoofGeometryF = SpoofGeometry<f64>;
pub type ImposedLocationF = ImposedLocation<f64>;
pub type GroupReadingF = GroupReading<f64>;
pub type LocalizationVerdictF = LocalizationVerdict<f64>;
pub type UavStateF = UavState<f64>;
pub type GameStateF = GameState<f64>;
pub type EpisodeRecordF = EpisodeRecord<f64>;
pub type DeviationSeriesF = DeviationSeries<f64>;
pub type CaptureReportF = CaptureReport<f64>;
