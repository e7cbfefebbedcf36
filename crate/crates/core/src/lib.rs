//! Trajectory-based detection of anomalous days in fixed-camera scenes.

pub mod cluster;
pub mod day;
pub mod dtw;
pub mod error;
pub mod eval;
pub mod footmap;
pub mod geom;
pub mod heatmap;
pub mod io;
pub mod render;
pub mod scalar;
pub mod scene;
pub mod synth;
pub mod track;
pub mod trajpred;
pub mod tspred;

pub use error::{Error, Result};
pub use scalar::Real;
pub use scene::SceneConfig;

/// Default scalar for the whole pipeline.
pub type Point = geom::Point<f64>;
pub type TrackPoint = track::TrackPoint<f64>;
pub type Track = track::Track<f64>;
pub type DayRecord = day::DayRecord<f64>;
pub type Dataset = day::Dataset<f64>;
