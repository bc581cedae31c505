//! Curves, patch decompositions and partition-of-unity windows.

pub mod catalog;
mod curve;
mod decomposition;
mod window;

pub use curve::{dist, CurveKind, CurvePoint, CurveSample, ParametricCurve, Point, Shape};
pub use decomposition::{set_distance, DiameterMetric, Overlap, Patch, PatchDecomposition};
pub use window::{eta_window, WindowProfile};
