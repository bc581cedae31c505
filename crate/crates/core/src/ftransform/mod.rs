//! Windowed slow forward Fourier transforms and high-order inverse
//! transforms on a band plus a graded neighbourhood of ω = 0.

mod fcc;
mod forward;
mod grid;
mod inverse;
mod moments;
mod segment;
mod window;

pub use fcc::{GradedFcc, LowBand};
pub use forward::SlowForward;
pub use grid::{FrequencyGrid, SignalClass};
pub use inverse::InverseFt;
pub use moments::cheb_moments;
pub use segment::FilonRule;
pub use window::{TimeGrid, TimeWindowPartition};
