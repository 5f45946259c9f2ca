//! Reconstruction windows, mollifiers, Gabor frames and localization.

pub mod bump;
pub mod frame;
pub mod localization;
pub mod mollifier;
pub mod pou;

pub use bump::{bump, discrete_bump, quadratic_window, smooth_step};
pub use frame::{frame_bounds, FrameBounds, GaborCoefficients, GaborFrameSpec};
pub use localization::{localization_measure, LatticeMask};
pub use mollifier::{build_mollifier, Band, Mollifier};
pub use pou::{build_lowpass, build_pou_pair, build_pou_pair_split, pou_residual, support_of, LowPass, PouKind, WindowPair};
