//! Discretization conventions and the transforms everything else builds on.
//!
//! The real line is modelled by a circle of circumference P = N dt. Fourier
//! transforms are dt-scaled DFTs, so a sampled Dirac delta is an impulse of
//! height 1/dt and all Riemann sums commute with the FFT.

pub mod fft;
pub mod grid;
pub mod io;
pub mod plane;
pub mod signal;
pub mod transform;

pub use grid::{steps_of, Axis, GridSpec};
pub use plane::{PlaneArray, Semantics};
pub use signal::{cis, unit_roots, SampledSignal, C64};
pub use transform::{
    forward_ft, inverse_ft, inverse_zak, stft, stft_at, stft_plane, symplectic_ft, zak_transform, zak_value,
};
