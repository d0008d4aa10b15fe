//! Counting functions, spectral zeta functions and Weyl-law remainder
//! analysis for tensor products of model operators with explicit spectra.
//!
//! The model spectra (shifted sphere Laplacians, the shifted harmonic
//! oscillator and their powers) have closed-form eigenvalue sequences, so
//! eigenvalue counts below a threshold are computed exactly: thresholds are
//! dyadic rationals and comparisons against symbolic eigenvalues
//! `scale * base^power` are settled in integer arithmetic. On top of the
//! exact counts sit the asymptotic layers: spectral zeta values with
//! certified tails, three-case remainder classification for tensor
//! products, remainder series over tau grids, and the Dirichlet divisor
//! summatory function together with its anisotropic generalization.
//!
//! Floating-point kernels are generic over [`numeric::Real`] (`f32` or
//! `f64`); the aliases below fix the default `f64` instantiation.

pub mod asymptotics;
pub mod counting;
pub mod divisor;
pub mod error;
pub mod numeric;
mod poly;
pub mod spectra;
pub mod zeta;

pub use error::{Error, Result};
pub use numeric::{geometric_grid, linear_grid, Rat, Real, Tau};
pub use spectra::{
    a1_spectrum, a2_spectrum, a2_spectrum_with, harmonic_oscillator, hermite_spectrum,
    parse_operator, parse_operator_with, render, sphere_laplacian_shifted, Calculus,
    ModelSpectrum, ParseOptions, S1ZeroMode, SpectrumKind, SpectrumTransform, TensorOperator,
};

/// Concrete `f64` instantiations of the generic sample and result types.
pub type Sample = counting::CountingSample<f64>;
pub type ZetaSample = counting::PartialZetaSample<f64>;
pub type Zeta = zeta::ZetaValue<f64>;
pub type Law = asymptotics::AsymptoticLaw<f64>;
pub type Series = asymptotics::RemainderSeries<f64>;
pub type Sharpness = asymptotics::SharpnessReport<f64>;
