//! Statistics of the PageRank/CheiRank pair.
//!
//! - [`correlator`]: `κ = N Σ P(i) P*(i) − 1` and its dependence on damping.
//! - [`density`]: node density on an equidistant grid in the `(ln K, ln K*)`
//!   plane, and slices along `ln K = x0 + η/2, ln K* = x0 − η/2`.
//! - [`powerlaw`]: log-binned least-squares power-law fits.
//! - [`sampling`]: inverse-CDF samplers, including the independent-product
//!   null model for the density grid.
//! - [`synth`]: seeded directed configuration-model graphs with power-law
//!   in/out degrees.

pub mod correlator;
pub mod density;
pub mod powerlaw;
pub mod sampling;
pub mod synth;

pub use correlator::{correlator, correlator_sweep, kappa, Correlator, SweepMode, SweepPoint};
pub use density::{density_grid, slice_density, DensityGrid, EtaSample, EtaSlice};
pub use powerlaw::{fit_power_law, fit_power_law_with, FitData, PowerLawFit};
pub use sampling::{sample_independent, DiscretePowerLaw, InverseCdf};
pub use synth::generate_scale_free;
