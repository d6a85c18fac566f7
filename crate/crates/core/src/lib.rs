//! Pseudo-spectral simulation of 2D variable-density incompressible
//! Navier-Stokes on the torus, plus the numerical verification toolkit
//! around it: conserved-quantity diagnostics, Lebesgue-norm class
//! functionals, weighted Poincare / Desjardins inequality sweeps, and the
//! comparison-ODE blow-up criteria for global existence.

pub mod error;
pub mod norms;
pub mod quad;
pub mod spectral;

pub use error::{CoreError, Result};
pub use spectral::{
    dealiased_product, pointwise_product, random_solenoidal_vector, random_trig_scalar,
    FrequencySplit, Grid, SpectralScalar, SpectralVector, TWO_PI,
};
