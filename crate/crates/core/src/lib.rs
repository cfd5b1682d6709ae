//! Numerical workbench for Gaussian Kloosterman sums, Kuznetsov weight
//! transforms, spectral exponential sums and geodesic counts on the Picard
//! group `PSL(2, Z[i])`.

pub mod bessel_transforms;
pub mod gaussian_ring;
pub mod geodesic_oracle;
pub mod kloosterman;
pub mod quadrature;
pub mod special_functions;
pub mod spectral_sums;
pub mod summation;
pub mod trace_sums;

pub use gaussian_ring::GaussianInt;
