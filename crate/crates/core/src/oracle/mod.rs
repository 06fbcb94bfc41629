//! Numerical realization of monopole bundles over the sphere, used as an
//! independent check of the symbolic identities.
//!
//! Everything here works on sampled values: forms are stored at grid nodes,
//! derivatives are finite differences (fourth order in `theta`, spectral in
//! `phi`), integrals are Gauss-Legendre in `cos(theta)` times the trapezoid
//! rule in `phi`.

pub mod forms;
pub mod grid;
pub mod monopole;
pub mod quadrature;

pub use forms::{contraction, fd_exterior_derivative, integrate, SampledForm, VectorField};
pub use grid::{Chart, SphereGrid};
pub use monopole::{
    commutator_residual, rotation_field, rotation_fields, sphere_monomial_integral, Identity, MonopoleScenario, PointwiseReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("grid {n_theta}x{n_phi} is too small (need n_theta >= 5, n_phi >= 4)")]
    InvalidGrid { n_theta: usize, n_phi: usize },
    #[error("exterior derivative of a degree-{0} form is not sampled")]
    DegreeTooHigh(u8),
    #[error("expected a degree-{expected} form, found degree {found}")]
    WrongDegree { expected: u8, found: u8 },
    #[error("unknown identity `{0}` (expected invariance, double_contraction or equivariant_closedness)")]
    UnknownIdentity(String),
    #[error("generator index {0} out of range for so(3)")]
    UnknownGenerator(usize),
}
