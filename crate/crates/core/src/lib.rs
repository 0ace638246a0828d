//! Quasi-exactly-solvable spectra of the Khare-Mandal potential
//! `V = -(zeta cosh 2x - iM)^2` and its PT-symmetric partner
//! `V = -(zeta sinh 2x - iM)^2`.
//!
//! For integer `M >= 1` a gauge transformation exposes an M-dimensional
//! invariant polynomial subspace, so M eigenvalues and eigenfunctions are
//! computable in closed algebraic form. This crate computes them by three
//! independent routes and cross-validates:
//!
//! * [`closed_form`] — the exact formulas for `M = 1..=4`;
//! * [`gauge`] — the M x M tridiagonal gauged Hamiltonian and its
//!   eigendecomposition (with a real-symmetric similarity for the minus
//!   variant that makes the all-real spectrum structural);
//! * [`recursion`] — energy polynomials `R_n(E)` from a three-term
//!   recursion, QES energies as the roots of `R_M`.
//!
//! Every produced `(E, phi)` pair can be pushed through [`wavefunction`],
//! which rebuilds `psi(x) = mu(z) phi(z)`, `z = e^{2x}`, and measures the
//! Schroedinger residual `-psi'' + (V - E) psi` with analytic derivatives.
//!
//! The numeric kernels are generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the aliases below fix the common `f64` instantiation.
//!
//! ```
//! use qes_core::{PotentialSpec64, C64};
//! use qes_core::model::default_tol_real;
//!
//! let spec = PotentialSpec64::minus(1.0, 3).unwrap();
//! let op = qes_core::gauge::build_operator(&spec);
//! let spectrum = qes_core::gauge::eigen_spectrum(&op, &spec, default_tol_real()).unwrap();
//! assert!(spectrum.all_real());
//! assert!((spectrum.levels[1].energy - C64::new(6.0, 0.0)).norm() < 1e-10);
//! ```

pub mod aberth;
pub mod closed_form;
pub mod error;
pub mod gauge;
pub mod linalg;
pub mod model;
pub mod recursion;
mod refine;
pub mod scalar;
pub mod wavefunction;

pub use error::Error;
pub use model::{
    check_symmetry, eval_potential, multiset_deviation, symmetry_deviation, Method,
    PotentialSpec, QesLevel, Reality, Spectrum, SymmetryTransform, Variant,
};
pub use scalar::{Cplx, Real};

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalar.
pub type C32 = num_complex::Complex<f32>;

/// The common `f64` instantiations.
pub type PotentialSpec64 = model::PotentialSpec<f64>;
pub type Spectrum64 = model::Spectrum<f64>;
pub type QesLevel64 = model::QesLevel<f64>;
pub type TridiagonalOperator64 = gauge::TridiagonalOperator<f64>;
pub type EnergyPolynomial64 = recursion::EnergyPolynomial<f64>;
pub type GaugeWavefunction64 = wavefunction::GaugeWavefunction<f64>;
