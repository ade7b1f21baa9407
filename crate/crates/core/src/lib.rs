//! Sharp fractional Hardy inequalities on domains of `R^n`.
//!
//! The crate computes the sharp constants, the boundary functionals that
//! appear as Hardy weights (distance, direction averages `M_alpha`/`m_alpha`,
//! the convex-domain weight), Gagliardo energies of lattice trial functions,
//! and checks the inequalities numerically with machine-readable reports.
//!
//! Everything numeric is generic over a [`Real`] scalar; the `*F64` aliases
//! below fix it to `f64`.
//!
//! ```
//! use frac_hardy::constants::kappa;
//! let k = kappa(1, 1.5).unwrap();
//! assert!(k > 0.0);
//! ```

pub mod constants;
pub mod energy;
pub mod error;
pub mod functions;
pub mod geometry;
pub mod hardy;
pub mod parallel;
pub mod quadrature;
pub mod scalar;
pub mod selftest;

pub use constants::{fs_constant, kappa, sphere_alpha_integral, FracParams};
pub use error::{Error, Result};
pub use geometry::{DomainSpec, SphereQuadrature};
pub use hardy::{verify, VerificationReport, WeightKind};
pub use parallel::Workers;
pub use scalar::Real;

pub type DomainSpecF64 = geometry::DomainSpec<f64>;
pub type PolytopeF64 = geometry::Polytope<f64>;
pub type SphereQuadratureF64 = geometry::SphereQuadrature<f64>;
pub type GridFunctionF64 = functions::GridFunction<f64>;
pub type BumpSpecF64 = functions::BumpSpec<f64>;
pub type HalflineProfileF64 = functions::HalflineProfile<f64>;
pub type EnergyResultF64 = energy::EnergyResult<f64>;
pub type FamilySpecF64 = hardy::FamilySpec<f64>;
pub type TrialFunctionF64 = hardy::TrialFunction<f64>;
pub type VerifyOptionsF64 = hardy::VerifyOptions<f64>;
