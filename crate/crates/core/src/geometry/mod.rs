//! Domains, directional distances, widths, boundary weights and direction rules.

mod domain;
mod exterior;
mod sphere;
mod weights;

pub use domain::{DomainSpec, HalfspaceSpec, Polytope, RayTrace};
pub use exterior::{complement_tail, exterior_kernel_mass, forward_complement_mass, line_complement_mass};
pub use sphere::{build_sphere_quadrature, cached_sphere_quadrature, sphere_area, Direction, SphereQuadrature};
pub use weights::{convex_weight, dir_dist, m_weight};
