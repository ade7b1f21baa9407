//! Trial functions on lattices.

mod bump;
mod grid;
mod inversion;
mod line;
mod sharpness;

pub use bump::{sample_bump, sample_bumps, BumpSpec, MAX_NODES};
pub use grid::{GridFunction, GRID_SCHEMA};
pub use inversion::inversion_1d;
pub use line::{line_base_points, plane_basis, restrict_to_line, LineSamples};
pub use sharpness::{halfline_sharpness_family, HalflineProfile};
