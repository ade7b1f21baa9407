//! Gagliardo p-energies `E_p[f] = int int |f(x) - f(y)|^p |x - y|^{-n-alpha}` (no
//! leading 1/2), computed directly, by line reduction, and on the full line.

mod direct;
mod halfline;
mod lattice;
mod one_d;
mod potential;
mod reduced;

use serde::{Deserialize, Serialize};

use crate::parallel::Workers;

pub use direct::{gagliardo_direct, kernel_mass_gap};
pub use halfline::{log_profile_energy, LogEnergy};
pub use lattice::LatticeCorrection;
pub use one_d::{fullline_energy, interval_energy, one_d_energy};
pub use potential::{fs_potential, fs_potential_halfline, HalflinePotential};
pub use reduced::gagliardo_reduced;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMethod {
    Direct,
    Reduced,
    Fullline,
}

/// Energy at spacing `h` with a Richardson error estimate from the `2h` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult<T> {
    pub value: T,
    pub h: T,
    pub error: T,
    pub method: EnergyMethod,
}

#[derive(Clone, Debug)]
pub struct EnergyOptions {
    pub workers: Workers,
    /// Also evaluate at twice the spacing to estimate the discretization error.
    pub richardson: bool,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            workers: Workers::serial(),
            richardson: true,
        }
    }
}

impl EnergyOptions {
    pub fn with_workers(workers: Workers) -> Self {
        Self { workers, richardson: true }
    }
}
