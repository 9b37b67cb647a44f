//! Wave-particle duality quantifiers for photons carrying both path and
//! polarization degrees of freedom.
//!
//! A photon ensemble in a two-path interferometer is described by a 4x4
//! coherence-polarization density matrix in the fixed basis
//! {|H,1>, |H,2>, |V,1>, |V,2>}. From that single object the library computes
//! the fringe visibility V = 2|rho_12 + rho_34|, the path distinguishability
//! D = Tr|I1 rho_1 - I2 rho_2| (the trace norm of the Helstrom matrix), the
//! degree of coherence, per-path Stokes parameters and polarization degrees,
//! and screen intensity profiles. V and D obey the complementarity relation
//! D^2 + V^2 <= 1, saturated exactly by pure states.
//!
//! The [`channels`] module adds the open-system side: dephasing and
//! scattering environments as Kraus operator sets, applied either step by
//! step (Markovian iteration at p = Gamma t / n) or through closed-form
//! time-evolved matrices, with [`channels::trajectory`] reporting every
//! duality observable along a time grid.
//!
//! Modules:
//! - [`state`]: state construction, named example states, randomized states,
//!   validation of the density matrix axioms.
//! - [`duality`]: the observables.
//! - [`channels`]: Kraus channels and time evolution.
//! - [`io`]: the JSON state file format and the CSV/JSON report formats.
//! - [`linalg`], [`rng`]: fixed-size complex matrices and the portable
//!   seeded generator behind the randomized tests.

#![forbid(unsafe_code)]

pub mod channels;
pub mod duality;
pub mod error;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod state;

pub use channels::{ChannelModel, EvolutionMethod, EvolutionSpec, KrausChannel};
pub use duality::{
    DualityReport, HelstromMatrix, Path, PathLengths, PolarizationState, ScanSpec,
    ScreenGeometry, StokesVector,
};
pub use error::{Error, Result};
pub use state::{
    CoherencePolarizationMatrix, PureStateVector, ValidationReport, DEFAULT_VALIDATE_TOL,
};

/// Inclusive uniform grid from `start` to `stop` with `samples` points.
///
/// The endpoints are taken exactly; interior points are start + i * step.
pub fn linspace(start: f64, stop: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let step = (stop - start) / (n - 1) as f64;
            let mut grid: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
            grid[n - 1] = stop;
            grid
        }
    }
}
