//! Marchenko-Pastur law and the map from a true spectrum to the density of
//! its noisy sample estimator.

pub mod fit;
pub mod mp;
pub mod poly;
pub mod solver;
pub mod spectrum;
pub mod sweep;

pub use fit::{mp_fit, FitTarget, MpFit, MpFitOptions};
pub use mp::{mp_density, MPParams};
pub use solver::{solve_mc, solve_mc_detailed, MSolution};
pub use spectrum::{conformal_map, green_from_mgf, moment_gen_c, Atom, DegenerateSpectrum};
pub use sweep::{
    auto_grid, density_from_spectrum, mc_along_grid, SolverConfig, DEFAULT_ANCHOR, DEFAULT_EPSILON,
    EDGE_CUTOFF,
};
