//! The classification ODEs: `u'' + 2λu - ν = 0`, `α'' + 2λα - κ = 0`, their
//! first integrals, the fiber Obata equation and the Schwarzschild profile.

mod checks;
mod rk4;
mod schwarzschild;
mod solution;

pub use checks::{fiber_obata_check, first_integral_drift, first_integral_drift_traj, nu_identity, xi_constant};
pub use rk4::{rk4_integrate, rk4_step, Trajectory};
pub use schwarzschild::{omega_prime_profile, omega_profile, omega_trajectory};
pub use solution::{AffineSolution, AlphaSolution, Branch, ObataSolution};
