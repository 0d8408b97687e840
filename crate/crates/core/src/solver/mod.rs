//! Pseudospectral Picard solver for the first-order Klein-Gordon–Zakharov system
//! on a periodic plane lattice.

mod data;
mod flow;
mod picard;
mod state;

pub use data::{conjugate_partner, DataSpec, Envelope};
pub use flow::{dealias_keep, linear_propagator, nonlinearity, Forcing};
pub use picard::{
    data_sensitivity_probe, diagnostics_csv, picard_iterate, strang_solve, strang_step,
    ContractionReport, Trajectory, CONVERGENCE_TOL,
};
pub use state::{read_checkpoint, write_checkpoint, SolverConfig, SolverState};
