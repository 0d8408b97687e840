//! Numerical laboratory for Fourier restriction norms of the
//! Klein-Gordon–Zakharov system in 2+1 dimensions.
//!
//! Everything is generic over the scalar type through [`Real`]; the aliases
//! at the bottom of this file fix `f64`, which is what the tools use.

pub mod decomp;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod norms;
pub mod oracles;
pub mod real;
pub mod solver;

pub use error::{LabError, Result};
pub use real::Real;

pub type GridSpec = lattice::GridSpec<f64>;
pub type Grid = lattice::Grid<f64>;
pub type Lattice = lattice::Lattice<f64>;
pub type Field = lattice::SpacetimeField<f64>;
pub type PlaneGrid = lattice::PlaneGrid<f64>;
pub type PlaneField = lattice::PlaneField<f64>;
pub type BlockSpec = decomp::BlockSpec<f64>;
pub type ShellSpec = decomp::ShellSpec<f64>;
pub type Region = decomp::Region<f64>;
pub use decomp::{SectorPairClass, SectorSpec, Sign, Speed};
pub type NormSpec = norms::NormSpec<f64>;
pub type TrilinearSpec = forms::TrilinearSpec<f64>;
pub type ProbeSpec = forms::ProbeSpec<f64>;
pub type RatioReport = forms::RatioReport<f64>;
pub use forms::{ExponentBudget, RhsFormula};
pub type SolverState = solver::SolverState<f64>;
pub type SolverConfig = solver::SolverConfig<f64>;
