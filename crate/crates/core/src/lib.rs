//! Exact diagonalization of anisotropic spin-1/2 chains in a uniform field,
//! with ground-state entanglement measured by single-qubit unitary
//! operations and their excitation energies.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar to `f64`; the `*32` variants use `f32`.

pub mod eigensolver;
pub mod energetics;
pub mod error;
pub mod geometry;
pub mod ground_state;
pub mod model;
pub mod real;
pub mod scan;
pub mod state;
pub mod tolerances;

pub use eigensolver::{lowest_two, lowest_two_dense, lowest_two_lanczos};
pub use energetics::{
    build_quadratic_form, epsilon_cross, excitation_energy_direct, exe, exe_closed_form,
    factorization_field,
};
pub use error::{Error, Result};
pub use geometry::{distance, extremal_direction, extremal_frame, min_squared_distance};
pub use ground_state::{
    bond_correlator, magnetization, reduced_density, resolve_ground_state, site_observables, tangle,
    vn_entropy, Resolution,
};
pub use model::{apply_hamiltonian, energy_expectation, Boundary};
pub use real::Real;
pub use scan::{critical_candidates, derivative, find_factorization, point, sweep, Column};
pub use state::{Axis, BasisIndex, MAX_SITES};

pub type StateVector = state::StateVector<f64>;
pub type ModelSpec = model::ModelSpec<f64>;
pub type Hamiltonian = model::Hamiltonian<f64>;
pub type SolverConfig = eigensolver::SolverConfig<f64>;
pub type EigenPair = eigensolver::EigenPair<f64>;
pub type GroundStateBundle = ground_state::GroundStateBundle<f64>;
pub type SiteObservables = ground_state::SiteObservables<f64>;
pub type Direction = geometry::Direction<f64>;
pub type ExtremalFrame = geometry::ExtremalFrame<f64>;
pub type QuadraticForm = energetics::QuadraticForm<f64>;
pub type EnergyReport = energetics::EnergyReport<f64>;
pub type Eer = energetics::Eer<f64>;
pub type Tolerances = tolerances::Tolerances<f64>;
pub type ScanConfig = scan::ScanConfig<f64>;
pub type SweepRow = scan::SweepRow<f64>;
pub type ScanResult = scan::ScanResult<f64>;

pub type StateVector32 = state::StateVector<f32>;
pub type ModelSpec32 = model::ModelSpec<f32>;
pub type SolverConfig32 = eigensolver::SolverConfig<f32>;
pub type Tolerances32 = tolerances::Tolerances<f32>;
pub type SweepRow32 = scan::SweepRow<f32>;
