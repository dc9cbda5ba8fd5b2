//! Two-level-system quantum Otto refrigerator driven by sudden switches.
//!
//! The qubit Hamiltonian is H = E₀(q σ_z + Δ σ_x) with ħ = k_B = 1. A cycle
//! alternates contact with a cold and a hot bath, separated by instantaneous
//! changes of the operating point. The crate solves the periodic steady
//! state exactly, compares it with closed-form sudden-limit results, and
//! exposes a batch CLI.

pub mod analytics;
pub mod cli;
pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod qubit_model;

pub use cycle::{
    compose_cycle_map, run_transient, solve_limit_cycle, sudden_limit_powers, AffineCycleMap,
    CycleSpec, LimitCycleResult, Protocol, SuddenLimit, TransientRun,
};
pub use dynamics::{BlochState, ThermalizationMode};
pub use error::{CycleError, ModelError};
pub use qubit_model::{BathLabel, BathSpec, QubitParams, RateModel, RatePair};
