//! Exact diagonalization of dimerized spin-1/2 Heisenberg rings and the
//! nearest-neighbour concurrence of their ground states.
//!
//! The ring has `N` sites (even, `4..=24`) with exchange `J1` on bonds
//! `(2i-1, 2i)` and `J2` on bonds `(2i, 2i+1)`, written with two-site swap
//! operators. Magnetization sectors are diagonalized densely or with a
//! matrix-free Lanczos; [`analytic`] carries the closed forms for `N = 4`.
//!
//! ```
//! use dimer_core::{eigensolver, entanglement, CouplingParams, SolverOptions};
//!
//! let params = CouplingParams::new(4, 1.0, 1.0).unwrap();
//! let gs = eigensolver::ground_state(&params, &SolverOptions::default()).unwrap();
//! assert!((gs.energy + 2.0).abs() < 1e-12);
//! let c12 = entanglement::signed_concurrence(&gs, 1, 2).unwrap();
//! assert!((c12 - 0.5).abs() < 1e-12);
//! ```

pub mod analytic;
pub mod basis;
pub mod eigensolver;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod lanczos;
pub mod oracle;
pub mod output;
pub mod sweep;
pub mod verify;

pub use basis::{BasisState, Sector, SymmetrizedBasis4};
pub use eigensolver::{GroundState, Method, SolverOptions, SpectrumReport};
pub use entanglement::ConcurrenceReport;
pub use error::{Error, Result};
pub use hamiltonian::{BondList, CouplingParams};
pub use sweep::{SweepConfig, SweepResult};
