//! Spin-chain decoherence-signal simulator.
//!
//! An N-qubit chain is evolved exactly under one of five model Hamiltonians.
//! At an epoch time `t0` a single site undergoes an instantaneous projective
//! measurement channel along an arbitrary axis; the resulting rank-2 mixed
//! state is carried as two pure branches and evolved further. Site-resolved
//! detector functions (magnetization contrast `F_n`, off-diagonal contrast
//! `O_n`, excess entropy `D_n`) compare the interrupted trajectory against the
//! uninterrupted one, and waiting-time fits turn the detector onsets into a
//! signal-propagation speed.
//!
//! The exact-diagonalization pipeline is cross-validated by independent
//! reduced-complexity solvers in [`oracles`]: Bessel-function one-magnon
//! propagators, the long-range-Ising cosine-product magnetization, and a
//! free-fermion (Jordan-Wigner/Bogoliubov) solver for the transverse-XY
//! chain.

pub mod analysis;
pub mod detectors;
pub mod evolution;
pub mod hamiltonian;
pub mod linalg;
pub mod oracles;
pub mod presets;
pub mod state;

pub use detectors::{detector_f_at, detector_trace, DetectorTrace};
pub use evolution::{apply_channel, run_protocol, run_protocol_with, ProtocolSpec, TimeGrid, TrajectoryPair};
pub use hamiltonian::{Boundary, Model, ModelSpec, SpectralHamiltonian};
pub use state::{BasisIndex, BranchEnsemble, MeasurementAxis, PureState, QubitReducedDM, StateSpec, C64};
