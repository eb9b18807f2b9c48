//! Exact time evolution through the cached eigendecomposition, the
//! single-site measurement channel, and the three-stage protocol producing
//! paired (with-channel / without-channel) trajectories.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::hamiltonian::{ModelError, ModelSpec, SpectralHamiltonian};
use crate::state::{dim, BranchEnsemble, MeasurementAxis, PureState, StateError, StateSpec, C64};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("epoch time t0 must be > 0 and finite, got {t0}")]
    BadEpoch { t0: f64 },
    #[error("invalid time grid: {reason}")]
    BadGrid { reason: String },
    #[error("qdp site {site} out of range for a {n_sites}-site chain")]
    QdpSiteOutOfRange { site: usize, n_sites: usize },
    #[error("state dimension {got} does not match Hamiltonian dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Strictly increasing sample times, stored in units of the epoch time `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times_over_t0: Vec<f64>,
}

impl TimeGrid {
    /// Uniform grid of `steps` intervals covering `[0, max_over_t0] * t0`
    /// (so `steps + 1` sample points, endpoints included).
    pub fn uniform(max_over_t0: f64, steps: usize) -> Result<Self, ProtocolError> {
        if !(max_over_t0 > 0.0) || steps == 0 {
            return Err(ProtocolError::BadGrid {
                reason: format!("need max_over_t0 > 0 and steps > 0, got {max_over_t0}, {steps}"),
            });
        }
        let dt = max_over_t0 / steps as f64;
        Ok(TimeGrid {
            times_over_t0: (0..=steps).map(|j| j as f64 * dt).collect(),
        })
    }

    /// Explicit sample times (in units of `t0`); must be finite,
    /// nonnegative and strictly increasing.
    pub fn from_times(times_over_t0: Vec<f64>) -> Result<Self, ProtocolError> {
        if times_over_t0.is_empty() {
            return Err(ProtocolError::BadGrid { reason: "empty grid".into() });
        }
        if times_over_t0[0] < 0.0 || !times_over_t0.iter().all(|t| t.is_finite()) {
            return Err(ProtocolError::BadGrid {
                reason: "times must be finite and >= 0".into(),
            });
        }
        if times_over_t0.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ProtocolError::BadGrid {
                reason: "times must be strictly increasing".into(),
            });
        }
        Ok(TimeGrid { times_over_t0 })
    }

    /// The default sampling: `t/t0` over `[0, 20]` in 400 uniform steps.
    pub fn default_grid() -> Self {
        TimeGrid::uniform(20.0, 400).expect("default grid is valid")
    }

    pub fn times_over_t0(&self) -> &[f64] {
        &self.times_over_t0
    }

    pub fn len(&self) -> usize {
        self.times_over_t0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_over_t0.is_empty()
    }

    /// Grid spacing, assuming a uniform grid (the first interval otherwise).
    pub fn step_over_t0(&self) -> f64 {
        if self.times_over_t0.len() < 2 {
            0.0
        } else {
            self.times_over_t0[1] - self.times_over_t0[0]
        }
    }
}

/// Everything that defines one protocol run: the Hamiltonian, the initial
/// state, the epoch time, the channel axis and site, and the sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    pub hamiltonian: ModelSpec,
    pub initial_state: StateSpec,
    /// Epoch time of the instantaneous channel, in absolute units (hbar = 1).
    pub t0: f64,
    pub axis: MeasurementAxis,
    /// Site the channel acts on (1-based; the paper's convention is site 1).
    pub qdp_site: usize,
    pub grid: TimeGrid,
}

impl ProtocolSpec {
    /// Standard protocol: channel on site 1 along `z`, epoch `t0 = 0.1/|J|`,
    /// default grid.
    pub fn standard(hamiltonian: ModelSpec, initial_state: StateSpec) -> Self {
        let j_ref = hamiltonian.model.reference_coupling().abs();
        let t0 = if j_ref > 0.0 { 0.1 / j_ref } else { 0.1 };
        ProtocolSpec {
            hamiltonian,
            initial_state,
            t0,
            axis: MeasurementAxis::z(),
            qdp_site: 1,
            grid: TimeGrid::default_grid(),
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        self.hamiltonian.validate()?;
        if !(self.t0 > 0.0) || !self.t0.is_finite() {
            return Err(ProtocolError::BadEpoch { t0: self.t0 });
        }
        if self.qdp_site == 0 || self.qdp_site > self.hamiltonian.n_sites {
            return Err(ProtocolError::QdpSiteOutOfRange {
                site: self.qdp_site,
                n_sites: self.hamiltonian.n_sites,
            });
        }
        Ok(())
    }
}

impl SpectralHamiltonian {
    /// Propagate raw amplitudes by `dt`: `V e^{-i Lambda dt} V^T psi`.
    /// `dt` may be zero or negative (reverse evolution).
    pub fn evolve_vec(&self, amps: &Array1<C64>, dt: f64) -> Result<Array1<C64>, ProtocolError> {
        Ok(self.evolve_vec_grid(amps, &[dt])?.pop().expect("one time"))
    }

    /// Propagate one amplitude vector to several time offsets at once.
    ///
    /// The eigenbasis projection `V^T psi` is computed once; each requested
    /// offset then costs a diagonal phase and one back-transformation, done
    /// as two real matrix products over the whole batch.
    pub fn evolve_vec_grid(
        &self,
        amps: &Array1<C64>,
        dts: &[f64],
    ) -> Result<Vec<Array1<C64>>, ProtocolError> {
        let n = self.dim();
        if amps.len() != n {
            return Err(ProtocolError::DimensionMismatch { expected: n, got: amps.len() });
        }
        let v = self.eigenvectors();
        let re = amps.mapv(|a| a.re);
        let im = amps.mapv(|a| a.im);
        let c_re = v.t().dot(&re);
        let c_im = v.t().dot(&im);

        // columns: e^{-i lambda dt_j} .* c
        let mut m_re = Array2::<f64>::zeros((n, dts.len()));
        let mut m_im = Array2::<f64>::zeros((n, dts.len()));
        for (j, &dt) in dts.iter().enumerate() {
            for i in 0..n {
                let (s, c) = (-self.eigenvalues()[i] * dt).sin_cos();
                // (c + i s) * (c_re + i c_im)
                m_re[[i, j]] = c * c_re[i] - s * c_im[i];
                m_im[[i, j]] = c * c_im[i] + s * c_re[i];
            }
        }
        let out_re = v.dot(&m_re);
        let out_im = v.dot(&m_im);
        Ok((0..dts.len())
            .map(|j| Array1::from_iter((0..n).map(|i| C64::new(out_re[[i, j]], out_im[[i, j]]))))
            .collect())
    }

    /// Propagate a normalized state by `dt`.
    pub fn evolve(&self, state: &PureState, dt: f64) -> Result<PureState, ProtocolError> {
        let amps = self.evolve_vec(state.amps(), dt)?;
        PureState::new(state.n_sites(), amps).map_err(ProtocolError::State)
    }
}

/// Apply the projective channel along `axis` at `site`: the two unnormalized
/// branches `P0 |psi>` and `P1 |psi>` with `P0 + P1 = 1`.
///
/// Branches annihilated by a projector stay in the ensemble as explicit
/// zero vectors.
pub fn apply_channel(
    state: &PureState,
    site: usize,
    axis: MeasurementAxis,
) -> Result<BranchEnsemble, StateError> {
    let n = state.n_sites();
    if site == 0 || site > n {
        return Err(StateError::SiteOutOfRange { site, n_sites: n });
    }
    let p = axis.projector_plus();
    let mask = 1usize << (site - 1);
    let d = dim(n);
    let amps = state.amps();
    let mut b0 = Array1::<C64>::zeros(d);
    let mut b1 = Array1::<C64>::zeros(d);
    for i0 in 0..d {
        if i0 & mask != 0 {
            continue;
        }
        let i1 = i0 | mask;
        let a0 = amps[i0];
        let a1 = amps[i1];
        b0[i0] = p[0][0] * a0 + p[0][1] * a1;
        b0[i1] = p[1][0] * a0 + p[1][1] * a1;
        // P1 = 1 - P0
        b1[i0] = a0 - b0[i0];
        b1[i1] = a1 - b0[i1];
    }
    BranchEnsemble::from_branches(n, vec![b0, b1])
}

/// Paired trajectories: `with_qdp` carries the channel applied at `t0`,
/// `without_qdp` the uninterrupted evolution, both sampled on the same grid.
#[derive(Debug, Clone)]
pub struct TrajectoryPair {
    pub n_sites: usize,
    pub t0: f64,
    pub qdp_site: usize,
    pub times_over_t0: Vec<f64>,
    pub without_qdp: Vec<BranchEnsemble>,
    pub with_qdp: Vec<BranchEnsemble>,
}

impl TrajectoryPair {
    pub fn len(&self) -> usize {
        self.times_over_t0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_over_t0.is_empty()
    }

    /// Largest deviation of any stored ensemble trace from 1.
    pub fn max_trace_drift(&self) -> f64 {
        self.without_qdp
            .iter()
            .chain(self.with_qdp.iter())
            .fold(0.0f64, |m, ens| m.max((ens.trace() - 1.0).abs()))
    }
}

/// Run the full protocol for `spec`, building (and diagonalizing) the
/// Hamiltonian first.
pub fn run_protocol(spec: &ProtocolSpec) -> Result<TrajectoryPair, ProtocolError> {
    spec.validate()?;
    let h = SpectralHamiltonian::build(&spec.hamiltonian)?;
    run_protocol_with(&h, spec)
}

/// Run the protocol against an already-diagonalized Hamiltonian (shared,
/// read-only). The spec's model must match the one `h` was built from.
pub fn run_protocol_with(
    h: &SpectralHamiltonian,
    spec: &ProtocolSpec,
) -> Result<TrajectoryPair, ProtocolError> {
    spec.validate()?;
    if *h.spec() != spec.hamiltonian {
        return Err(ProtocolError::BadGrid {
            reason: "spectral Hamiltonian was built from a different model spec".into(),
        });
    }
    let n = spec.hamiltonian.n_sites;
    let psi0 = spec.initial_state.build(n)?;
    let times: Vec<f64> = spec.grid.times_over_t0().iter().map(|&x| x * spec.t0).collect();

    // uninterrupted trajectory, exact at every grid time
    let without_states = h.evolve_vec_grid(psi0.amps(), &times)?;

    // channel branches at the epoch
    let psi_t0 = h.evolve(&psi0, spec.t0)?;
    let post = apply_channel(&psi_t0, spec.qdp_site, spec.axis)?;
    let branches = post.branches();
    let dts_after: Vec<f64> = times.iter().filter(|&&t| t >= spec.t0).map(|t| t - spec.t0).collect();
    let b0_states = h.evolve_vec_grid(&branches[0], &dts_after)?;
    let b1_states = h.evolve_vec_grid(&branches[1], &dts_after)?;

    let mut without_qdp = Vec::with_capacity(times.len());
    let mut with_qdp = Vec::with_capacity(times.len());
    let mut post_idx = 0;
    for (j, &t) in times.iter().enumerate() {
        let plain = without_states[j].clone();
        if t >= spec.t0 {
            with_qdp.push(BranchEnsemble::from_branches(
                n,
                vec![b0_states[post_idx].clone(), b1_states[post_idx].clone()],
            )?);
            post_idx += 1;
        } else {
            with_qdp.push(BranchEnsemble::from_branches(n, vec![plain.clone()])?);
        }
        without_qdp.push(BranchEnsemble::from_branches(n, vec![plain])?);
    }

    Ok(TrajectoryPair {
        n_sites: n,
        t0: spec.t0,
        qdp_site: spec.qdp_site,
        times_over_t0: spec.grid.times_over_t0().to_vec(),
        without_qdp,
        with_qdp,
    })
}
