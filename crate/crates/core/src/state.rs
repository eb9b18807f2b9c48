//! Basis indexing, pure states, branch ensembles, single-site marginals and
//! their von Neumann entropy.
//!
//! Conventions, fixed once for the whole crate:
//! * sites are numbered `1..=N`; site `s` lives on bit `s - 1` of the basis
//!   code (site 1 is the least-significant bit),
//! * bit value 0 is the `|0>` state with `sigma^z` eigenvalue `+1`; bit value
//!   1 is the down spin `|1>` with eigenvalue `-1`,
//! * the magnon number of a basis state is its popcount.

use ndarray::Array1;
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Tolerance on norms and traces of states that claim to be normalized.
pub const NORM_TOL: f64 = 1e-12;
/// Amplitudes with modulus below this are treated as zero when classifying
/// magnon parity.
pub const AMP_ZERO_TOL: f64 = 1e-12;
/// A marginal eigenvalue below `-NEG_EIG_TOL` is a positivity violation.
pub const NEG_EIG_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("site {site} out of range for a {n_sites}-site chain")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("state not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("ensemble trace {trace} differs from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },
    #[error("amplitude vector has length {got}, expected {expected}")]
    BadDimension { expected: usize, got: usize },
    #[error("state has zero norm, cannot normalize")]
    ZeroNorm,
    #[error("marginal positivity violation: eigenvalue {eigenvalue}")]
    PositivityViolation { eigenvalue: f64 },
    #[error("basis code {code} out of range for {n_sites} sites")]
    CodeOutOfRange { code: usize, n_sites: usize },
}

/// Hilbert-space dimension of an `n_sites` chain.
pub fn dim(n_sites: usize) -> usize {
    1usize << n_sites
}

/// Index of a computational basis state `|s_1 s_2 .. s_N>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    /// Number of down spins (bits set).
    pub fn magnon_number(self) -> u32 {
        self.0.count_ones()
    }

    /// Magnon-number parity: 0 for even, 1 for odd.
    pub fn parity(self) -> u32 {
        self.0.count_ones() & 1
    }

    /// `sigma^z` eigenvalue (+1 or -1) at 1-based `site`.
    pub fn sigma_z(self, site: usize) -> i32 {
        if (self.0 >> (site - 1)) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Whether `site` carries a down spin.
    pub fn is_down(self, site: usize) -> bool {
        (self.0 >> (site - 1)) & 1 == 1
    }

    /// Basis index with the spin at `site` flipped.
    pub fn flipped(self, site: usize) -> BasisIndex {
        BasisIndex(self.0 ^ (1 << (site - 1)))
    }
}

/// Magnon-parity content of a state's support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagnonParity {
    EvenOnly,
    OddOnly,
    Mixed,
}

/// A normalized pure state on the `2^N` computational basis.
#[derive(Debug, Clone)]
pub struct PureState {
    n_sites: usize,
    amps: Array1<C64>,
}

impl PureState {
    /// Wrap an amplitude vector that is already normalized (within
    /// [`NORM_TOL`]).
    pub fn new(n_sites: usize, amps: Array1<C64>) -> Result<Self, StateError> {
        if amps.len() != dim(n_sites) {
            return Err(StateError::BadDimension {
                expected: dim(n_sites),
                got: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized { norm_sq });
        }
        Ok(PureState { n_sites, amps })
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn from_unnormalized(n_sites: usize, amps: Array1<C64>) -> Result<Self, StateError> {
        if amps.len() != dim(n_sites) {
            return Err(StateError::BadDimension {
                expected: dim(n_sites),
                got: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(StateError::ZeroNorm);
        }
        let scale = norm_sq.sqrt().recip();
        Ok(PureState {
            n_sites,
            amps: amps.mapv(|a| a * scale),
        })
    }

    /// The computational basis state with the given code.
    pub fn basis_state(n_sites: usize, code: usize) -> Result<Self, StateError> {
        if code >= dim(n_sites) {
            return Err(StateError::CodeOutOfRange { code, n_sites });
        }
        let mut amps = Array1::zeros(dim(n_sites));
        amps[code] = C64::new(1.0, 0.0);
        Ok(PureState { n_sites, amps })
    }

    /// Normalized superposition of basis states with the given weights.
    pub fn superposition(n_sites: usize, terms: &[(usize, C64)]) -> Result<Self, StateError> {
        let mut amps = Array1::zeros(dim(n_sites));
        for &(code, w) in terms {
            if code >= dim(n_sites) {
                return Err(StateError::CodeOutOfRange { code, n_sites });
            }
            amps[code] += w;
        }
        Self::from_unnormalized(n_sites, amps)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amps(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Classify the support of the state by magnon-number parity.
    /// Amplitudes below [`AMP_ZERO_TOL`] count as zero.
    pub fn magnon_parity(&self) -> MagnonParity {
        let mut even = false;
        let mut odd = false;
        for (code, a) in self.amps.iter().enumerate() {
            if a.norm() < AMP_ZERO_TOL {
                continue;
            }
            if BasisIndex(code).parity() == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (true, false) | (false, false) => MagnonParity::EvenOnly,
            (false, true) => MagnonParity::OddOnly,
            (true, true) => MagnonParity::Mixed,
        }
    }

    /// Overlap `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// An unnormalized-branch decomposition of a mixed state,
/// `rho = sum_b |b><b|`, with `sum_b |b|^2 = 1`.
///
/// Pre-channel states carry one branch; the post-channel state carries two,
/// one per Kraus operator. Zero-norm branches are legal and kept explicit.
#[derive(Debug, Clone)]
pub struct BranchEnsemble {
    n_sites: usize,
    branches: Vec<Array1<C64>>,
}

impl BranchEnsemble {
    pub fn from_pure(state: &PureState) -> Self {
        BranchEnsemble {
            n_sites: state.n_sites,
            branches: vec![state.amps.clone()],
        }
    }

    /// Wrap raw branches; their squared norms must sum to 1 within
    /// [`NORM_TOL`].
    pub fn from_branches(n_sites: usize, branches: Vec<Array1<C64>>) -> Result<Self, StateError> {
        for b in &branches {
            if b.len() != dim(n_sites) {
                return Err(StateError::BadDimension {
                    expected: dim(n_sites),
                    got: b.len(),
                });
            }
        }
        let ens = BranchEnsemble { n_sites, branches };
        let trace = ens.trace();
        if (trace - 1.0).abs() > NORM_TOL {
            return Err(StateError::TraceNotOne { trace });
        }
        Ok(ens)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn branches(&self) -> &[Array1<C64>] {
        &self.branches
    }

    /// `Tr rho = sum_b |b|^2`.
    pub fn trace(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.iter().map(|a| a.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Single-site reduced density matrix at 1-based `site`, obtained by
    /// tracing out every other site of every branch.
    pub fn reduced_qubit_dm(&self, site: usize) -> Result<QubitReducedDM, StateError> {
        if site == 0 || site > self.n_sites {
            return Err(StateError::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        let mask = 1usize << (site - 1);
        let mut m00 = 0.0;
        let mut m11 = 0.0;
        let mut m01 = C64::new(0.0, 0.0);
        for b in &self.branches {
            for code in 0..b.len() {
                if code & mask == 0 {
                    let a0 = b[code];
                    let a1 = b[code | mask];
                    m00 += a0.norm_sqr();
                    m11 += a1.norm_sqr();
                    m01 += a0 * a1.conj();
                }
            }
        }
        Ok(QubitReducedDM { m00, m11, m01 })
    }

    /// `<sigma^z_site>`.
    pub fn sigma_z(&self, site: usize) -> Result<f64, StateError> {
        let dm = self.reduced_qubit_dm(site)?;
        Ok(dm.m00 - dm.m11)
    }

    /// `<sigma^+_site>`, the upper off-diagonal element of the marginal.
    pub fn sigma_plus(&self, site: usize) -> Result<C64, StateError> {
        Ok(self.reduced_qubit_dm(site)?.m01)
    }
}

/// Hermitian 2x2 single-site marginal in the `sigma^z` eigenbasis:
/// `[[m00, m01], [conj(m01), m11]]`.
#[derive(Debug, Clone, Copy)]
pub struct QubitReducedDM {
    pub m00: f64,
    pub m11: f64,
    pub m01: C64,
}

impl QubitReducedDM {
    /// Eigenvalues, computed directly from the matrix: the pair
    /// `tr/2 +- sqrt((m00-m11)^2/4 + |m01|^2)`, descending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.m00 + self.m11);
        let r = (0.25 * (self.m00 - self.m11).powi(2) + self.m01.norm_sqr()).sqrt();
        (mean + r, mean - r)
    }

    /// Von Neumann entropy in nats, with `0 log 0 = 0`.
    ///
    /// Fails if an eigenvalue is negative beyond [`NEG_EIG_TOL`]; smaller
    /// negative round-off is clamped to zero.
    pub fn von_neumann_entropy(&self) -> Result<f64, StateError> {
        let (hi, lo) = self.eigenvalues();
        let mut s = 0.0;
        for lambda in [hi, lo] {
            if lambda < -NEG_EIG_TOL {
                return Err(StateError::PositivityViolation { eigenvalue: lambda });
            }
            let l = lambda.clamp(0.0, 1.0);
            if l > 0.0 {
                s -= l * l.ln();
            }
        }
        Ok(s)
    }

    /// Entropy in bits.
    pub fn entropy_bits(&self) -> Result<f64, StateError> {
        Ok(self.von_neumann_entropy()? / std::f64::consts::LN_2)
    }

    /// Check trace, population bounds and positivity within the stated
    /// tolerances.
    pub fn validate(&self) -> Result<(), StateError> {
        let trace = self.m00 + self.m11;
        if (trace - 1.0).abs() > NORM_TOL {
            return Err(StateError::TraceNotOne { trace });
        }
        if self.m01.norm_sqr() > self.m00 * self.m11 + NORM_TOL {
            let (_, lo) = self.eigenvalues();
            return Err(StateError::PositivityViolation { eigenvalue: lo });
        }
        Ok(())
    }
}

/// Measurement axis `n = (sin t cos p, sin t sin p, cos t)` for the
/// single-site channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAxis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAxis {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementAxis { theta, phi }
    }

    /// The `z` axis (parity-preserving channel).
    pub fn z() -> Self {
        MeasurementAxis { theta: 0.0, phi: 0.0 }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// 2x2 projector `P0 = (1 + n.sigma)/2` in the `sigma^z` basis, as rows
    /// `[[p00, p01], [p10, p11]]`.
    pub fn projector_plus(&self) -> [[C64; 2]; 2] {
        let c = self.theta.cos();
        let s = self.theta.sin();
        let phase = C64::new(self.phi.cos(), self.phi.sin());
        [
            [C64::new(0.5 * (1.0 + c), 0.0), 0.5 * s * phase.conj()],
            [0.5 * s * phase, C64::new(0.5 * (1.0 - c), 0.0)],
        ]
    }
}

/// A named or explicit initial state, the form used by protocol
/// configurations.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `|00..0>`
    AllZero,
    /// `|11..1>`
    AllOne,
    /// `(|00..0> + |11..1>)/sqrt(2)`
    Ghz,
    /// Weighted superposition of basis codes, normalized on build.
    Superposition(Vec<(usize, C64)>),
    /// Explicit amplitude vector of length `2^N`, normalized on build.
    Amplitudes(Vec<C64>),
}

impl StateSpec {
    pub fn build(&self, n_sites: usize) -> Result<PureState, StateError> {
        let one = C64::new(1.0, 0.0);
        match self {
            StateSpec::AllZero => PureState::basis_state(n_sites, 0),
            StateSpec::AllOne => PureState::basis_state(n_sites, dim(n_sites) - 1),
            StateSpec::Ghz => {
                PureState::superposition(n_sites, &[(0, one), (dim(n_sites) - 1, one)])
            }
            StateSpec::Superposition(terms) => PureState::superposition(n_sites, terms),
            StateSpec::Amplitudes(amps) => {
                PureState::from_unnormalized(n_sites, Array1::from_vec(amps.clone()))
            }
        }
    }

    /// Whether the spec denotes the ferromagnetic vacuum `|00..0>`.
    pub fn is_all_zero(&self) -> bool {
        match self {
            StateSpec::AllZero => true,
            StateSpec::Superposition(terms) => {
                let mut weight0 = C64::new(0.0, 0.0);
                let mut rest = 0.0;
                for &(code, w) in terms {
                    if code == 0 {
                        weight0 += w;
                    } else {
                        rest += w.norm_sqr();
                    }
                }
                rest == 0.0 && weight0.norm_sqr() > 0.0
            }
            _ => false,
        }
    }
}
