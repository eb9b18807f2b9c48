//! The five model Hamiltonians as sparse matrix elements over the
//! computational basis, plus their cached dense spectral decompositions.
//!
//! All implemented models have purely real matrix elements in this basis
//! (the `sigma^y sigma^y` bond contributes `+-1` entries), so the spectral
//! solve runs on a real symmetric matrix.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::linalg;
use crate::state::{dim, BasisIndex};

/// Dense eigensolves are refused above this chain length (a 2^14 matrix is
/// already a multi-GB working set).
pub const MAX_SITES: usize = 14;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("chain length {n_sites} exceeds the dense-solve cap of {MAX_SITES} sites")]
    TooManySites { n_sites: usize },
    #[error("chain needs at least 2 sites, got {n_sites}")]
    TooFewSites { n_sites: usize },
    #[error("coupling `{name}` must be finite, got {value}")]
    NonFiniteCoupling { name: &'static str, value: f64 },
    #[error("long-range exponent delta must be > 0, got {delta}")]
    BadDelta { delta: f64 },
    #[error("{0}")]
    Eigensolve(String),
}

/// Which model Hamiltonian, with its couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// `J sum_i sx_i sx_{i+1}`
    IsingNn { j: f64 },
    /// `sum_{i<k} J/|i-k|^delta sx_i sx_k` (all pairs once)
    IsingLongRange { j: f64, delta: f64 },
    /// `sum_i J (sx sx + sy sy) + Jz sz sz` on nearest-neighbour bonds
    Xxz { j: f64, jz: f64 },
    /// `sum_i (Jx sx sx + Jy sy sy) + h sum_i sz_i`
    Txy { jx: f64, jy: f64, h: f64 },
    /// Transverse XY plus a longitudinal field `hp sum_i sx_i`
    TxyLongitudinal { jx: f64, jy: f64, h: f64, hp: f64 },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::IsingNn { .. } => "ising-nn",
            Model::IsingLongRange { .. } => "ising-long-range",
            Model::Xxz { .. } => "xxz",
            Model::Txy { .. } => "txy",
            Model::TxyLongitudinal { .. } => "txy-longitudinal",
        }
    }

    /// The coupling that sets the model's time scale (`J`, or `Jx` for the
    /// XY family); used for the default epoch time `t0 = 0.1/|J|`.
    pub fn reference_coupling(&self) -> f64 {
        match *self {
            Model::IsingNn { j } | Model::IsingLongRange { j, .. } | Model::Xxz { j, .. } => j,
            Model::Txy { jx, .. } | Model::TxyLongitudinal { jx, .. } => jx,
        }
    }

    fn couplings(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Model::IsingNn { j } => vec![("J", j)],
            Model::IsingLongRange { j, delta } => vec![("J", j), ("delta", delta)],
            Model::Xxz { j, jz } => vec![("J", j), ("Jz", jz)],
            Model::Txy { jx, jy, h } => vec![("Jx", jx), ("Jy", jy), ("h", h)],
            Model::TxyLongitudinal { jx, jy, h, hp } => {
                vec![("Jx", jx), ("Jy", jy), ("h", h), ("hp", hp)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

/// A model, a chain length and a boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub model: Model,
    pub n_sites: usize,
    pub boundary: Boundary,
}

impl ModelSpec {
    pub fn open(model: Model, n_sites: usize) -> Self {
        ModelSpec { model, n_sites, boundary: Boundary::Open }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n_sites < 2 {
            return Err(ModelError::TooFewSites { n_sites: self.n_sites });
        }
        if self.n_sites > MAX_SITES {
            return Err(ModelError::TooManySites { n_sites: self.n_sites });
        }
        for (name, value) in self.model.couplings() {
            if !value.is_finite() {
                return Err(ModelError::NonFiniteCoupling { name, value });
            }
        }
        if let Model::IsingLongRange { delta, .. } = self.model {
            if delta <= 0.0 {
                return Err(ModelError::BadDelta { delta });
            }
        }
        Ok(())
    }

    /// Nearest-neighbour bonds `(a, b)` with 1-based sites; periodic
    /// boundaries add the `(N, 1)` bond.
    fn nn_bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<(usize, usize)> = (1..self.n_sites).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((self.n_sites, 1));
        }
        bonds
    }
}

/// Sparse matrix elements `H[row][col] = value`; only `row <= col` is stored,
/// the mirror entry is implied by symmetry.
#[derive(Debug, Clone)]
pub struct MatrixElements {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl MatrixElements {
    pub fn to_dense(&self) -> Array2<f64> {
        let mut h = Array2::zeros((self.dim, self.dim));
        for &(r, c, v) in &self.entries {
            h[[r, c]] += v;
            if r != c {
                h[[c, r]] += v;
            }
        }
        h
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, &(_, _, v)| m.max(v.abs()))
    }
}

/// Assemble the matrix elements of `spec` over the computational basis.
pub fn build_elements(spec: &ModelSpec) -> Result<MatrixElements, ModelError> {
    spec.validate()?;
    let n = spec.n_sites;
    let d = dim(n);
    let mut diag = vec![0.0f64; d];
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();

    let add_sxsx = |entries: &mut Vec<(usize, usize, f64)>, a: usize, b: usize, coeff: f64| {
        let mask = (1usize << (a - 1)) | (1usize << (b - 1));
        for i in 0..d {
            let j = i ^ mask;
            if i < j {
                entries.push((i, j, coeff));
            }
        }
    };

    match spec.model {
        Model::IsingNn { j } => {
            for (a, b) in spec.nn_bonds() {
                add_sxsx(&mut entries, a, b, j);
            }
        }
        Model::IsingLongRange { j, delta } => {
            // all pairs once; distance is the linear index separation
            for a in 1..=n {
                for b in (a + 1)..=n {
                    let coeff = j / ((b - a) as f64).powf(delta);
                    add_sxsx(&mut entries, a, b, coeff);
                }
            }
        }
        Model::Xxz { j, jz } => {
            for (a, b) in spec.nn_bonds() {
                let ma = 1usize << (a - 1);
                let mb = 1usize << (b - 1);
                for i in 0..d {
                    let bit_a = i & ma != 0;
                    let bit_b = i & mb != 0;
                    // sz sz bond
                    diag[i] += if bit_a == bit_b { jz } else { -jz };
                    // sx sx + sy sy: flip-flop with amplitude 2J on
                    // anti-aligned pairs only
                    if bit_a != bit_b {
                        let k = i ^ (ma | mb);
                        if i < k {
                            entries.push((i, k, 2.0 * j));
                        }
                    }
                }
            }
        }
        Model::Txy { jx, jy, h } => {
            build_txy(spec, jx, jy, h, &mut diag, &mut entries);
        }
        Model::TxyLongitudinal { jx, jy, h, hp } => {
            build_txy(spec, jx, jy, h, &mut diag, &mut entries);
            for a in 1..=n {
                let ma = 1usize << (a - 1);
                for i in 0..d {
                    let j = i ^ ma;
                    if i < j {
                        entries.push((i, j, hp));
                    }
                }
            }
        }
    }

    for (i, &v) in diag.iter().enumerate() {
        if v != 0.0 {
            entries.push((i, i, v));
        }
    }
    Ok(MatrixElements { dim: d, entries })
}

fn build_txy(
    spec: &ModelSpec,
    jx: f64,
    jy: f64,
    h: f64,
    diag: &mut [f64],
    entries: &mut Vec<(usize, usize, f64)>,
) {
    let d = diag.len();
    for (a, b) in spec.nn_bonds() {
        let ma = 1usize << (a - 1);
        let mb = 1usize << (b - 1);
        for i in 0..d {
            let j = i ^ (ma | mb);
            if i < j {
                // <j| sx sx |i> = 1; <j| sy sy |i> = -1 if the two bits
                // agree, +1 if they differ
                let yy = if (i & ma != 0) == (i & mb != 0) { -1.0 } else { 1.0 };
                let v = jx + jy * yy;
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
    }
    for a in 1..=spec.n_sites {
        let ma = 1usize << (a - 1);
        for (i, slot) in diag.iter_mut().enumerate() {
            *slot += if i & ma == 0 { h } else { -h };
        }
    }
}

/// Whether `spec` commutes with the magnon-parity operator
/// `Pi = (-1)^(number of down spins)`, decided by an explicit commutator
/// test on the matrix elements.
pub fn conserves_parity(spec: &ModelSpec) -> Result<bool, ModelError> {
    let elems = build_elements(spec)?;
    Ok(commutes_with_diagonal(&elems, |code| {
        if BasisIndex(code).parity() == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Whether `spec` commutes with the total `sum_l sigma^z_l`.
pub fn conserves_total_sz(spec: &ModelSpec) -> Result<bool, ModelError> {
    let n = spec.n_sites as f64;
    let elems = build_elements(spec)?;
    Ok(commutes_with_diagonal(&elems, |code| {
        n - 2.0 * BasisIndex(code).magnon_number() as f64
    }))
}

/// Max-norm commutator test against a diagonal operator:
/// `[H, D]_{ij} = H_ij (d_j - d_i)`.
fn commutes_with_diagonal(elems: &MatrixElements, diag: impl Fn(usize) -> f64) -> bool {
    const COMMUTATOR_TOL: f64 = 1e-10;
    elems
        .entries
        .iter()
        .all(|&(i, j, v)| (v * (diag(j) - diag(i))).abs() < COMMUTATOR_TOL)
}

/// Basis codes of the k-magnon sector, a validation utility for the
/// block structure of number-conserving models.
pub fn magnon_sector_codes(n_sites: usize, magnons: u32) -> Vec<usize> {
    (0..dim(n_sites))
        .filter(|&code| BasisIndex(code).magnon_number() == magnons)
        .collect()
}

/// A Hermitian model Hamiltonian together with its cached eigendecomposition,
/// enabling exact propagation over arbitrary time steps.
#[derive(Debug, Clone)]
pub struct SpectralHamiltonian {
    spec: ModelSpec,
    matrix: Array2<f64>,
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<f64>,
}

impl SpectralHamiltonian {
    /// Build the dense matrix and diagonalize it.
    pub fn build(spec: &ModelSpec) -> Result<Self, ModelError> {
        let elems = build_elements(spec)?;
        let matrix = elems.to_dense();
        let (eigenvalues, eigenvectors) =
            linalg::eigh_real(&matrix).map_err(ModelError::Eigensolve)?;
        Ok(SpectralHamiltonian { spec: *spec, matrix, eigenvalues, eigenvectors })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn n_sites(&self) -> usize {
        self.spec.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Array2<f64> {
        &self.eigenvectors
    }

    /// Largest residual entry of `H V - V Lambda`.
    pub fn decomposition_residual(&self) -> f64 {
        let hv = self.matrix.dot(&self.eigenvectors);
        let mut worst = 0.0f64;
        for (j, lambda) in self.eigenvalues.iter().enumerate() {
            for i in 0..self.dim() {
                worst = worst.max((hv[[i, j]] - lambda * self.eigenvectors[[i, j]]).abs());
            }
        }
        worst
    }

    pub fn max_abs_element(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;

    /// Independent 4x4 oracle: assemble two-site operators by explicit
    /// Kronecker products of 2x2 blocks (site 1 is the fast index).
    fn kron2(site2: [[f64; 2]; 2], site1: [[f64; 2]; 2]) -> Array2<f64> {
        let mut m = Array2::zeros((4, 4));
        for r2 in 0..2 {
            for c2 in 0..2 {
                for r1 in 0..2 {
                    for c1 in 0..2 {
                        m[[r2 * 2 + r1, c2 * 2 + c1]] = site2[r2][c2] * site1[r1][c1];
                    }
                }
            }
        }
        m
    }

    const SX: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
    const SZ: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];
    const ID: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
    // sy (x) sy is real: fold the two factors of i into the product
    // (i sy = [[0, 1], [-1, 0]]), so sy sy = -(i sy)(x)(i sy).
    const ISY: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

    fn sorted_eigenvalues(m: &Array2<f64>) -> Vec<f64> {
        let (vals, _) = crate::linalg::eigh_real(m).unwrap();
        vals.to_vec()
    }

    #[test]
    fn ising_nn_two_site_spectrum() {
        let spec = ModelSpec::open(Model::IsingNn { j: 1.0 }, 2);
        let h = SpectralHamiltonian::build(&spec).unwrap();
        let oracle = kron2(SX, SX);
        let expect = sorted_eigenvalues(&oracle);
        for (got, want) in h.eigenvalues().iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        let frozen = [-1.0, -1.0, 1.0, 1.0];
        for (got, want) in h.eigenvalues().iter().zip(frozen.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn xxz_two_site_spectrum() {
        let spec = ModelSpec::open(Model::Xxz { j: 1.0, jz: 0.5 }, 2);
        let h = SpectralHamiltonian::build(&spec).unwrap();
        let mut oracle = kron2(SX, SX);
        oracle = oracle - kron2(ISY, ISY); // + sy sy
        oracle = oracle + 0.5 * kron2(SZ, SZ);
        let expect = sorted_eigenvalues(&oracle);
        for (got, want) in h.eigenvalues().iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        let frozen = [-2.5, 0.5, 0.5, 1.5];
        for (got, want) in h.eigenvalues().iter().zip(frozen.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn txy_field_only_spectrum() {
        let spec = ModelSpec::open(Model::Txy { jx: 0.0, jy: 0.0, h: 1.0 }, 2);
        let h = SpectralHamiltonian::build(&spec).unwrap();
        let oracle = kron2(SZ, ID) + kron2(ID, SZ);
        let expect = sorted_eigenvalues(&oracle);
        for (got, want) in h.eigenvalues().iter().zip(expect.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        let frozen = [-2.0, 0.0, 0.0, 2.0];
        for (got, want) in h.eigenvalues().iter().zip(frozen.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn txy_three_site_matches_kron_oracle() {
        // explicit 8x8 assembly, open chain
        let (jx, jy, h) = (0.7, 0.3, 1.0);
        let spec = ModelSpec::open(Model::Txy { jx, jy, h }, 3);
        let built = build_elements(&spec).unwrap().to_dense();

        let kron3 = |m3: [[f64; 2]; 2], m2: [[f64; 2]; 2], m1: [[f64; 2]; 2]| {
            let mut m = Array2::zeros((8, 8));
            for r3 in 0..2 {
                for c3 in 0..2 {
                    for r2 in 0..2 {
                        for c2 in 0..2 {
                            for r1 in 0..2 {
                                for c1 in 0..2 {
                                    m[[r3 * 4 + r2 * 2 + r1, c3 * 4 + c2 * 2 + c1]] =
                                        m3[r3][c3] * m2[r2][c2] * m1[r1][c1];
                                }
                            }
                        }
                    }
                }
            }
            m
        };
        let mut oracle = Array2::<f64>::zeros((8, 8));
        oracle = oracle + jx * kron3(ID, SX, SX) + jx * kron3(SX, SX, ID);
        oracle = oracle - jy * kron3(ID, ISY, ISY) - jy * kron3(ISY, ISY, ID);
        oracle = oracle + h * (kron3(ID, ID, SZ) + kron3(ID, SZ, ID) + kron3(SZ, ID, ID));
        let diff = (&built - &oracle).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(diff < 1e-14, "max element mismatch {diff}");
    }

    #[test]
    fn hermiticity_and_residual_bounds() {
        let specs = [
            ModelSpec::open(Model::IsingNn { j: 1.0 }, 6),
            ModelSpec::open(Model::IsingLongRange { j: 1.0, delta: 1.0 }, 6),
            ModelSpec::open(Model::Xxz { j: 1.0, jz: 0.5 }, 6),
            ModelSpec::open(Model::Txy { jx: 0.7, jy: 0.3, h: 1.0 }, 6),
            ModelSpec::open(Model::TxyLongitudinal { jx: 0.7, jy: 0.3, h: 1.0, hp: 1.0 }, 6),
        ];
        for spec in &specs {
            let h = SpectralHamiltonian::build(spec).unwrap();
            let m = h.matrix();
            let mut asym = 0.0f64;
            for i in 0..h.dim() {
                for j in 0..h.dim() {
                    asym = asym.max((m[[i, j]] - m[[j, i]]).abs());
                }
            }
            assert!(asym < 1e-12);
            assert!(h.decomposition_residual() < 1e-9 * h.max_abs_element().max(1.0));
        }
    }

    #[test]
    fn ising_nn_spectrum_symmetric_about_zero() {
        let spec = ModelSpec::open(Model::IsingNn { j: 1.0 }, 7);
        let h = SpectralHamiltonian::build(&spec).unwrap();
        let vals = h.eigenvalues();
        let n = vals.len();
        for i in 0..n {
            assert_abs_diff_eq!(vals[i], -vals[n - 1 - i], epsilon = 1e-10);
        }
    }

    #[test]
    fn long_range_large_delta_approaches_nearest_neighbour() {
        let n = 8;
        let lr = SpectralHamiltonian::build(&ModelSpec::open(
            Model::IsingLongRange { j: 1.0, delta: 50.0 },
            n,
        ))
        .unwrap();
        let nn = SpectralHamiltonian::build(&ModelSpec::open(Model::IsingNn { j: 1.0 }, n)).unwrap();
        for (a, b) in lr.eigenvalues().iter().zip(nn.eigenvalues().iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10 * n as f64);
        }
    }

    #[test]
    fn xxz_connects_only_equal_magnon_sectors() {
        let spec = ModelSpec { model: Model::Xxz { j: 0.8, jz: 0.3 }, n_sites: 6, boundary: Boundary::Periodic };
        let elems = build_elements(&spec).unwrap();
        for &(i, j, v) in &elems.entries {
            if v != 0.0 {
                assert_eq!(
                    BasisIndex(i).magnon_number(),
                    BasisIndex(j).magnon_number(),
                    "element ({i},{j}) crosses magnon sectors"
                );
            }
        }
    }

    #[test]
    fn conservation_laws() {
        let xxz = ModelSpec::open(Model::Xxz { j: 1.3, jz: -0.7 }, 5);
        assert!(conserves_parity(&xxz).unwrap());
        assert!(conserves_total_sz(&xxz).unwrap());

        let txy = ModelSpec::open(Model::Txy { jx: 0.7, jy: 0.3, h: 1.0 }, 5);
        assert!(conserves_parity(&txy).unwrap());
        assert!(!conserves_total_sz(&txy).unwrap());

        let xx = ModelSpec::open(Model::Txy { jx: 0.5, jy: 0.5, h: 0.9 }, 5);
        assert!(conserves_total_sz(&xx).unwrap());

        let nonint = ModelSpec::open(Model::TxyLongitudinal { jx: 0.7, jy: 0.3, h: 1.0, hp: 1.0 }, 5);
        assert!(!conserves_parity(&nonint).unwrap());

        let trivial = ModelSpec::open(Model::TxyLongitudinal { jx: 0.7, jy: 0.3, h: 1.0, hp: 0.0 }, 5);
        assert!(conserves_parity(&trivial).unwrap());
    }

    #[test]
    fn periodic_boundary_adds_wrap_bond() {
        let open = build_elements(&ModelSpec::open(Model::IsingNn { j: 1.0 }, 3)).unwrap();
        let per = build_elements(&ModelSpec {
            model: Model::IsingNn { j: 1.0 },
            n_sites: 3,
            boundary: Boundary::Periodic,
        })
        .unwrap();
        assert_eq!(per.entries.len(), open.entries.len() + dim(3) / 2);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            ModelSpec::open(Model::IsingNn { j: 1.0 }, 15).validate(),
            Err(ModelError::TooManySites { .. })
        ));
        assert!(matches!(
            ModelSpec::open(Model::IsingNn { j: 1.0 }, 1).validate(),
            Err(ModelError::TooFewSites { .. })
        ));
        assert!(matches!(
            ModelSpec::open(Model::IsingLongRange { j: 1.0, delta: 0.0 }, 4).validate(),
            Err(ModelError::BadDelta { .. })
        ));
        assert!(matches!(
            ModelSpec::open(Model::Xxz { j: f64::NAN, jz: 0.0 }, 4).validate(),
            Err(ModelError::NonFiniteCoupling { .. })
        ));
    }
}
