//! Free-fermion solver for the transverse-XY chain.
//!
//! Under the Jordan-Wigner mapping (down spin = occupied mode,
//! `sz_l = 1 - 2 c_l^+ c_l`) the open-chain XY Hamiltonian is quadratic:
//!
//! ```text
//! H = sum_i (Jx+Jy)(c_i^+ c_{i+1} + h.c.) + (Jx-Jy)(c_i^+ c_{i+1}^+ + h.c.)
//!     - 2h sum_i c_i^+ c_i  + const
//! ```
//!
//! The vacuum `|00..0>` stays Gaussian under this evolution and under the
//! site-1 number projectors of the `z`-axis channel, so every detector
//! expectation reduces to Wick contractions over a 2N x 2N correlator
//! matrix, at O(N^3) per time step instead of O(4^N).
//!
//! The momentum-space Bogoliubov modes `(u_q, v_q, omega_q)` of the
//! periodic chain are provided separately for spectrum-level checks; the
//! anisotropy term in the dispersion is `(Jx - Jy) sin q`, which is what
//! closes the gap in the isotropic zero-field limit.

use ndarray::{Array1, Array2};

use crate::linalg;
use crate::oracles::OracleError;
use crate::state::C64;

/// One Bogoliubov quasiparticle of the periodic transverse-XY chain.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovMode {
    pub q: f64,
    pub u: f64,
    pub v: f64,
    pub omega: f64,
}

/// Quasiparticle data at momentum `q`:
/// `omega_q = 2 sqrt([(Jx+Jy) cos q + h]^2 + [(Jx-Jy) sin q]^2)`,
/// `u_q = sqrt(1/2 + ((Jx+Jy) cos q + h)/omega_q)`, `v_q = sqrt(1 - u_q^2)`.
pub fn txy_dispersion(q: f64, jx: f64, jy: f64, h: f64) -> BogoliubovMode {
    let xi = (jx + jy) * q.cos() + h;
    let delta = (jx - jy) * q.sin();
    let omega = 2.0 * (xi * xi + delta * delta).sqrt();
    let u = if omega > 0.0 {
        (0.5 + xi / omega).sqrt()
    } else {
        0.5f64.sqrt() // gapless point: any rotation diagonalizes
    };
    let v = (1.0 - u * u).max(0.0).sqrt();
    BogoliubovMode { q, u, v, omega }
}

/// The 2x2 Bogoliubov-de Gennes block at momentum `q`, with eigenvalues
/// `+- omega_q / 2`.
pub fn bdg_block(q: f64, jx: f64, jy: f64, h: f64) -> [[f64; 2]; 2] {
    let xi = (jx + jy) * q.cos() + h;
    let delta = (jx - jy) * q.sin();
    [[xi, delta], [delta, -xi]]
}

/// Open-chain quadratic Hamiltonian in the Nambu basis
/// `alpha = (c_1..c_N, c_1^+..c_N^+)`, with its eigendecomposition cached;
/// Heisenberg evolution is `alpha(t) = e^{-iMt} alpha(0)`.
#[derive(Debug, Clone)]
pub struct QuadraticChain {
    n: usize,
    evals: Array1<f64>,
    evecs: Array2<f64>,
}

impl QuadraticChain {
    pub fn open_txy(n_sites: usize, jx: f64, jy: f64, h: f64) -> Result<Self, OracleError> {
        if n_sites < 2 {
            return Err(OracleError::BadParameter(format!(
                "need at least 2 sites, got {n_sites}"
            )));
        }
        for (name, v) in [("Jx", jx), ("Jy", jy), ("h", h)] {
            if !v.is_finite() {
                return Err(OracleError::BadParameter(format!("{name} = {v} not finite")));
            }
        }
        let n = n_sites;
        let mut m = Array2::<f64>::zeros((2 * n, 2 * n));
        // A block (hopping + field), B block (pairing)
        for i in 0..n {
            m[[i, i]] = -2.0 * h;
            m[[n + i, n + i]] = 2.0 * h;
        }
        for i in 0..n - 1 {
            let hop = jx + jy;
            let pair = jx - jy;
            m[[i, i + 1]] = hop;
            m[[i + 1, i]] = hop;
            m[[n + i, n + i + 1]] = -hop;
            m[[n + i + 1, n + i]] = -hop;
            // B antisymmetric: B[i, i+1] = pair
            m[[i, n + i + 1]] = pair;
            m[[i + 1, n + i]] = -pair;
            m[[n + i, i + 1]] = -pair;
            m[[n + i + 1, i]] = pair;
        }
        let (evals, evecs) = linalg::eigh_real(&m).map_err(OracleError::Eigensolve)?;
        Ok(QuadraticChain { n, evals, evecs })
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    /// Heisenberg coefficients after time `tau`:
    /// `c_j(tau) = sum_k P[j,k] c_k + Q[j,k] c_k^+`.
    pub fn heisenberg_coefficients(&self, tau: f64) -> (Array2<C64>, Array2<C64>) {
        let d = 2 * self.n;
        // W = V e^{-i lambda tau} V^T, assembled from two real products
        let mut phase_re = Array2::<f64>::zeros((d, d));
        let mut phase_im = Array2::<f64>::zeros((d, d));
        for k in 0..d {
            let (s, c) = (-self.evals[k] * tau).sin_cos();
            for j in 0..d {
                phase_re[[k, j]] = c * self.evecs[[j, k]];
                phase_im[[k, j]] = s * self.evecs[[j, k]];
            }
        }
        let w_re = self.evecs.dot(&phase_re);
        let w_im = self.evecs.dot(&phase_im);
        let mut p = Array2::from_elem((self.n, self.n), C64::new(0.0, 0.0));
        let mut q = p.clone();
        for j in 0..self.n {
            for k in 0..self.n {
                p[[j, k]] = C64::new(w_re[[j, k]], w_im[[j, k]]);
                q[[j, k]] = C64::new(w_re[[j, self.n + k]], w_im[[j, self.n + k]]);
            }
        }
        (p, q)
    }

    /// Correlators of the vacuum evolved for time `t`, as a Gaussian state.
    pub fn evolved_vacuum_covariance(&self, t: f64) -> FermionCovariance {
        let (p, q) = self.heisenberg_coefficients(t);
        let n = self.n;
        // C_ij = <c_i^+ c_j> = (Q* Q^T)_ij ; F_ij = <c_i c_j> = (P Q^T)_ij
        let mut c = Array2::from_elem((n, n), C64::new(0.0, 0.0));
        let mut f = c.clone();
        for i in 0..n {
            for j in 0..n {
                let mut cc = C64::new(0.0, 0.0);
                let mut ff = C64::new(0.0, 0.0);
                for k in 0..n {
                    cc += q[[i, k]].conj() * q[[j, k]];
                    ff += p[[i, k]] * q[[j, k]];
                }
                c[[i, j]] = cc;
                f[[i, j]] = ff;
            }
        }
        FermionCovariance { n, c, f }
    }
}

/// Pair correlators of a Gaussian fermionic state: the occupation block
/// `C_ij = <c_i^+ c_j>` and the anomalous block `F_ij = <c_i c_j>`.
#[derive(Debug, Clone)]
pub struct FermionCovariance {
    n: usize,
    c: Array2<C64>,
    f: Array2<C64>,
}

impl FermionCovariance {
    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn occupation_block(&self) -> &Array2<C64> {
        &self.c
    }

    pub fn anomalous_block(&self) -> &Array2<C64> {
        &self.f
    }

    /// Full 2N x 2N contraction matrix `Gamma_ab = <alpha_a alpha_b>` over
    /// the Nambu basis `alpha = (c_1..c_N, c_1^+..c_N^+)`.
    pub fn contraction_matrix(&self) -> Array2<C64> {
        let n = self.n;
        let mut g = Array2::from_elem((2 * n, 2 * n), C64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                g[[i, j]] = self.f[[i, j]];
                g[[i, n + j]] = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
                    - self.c[[j, i]];
                g[[n + i, j]] = self.c[[i, j]];
                g[[n + i, n + j]] = -self.f[[i, j]].conj();
            }
        }
        g
    }

    /// Hermiticity of the occupation block, antisymmetry of the anomalous
    /// block, and occupation spectrum within `[0, 1]` (all to 1e-10).
    pub fn validate(&self) -> Result<(), OracleError> {
        let tol = 1e-10;
        for i in 0..self.n {
            for j in 0..self.n {
                if (self.c[[i, j]] - self.c[[j, i]].conj()).norm() > tol {
                    return Err(OracleError::BadParameter(
                        "occupation block not Hermitian".into(),
                    ));
                }
                if (self.f[[i, j]] + self.f[[j, i]]).norm() > tol {
                    return Err(OracleError::BadParameter(
                        "anomalous block not antisymmetric".into(),
                    ));
                }
            }
        }
        let occ = linalg::eigvalsh_complex(&self.c).map_err(OracleError::Eigensolve)?;
        if occ.iter().any(|&l| !(-tol..=1.0 + tol).contains(&l)) {
            return Err(OracleError::BadParameter(format!(
                "occupation spectrum escapes [0,1]: {:?}",
                occ
            )));
        }
        Ok(())
    }
}

/// Pfaffian of a small antisymmetric matrix, by expansion along the first
/// row. Used for 4- and 6-operator Wick sums, so the recursion depth is
/// tiny.
pub fn pfaffian(s: &Array2<C64>) -> C64 {
    let d = s.nrows();
    debug_assert_eq!(d % 2, 0);
    if d == 0 {
        return C64::new(1.0, 0.0);
    }
    if d == 2 {
        return s[[0, 1]];
    }
    let mut total = C64::new(0.0, 0.0);
    let mut sign = 1.0;
    for j in 1..d {
        let keep: Vec<usize> = (1..d).filter(|&k| k != j).collect();
        let mut minor = Array2::from_elem((d - 2, d - 2), C64::new(0.0, 0.0));
        for (r, &kr) in keep.iter().enumerate() {
            for (c, &kc) in keep.iter().enumerate() {
                minor[[r, c]] = s[[kr, kc]];
            }
        }
        total += sign * s[[0, j]] * pfaffian(&minor);
        sign = -sign;
    }
    total
}

/// Wick expectation of an even product of linear fermion operators, each
/// given as a coefficient vector over the Nambu basis.
fn wick(ops: &[&Array1<C64>], gamma: &Array2<C64>) -> C64 {
    let m = ops.len();
    debug_assert_eq!(m % 2, 0);
    let contracted: Vec<Array1<C64>> = ops.iter().map(|w| gamma.dot(*w)).collect();
    let mut s = Array2::from_elem((m, m), C64::new(0.0, 0.0));
    for a in 0..m {
        for b in (a + 1)..m {
            // <O_a O_b> = w_a^T Gamma w_b
            let pair = ops[a].dot(&contracted[b]);
            s[[a, b]] = pair;
            s[[b, a]] = -pair;
        }
    }
    pfaffian(&s)
}

/// Detector function `F_n(t)` for the open transverse-XY chain prepared in
/// the vacuum `|00..0>`, channel on site 1 along `z` at epoch `t0`.
/// Layout matches [`crate::DetectorTrace::f`]: rows are grid times (in
/// units of `t0`), columns are sites.
#[derive(Debug, Clone)]
pub struct FreeFermionTrace {
    pub n_sites: usize,
    pub t0: f64,
    pub times_over_t0: Vec<f64>,
    pub f: Array2<f64>,
}

/// Run the free-fermion protocol. `initial` must denote `|00..0>` (the
/// fermionic vacuum); anything else is unsupported by this solver.
pub fn ff_protocol_f(
    n_sites: usize,
    jx: f64,
    jy: f64,
    h: f64,
    t0: f64,
    times_over_t0: &[f64],
    initial: &crate::state::StateSpec,
) -> Result<FreeFermionTrace, OracleError> {
    if !initial.is_all_zero() {
        return Err(OracleError::NonVacuumInitialState);
    }
    if !(t0 > 0.0) {
        return Err(OracleError::BadParameter(format!("t0 must be > 0, got {t0}")));
    }
    let chain = QuadraticChain::open_txy(n_sites, jx, jy, h)?;
    let gamma = chain.evolved_vacuum_covariance(t0).contraction_matrix();

    // channel-site operators in the Nambu basis
    let mut w_c1 = Array1::from_elem(2 * n_sites, C64::new(0.0, 0.0));
    w_c1[0] = C64::new(1.0, 0.0);
    let mut w_c1d = Array1::from_elem(2 * n_sites, C64::new(0.0, 0.0));
    w_c1d[n_sites] = C64::new(1.0, 0.0);

    let mut f = Array2::<f64>::zeros((times_over_t0.len(), n_sites));
    for (row, &x) in times_over_t0.iter().enumerate() {
        let t = x * t0;
        if t < t0 {
            continue; // branches coincide, F = 0
        }
        let (p, q) = chain.heisenberg_coefficients(t - t0);
        for site in 1..=n_sites {
            // d = c_site(t - t0) expressed over the epoch-time operators
            let mut w_d = Array1::from_elem(2 * n_sites, C64::new(0.0, 0.0));
            let mut w_dd = w_d.clone();
            for k in 0..n_sites {
                w_d[k] = p[[site - 1, k]];
                w_d[n_sites + k] = q[[site - 1, k]];
                w_dd[k] = q[[site - 1, k]].conj();
                w_dd[n_sites + k] = p[[site - 1, k]].conj();
            }
            // F_n = -2 (<X>_channel - <X>) with X = d^+ d and the channel
            // projectors P0 = 1 - n_1, P1 = n_1:
            // F_n = 2<n1 X> + 2<X n1> - 4<n1 X n1>
            let n1x = wick(&[&w_c1d, &w_c1, &w_dd, &w_d], &gamma);
            let xn1 = wick(&[&w_dd, &w_d, &w_c1d, &w_c1], &gamma);
            let n1xn1 = wick(&[&w_c1d, &w_c1, &w_dd, &w_d, &w_c1d, &w_c1], &gamma);
            let value = 2.0 * (n1x + xn1) - 4.0 * n1xn1;
            debug_assert!(value.im.abs() < 1e-9, "F should be real, got {value}");
            f[[row, site - 1]] = value.re;
        }
    }
    Ok(FreeFermionTrace { n_sites, t0, times_over_t0: times_over_t0.to_vec(), f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::Array1;

    #[test]
    fn dispersion_reduces_to_the_xx_cosine_band() {
        // Jx = Jy = J, h = 0: omega = 4 J |cos q|
        let j = 0.8;
        for k in 0..=16 {
            let q = -std::f64::consts::PI + k as f64 * std::f64::consts::PI / 8.0;
            let mode = txy_dispersion(q, j, j, 0.0);
            assert_abs_diff_eq!(mode.omega, 4.0 * j * q.cos().abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn dispersion_specific_value_and_normalization() {
        let mode = txy_dispersion(std::f64::consts::FRAC_PI_2, 0.7, 0.3, 1.0);
        assert_abs_diff_eq!(mode.omega, 2.0 * 1.16f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(mode.omega, 2.1540659228538015, epsilon = 1e-12);
        for k in 0..=32 {
            let q = -std::f64::consts::PI + k as f64 * std::f64::consts::PI / 16.0;
            let m = txy_dispersion(q, 0.7, 0.3, 1.0);
            assert_abs_diff_eq!(m.u * m.u + m.v * m.v, 1.0, epsilon = 1e-12);
            assert!(m.omega >= 0.0);
        }
    }

    #[test]
    fn bogoliubov_rotation_diagonalizes_the_bdg_block() {
        let (jx, jy, h) = (0.7, 0.3, 1.0);
        for k in 1..32 {
            let q = -std::f64::consts::PI + k as f64 * std::f64::consts::PI / 16.0;
            let mode = txy_dispersion(q, jx, jy, h);
            let b = bdg_block(q, jx, jy, h);
            let s = if b[0][1] < 0.0 { -1.0 } else { 1.0 };
            let (u, v) = (mode.u, s * mode.v);
            // R = [[u, -v], [v, u]]; R^T B R should be diag(omega/2, -omega/2)
            let d00 = u * (b[0][0] * u + b[0][1] * v) + v * (b[1][0] * u + b[1][1] * v);
            let d01 = u * (-b[0][0] * v + b[0][1] * u) + v * (-b[1][0] * v + b[1][1] * u);
            let d11 = -v * (-b[0][0] * v + b[0][1] * u) + u * (-b[1][0] * v + b[1][1] * u);
            assert_abs_diff_eq!(2.0 * d00, mode.omega, epsilon = 1e-12);
            assert_abs_diff_eq!(2.0 * d11, -mode.omega, epsilon = 1e-12);
            assert_abs_diff_eq!(d01, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pfaffian_small_cases() {
        let c = |re: f64| C64::new(re, 0.0);
        let mut s2 = Array2::from_elem((2, 2), c(0.0));
        s2[[0, 1]] = c(3.0);
        s2[[1, 0]] = c(-3.0);
        assert_abs_diff_eq!(pfaffian(&s2).re, 3.0, epsilon = 1e-15);

        // pf = s01 s23 - s02 s13 + s03 s12
        let vals = [(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0), (1, 2, 4.0), (1, 3, 5.0), (2, 3, 6.0)];
        let mut s4 = Array2::from_elem((4, 4), c(0.0));
        for &(i, j, v) in &vals {
            s4[[i, j]] = c(v);
            s4[[j, i]] = c(-v);
        }
        assert_abs_diff_eq!(pfaffian(&s4).re, 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0, epsilon = 1e-13);
        // pf(S)^2 = det(S)
        let det = 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0;
        assert_abs_diff_eq!(pfaffian(&s4).re * pfaffian(&s4).re, det * det, epsilon = 1e-10);
    }

    #[test]
    fn vacuum_covariance_is_valid_and_empty_at_t_zero() {
        let chain = QuadraticChain::open_txy(6, 0.7, 0.3, 1.0).unwrap();
        let cov = chain.evolved_vacuum_covariance(0.0);
        cov.validate().unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!(cov.occupation_block()[[i, j]].norm() < 1e-13);
                assert!(cov.anomalous_block()[[i, j]].norm() < 1e-13);
            }
        }
        let cov_t = chain.evolved_vacuum_covariance(0.9);
        cov_t.validate().unwrap();
        // pairing dynamics must populate the chain
        assert!(cov_t.occupation_block()[[0, 0]].re > 1e-4);
    }

    /// Dense Jordan-Wigner ladder operators for brute-force checks:
    /// `c_l = (prod_{m<l} sz_m) |0><1|_l` on the 2^N basis.
    fn dense_annihilator(n: usize, l: usize) -> Array2<C64> {
        let d = 1usize << n;
        let mut m = Array2::from_elem((d, d), C64::new(0.0, 0.0));
        let mask = 1usize << (l - 1);
        for i in 0..d {
            if i & mask != 0 {
                let below = (i & (mask - 1)).count_ones();
                let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                m[[i ^ mask, i]] = C64::new(sign, 0.0);
            }
        }
        m
    }

    #[test]
    fn dense_ladder_operators_satisfy_car() {
        let n = 3;
        let d = 1usize << n;
        for a in 1..=n {
            for b in 1..=n {
                let ca = dense_annihilator(n, a);
                let cb = dense_annihilator(n, b);
                let cbd = cb.t().mapv(|z: C64| z.conj());
                let anti = ca.dot(&cbd) + cbd.dot(&ca);
                for i in 0..d {
                    for j in 0..d {
                        let want = if a == b && i == j { 1.0 } else { 0.0 };
                        assert!((anti[[i, j]] - C64::new(want, 0.0)).norm() < 1e-13);
                    }
                }
                let anti2 = ca.dot(&cb) + cb.dot(&ca);
                assert!(anti2.iter().all(|z| z.norm() < 1e-13));
            }
        }
    }

    /// The dense spin Hamiltonian and the quadratic form must generate the
    /// same Heisenberg evolution of `c_j`.
    #[test]
    fn heisenberg_coefficients_match_dense_evolution() {
        use crate::hamiltonian::{Model, ModelSpec, SpectralHamiltonian};
        let (n, jx, jy, h) = (4usize, 0.7, 0.3, 1.0);
        let tau = 0.63;
        let spin = SpectralHamiltonian::build(&ModelSpec::open(Model::Txy { jx, jy, h }, n)).unwrap();
        let d = 1usize << n;
        // U = V e^{-i lambda tau} V^T as a dense complex matrix
        let v = spin.eigenvectors();
        let mut u = Array2::from_elem((d, d), C64::new(0.0, 0.0));
        for a in 0..d {
            for b in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    let (s, c) = (-spin.eigenvalues()[k] * tau).sin_cos();
                    acc += C64::new(c, s) * v[[a, k]] * v[[b, k]];
                }
                u[[a, b]] = acc;
            }
        }
        let ud = u.t().mapv(|z: C64| z.conj());
        let chain = QuadraticChain::open_txy(n, jx, jy, h).unwrap();
        let (p, q) = chain.heisenberg_coefficients(tau);
        for j in 1..=n {
            let heis = ud.dot(&dense_annihilator(n, j)).dot(&u);
            let mut recon = Array2::from_elem((d, d), C64::new(0.0, 0.0));
            for k in 1..=n {
                let ck = dense_annihilator(n, k);
                let ckd = ck.t().mapv(|z: C64| z.conj());
                recon = recon + ck.mapv(|z| z * p[[j - 1, k - 1]]) + ckd.mapv(|z| z * q[[j - 1, k - 1]]);
            }
            let err = heis
                .iter()
                .zip(recon.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(err < 1e-11, "site {j}: operator mismatch {err}");
        }
    }

    #[test]
    fn wick_matches_brute_force_until_six_operators() {
        use crate::hamiltonian::{Model, ModelSpec, SpectralHamiltonian};
        let (n, jx, jy, h) = (4usize, 0.7, 0.3, 1.0);
        let t0 = 0.8;
        let chain = QuadraticChain::open_txy(n, jx, jy, h).unwrap();
        let cov = chain.evolved_vacuum_covariance(t0);
        cov.validate().unwrap();
        let gamma = cov.contraction_matrix();

        // |psi(t0)> by dense evolution of the vacuum
        let spin = SpectralHamiltonian::build(&ModelSpec::open(Model::Txy { jx, jy, h }, n)).unwrap();
        let psi0 = crate::state::StateSpec::AllZero.build(n).unwrap();
        let psi = spin.evolve(&psi0, t0).unwrap();

        let basis_op = |idx: usize| -> Array2<C64> {
            if idx < n {
                dense_annihilator(n, idx + 1)
            } else {
                dense_annihilator(n, idx - n + 1).t().mapv(|z: C64| z.conj())
            }
        };
        let expect_dense = |ops: &[usize]| -> C64 {
            let d = 1usize << n;
            let mut m = Array2::from_elem((d, d), C64::new(0.0, 0.0));
            for i in 0..d {
                m[[i, i]] = C64::new(1.0, 0.0);
            }
            for &o in ops {
                m = m.dot(&basis_op(o));
            }
            let v = m.dot(psi.amps());
            psi.amps().iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
        };
        let unit = |idx: usize| -> Array1<C64> {
            let mut w = Array1::from_elem(2 * n, C64::new(0.0, 0.0));
            w[idx] = C64::new(1.0, 0.0);
            w
        };

        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for len in [2usize, 4, 6] {
            for _ in 0..12 {
                let ops: Vec<usize> = (0..len).map(|_| (rng.random::<u32>() as usize) % (2 * n)).collect();
                let dense = expect_dense(&ops);
                let ws: Vec<Array1<C64>> = ops.iter().map(|&o| unit(o)).collect();
                let refs: Vec<&Array1<C64>> = ws.iter().collect();
                let wicked = wick(&refs, &gamma);
                assert!(
                    (dense - wicked).norm() < 1e-10,
                    "ops {ops:?}: dense {dense} vs wick {wicked}"
                );
            }
        }
    }

    #[test]
    fn ff_detector_matches_exact_diagonalization_small_chain() {
        use crate::detectors::detector_trace;
        use crate::evolution::{run_protocol, ProtocolSpec, TimeGrid};
        use crate::hamiltonian::{Model, ModelSpec};
        use crate::state::{MeasurementAxis, StateSpec};
        let (n, jx, jy, h) = (6usize, 0.7, 0.3, 1.0);
        let t0 = 0.1;
        let grid = TimeGrid::uniform(10.0, 100).unwrap();
        let spec = ProtocolSpec {
            hamiltonian: ModelSpec::open(Model::Txy { jx, jy, h }, n),
            initial_state: StateSpec::AllZero,
            t0,
            axis: MeasurementAxis::z(),
            qdp_site: 1,
            grid: grid.clone(),
        };
        let ed = detector_trace(&run_protocol(&spec).unwrap()).unwrap();
        let ff =
            ff_protocol_f(n, jx, jy, h, t0, grid.times_over_t0(), &StateSpec::AllZero).unwrap();
        let mut worst = 0.0f64;
        for row in 0..grid.len() {
            for s in 0..n {
                worst = worst.max((ed.f[[row, s]] - ff.f[[row, s]]).abs());
            }
        }
        assert!(worst < 1e-9, "free-fermion vs ED deviation {worst}");
    }

    #[test]
    fn ff_oracle_rejects_non_vacuum_states() {
        let grid = [0.0, 1.0, 2.0];
        let err = ff_protocol_f(4, 0.7, 0.3, 1.0, 0.1, &grid, &crate::state::StateSpec::Ghz);
        assert!(matches!(err, Err(OracleError::NonVacuumInitialState)));
    }

    #[test]
    fn decoupled_limit_shows_no_signal() {
        // Jx = Jy = 0, h = 100: sz_i never evolves, so F vanishes everywhere
        let grid: Vec<f64> = (0..=20).map(|j| j as f64).collect();
        let ff = ff_protocol_f(6, 0.0, 0.0, 100.0, 0.1, &grid, &crate::state::StateSpec::AllZero)
            .unwrap();
        for row in 0..grid.len() {
            for s in 1..6 {
                assert!(ff.f[[row, s]].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_signalling_at_epoch_from_the_covariance_route() {
        let grid = [0.0, 0.5, 1.0];
        let ff = ff_protocol_f(8, 0.7, 0.3, 1.0, 0.1, &grid, &crate::state::StateSpec::AllZero)
            .unwrap();
        for s in 1..8 {
            assert!(ff.f[[2, s]].abs() < 1e-12, "site {} at epoch: {}", s + 1, ff.f[[2, s]]);
        }
    }
}
