//! The three site-resolved detector functions computed from a trajectory
//! pair: magnetization contrast `F_n`, off-diagonal contrast `O_n`, and
//! excess single-site entropy `D_n`.

use ndarray::Array2;
use thiserror::Error;

use crate::evolution::TrajectoryPair;
use crate::state::{StateError, C64};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("site {site} out of range for a {n_sites}-site chain")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("time {t_over_t0} (in units of t0) is not on the trace grid")]
    TimeNotOnGrid { t_over_t0: f64 },
}

/// Detector values on the full time x site grid. Row `j` is grid time
/// `times_over_t0[j]`, column `s` is site `s + 1`.
#[derive(Debug, Clone)]
pub struct DetectorTrace {
    pub n_sites: usize,
    pub t0: f64,
    pub qdp_site: usize,
    pub times_over_t0: Vec<f64>,
    /// `F_n(t) = <sz_n>_with - <sz_n>_without`
    pub f: Array2<f64>,
    /// `O_n(t) = <s+_n>_with - <s+_n>_without`
    pub o: Array2<C64>,
    /// `D_n(t) = S(rho_n)_with - S(rho_n)_without`, in nats
    pub d: Array2<f64>,
}

impl DetectorTrace {
    pub fn n_times(&self) -> usize {
        self.times_over_t0.len()
    }

    /// F values of one site (1-based) over the grid.
    pub fn f_site(&self, site: usize) -> Result<Vec<f64>, DetectorError> {
        self.check_site(site)?;
        Ok(self.f.column(site - 1).to_vec())
    }

    pub fn check_site(&self, site: usize) -> Result<(), DetectorError> {
        if site == 0 || site > self.n_sites {
            return Err(DetectorError::SiteOutOfRange { site, n_sites: self.n_sites });
        }
        Ok(())
    }

    /// Index of the first grid point at or after the epoch.
    pub fn epoch_index(&self) -> usize {
        self.times_over_t0
            .iter()
            .position(|&x| x >= 1.0 - 1e-12)
            .unwrap_or(self.times_over_t0.len())
    }

    /// Largest detector magnitude over all sites strictly before the epoch.
    pub fn max_abs_before_epoch(&self) -> f64 {
        let mut worst = 0.0f64;
        for (j, &x) in self.times_over_t0.iter().enumerate() {
            if x >= 1.0 - 1e-12 {
                break;
            }
            for s in 0..self.n_sites {
                worst = worst
                    .max(self.f[[j, s]].abs())
                    .max(self.o[[j, s]].norm())
                    .max(self.d[[j, s]].abs());
            }
        }
        worst
    }
}

/// Evaluate all three detectors over the stored trajectory pair.
pub fn detector_trace(pair: &TrajectoryPair) -> Result<DetectorTrace, DetectorError> {
    let nt = pair.len();
    let ns = pair.n_sites;
    let mut f = Array2::zeros((nt, ns));
    let mut o = Array2::from_elem((nt, ns), C64::new(0.0, 0.0));
    let mut d = Array2::zeros((nt, ns));
    for j in 0..nt {
        let with = &pair.with_qdp[j];
        let without = &pair.without_qdp[j];
        for s in 1..=ns {
            let dm_with = with.reduced_qubit_dm(s)?;
            let dm_without = without.reduced_qubit_dm(s)?;
            f[[j, s - 1]] = (dm_with.m00 - dm_with.m11) - (dm_without.m00 - dm_without.m11);
            o[[j, s - 1]] = dm_with.m01 - dm_without.m01;
            d[[j, s - 1]] = dm_with.von_neumann_entropy()? - dm_without.von_neumann_entropy()?;
        }
    }
    Ok(DetectorTrace {
        n_sites: ns,
        t0: pair.t0,
        qdp_site: pair.qdp_site,
        times_over_t0: pair.times_over_t0.clone(),
        f,
        o,
        d,
    })
}

/// Point query of `F_n` at a grid time (`t` in units of `t0`).
pub fn detector_f_at(pair: &TrajectoryPair, site: usize, t_over_t0: f64) -> Result<f64, DetectorError> {
    if site == 0 || site > pair.n_sites {
        return Err(DetectorError::SiteOutOfRange { site, n_sites: pair.n_sites });
    }
    let j = pair
        .times_over_t0
        .iter()
        .position(|&x| (x - t_over_t0).abs() < 1e-9 * t_over_t0.abs().max(1.0))
        .ok_or(DetectorError::TimeNotOnGrid { t_over_t0 })?;
    let with = pair.with_qdp[j].sigma_z(site)?;
    let without = pair.without_qdp[j].sigma_z(site)?;
    Ok(with - without)
}
