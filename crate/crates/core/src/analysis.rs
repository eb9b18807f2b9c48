//! Waiting-time extraction, signal-speed fits, and parameter sweeps.
//!
//! The waiting time `t*_n` is the first grid time at which `|F_n|` exceeds
//! the threshold `epsilon` (1e-5 unless configured otherwise); a straight
//! line `t*/t0 ~ w n` over a site window then gives the speed `v = v0 / w`
//! in units of the reference speed `v0 = a/t0`.

use rayon::prelude::*;
use thiserror::Error;

use crate::detectors::{detector_trace, DetectorTrace};
use crate::evolution::{run_protocol, ProtocolSpec};
use crate::hamiltonian::Model;

/// Default onset threshold on `|F_n|`.
pub const DEFAULT_EPSILON: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("site {site} out of range for a {n_sites}-site chain")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("threshold epsilon must be > 0, got {epsilon}")]
    BadThreshold { epsilon: f64 },
    #[error("insufficient detected sites for a speed fit: {detected} in window, need >= 3")]
    InsufficientSites { detected: usize },
    #[error("fitted slope {slope} is not positive, no propagation speed")]
    NonPositiveSlope { slope: f64 },
}

/// First grid time (in units of `t0`) at which `|F_site|` exceeds
/// `epsilon`, or `None` if it never does. Resolution is the grid spacing.
pub fn waiting_time(
    trace: &DetectorTrace,
    site: usize,
    epsilon: f64,
) -> Result<Option<f64>, AnalysisError> {
    if site == 0 || site > trace.n_sites {
        return Err(AnalysisError::SiteOutOfRange { site, n_sites: trace.n_sites });
    }
    if !(epsilon > 0.0) {
        return Err(AnalysisError::BadThreshold { epsilon });
    }
    for (j, &x) in trace.times_over_t0.iter().enumerate() {
        if trace.f[[j, site - 1]].abs() > epsilon {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Least-squares line through the detected waiting times of a site window.
#[derive(Debug, Clone, Copy)]
pub struct SpeedFit {
    /// slope `w` of `t*/t0` against the site index
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the fit residuals
    pub residual_rms: f64,
    /// standard error of the slope (zero when only 3 points or residual 0)
    pub slope_stderr: f64,
    pub sites_used: usize,
}

impl SpeedFit {
    /// `v / v0 = 1 / w`.
    pub fn speed_over_v0(&self) -> Result<f64, AnalysisError> {
        if self.slope <= 0.0 {
            return Err(AnalysisError::NonPositiveSlope { slope: self.slope });
        }
        Ok(1.0 / self.slope)
    }

    /// Propagated standard error of `v/v0 = 1/w`.
    pub fn speed_stderr(&self) -> f64 {
        self.slope_stderr / (self.slope * self.slope)
    }
}

/// Per-site waiting times with the window fit applied.
#[derive(Debug, Clone)]
pub struct WaitingTimeTable {
    pub epsilon: f64,
    /// grid spacing of the underlying trace, in units of `t0`
    pub grid_step_over_t0: f64,
    /// `entries[s]` is the waiting time of site `s + 1`, `None` when the
    /// detector never crossed the threshold
    pub entries: Vec<Option<f64>>,
    /// inclusive site window the fit runs over
    pub fit_window: (usize, usize),
    pub fit: Option<SpeedFit>,
}

/// Default fit window `3 ..= N-2`: site 2 responds at leading order in every
/// model, and the last sites suffer open-boundary reflections.
pub fn default_fit_window(n_sites: usize) -> (usize, usize) {
    (3.min(n_sites), n_sites.saturating_sub(2).max(1))
}

/// Extract waiting times for every site and fit the window.
pub fn waiting_time_table(
    trace: &DetectorTrace,
    epsilon: f64,
    fit_window: Option<(usize, usize)>,
) -> Result<WaitingTimeTable, AnalysisError> {
    let window = fit_window.unwrap_or_else(|| default_fit_window(trace.n_sites));
    let mut entries = Vec::with_capacity(trace.n_sites);
    for site in 1..=trace.n_sites {
        entries.push(waiting_time(trace, site, epsilon)?);
    }
    let step = if trace.times_over_t0.len() > 1 {
        trace.times_over_t0[1] - trace.times_over_t0[0]
    } else {
        0.0
    };
    let fit = fit_line(&entries, window);
    Ok(WaitingTimeTable {
        epsilon,
        grid_step_over_t0: step,
        entries,
        fit_window: window,
        fit,
    })
}

fn fit_line(entries: &[Option<f64>], window: (usize, usize)) -> Option<SpeedFit> {
    let pts: Vec<(f64, f64)> = (window.0..=window.1.min(entries.len()))
        .filter_map(|site| entries[site - 1].map(|t| (site as f64, t)))
        .collect();
    let m = pts.len();
    if m < 3 {
        return None;
    }
    let mf = m as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let xbar = sx / mf;
    let ybar = sy / mf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let residual_rms = (ssr / mf).sqrt();
    let slope_stderr = if m > 2 { (ssr / (mf - 2.0) / sxx).sqrt() } else { 0.0 };
    Some(SpeedFit { slope, intercept, residual_rms, slope_stderr, sites_used: m })
}

/// Fitted signal speed `v/v0` from a waiting-time table.
pub fn fit_speed(table: &WaitingTimeTable) -> Result<f64, AnalysisError> {
    let (lo, hi) = table.fit_window;
    let detected = (lo..=hi.min(table.entries.len()))
        .filter(|&s| table.entries[s - 1].is_some())
        .count();
    let fit = table.fit.ok_or(AnalysisError::InsufficientSites { detected })?;
    fit.speed_over_v0()
}

/// Spread of the detected onsets across sites `>= 2`, in grid steps.
#[derive(Debug, Clone)]
pub struct SimultaneityStat {
    /// `(max t* - min t*) / grid step`, `None` with fewer than 2 detections
    pub spread_steps: Option<f64>,
    pub detected_sites: Vec<usize>,
    pub undetected_sites: Vec<usize>,
}

/// Max pairwise spread of the waiting times over sites `2..=N` (the channel
/// site responds trivially and is excluded).
pub fn onset_simultaneity(
    trace: &DetectorTrace,
    epsilon: f64,
) -> Result<SimultaneityStat, AnalysisError> {
    onset_simultaneity_in(trace, epsilon, 2, trace.n_sites)
}

/// Same statistic restricted to sites `lo..=hi`.
pub fn onset_simultaneity_in(
    trace: &DetectorTrace,
    epsilon: f64,
    lo: usize,
    hi: usize,
) -> Result<SimultaneityStat, AnalysisError> {
    let mut detected = Vec::new();
    let mut undetected = Vec::new();
    let mut min_t = f64::INFINITY;
    let mut max_t = f64::NEG_INFINITY;
    for site in lo..=hi.min(trace.n_sites) {
        match waiting_time(trace, site, epsilon)? {
            Some(t) => {
                detected.push(site);
                min_t = min_t.min(t);
                max_t = max_t.max(t);
            }
            None => undetected.push(site),
        }
    }
    let step = if trace.times_over_t0.len() > 1 {
        trace.times_over_t0[1] - trace.times_over_t0[0]
    } else {
        0.0
    };
    let spread_steps = if detected.len() >= 2 && step > 0.0 {
        Some((max_t - min_t) / step)
    } else {
        None
    };
    Ok(SimultaneityStat { spread_steps, detected_sites: detected, undetected_sites: undetected })
}

/// Which model coupling a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    J,
    Jz,
    Jx,
    Jy,
    H,
    Hp,
    Delta,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::J => "J",
            SweepParam::Jz => "Jz",
            SweepParam::Jx => "Jx",
            SweepParam::Jy => "Jy",
            SweepParam::H => "h",
            SweepParam::Hp => "hp",
            SweepParam::Delta => "delta",
        }
    }

    /// Model with this coupling replaced; `None` if the model has no such
    /// coupling.
    pub fn apply(&self, model: Model, value: f64) -> Option<Model> {
        match (*self, model) {
            (SweepParam::J, Model::IsingNn { .. }) => Some(Model::IsingNn { j: value }),
            (SweepParam::J, Model::IsingLongRange { delta, .. }) => {
                Some(Model::IsingLongRange { j: value, delta })
            }
            (SweepParam::Delta, Model::IsingLongRange { j, .. }) => {
                Some(Model::IsingLongRange { j, delta: value })
            }
            (SweepParam::J, Model::Xxz { jz, .. }) => Some(Model::Xxz { j: value, jz }),
            (SweepParam::Jz, Model::Xxz { j, .. }) => Some(Model::Xxz { j, jz: value }),
            (SweepParam::Jx, Model::Txy { jy, h, .. }) => Some(Model::Txy { jx: value, jy, h }),
            (SweepParam::Jy, Model::Txy { jx, h, .. }) => Some(Model::Txy { jx, jy: value, h }),
            (SweepParam::H, Model::Txy { jx, jy, .. }) => Some(Model::Txy { jx, jy, h: value }),
            (SweepParam::Jx, Model::TxyLongitudinal { jy, h, hp, .. }) => {
                Some(Model::TxyLongitudinal { jx: value, jy, h, hp })
            }
            (SweepParam::Jy, Model::TxyLongitudinal { jx, h, hp, .. }) => {
                Some(Model::TxyLongitudinal { jx, jy: value, h, hp })
            }
            (SweepParam::H, Model::TxyLongitudinal { jx, jy, hp, .. }) => {
                Some(Model::TxyLongitudinal { jx, jy, h: value, hp })
            }
            (SweepParam::Hp, Model::TxyLongitudinal { jx, jy, h, .. }) => {
                Some(Model::TxyLongitudinal { jx, jy, h, hp: value })
            }
            _ => None,
        }
    }
}

/// One sweep axis: the coupling and the grid of values it takes.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Outcome of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    NoPropagation,
    InsufficientSites,
    Failed(String),
}

impl CellStatus {
    pub fn label(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::NoPropagation => "no-propagation".into(),
            CellStatus::InsufficientSites => "insufficient-sites".into(),
            CellStatus::Failed(msg) => format!("error:{msg}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepCell {
    pub axis1_value: f64,
    pub axis2_value: Option<f64>,
    pub speed_over_v0: Option<f64>,
    pub speed_stderr: Option<f64>,
    pub status: CellStatus,
}

/// A 1D or 2D grid of fitted speeds. Cells are row-major over
/// (axis2, axis1); a 1D sweep has one row.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    pub epsilon: f64,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, i1: usize, i2: usize) -> &SweepCell {
        let width = self.axis1.values.len();
        &self.cells[i2 * width + i1]
    }
}

/// Run the full pipeline (build, protocol, detectors, waiting times, fit)
/// for every grid cell. Per-cell failures are recorded in the cell status;
/// the sweep itself never aborts. Cells execute in parallel across
/// `workers` threads (0 picks the rayon default).
pub fn sweep(
    template: &ProtocolSpec,
    axis1: SweepAxis,
    axis2: Option<SweepAxis>,
    epsilon: f64,
    fit_window: Option<(usize, usize)>,
    workers: usize,
) -> SweepResult {
    let a2_values: Vec<Option<f64>> = match &axis2 {
        Some(a) => a.values.iter().map(|&v| Some(v)).collect(),
        None => vec![None],
    };
    let mut jobs = Vec::new();
    for &v2 in &a2_values {
        for &v1 in &axis1.values {
            jobs.push((v1, v2));
        }
    }

    let run_cell = |&(v1, v2): &(f64, Option<f64>)| -> SweepCell {
        let mut spec = template.clone();
        let model = match axis1.param.apply(spec.hamiltonian.model, v1) {
            Some(m) => m,
            None => {
                return SweepCell {
                    axis1_value: v1,
                    axis2_value: v2,
                    speed_over_v0: None,
                    speed_stderr: None,
                    status: CellStatus::Failed(format!(
                        "{} does not apply to {}",
                        axis1.param.name(),
                        spec.hamiltonian.model.name()
                    )),
                }
            }
        };
        spec.hamiltonian.model = model;
        if let (Some(axis), Some(value)) = (&axis2, v2) {
            match axis.param.apply(spec.hamiltonian.model, value) {
                Some(m) => spec.hamiltonian.model = m,
                None => {
                    return SweepCell {
                        axis1_value: v1,
                        axis2_value: v2,
                        speed_over_v0: None,
                        speed_stderr: None,
                        status: CellStatus::Failed(format!(
                            "{} does not apply to {}",
                            axis.param.name(),
                            spec.hamiltonian.model.name()
                        )),
                    }
                }
            }
        }
        let outcome = run_protocol(&spec)
            .map_err(|e| e.to_string())
            .and_then(|pair| detector_trace(&pair).map_err(|e| e.to_string()))
            .and_then(|trace| {
                waiting_time_table(&trace, epsilon, fit_window).map_err(|e| e.to_string())
            });
        match outcome {
            Err(msg) => SweepCell {
                axis1_value: v1,
                axis2_value: v2,
                speed_over_v0: None,
                speed_stderr: None,
                status: CellStatus::Failed(msg),
            },
            Ok(table) => match table.fit {
                None => {
                    let detected =
                        table.entries.iter().filter(|e| e.is_some()).count();
                    let status = if detected == 0 {
                        CellStatus::NoPropagation
                    } else {
                        CellStatus::InsufficientSites
                    };
                    SweepCell {
                        axis1_value: v1,
                        axis2_value: v2,
                        speed_over_v0: None,
                        speed_stderr: None,
                        status,
                    }
                }
                Some(fit) => match fit.speed_over_v0() {
                    Ok(v) => SweepCell {
                        axis1_value: v1,
                        axis2_value: v2,
                        speed_over_v0: Some(v),
                        speed_stderr: Some(fit.speed_stderr()),
                        status: CellStatus::Ok,
                    },
                    Err(_) => SweepCell {
                        axis1_value: v1,
                        axis2_value: v2,
                        speed_over_v0: None,
                        speed_stderr: None,
                        status: CellStatus::NoPropagation,
                    },
                },
            },
        }
    };

    let cells: Vec<SweepCell> = if workers == 1 {
        jobs.iter().map(run_cell).collect()
    } else if workers == 0 {
        jobs.par_iter().map(run_cell).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        pool.install(|| jobs.par_iter().map(run_cell).collect())
    };

    SweepResult { axis1, axis2, epsilon, cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::TimeGrid;
    use crate::hamiltonian::ModelSpec;
    use crate::state::{MeasurementAxis, StateSpec, C64};
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn synthetic_trace(n_sites: usize, f: Array2<f64>, step: f64) -> DetectorTrace {
        let nt = f.nrows();
        DetectorTrace {
            n_sites,
            t0: 0.1,
            qdp_site: 1,
            times_over_t0: (0..nt).map(|j| j as f64 * step).collect(),
            o: Array2::from_elem((nt, n_sites), c(0.0, 0.0)),
            d: Array2::zeros((nt, n_sites)),
            f,
        }
    }

    #[test]
    fn threshold_crossing_is_first_grid_point() {
        // F jumps to 1e-3 at t = 2 t0
        let step = 0.05;
        let nt = 100;
        let mut f = Array2::zeros((nt, 2));
        for j in 0..nt {
            let t = j as f64 * step;
            if t >= 2.0 {
                f[[j, 0]] = 1e-3;
            }
        }
        let trace = synthetic_trace(2, f, step);
        let t = waiting_time(&trace, 1, 1e-5).unwrap().unwrap();
        assert_abs_diff_eq!(t, 2.0, epsilon = 1e-12);
        assert_eq!(waiting_time(&trace, 2, 1e-5).unwrap(), None);
        assert!(matches!(
            waiting_time(&trace, 3, 1e-5),
            Err(AnalysisError::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            waiting_time(&trace, 1, 0.0),
            Err(AnalysisError::BadThreshold { .. })
        ));
    }

    #[test]
    fn raising_epsilon_never_lowers_waiting_times() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let nt = 200;
        let mut f = Array2::zeros((nt, 4));
        for s in 0..4 {
            let onset = 20 + 10 * s;
            for j in onset..nt {
                f[[j, s]] = (j - onset) as f64 * 1e-5 * (1.0 + rng.random::<f64>());
            }
        }
        let trace = synthetic_trace(4, f, 0.05);
        for site in 1..=4 {
            let mut last = 0.0;
            for eps in [1e-6, 1e-5, 1e-4, 1e-3] {
                if let Some(t) = waiting_time(&trace, site, eps).unwrap() {
                    assert!(t >= last);
                    last = t;
                }
            }
        }
    }

    #[test]
    fn exact_line_fit_recovers_the_slope() {
        // t*/t0 = 2 n exactly
        let step = 0.05;
        let n_sites = 10;
        let nt = 500;
        let mut f = Array2::zeros((nt, n_sites));
        for s in 0..n_sites {
            let t_star = 2.0 * (s + 1) as f64;
            for j in 0..nt {
                if j as f64 * step >= t_star {
                    f[[j, s]] = 1.0;
                }
            }
        }
        let trace = synthetic_trace(n_sites, f, step);
        let table = waiting_time_table(&trace, 1e-5, None).unwrap();
        let fit = table.fit.unwrap();
        assert_abs_diff_eq!(fit.slope, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.residual_rms, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit_speed(&table).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn insufficient_sites_is_reported() {
        let step = 0.05;
        let mut f = Array2::zeros((100, 8));
        for j in 40..100 {
            f[[j, 2]] = 1.0; // only site 3 fires
        }
        let trace = synthetic_trace(8, f, step);
        let table = waiting_time_table(&trace, 1e-5, None).unwrap();
        assert!(table.fit.is_none());
        assert!(matches!(
            fit_speed(&table),
            Err(AnalysisError::InsufficientSites { detected: 1 })
        ));
    }

    #[test]
    fn simultaneity_spread() {
        let step = 0.05;
        let n_sites = 5;
        let mut f = Array2::zeros((200, n_sites));
        // sites 2..5 fire at steps 40, 41, 42, 40
        for (s, onset) in [(1usize, 40usize), (2, 41), (3, 42), (4, 40)] {
            for j in onset..200 {
                f[[j, s]] = 1.0;
            }
        }
        let trace = synthetic_trace(n_sites, f, step);
        let stat = onset_simultaneity(&trace, 1e-5).unwrap();
        assert_eq!(stat.detected_sites, vec![2, 3, 4, 5]);
        assert_abs_diff_eq!(stat.spread_steps.unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn sweep_records_cell_failures_without_aborting() {
        let template = ProtocolSpec {
            hamiltonian: ModelSpec::open(Model::IsingNn { j: 1.0 }, 5),
            initial_state: StateSpec::AllZero,
            t0: 0.1,
            axis: MeasurementAxis::z(),
            qdp_site: 1,
            grid: TimeGrid::uniform(5.0, 50).unwrap(),
        };
        // nearest-neighbour Ising never propagates past site 2
        let result = sweep(
            &template,
            SweepAxis { param: SweepParam::J, values: vec![0.5, 1.0] },
            None,
            1e-5,
            None,
            1,
        );
        assert_eq!(result.cells.len(), 2);
        for cell in &result.cells {
            assert!(cell.speed_over_v0.is_none());
            assert!(matches!(
                cell.status,
                CellStatus::NoPropagation | CellStatus::InsufficientSites
            ));
        }
        // a coupling that does not exist on the model is a per-cell error
        let bad = sweep(
            &template,
            SweepAxis { param: SweepParam::Jx, values: vec![1.0] },
            None,
            1e-5,
            None,
            1,
        );
        assert!(matches!(bad.cells[0].status, CellStatus::Failed(_)));
    }

    #[test]
    fn sweep_speeds_are_deterministic_and_ordered() {
        // XXZ chain: doubling J (with t0 fixed) roughly doubles the speed
        let template = ProtocolSpec {
            hamiltonian: ModelSpec::open(Model::Xxz { j: 1.0, jz: 0.0 }, 7),
            initial_state: StateSpec::Superposition(vec![(0, c(1.0, 0.0)), (0b11, c(1.0, 0.0))]),
            t0: 0.1,
            axis: MeasurementAxis::z(),
            qdp_site: 1,
            grid: TimeGrid::uniform(40.0, 800).unwrap(),
        };
        let axis = SweepAxis { param: SweepParam::J, values: vec![1.0, 2.0] };
        let a = sweep(&template, axis.clone(), None, 1e-5, Some((2, 5)), 1);
        let b = sweep(&template, axis, None, 1e-5, Some((2, 5)), 1);
        for (ca, cb) in a.cells.iter().zip(b.cells.iter()) {
            assert_eq!(ca.speed_over_v0, cb.speed_over_v0);
            assert_eq!(ca.status, cb.status);
        }
        let v1 = a.cells[0].speed_over_v0.expect("J=1 cell fits");
        let v2 = a.cells[1].speed_over_v0.expect("J=2 cell fits");
        assert!(v2 > 1.5 * v1, "speeds v(J=1)={v1}, v(J=2)={v2}");
    }
}
