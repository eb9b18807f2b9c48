// temporary calibration probe, removed before release
use spinsig::analysis::waiting_time_table;
use spinsig::evolution::{ProtocolSpec, TimeGrid};
use spinsig::hamiltonian::{Model, ModelSpec};
use spinsig::presets::even_pair_state;
use spinsig::state::MeasurementAxis;

fn main() {
    for (n, steps, tmax) in [(10usize, 800usize, 40.0f64), (10, 1600, 40.0), (12, 1000, 50.0)] {
        let mut tables = Vec::new();
        for j in [0.5, 1.0, 2.0] {
            let spec = ProtocolSpec {
                hamiltonian: ModelSpec::open(Model::Xxz { j, jz: j }, n),
                initial_state: even_pair_state(),
                t0: 0.1,
                axis: MeasurementAxis::z(),
                qdp_site: 1,
                grid: TimeGrid::uniform(tmax, steps).unwrap(),
            };
            let pair = spinsig::run_protocol(&spec).unwrap();
            let trace = spinsig::detector_trace(&pair).unwrap();
            tables.push(waiting_time_table(&trace, 1e-5, None).unwrap());
        }
        for window in [(3usize, n - 2), (5, n - 1), (6, n - 1), (5, n), (6, n)] {
            let mut consts = Vec::new();
            let mut ok = true;
            for (tbl, j) in tables.iter().zip([0.5, 1.0, 2.0]) {
                let pts: Vec<(f64, f64)> = (window.0..=window.1)
                    .filter_map(|s| tbl.entries[s - 1].map(|t| (s as f64, t)))
                    .collect();
                if pts.len() < 3 { ok = false; break; }
                let m = pts.len() as f64;
                let xb = pts.iter().map(|p| p.0).sum::<f64>() / m;
                let yb = pts.iter().map(|p| p.1).sum::<f64>() / m;
                let sxx: f64 = pts.iter().map(|p| (p.0 - xb).powi(2)).sum();
                let sxy: f64 = pts.iter().map(|p| (p.0 - xb) * (p.1 - yb)).sum();
                let w = sxy / sxx;
                consts.push(1.0 / w / j);
            }
            if !ok { continue; }
            let mean = consts.iter().sum::<f64>() / consts.len() as f64;
            let dev = consts.iter().map(|c| (c / mean - 1.0).abs()).fold(0.0f64, f64::max);
            println!("N={n} steps={steps} tmax={tmax} window={window:?}: v/(v0 J) = {consts:?}, max dev {:.4}", dev);
        }
    }
}
