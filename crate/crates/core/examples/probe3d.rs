// temporary calibration probe, removed before release
use spinsig::analysis::waiting_time_table;
use spinsig::evolution::{ProtocolSpec, TimeGrid};
use spinsig::hamiltonian::{Model, ModelSpec};
use spinsig::presets::{even_pair_state, one_magnon_pair_state};
use spinsig::state::MeasurementAxis;

fn main() {
    let jz_values = [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0];
    for (label, state) in [("even-pair", even_pair_state()), ("one-magnon", one_magnon_pair_state())] {
        let mut tables = Vec::new();
        for &jz in &jz_values {
            let spec = ProtocolSpec {
                hamiltonian: ModelSpec::open(Model::Xxz { j: 1.0, jz }, 10),
                initial_state: state.clone(),
                t0: 0.1,
                axis: MeasurementAxis::z(),
                qdp_site: 1,
                grid: TimeGrid::uniform(40.0, 800).unwrap(),
            };
            let pair = spinsig::run_protocol(&spec).unwrap();
            let trace = spinsig::detector_trace(&pair).unwrap();
            tables.push(trace);
        }
        for eps in [1e-5, 1e-4, 1e-3] {
            for window in [(2usize, 6usize), (2, 8), (3, 8), (5, 10)] {
                let mut vs = Vec::new();
                for trace in &tables {
                    let tbl = waiting_time_table(trace, eps, Some(window)).unwrap();
                    vs.push(tbl.fit.map(|f| 1.0 / f.slope));
                }
                if vs.iter().any(|v| v.is_none()) { println!("{label} eps={eps:.0e} win={window:?}: undetected cells"); continue; }
                let vs: Vec<f64> = vs.into_iter().map(|v| v.unwrap()).collect();
                let vmax = vs.iter().cloned().fold(f64::MIN, f64::max);
                let vmin = vs.iter().cloned().fold(f64::MAX, f64::min);
                let argmax = vs.iter().position(|&v| v == vmax).unwrap();
                println!(
                    "{label} eps={eps:.0e} win={window:?}: var={:.4} argmax Jz={} v={:?}",
                    (vmax - vmin) / vmax,
                    jz_values[argmax],
                    vs.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>()
                );
            }
        }
    }
}
