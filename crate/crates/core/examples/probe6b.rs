// temporary calibration probe, removed before release
use spinsig::evolution::{ProtocolSpec, TimeGrid};
use spinsig::hamiltonian::{Model, ModelSpec};
use spinsig::oracles::bessel::one_magnon_f;
use spinsig::presets::one_magnon_pair_state;
use spinsig::state::MeasurementAxis;

fn main() {
    let n = 12usize;
    let (j, t0) = (1.0, 0.1);
    let spec = ProtocolSpec {
        hamiltonian: ModelSpec::open(Model::Xxz { j, jz: 0.0 }, n),
        initial_state: one_magnon_pair_state(),
        t0,
        axis: MeasurementAxis::z(),
        qdp_site: 1,
        grid: TimeGrid::uniform(40.0, 400).unwrap(),
    };
    let pair = spinsig::run_protocol(&spec).unwrap();
    let trace = spinsig::detector_trace(&pair).unwrap();
    // window: left-edge image (travel ~ n + 1 sites from the mirror) not yet
    // arrived AND right-edge reflection (23 - n) not yet back
    for margin in [1.0f64, 1.5, 2.0] {
        let mut worst = (0.0f64, 0usize, 0.0f64);
        let mut count = 0usize;
        for (row, &x) in trace.times_over_t0.iter().enumerate() {
            if x < 1.0 { continue; }
            let tau = 4.0 * j * (x * t0);
            let tau0 = 4.0 * j * t0;
            for site in 1..=n {
                let left_ok = tau < (site as f64 + 1.0) - margin;
                let right_ok = tau < (2.0 * n as f64 - 1.0 - site as f64) - margin;
                if !(left_ok && right_ok) { continue; }
                count += 1;
                let d = (trace.f[[row, site - 1]] - one_magnon_f(site as i64, tau, tau0).unwrap()).abs();
                if d > worst.0 { worst = (d, site, x); }
            }
        }
        println!("margin {margin}: {count} points, max dev {:.3e} at site {} t/t0 {}", worst.0, worst.1, worst.2);
    }
}
