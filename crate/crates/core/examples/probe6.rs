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
    let t_build = std::time::Instant::now();
    let pair = spinsig::run_protocol(&spec).unwrap();
    let trace = spinsig::detector_trace(&pair).unwrap();
    println!("N=12 protocol in {:?}", t_build.elapsed());
    let mut worst = (0.0f64, 0usize, 0.0f64);
    let mut worst_by_window = (0.0f64, 0usize, 0.0f64);
    for (row, &x) in trace.times_over_t0.iter().enumerate() {
        if x < 1.0 { continue; }
        let tau = 4.0 * j * (x * t0);
        let tau0 = 4.0 * j * t0;
        for site in 1..=n {
            let ed = trace.f[[row, site - 1]];
            let closed = one_magnon_f(site as i64, tau, tau0).unwrap();
            let d = (ed - closed).abs();
            if d > worst.0 { worst = (d, site, x); }
            // window: wavefront (speed 1 site per Bessel unit, x2 margin)
            // has not reached the far boundary and returned
            if 2.0 + (tau - tau0) < (n as f64) && d > worst_by_window.0 {
                worst_by_window = (d, site, x);
            }
        }
    }
    println!("max |F_ED - F_bessel| over all t/t0<=40: {:.4e} at site {} t/t0 {}", worst.0, worst.1, worst.2);
    println!("max inside pre-reflection window:        {:.4e} at site {} t/t0 {}", worst_by_window.0, worst_by_window.1, worst_by_window.2);
    for site in 1..=n {
        let mut dmax = 0.0f64;
        let mut at = 0.0;
        for (row, &x) in trace.times_over_t0.iter().enumerate() {
            if x < 1.0 { continue; }
            let tau = 4.0 * j * (x * t0);
            let tau0 = 4.0 * j * t0;
            let d = (trace.f[[row, site - 1]] - one_magnon_f(site as i64, tau, tau0).unwrap()).abs();
            if d > dmax { dmax = d; at = x; }
        }
        println!("  site {:2}: max dev {:.3e} at t/t0 {:.1}", site, dmax, at);
    }
}
// per-site deviation map appended for calibration
