// temporary calibration probe, removed before release
use spinsig::analysis::{sweep, SweepAxis, SweepParam};
use spinsig::evolution::{ProtocolSpec, TimeGrid};
use spinsig::hamiltonian::{Model, ModelSpec};
use spinsig::presets::even_pair_state;
use spinsig::state::{MeasurementAxis, StateSpec};

fn main() {
    let hs = vec![0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0];
    for (label, state) in [("all-zero", StateSpec::AllZero), ("even-pair", even_pair_state())] {
        let template = ProtocolSpec {
            hamiltonian: ModelSpec::open(Model::Txy { jx: 1.0, jy: 0.0, h: 1.0 }, 10),
            initial_state: state,
            t0: 0.1,
            axis: MeasurementAxis::z(),
            qdp_site: 1,
            grid: TimeGrid::uniform(60.0, 1200).unwrap(),
        };
        let t = std::time::Instant::now();
        let res = sweep(&template, SweepAxis { param: SweepParam::H, values: hs.clone() }, None, 1e-5, Some((3, 8)), 1);
        println!("state={label} window=(3,8) grid=[0,60] ({:?})", t.elapsed());
        for c in &res.cells {
            println!("  h={:5.2}  v={:?}  {}", c.axis1_value, c.speed_over_v0.map(|v| (v*1e4).round()/1e4), c.status.label());
        }
    }
}
