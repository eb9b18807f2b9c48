// temporary calibration probe, removed before release
use spinsig::analysis::{onset_simultaneity_in, waiting_time};
use spinsig::presets::{figure_job, FigureId, FigureJob};

fn main() {
    // criterion 3: long-range instantaneity
    if let FigureJob::Trace { protocol, .. } = figure_job(FigureId::Fig2b) {
        let pair = spinsig::run_protocol(&protocol).unwrap();
        let trace = spinsig::detector_trace(&pair).unwrap();
        let epoch = trace.epoch_index();
        let first_after = trace.times_over_t0[epoch + 1];
        print!("fig2b t* per site (first grid point after t0 = {first_after}):");
        for site in 2..=10 {
            print!(" {}:{:?}", site, waiting_time(&trace, site, 1e-5).unwrap());
        }
        println!();
        // criterion 4: slope ordering
        print!("fig2b slopes t0 dF/dt at t0+:");
        let step = trace.times_over_t0[1] - trace.times_over_t0[0];
        for site in 2..=10 {
            let s = (trace.f[[epoch + 1, site - 1]] - trace.f[[epoch, site - 1]]) / step;
            print!(" {}:{:.5}", site, s);
        }
        println!();
    }
    // criterion 3b: entanglement blocking
    if let FigureJob::Trace { protocol, .. } = figure_job(FigureId::Fig2c) {
        let pair = spinsig::run_protocol(&protocol).unwrap();
        let trace = spinsig::detector_trace(&pair).unwrap();
        let max_f3 = trace.f_site(3).unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!("fig2c max |F_3| = {max_f3:.3e}");
    }
    // criterion 10: simultaneity for h'=1 vs h'=0
    for id in [FigureId::Fig6, FigureId::Fig5a] {
        if let FigureJob::Trace { protocol, .. } = figure_job(id) {
            let pair = spinsig::run_protocol(&protocol).unwrap();
            let trace = spinsig::detector_trace(&pair).unwrap();
            let stat_full = onset_simultaneity_in(&trace, 1e-5, 2, 10).unwrap();
            let stat_part = onset_simultaneity_in(&trace, 1e-5, 2, 6).unwrap();
            println!(
                "{}: spread[2..10] = {:?} steps, spread[2..6] = {:?}, undetected {:?}",
                id.as_str(),
                stat_full.spread_steps,
                stat_part.spread_steps,
                stat_full.undetected_sites
            );
        }
    }
}
