// temporary calibration probe, removed before release
use spinsig::analysis::{sweep, SweepAxis, SweepParam};
use spinsig::presets::{even_pair_state, FigureId, FigureJob};
use spinsig::state::StateSpec;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "all".into());

    if which == "fig3d" || which == "all" {
        if let FigureJob::Sweep1d { template, axis, .. } = spinsig::presets::figure_job(FigureId::Fig3d) {
            let t = std::time::Instant::now();
            let res = sweep(&template, axis, None, 1e-5, None, 1);
            println!("fig3d ({:?})", t.elapsed());
            for c in &res.cells {
                println!(
                    "  Jz={:6.2}  v={:?}  err={:?}  {}",
                    c.axis1_value, c.speed_over_v0, c.speed_stderr, c.status.label()
                );
            }
        }
    }

    if which == "fig5d" || which == "all" {
        if let FigureJob::Sweep1d { template, axis, states } = spinsig::presets::figure_job(FigureId::Fig5d) {
            for (label, state) in states {
                let mut tpl = template.clone();
                tpl.initial_state = state;
                let t = std::time::Instant::now();
                let res = sweep(&tpl, axis.clone(), None, 1e-5, None, 1);
                println!("fig5d state={} ({:?})", label, t.elapsed());
                for c in &res.cells {
                    println!(
                        "  h={:6.2}  v={:?}  err={:?}  {}",
                        c.axis1_value, c.speed_over_v0, c.speed_stderr, c.status.label()
                    );
                }
            }
        }
    }

    if which == "fig5b" || which == "all" {
        if let FigureJob::Sweep2d { template, axis1, axis2 } = spinsig::presets::figure_job(FigureId::Fig5b) {
            let t = std::time::Instant::now();
            let res = sweep(&template, axis1, Some(axis2), 1e-5, None, 1);
            println!("fig5b ({:?})", t.elapsed());
            let a2 = res.axis2.clone().unwrap();
            for (i2, h) in a2.values.iter().enumerate() {
                print!("  h={:4.1}: ", h);
                for i1 in 0..res.axis1.values.len() {
                    let c = res.cell(i1, i2);
                    match c.speed_over_v0 {
                        Some(v) => print!(" {:6.3}", v),
                        None => print!("  {:>5}", c.status.label().chars().take(5).collect::<String>()),
                    }
                }
                println!();
            }
        }
    }

    if which == "fig3c" || which == "all" {
        if let FigureJob::WaitingCurves { j_values, protocols } = spinsig::presets::figure_job(FigureId::Fig3c) {
            for (j, p) in j_values.iter().zip(protocols.iter()) {
                let t = std::time::Instant::now();
                let pair = spinsig::run_protocol(p).unwrap();
                let trace = spinsig::detector_trace(&pair).unwrap();
                let table = spinsig::analysis::waiting_time_table(&trace, 1e-5, None).unwrap();
                println!("fig3c J={} ({:?})", j, t.elapsed());
                print!("  t*/t0:");
                for (s, e) in table.entries.iter().enumerate() {
                    print!(" {}:{:?}", s + 1, e.map(|x| (x * 100.0).round() / 100.0));
                }
                println!();
                if let Some(fit) = table.fit {
                    println!(
                        "  slope={:.4} intercept={:.4} rms={:.4} v/v0={:.4}",
                        fit.slope, fit.intercept, fit.residual_rms, 1.0 / fit.slope
                    );
                }
            }
        }
    }

    if which == "fig8a" || which == "all" {
        // criterion 8a probe: isotropic xxz, J in {0.5, 1, 2}, fixed t0
        if let FigureJob::WaitingCurves { protocols, .. } = spinsig::presets::figure_job(FigureId::Fig3c) {
            let mut consts = Vec::new();
            for p in &protocols {
                let pair = spinsig::run_protocol(p).unwrap();
                let trace = spinsig::detector_trace(&pair).unwrap();
                let table = spinsig::analysis::waiting_time_table(&trace, 1e-5, None).unwrap();
                let v = spinsig::analysis::fit_speed(&table).unwrap();
                let j = p.hamiltonian.model.reference_coupling();
                consts.push(v / j);
                println!("  J={:4.1}  v/v0={:8.4}  (v/v0)/J={:8.4}", j, v, v / j);
            }
            let mean: f64 = consts.iter().sum::<f64>() / consts.len() as f64;
            let dev = consts.iter().map(|c| (c / mean - 1.0).abs()).fold(0.0f64, f64::max);
            println!("  proportionality deviation: {:.3}", dev);
        }
    }

    if which == "fig8e" || which == "all" {
        // criterion 8e probe: two initial states, same couplings (Jy=0, h=1)
        if let FigureJob::Sweep1d { template, .. } = spinsig::presets::figure_job(FigureId::Fig5d) {
            for state in [StateSpec::AllZero, even_pair_state()] {
                let mut p = template.clone();
                p.initial_state = state.clone();
                let pair = spinsig::run_protocol(&p).unwrap();
                let trace = spinsig::detector_trace(&pair).unwrap();
                let table = spinsig::analysis::waiting_time_table(&trace, 1e-5, None).unwrap();
                if let Some(fit) = table.fit {
                    println!(
                        "  state={:?}: slope={:.4} rms={:.5} v={:.4} sigma_v={:.5}",
                        state,
                        fit.slope,
                        fit.residual_rms,
                        1.0 / fit.slope,
                        fit.speed_stderr() / (fit.slope * fit.slope)
                    );
                }
            }
        }
    }
}
